#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "iterboot/experiments.hpp"

namespace iterboot::cli {

/// Frozen column order of risk/normality/sweep CSV output.
inline constexpr std::string_view kRiskCsvHeader =
    "n,d,k,bias,se_bias,sd,rmse,sqrt_n_rmse,sigma_f,d_k,aborts,seconds";
inline constexpr std::string_view kCltCsvHeader =
    "n,d,w1,w2,samples,xi_second_moment,xi_second_moment_se,trace_sigma,seconds";
inline constexpr std::string_view kOracleCsvHeader = "n,k,measured_bias,se,oracle,pass";

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

void write_risk_csv(std::ostream& out, const std::vector<experiments::TrialSummary>& rows);
void write_clt_csv(std::ostream& out, const std::vector<experiments::CltSummary>& rows);
void write_oracle_csv(std::ostream& out, const std::vector<experiments::OracleRow>& rows);

/// JSON mirror with the same values as the CSV (NaN as null).
std::string risk_json(const std::string& kind, const std::vector<experiments::TrialSummary>& rows,
                      const experiments::RateFit* fit = nullptr);
std::string clt_json(const std::vector<experiments::CltSummary>& rows);
std::string oracle_json(const std::vector<experiments::OracleRow>& rows);

/// Parsed risk CSV row (all columns).
struct RiskCsvRow {
  std::vector<double> values;  // in kRiskCsvHeader order
  double n() const { return values[0]; }
  double k() const { return values[2]; }
  double rmse() const { return values[6]; }
};

/// Throws std::runtime_error on a header mismatch or malformed number.
std::vector<RiskCsvRow> read_risk_csv(std::istream& in);

}  // namespace iterboot::cli
