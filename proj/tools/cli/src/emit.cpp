#include "iterboot/cli/emit.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace iterboot::cli {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line) {
  if (cell == "nan") return std::nan("");
  double x = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, x);
  if (ec != std::errc() || ptr != end || cell.empty())
    throw std::runtime_error("csv line " + std::to_string(line) + ": malformed number '" + cell + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_risk_csv(std::ostream& out, const std::vector<experiments::TrialSummary>& rows) {
  out << kRiskCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.d << ',' << r.k << ',' << format_double(r.bias) << ',' << format_double(r.se_bias) << ','
        << format_double(r.sd) << ',' << format_double(r.rmse) << ',' << format_double(r.sqrt_n_rmse) << ','
        << format_double(r.sigma_f) << ',' << format_double(r.d_k) << ',' << r.aborts << ','
        << format_double(r.seconds) << '\n';
  }
}

void write_clt_csv(std::ostream& out, const std::vector<experiments::CltSummary>& rows) {
  out << kCltCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.d << ',' << format_double(r.w1) << ',' << format_double(r.w2) << ',' << r.samples << ','
        << format_double(r.xi_second_moment) << ',' << format_double(r.xi_second_moment_se) << ','
        << format_double(r.trace_sigma) << ',' << format_double(r.seconds) << '\n';
  }
}

void write_oracle_csv(std::ostream& out, const std::vector<experiments::OracleRow>& rows) {
  out << kOracleCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.k << ',' << format_double(r.measured_bias) << ',' << format_double(r.se) << ','
        << format_double(r.oracle) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

std::string risk_json(const std::string& kind, const std::vector<experiments::TrialSummary>& rows,
                      const experiments::RateFit* fit) {
  ordered_json doc;
  doc["experiment"] = kind;
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["n"] = r.n;
    row["d"] = r.d;
    row["k"] = r.k;
    row["bias"] = number_or_null(r.bias);
    row["se_bias"] = number_or_null(r.se_bias);
    row["sd"] = number_or_null(r.sd);
    row["rmse"] = number_or_null(r.rmse);
    row["sqrt_n_rmse"] = number_or_null(r.sqrt_n_rmse);
    row["sigma_f"] = number_or_null(r.sigma_f);
    row["d_k"] = number_or_null(r.d_k);
    row["aborts"] = r.aborts;
    row["seconds"] = number_or_null(r.seconds);
    row["failed"] = r.failed;
    doc["rows"].push_back(std::move(row));
  }
  if (fit) doc["rate_fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2}};
  return doc.dump(2) + "\n";
}

std::string clt_json(const std::vector<experiments::CltSummary>& rows) {
  ordered_json doc;
  doc["experiment"] = "clt";
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"n", r.n},
                           {"d", r.d},
                           {"w1", number_or_null(r.w1)},
                           {"w2", number_or_null(r.w2)},
                           {"samples", r.samples},
                           {"xi_second_moment", number_or_null(r.xi_second_moment)},
                           {"xi_second_moment_se", number_or_null(r.xi_second_moment_se)},
                           {"trace_sigma", number_or_null(r.trace_sigma)},
                           {"seconds", number_or_null(r.seconds)}});
  }
  return doc.dump(2) + "\n";
}

std::string oracle_json(const std::vector<experiments::OracleRow>& rows) {
  ordered_json doc;
  doc["experiment"] = "oracle-check";
  doc["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"n", r.n},
                           {"k", r.k},
                           {"measured_bias", number_or_null(r.measured_bias)},
                           {"se", number_or_null(r.se)},
                           {"oracle", number_or_null(r.oracle)},
                           {"pass", r.pass}});
  }
  return doc.dump(2) + "\n";
}

std::vector<RiskCsvRow> read_risk_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRiskCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");
  const std::size_t columns = split(std::string(kRiskCsvHeader)).size();
  std::vector<RiskCsvRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns)
      throw std::runtime_error("csv line " + std::to_string(number) + ": expected " + std::to_string(columns) +
                               " columns, got " + std::to_string(cells.size()));
    RiskCsvRow row;
    for (const auto& c : cells) row.values.push_back(parse_cell(c, number));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace iterboot::cli
