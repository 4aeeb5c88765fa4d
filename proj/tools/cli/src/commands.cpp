#include "iterboot/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "iterboot/cli/config.hpp"
#include "iterboot/cli/emit.hpp"
#include "iterboot/cli/report.hpp"
#include "iterboot/errors.hpp"

namespace iterboot::cli {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes through a temporary file so a failed run never leaves a partial output.
void write_file(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << contents;
    if (!f) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
}

std::string summary_line(const experiments::TrialSummary& r) {
  std::ostringstream s;
  s << "n=" << r.n << " d=" << r.d << " k=" << r.k << " bias=" << format_double(r.bias)
    << " se=" << format_double(r.se_bias) << " rmse=" << format_double(r.rmse)
    << " sqrt_n_rmse=" << format_double(r.sqrt_n_rmse) << " sigma_f=" << format_double(r.sigma_f)
    << " d_K=" << format_double(r.d_k) << " aborts=" << r.aborts;
  if (r.failed) s << " FAILED";
  return s.str();
}

int run_experiment(const CliConfig& cfg, const fs::path& out_dir, unsigned threads, std::ostream& out) {
  const auto& e = cfg.experiment;
  bool failed = false;
  std::string csv_text, json_text;

  if (cfg.kind == "clt") {
    const auto rows = experiments::run_clt_diagnostic(e, threads);
    for (const auto& r : rows)
      out << "n=" << r.n << " d=" << r.d << " W1=" << format_double(r.w1) << " W2=" << format_double(r.w2)
          << " E|xi|^2=" << format_double(r.xi_second_moment) << " trSigma=" << format_double(r.trace_sigma) << '\n';
    std::ostringstream csv;
    write_clt_csv(csv, rows);
    csv_text = csv.str();
    json_text = clt_json(rows);
  } else if (cfg.kind == "oracle-check") {
    const auto rows = experiments::run_oracle_check(e, threads);
    out << "n\tk\tmeasured_bias\tse\toracle\tresult\n";
    for (const auto& r : rows) {
      out << r.n << '\t' << r.k << '\t' << format_double(r.measured_bias) << '\t' << format_double(r.se) << '\t'
          << format_double(r.oracle) << '\t' << (r.pass ? "pass" : "FAIL") << '\n';
      failed |= !r.pass;
    }
    std::ostringstream csv;
    write_oracle_csv(csv, rows);
    csv_text = csv.str();
    json_text = oracle_json(rows);
  } else {
    const auto rows = cfg.kind == "normality" ? experiments::run_normality_experiment(e, threads)
                                              : experiments::run_risk_experiment(e, threads);
    for (const auto& r : rows) {
      out << summary_line(r) << '\n';
      failed |= r.failed;
    }
    std::optional<experiments::RateFit> fit;
    if (cfg.kind == "sweep") {
      std::vector<double> ns, rmses;
      std::vector<RatePoint> points;
      for (const auto& r : rows)
        if (r.k == e.k && !r.failed) {
          ns.push_back(static_cast<double>(r.n));
          rmses.push_back(r.rmse);
          points.push_back({static_cast<double>(r.n), r.rmse});
        }
      if (ns.size() >= 3) {
        fit = experiments::rate_fit(ns, rmses);
        out << "rate fit: slope=" << format_double(fit->slope) << " intercept=" << format_double(fit->intercept)
            << " r2=" << format_double(fit->r2) << '\n';
      } else {
        failed = true;
      }
      if (cfg.outputs.svg && points.size() >= 2) write_file(out_dir / *cfg.outputs.svg, render_rate_svg(points));
    }
    std::ostringstream csv;
    write_risk_csv(csv, rows);
    csv_text = csv.str();
    json_text = risk_json(cfg.kind, rows, fit ? &*fit : nullptr);
  }

  if (cfg.outputs.csv) write_file(out_dir / *cfg.outputs.csv, csv_text);
  if (cfg.outputs.json) write_file(out_dir / *cfg.outputs.json, json_text);
  return failed ? kExitExperimentFailure : kExitOk;
}

}  // namespace

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int cmd_run(const fs::path& config, const fs::path& out_dir, unsigned threads, std::ostream& out,
            std::ostream& err) {
  CliConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ConfigFileError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << out_dir << ": " << ec.message() << '\n';
    return kExitIoError;
  }

  try {
    return run_experiment(cfg, out_dir, threads, out);
  } catch (const experiments::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "experiment failed: " << e.what() << '\n';
    return kExitExperimentFailure;
  }
}

int cmd_report(const fs::path& csv, const fs::path& svg, std::ostream& out, std::ostream& err) {
  std::ifstream in(csv);
  if (!in) {
    err << "error: cannot read " << csv << '\n';
    return kExitIoError;
  }
  std::vector<RatePoint> points;
  try {
    const auto rows = read_risk_csv(in);
    double kmax = -1.0;
    for (const auto& r : rows) kmax = std::max(kmax, r.k());
    for (const auto& r : rows)
      if (r.k() == kmax) points.push_back({r.n(), r.rmse()});
    const std::string doc = render_rate_svg(points);
    write_file(svg, doc);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "report error: " << e.what() << '\n';
    return kExitConfigError;
  }
  out << "wrote " << svg.string() << " (" << points.size() << " points)\n";
  return kExitOk;
}

int cmd_selftest(std::ostream& out, const SelftestOptions& options) {
  const auto checks = run_selftest(options);
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) out << "  (" << c.detail << ")";
    out << '\n';
    ok &= c.passed;
  }
  out << (ok ? "selftest passed" : "selftest FAILED") << '\n';
  return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace iterboot::cli
