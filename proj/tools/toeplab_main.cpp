#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toeplab/harness.hpp"

namespace {

using namespace toeplab;

int run_with_config(const std::string& path, const std::string& mode,
                    const std::string& format, int workers) {
  ScenarioConfig cfg = ScenarioConfig::from_json_file(path);
  if (workers > 0) cfg.workers = workers;
  if (mode == "det-series") {
    cfg.f.reset();
    cfg.contour.reset();
    cfg.hankel_fit = false;
    cfg.trunc_check = false;
  } else if (mode == "trace-series") {
    if (!cfg.f) throw ConfigError("trace-series requires an 'f' entry in the config");
    cfg.hankel_fit = false;
    cfg.trunc_check = false;
  } else if (mode == "hankel-sv") {
    cfg.f.reset();
    cfg.contour.reset();
    cfg.hankel_fit = true;
    cfg.trunc_check = false;
    cfg.schedule.clear();  // singular values only
  }
  AsymptoticsReport rep = run_scenario(cfg);
  if (format == "csv" && cfg.out_csv.empty() && cfg.out_json.empty()) {
    std::fputs(report_csv(rep).c_str(), stdout);
  } else if (format == "json" && cfg.out_csv.empty() && cfg.out_json.empty()) {
    std::fputs(report_json(rep).c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    emit_report(rep);
    if (format == "json") {
      std::fputs(report_json(rep).c_str(), stdout);
      std::fputc('\n', stdout);
    } else {
      std::fputs(report_csv(rep).c_str(), stdout);
    }
  }
  return 0;
}

int run_factor(const std::string& path) {
  ScenarioConfig cfg = ScenarioConfig::from_json_file(path);
  const FourierSymbol a = materialize_symbol(cfg.symbol);
  const FactorPair pair = build_factor_pair(cfg.symbol, a, cfg.factor_band);
  auto side_residual = [](const FourierSymbol& s, int sign) {
    double worst = 0.0;
    for (const auto& [k, blk] : s.coeffs())
      if (k * sign < 0) worst = std::max(worst, blk.cwiseAbs().maxCoeff());
    return worst;
  };
  const FourierSymbol recon = pair.u_minus.multiply(pair.u_plus);
  double recon_err = 0.0;
  for (const auto& [k, blk] : a.coeffs())
    recon_err = std::max(recon_err, (recon.coeff(k) - blk).cwiseAbs().maxCoeff());
  std::printf("{\"name\":\"%s\",\"block_size\":%d,\"band\":%d,\"working_band\":%d,",
              cfg.name.c_str(), a.block_size(), a.band(), pair.working_band);
  std::printf("\"u_plus_support_residual\":%s,\"u_minus_support_residual\":%s,",
              format_float(side_residual(pair.u_plus, +1)).c_str(),
              format_float(side_residual(pair.u_minus, -1)).c_str());
  std::printf("\"reconstruction_error\":%s,", format_float(recon_err).c_str());
  std::printf("\"b_band\":%d,\"c_band\":%d}\n", pair.b.band(), pair.c.band());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toeplab: finite Toeplitz determinant and trace asymptotics"};
  app.require_subcommand(1);
  std::string config_path, format = "csv";
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (same results for any count)");
  app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  std::string mode;
  for (const char* name : {"factor", "det-series", "trace-series", "hankel-sv", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "scenario config (JSON)")->required();
    sub->callback([&mode, name] { mode = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mode == "factor") return run_factor(config_path);
    return run_with_config(config_path, mode, format, workers);
  } catch (const toeplab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const toeplab::NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
