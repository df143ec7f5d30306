#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toeplab/common.hpp"
#include "toeplab/determinants.hpp"
#include "toeplab/factorization.hpp"
#include "toeplab/regularity.hpp"
#include "toeplab/symbols.hpp"
#include "toeplab/traces.hpp"

namespace toeplab {

struct CharFunctionConfig {
  double gamma = 0.5;
  std::vector<LogFactorSpec> logs;
  CharFunction build() const { return CharFunction(gamma, logs); }
};

struct SymbolConfig {
  enum class Kind { Laurent, ExpLacunary, Fixture };
  Kind kind = Kind::Laurent;
  // laurent
  int block_size = 1;
  FourierSymbol::CoeffMap coeffs;
  // exp-of-lacunary: exp( amplitude * sum_j 2^{-gamma j} cos(2^j theta) )
  double gamma = 0.3;
  int levels = 9;
  double amplitude = 1.0;
  int materialize_band = 0;  // 0 = automatic
  // fixture factors
  FourierSymbol::CoeffMap u_minus, u_plus, v_plus, v_minus;
};

struct ContourConfig {
  bool automatic = true;
  Complex center{0.0, 0.0};
  double radius = 0.0;
  int nodes = 512;
  double margin_rel = 0.2;  // clearance relative to the hull radius (auto mode)
  double min_clearance = 0.0;
};

struct FunctionConfig {
  std::string kind;  // "poly" | "exp" | "log"
  std::vector<Complex> poly_coeffs;
  double cut_angle = kPi;
  AnalyticFunctionSpec build() const;
};

struct Thresholds {
  double o_trend = 0.3;    // last-window mean ratio < o_trend * first-window mean
  int trend_window = 3;    // rows per window
};

struct ScenarioConfig {
  std::string name = "scenario";
  SymbolConfig symbol;
  CharFunctionConfig omega;
  std::optional<CharFunctionConfig> psi;  // defaults to omega
  int m = 1;
  std::vector<int> schedule;
  int truncation = 256;           // M
  int factor_band = 0;            // 0 = automatic
  double compress_tol = 1e-12;    // b,c compression before the expansions
  std::optional<ContourConfig> contour;
  std::optional<FunctionConfig> f;
  bool hankel_fit = false;        // singular-value decay fit of H(a)
  int hankel_fit_lo = 8, hankel_fit_hi = 128;
  bool trunc_check = false;       // Lemma-trunc norm/bound table
  std::vector<int> trunc_ns;      // defaults to {8,...,128} geometric
  Thresholds thresholds;
  std::string out_csv, out_json;
  int workers = 1;

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
  std::string echo_json() const;  // canonical config echo for reports
  void validate() const;
};

struct TruncCheckRow {
  int n = 0, j = 0;
  TruncationNorms norms;
};

struct ReportRow {
  HoRow ho;
  std::optional<double> trace_rem;  // Re[tr f(T_n) - (n+1)G_f - E_f]
};

struct FitResult {
  double slope = 0.0;
  double stderr_ = 0.0;
  bool valid = false;
  std::string reason;
};

// Least-squares slope of log(value) vs log(n); confidence = residual
// standard error.  Skips (with reason) when the window has nonpositive
// values or fewer than 5 points.
FitResult rate_fit(const std::vector<std::pair<int, double>>& series);

struct DeltaClassification {
  bool o_case = false;
  double trend = 0.0;  // last-window mean ratio / first-window mean ratio
  double threshold = 0.3;
  int window = 3;
  bool vanishing_proxy = false;  // H_0^w flag of the symbol profile
};

struct AsymptoticsReport {
  ScenarioConfig config;
  HoReport ho;
  std::vector<ReportRow> rows;
  std::map<std::string, FitResult> fits;
  DeltaClassification delta;
  InvertibilityProbe probe;
  double holder_seminorm_value = 0.0;
  std::optional<Complex> gf;
  std::optional<EfResult> ef;
  std::vector<double> hankel_sv;
  std::vector<TruncCheckRow> trunc_rows;
  double trunc_max_ratio = 0.0;  // max measured/bound over the table
  std::vector<std::string> notes;
};

FourierSymbol materialize_symbol(const SymbolConfig& cfg);
// Factor pair for the scenario symbol: scalar constructive path or fixture.
FactorPair build_factor_pair(const SymbolConfig& cfg, const FourierSymbol& a,
                             int factor_band);

AsymptoticsReport run_scenario(const ScenarioConfig& cfg);

// CSV with the fixed column order (n, log_det_re, log_det_im, widom_rem,
// hoC_rem, hoD_rem, hoE_int, tail, ratio, trace_rem); floats at 17
// significant digits, byte-identical across runs.
std::string report_csv(const AsymptoticsReport& report);
std::string report_json(const AsymptoticsReport& report);
void emit_report(const AsymptoticsReport& report);  // writes configured paths

std::string format_float(double v);  // %.17g, "nan"/"inf" spelled out

}  // namespace toeplab
