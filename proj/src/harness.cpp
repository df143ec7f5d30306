#include "toeplab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace toeplab {

using nlohmann::json;

namespace {

Matrix parse_block(const json& re, const json* im, int n) {
  Matrix m = Matrix::Zero(n, n);
  if (!re.is_array() || static_cast<int>(re.size()) != n)
    throw ConfigError("symbol coeff: 're' must be an NxN array");
  for (int r = 0; r < n; ++r) {
    const auto& row = re.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ConfigError("symbol coeff: 're' must be an NxN array");
    for (int c = 0; c < n; ++c) m(r, c) = Complex(row.at(c).get<double>(), 0.0);
  }
  if (im) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) += Complex(0.0, im->at(r).at(c).get<double>());
  }
  return m;
}

FourierSymbol::CoeffMap parse_coeff_list(const json& arr, int n) {
  if (!arr.is_array()) throw ConfigError("symbol: coefficient list must be an array");
  FourierSymbol::CoeffMap out;
  for (const auto& rec : arr) {
    const int k = rec.at("k").get<int>();
    const json* im = rec.contains("im") ? &rec.at("im") : nullptr;
    if (rec.at("re").is_number()) {
      Matrix m(1, 1);
      m(0, 0) = Complex(rec.at("re").get<double>(),
                        im && im->is_number() ? im->get<double>() : 0.0);
      out[k] = m;
    } else {
      out[k] = parse_block(rec.at("re"), im, n);
    }
  }
  return out;
}

CharFunctionConfig parse_char(const json& j) {
  CharFunctionConfig cfg;
  cfg.gamma = j.at("gamma").get<double>();
  if (j.contains("logs")) {
    for (const auto& rec : j.at("logs")) {
      LogFactorSpec s;
      s.beta = rec.at("beta").get<double>();
      if (rec.contains("b") && !rec.at("b").is_string())
        s.b = rec.at("b").get<double>();
      cfg.logs.push_back(s);
    }
  }
  return cfg;
}

std::vector<int> parse_schedule(const json& j) {
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<int>());
  } else if (j.is_object()) {
    const int start = j.at("start").get<int>();
    const int stop = j.at("stop").get<int>();
    const double ratio = j.contains("ratio") ? j.at("ratio").get<double>() : 2.0;
    if (start < 1 || stop < start || ratio <= 1.0)
      throw ConfigError("schedule: bad geometric range");
    double x = start;
    int last = -1;
    while (true) {
      const int n = std::min(stop, static_cast<int>(std::lround(x)));
      if (n != last) out.push_back(n);
      last = n;
      if (n >= stop) break;
      x *= ratio;
    }
  } else {
    throw ConfigError("schedule: expected list or geometric range");
  }
  return out;
}

}  // namespace

AnalyticFunctionSpec FunctionConfig::build() const {
  if (kind == "poly") return AnalyticFunctionSpec::polynomial(poly_coeffs);
  if (kind == "exp") return AnalyticFunctionSpec::exponential();
  if (kind == "log") return AnalyticFunctionSpec::log_with_cut(cut_angle);
  throw ConfigError("f: unknown kind '" + kind + "'");
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    cfg.name = j.value("name", std::string("scenario"));
    const auto& sym = j.at("symbol");
    const std::string kind = sym.at("kind").get<std::string>();
    if (kind == "laurent") {
      cfg.symbol.kind = SymbolConfig::Kind::Laurent;
      cfg.symbol.block_size = sym.value("block_size", 1);
      cfg.symbol.coeffs = parse_coeff_list(sym.at("coeffs"), cfg.symbol.block_size);
    } else if (kind == "exp_lacunary") {
      cfg.symbol.kind = SymbolConfig::Kind::ExpLacunary;
      cfg.symbol.gamma = sym.at("gamma").get<double>();
      cfg.symbol.levels = sym.at("levels").get<int>();
      cfg.symbol.amplitude = sym.value("amplitude", 1.0);
      cfg.symbol.materialize_band = sym.value("materialize_band", 0);
    } else if (kind == "fixture") {
      cfg.symbol.kind = SymbolConfig::Kind::Fixture;
      cfg.symbol.block_size = sym.value("block_size", 2);
      cfg.symbol.u_minus = parse_coeff_list(sym.at("u_minus"), cfg.symbol.block_size);
      cfg.symbol.u_plus = parse_coeff_list(sym.at("u_plus"), cfg.symbol.block_size);
      cfg.symbol.v_plus = parse_coeff_list(sym.at("v_plus"), cfg.symbol.block_size);
      cfg.symbol.v_minus = parse_coeff_list(sym.at("v_minus"), cfg.symbol.block_size);
    } else {
      throw ConfigError("symbol: unknown kind '" + kind + "'");
    }
    cfg.omega = parse_char(j.at("omega"));
    if (j.contains("psi")) cfg.psi = parse_char(j.at("psi"));
    cfg.m = j.value("m", 1);
    cfg.schedule = parse_schedule(j.at("schedule"));
    cfg.truncation = j.value("truncation", 256);
    cfg.factor_band = j.value("factor_band", 0);
    cfg.compress_tol = j.value("compress_tol", 1e-12);
    if (j.contains("contour")) {
      ContourConfig cc;
      const auto& c = j.at("contour");
      if (c.contains("center")) {
        cc.automatic = false;
        cc.center = Complex(c.at("center").at(0).get<double>(),
                            c.at("center").at(1).get<double>());
        cc.radius = c.at("radius").get<double>();
      }
      cc.nodes = c.value("nodes", 512);
      cc.margin_rel = c.value("margin_rel", 0.2);
      cc.min_clearance = c.value("min_clearance", 0.0);
      cfg.contour = cc;
    }
    if (j.contains("f")) {
      FunctionConfig fc;
      const auto& fj = j.at("f");
      fc.kind = fj.at("kind").get<std::string>();
      if (fc.kind == "poly") {
        const auto& cr = fj.at("coeffs_re");
        std::vector<double> ci(cr.size(), 0.0);
        if (fj.contains("coeffs_im"))
          for (size_t i = 0; i < cr.size(); ++i) ci[i] = fj.at("coeffs_im").at(i).get<double>();
        for (size_t i = 0; i < cr.size(); ++i)
          fc.poly_coeffs.push_back(Complex(cr.at(i).get<double>(), ci[i]));
      }
      if (fj.contains("cut_angle")) fc.cut_angle = fj.at("cut_angle").get<double>();
      cfg.f = fc;
    }
    cfg.hankel_fit = j.value("hankel_fit", false);
    cfg.hankel_fit_lo = j.value("hankel_fit_lo", 8);
    cfg.hankel_fit_hi = j.value("hankel_fit_hi", 128);
    cfg.trunc_check = j.value("trunc_check", false);
    if (j.contains("trunc_ns"))
      for (const auto& v : j.at("trunc_ns")) cfg.trunc_ns.push_back(v.get<int>());
    if (j.contains("thresholds")) {
      cfg.thresholds.o_trend = j.at("thresholds").value("o_trend", 0.3);
      cfg.thresholds.trend_window = j.at("thresholds").value("trend_window", 3);
    }
    if (j.contains("output")) {
      cfg.out_csv = j.at("output").value("csv", std::string());
      cfg.out_json = j.at("output").value("json", std::string());
    }
    cfg.workers = j.value("workers", 1);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void ScenarioConfig::validate() const {
  if (schedule.empty()) return;  // header-only reports are allowed
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ConfigError("schedule must be strictly increasing");
  if (schedule.front() < 1) throw ConfigError("schedule entries must be >= 1");
  if (m < 1) throw ConfigError("m must be >= 1");
  int band = 0;
  if (symbol.kind == SymbolConfig::Kind::ExpLacunary) {
    band = 1 << symbol.levels;
  } else {
    for (const auto& [k, blk] : symbol.coeffs) band = std::max(band, std::abs(k));
    for (const auto* f : {&symbol.u_minus, &symbol.u_plus, &symbol.v_plus, &symbol.v_minus})
      for (const auto& [k, blk] : *f) band = std::max(band, std::abs(k));
  }
  if (truncation < 4 * (schedule.back() + band))
    throw ConfigError("truncation M must be >= 4*(max n + symbol band) = " +
                      std::to_string(4 * (schedule.back() + band)));
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

FourierSymbol materialize_symbol(const SymbolConfig& cfg) {
  switch (cfg.kind) {
    case SymbolConfig::Kind::Laurent:
      return FourierSymbol(cfg.block_size, cfg.coeffs);
    case SymbolConfig::Kind::Fixture: {
      auto [a, pair] = fixture_block_symbol(
          FourierSymbol(cfg.block_size, cfg.u_minus), FourierSymbol(cfg.block_size, cfg.u_plus),
          FourierSymbol(cfg.block_size, cfg.v_plus), FourierSymbol(cfg.block_size, cfg.v_minus));
      return a;
    }
    case SymbolConfig::Kind::ExpLacunary: {
      // W = amplitude * sum_{j<=levels} 2^{-gamma j} cos(2^j theta); a = exp W
      const int top = 1 << cfg.levels;
      const int grid = next_pow2(std::max(4096, 32 * top));
      std::vector<Matrix> vals(grid);
      for (int j = 0; j < grid; ++j) {
        const double th = 2.0 * kPi * j / grid;
        double w = 0.0;
        for (int l = 0; l <= cfg.levels; ++l)
          w += cfg.amplitude * std::pow(2.0, -cfg.gamma * l) * std::cos((1 << l) * th);
        Matrix m(1, 1);
        m(0, 0) = Complex(std::exp(w), 0.0);
        vals[j] = m;
      }
      const int band = cfg.materialize_band > 0 ? cfg.materialize_band
                                                : std::min(grid / 2 - 1, 6 * top);
      return FourierSymbol::from_samples(vals, band).compressed(1e-13);
    }
  }
  throw ConfigError("materialize_symbol: unreachable");
}

FactorPair build_factor_pair(const SymbolConfig& cfg, const FourierSymbol& a,
                             int factor_band) {
  if (cfg.kind == SymbolConfig::Kind::Fixture) {
    auto [sym, pair] = fixture_block_symbol(
        FourierSymbol(cfg.block_size, cfg.u_minus), FourierSymbol(cfg.block_size, cfg.u_plus),
        FourierSymbol(cfg.block_size, cfg.v_plus), FourierSymbol(cfg.block_size, cfg.v_minus));
    (void)sym;
    return pair;
  }
  if (!a.is_scalar())
    throw ConfigError("block symbols need fixture factors (no constructive block "
                      "factorization)");
  int band = factor_band;
  if (band <= 0) {
    band = std::max(64, 2 * a.band());
    if (cfg.kind == SymbolConfig::Kind::ExpLacunary) band = 6 * (1 << cfg.levels);
  }
  return scalar_canonical_factor(a, band);
}

FitResult rate_fit(const std::vector<std::pair<int, double>>& series) {
  FitResult out;
  if (series.size() < 5) {
    out.reason = "fewer than 5 points in window";
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, v] : series) {
    if (!(v > 0.0)) {
      out.reason = "nonpositive value at n=" + std::to_string(n);
      return out;
    }
    const double x = std::log(static_cast<double>(n)), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = static_cast<double>(series.size());
  const double denom = c * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) {
    out.reason = "degenerate abscissae";
    return out;
  }
  out.slope = (c * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / c;
  double ss = 0.0;
  for (const auto& [n, v] : series) {
    const double r = std::log(v) - (intercept + out.slope * std::log(static_cast<double>(n)));
    ss += r * r;
  }
  out.stderr_ = series.size() > 2 ? std::sqrt(ss / (c - 2.0)) : 0.0;
  out.valid = true;
  return out;
}

namespace {

DeltaClassification classify_delta(const std::vector<ReportRow>& rows,
                                   const Thresholds& th, bool vanishing) {
  DeltaClassification out;
  out.threshold = th.o_trend;
  out.window = th.trend_window;
  out.vanishing_proxy = vanishing;
  std::vector<double> ratios;
  for (const auto& r : rows)
    if (r.ho.error.empty() && !r.ho.gap && r.ho.tail > 0.0) ratios.push_back(r.ho.ratio);
  const int w = th.trend_window;
  if (static_cast<int>(ratios.size()) < 2 * w) return out;
  double first = 0.0, last = 0.0;
  for (int i = 0; i < w; ++i) {
    first += ratios[i];
    last += ratios[ratios.size() - w + i];
  }
  first /= w;
  last /= w;
  out.trend = first > 0.0 ? last / first : 0.0;
  out.o_case = out.trend < th.o_trend;
  return out;
}

}  // namespace

AsymptoticsReport run_scenario(const ScenarioConfig& cfg) {
  AsymptoticsReport rep;
  rep.config = cfg;
  const FourierSymbol a = materialize_symbol(cfg.symbol);
  const CharFunction w = cfg.omega.build();
  const CharFunction p = cfg.psi ? cfg.psi->build() : cfg.omega.build();

  std::optional<FactorPair> pair;
  try {
    pair = build_factor_pair(cfg.symbol, a, cfg.factor_band);
  } catch (const NumericalError& e) {
    // symbols without a canonical factorization still get determinant and
    // trace columns; the Szego machinery is recorded as unavailable
    rep.notes.push_back(std::string("factorization unavailable: ") + e.what());
  }
  rep.probe = invertibility_probe(a, 64);

  // H_0^w proxy of the symbol against omega
  const auto prof = holder_seminorm(a, w);
  rep.holder_seminorm_value = prof.seminorm;

  if (pair) {
    HoOptions opts;
    opts.truncation = cfg.truncation;
    opts.workers = cfg.workers;
    opts.compress_tol = cfg.compress_tol;
    rep.ho = ho_remainders(a, *pair, w, p, cfg.m, cfg.schedule, opts);
  } else {
    const double nanv = std::numeric_limits<double>::quiet_NaN();
    rep.ho.tail_divergent = !tail_sum(w, p, cfg.m, 1).convergent;
    if (!cfg.schedule.empty()) {
      const auto series = log_det_sequence(a, cfg.schedule.back());
      for (int n : cfg.schedule) {
        HoRow row;
        row.n = n;
        row.gap = series.gap[n];
        row.log_det = series.values[n];
        row.widom_rem = row.hoC_rem = row.hoD_rem = row.hoE_int = nanv;
        row.tail = tail_sum(w, p, cfg.m, n).value;
        row.ratio = nanv;
        row.error = "no factor pair";
        rep.ho.rows.push_back(row);
      }
    }
  }

  std::optional<AnalyticFunctionSpec> fspec;
  std::optional<ContourSpec> cspec;
  if (cfg.f) fspec = cfg.f->build();
  if (fspec) {
    rep.gf = gf_constant(a, *fspec);
    if (cfg.contour && a.is_scalar()) {
      const SpectrumHull hull = spectrum_hull(a, 128);
      ContourSpec cs;
      if (cfg.contour->automatic) {
        cs.center = hull.centroid;
        cs.radius = (1.0 + cfg.contour->margin_rel) * hull.radius;
        cs.min_clearance = 0.5 * cfg.contour->margin_rel * hull.radius;
      } else {
        cs.center = cfg.contour->center;
        cs.radius = cfg.contour->radius;
        cs.min_clearance = cfg.contour->min_clearance;
      }
      cs.nodes = cfg.contour->nodes;
      cspec = cs;
      EfOptions eopts;
      eopts.truncation = std::min(cfg.truncation, 512);
      eopts.workers = cfg.workers;
      rep.ef = ef_constant(a, *fspec, cs, eopts);
    }
  }

  rep.rows.reserve(rep.ho.rows.size());
  for (const auto& hr : rep.ho.rows) {
    ReportRow row;
    row.ho = hr;
    if (fspec && rep.gf && !hr.gap) {
      const TraceValue tv = trace_f(a, *fspec, hr.n);
      const Complex base = tv.exact_poly ? *tv.exact_poly : tv.value;
      Complex rem = base - static_cast<double>(hr.n + 1) * (*rep.gf);
      if (rep.ef) rem -= rep.ef->value;
      row.trace_rem = rem.real();
    }
    rep.rows.push_back(row);
  }

  // rate fits over the schedule
  auto fit_of = [&](auto getter, const char* name) {
    std::vector<std::pair<int, double>> series;
    for (const auto& r : rep.rows)
      if (r.ho.error.empty() && !r.ho.gap) series.push_back({r.ho.n, getter(r)});
    rep.fits[name] = rate_fit(series);
  };
  fit_of([](const ReportRow& r) { return std::abs(r.ho.widom_rem); }, "widom_rem");
  fit_of([](const ReportRow& r) { return std::abs(r.ho.hoC_rem); }, "hoC_rem");
  fit_of([](const ReportRow& r) { return r.ho.tail; }, "tail");

  rep.delta = classify_delta(rep.rows, cfg.thresholds, prof.vanishing);

  if (cfg.hankel_fit) {
    rep.hankel_sv = singular_values(hankel_corner(a, cfg.hankel_fit_hi + 2));
    std::vector<std::pair<int, double>> series;
    for (int n = cfg.hankel_fit_lo; n <= cfg.hankel_fit_hi; ++n)
      if (n < static_cast<int>(rep.hankel_sv.size()))
        series.push_back({n, rep.hankel_sv[n]});
    rep.fits["hankel_sv"] = rate_fit(series);
  }

  if (cfg.trunc_check && pair) {
    std::vector<int> ns = cfg.trunc_ns;
    if (ns.empty()) ns = {8, 16, 32, 64, 128};
    for (int n : ns) {
      for (int j : {0, n / 2, n}) {
        TruncCheckRow row;
        row.n = n;
        row.j = j;
        const int M = std::max(2 * n + 2, std::min(cfg.truncation, 2048));
        row.norms = truncation_norms(*pair, n, j, M);
        rep.trunc_rows.push_back(row);
        auto ratio = [](double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : 0.0; };
        rep.trunc_max_ratio = std::max({rep.trunc_max_ratio,
                                        ratio(row.norms.norm_QTb_Dj, row.norms.bound_QTb_Dj),
                                        ratio(row.norms.norm_DjTc_Qn, row.norms.bound_DjTc_Qn),
                                        ratio(row.norms.norm_QnHb, row.norms.bound_QnHb),
                                        ratio(row.norms.norm_HctQn, row.norms.bound_HctQn)});
      }
    }
  }
  return rep;
}

}  // namespace toeplab
