#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "toeplab/harness.hpp"

namespace toeplab {

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// minimal JSON writer: fixed key order, floats at 17 significant digits
class JsonWriter {
 public:
  std::string str() const { return out_.str(); }
  void begin_obj() { sep(); out_ << '{'; fresh_ = true; }
  void end_obj() { out_ << '}'; fresh_ = false; }
  void begin_arr() { sep(); out_ << '['; fresh_ = true; }
  void end_arr() { out_ << ']'; fresh_ = false; }
  void key(const std::string& k) { sep(); out_ << '"' << escape(k) << "\":"; fresh_ = true; }
  void value(double v) {
    sep();
    if (std::isnan(v) || std::isinf(v))
      out_ << "null";
    else
      out_ << format_float(v);
    fresh_ = false;
  }
  void value(int v) { sep(); out_ << v; fresh_ = false; }
  void value(long v) { sep(); out_ << v; fresh_ = false; }
  void value(bool v) { sep(); out_ << (v ? "true" : "false"); fresh_ = false; }
  void value(const std::string& s) { sep(); out_ << '"' << escape(s) << '"'; fresh_ = false; }
  void null() { sep(); out_ << "null"; fresh_ = false; }

 private:
  void sep() {
    if (!fresh_) out_ << ',';
    fresh_ = true;
  }
  static std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
      switch (c) {
        case '"': o += "\\\""; break;
        case '\\': o += "\\\\"; break;
        case '\n': o += "\\n"; break;
        case '\t': o += "\\t"; break;
        case '\r': o += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            o += buf;
          } else {
            o += c;
          }
      }
    }
    return o;
  }
  std::ostringstream out_;
  bool fresh_ = true;
};

void write_char_config(JsonWriter& w, const CharFunctionConfig& c) {
  w.begin_obj();
  w.key("gamma");
  w.value(c.gamma);
  if (!c.logs.empty()) {
    w.key("logs");
    w.begin_arr();
    for (const auto& l : c.logs) {
      w.begin_obj();
      w.key("beta");
      w.value(l.beta);
      w.key("b");
      if (l.b)
        w.value(*l.b);
      else
        w.value(std::string("auto"));
      w.end_obj();
    }
    w.end_arr();
  }
  w.end_obj();
}

void write_coeff_list(JsonWriter& w, const FourierSymbol::CoeffMap& coeffs) {
  w.begin_arr();
  for (const auto& [k, blk] : coeffs) {
    w.begin_obj();
    w.key("k");
    w.value(k);
    w.key("re");
    w.begin_arr();
    for (Eigen::Index r = 0; r < blk.rows(); ++r) {
      w.begin_arr();
      for (Eigen::Index c = 0; c < blk.cols(); ++c) w.value(blk(r, c).real());
      w.end_arr();
    }
    w.end_arr();
    w.key("im");
    w.begin_arr();
    for (Eigen::Index r = 0; r < blk.rows(); ++r) {
      w.begin_arr();
      for (Eigen::Index c = 0; c < blk.cols(); ++c) w.value(blk(r, c).imag());
      w.end_arr();
    }
    w.end_arr();
    w.end_obj();
  }
  w.end_arr();
}

void write_config(JsonWriter& w, const ScenarioConfig& cfg) {
  w.begin_obj();
  w.key("name");
  w.value(cfg.name);
  w.key("symbol");
  w.begin_obj();
  switch (cfg.symbol.kind) {
    case SymbolConfig::Kind::Laurent:
      w.key("kind");
      w.value(std::string("laurent"));
      w.key("block_size");
      w.value(cfg.symbol.block_size);
      w.key("coeffs");
      write_coeff_list(w, cfg.symbol.coeffs);
      break;
    case SymbolConfig::Kind::ExpLacunary:
      w.key("kind");
      w.value(std::string("exp_lacunary"));
      w.key("gamma");
      w.value(cfg.symbol.gamma);
      w.key("levels");
      w.value(cfg.symbol.levels);
      w.key("amplitude");
      w.value(cfg.symbol.amplitude);
      w.key("materialize_band");
      w.value(cfg.symbol.materialize_band);
      break;
    case SymbolConfig::Kind::Fixture:
      w.key("kind");
      w.value(std::string("fixture"));
      w.key("block_size");
      w.value(cfg.symbol.block_size);
      w.key("u_minus");
      write_coeff_list(w, cfg.symbol.u_minus);
      w.key("u_plus");
      write_coeff_list(w, cfg.symbol.u_plus);
      w.key("v_plus");
      write_coeff_list(w, cfg.symbol.v_plus);
      w.key("v_minus");
      write_coeff_list(w, cfg.symbol.v_minus);
      break;
  }
  w.end_obj();
  w.key("omega");
  write_char_config(w, cfg.omega);
  if (cfg.psi) {
    w.key("psi");
    write_char_config(w, *cfg.psi);
  }
  w.key("m");
  w.value(cfg.m);
  w.key("schedule");
  w.begin_arr();
  for (int n : cfg.schedule) w.value(n);
  w.end_arr();
  w.key("truncation");
  w.value(cfg.truncation);
  w.key("factor_band");
  w.value(cfg.factor_band);
  w.key("compress_tol");
  w.value(cfg.compress_tol);
  if (cfg.contour) {
    w.key("contour");
    w.begin_obj();
    if (!cfg.contour->automatic) {
      w.key("center");
      w.begin_arr();
      w.value(cfg.contour->center.real());
      w.value(cfg.contour->center.imag());
      w.end_arr();
      w.key("radius");
      w.value(cfg.contour->radius);
    }
    w.key("nodes");
    w.value(cfg.contour->nodes);
    w.key("margin_rel");
    w.value(cfg.contour->margin_rel);
    w.key("min_clearance");
    w.value(cfg.contour->min_clearance);
    w.end_obj();
  }
  if (cfg.f) {
    w.key("f");
    w.begin_obj();
    w.key("kind");
    w.value(cfg.f->kind);
    if (cfg.f->kind == "poly") {
      w.key("coeffs_re");
      w.begin_arr();
      for (auto c : cfg.f->poly_coeffs) w.value(c.real());
      w.end_arr();
      w.key("coeffs_im");
      w.begin_arr();
      for (auto c : cfg.f->poly_coeffs) w.value(c.imag());
      w.end_arr();
    }
    if (cfg.f->kind == "log") {
      w.key("cut_angle");
      w.value(cfg.f->cut_angle);
    }
    w.end_obj();
  }
  w.key("hankel_fit");
  w.value(cfg.hankel_fit);
  w.key("trunc_check");
  w.value(cfg.trunc_check);
  w.key("thresholds");
  w.begin_obj();
  w.key("o_trend");
  w.value(cfg.thresholds.o_trend);
  w.key("trend_window");
  w.value(cfg.thresholds.trend_window);
  w.end_obj();
  w.end_obj();
}

void write_fit(JsonWriter& w, const FitResult& f) {
  w.begin_obj();
  w.key("valid");
  w.value(f.valid);
  if (f.valid) {
    w.key("slope");
    w.value(f.slope);
    w.key("stderr");
    w.value(f.stderr_);
  } else {
    w.key("reason");
    w.value(f.reason);
  }
  w.end_obj();
}

}  // namespace

std::string ScenarioConfig::echo_json() const {
  JsonWriter w;
  write_config(w, *this);
  return w.str();
}

std::string report_csv(const AsymptoticsReport& report) {
  std::ostringstream out;
  out << "n,log_det_re,log_det_im,widom_rem,hoC_rem,hoD_rem,hoE_int,tail,ratio,trace_rem\n";
  for (const auto& r : report.rows) {
    const auto& h = r.ho;
    out << h.n << ',' << format_float(h.log_det.real()) << ','
        << format_float(h.log_det.imag()) << ',' << format_float(h.widom_rem) << ','
        << format_float(h.hoC_rem) << ',' << format_float(h.hoD_rem) << ','
        << format_float(h.hoE_int) << ',' << format_float(h.tail) << ','
        << format_float(h.ratio) << ',';
    if (r.trace_rem) out << format_float(*r.trace_rem);
    out << '\n';
  }
  return out.str();
}

std::string report_json(const AsymptoticsReport& report) {
  JsonWriter w;
  w.begin_obj();
  w.key("tool");
  w.value(std::string("toeplab 0.1.0"));
  w.key("config");
  write_config(w, report.config);
  w.key("constants");
  w.begin_obj();
  w.key("logG_re");
  w.value(report.ho.logG.real());
  w.key("logG_im");
  w.value(report.ho.logG.imag());
  w.key("E1_re");
  w.value(report.ho.szego.E1.real());
  w.key("E1_im");
  w.value(report.ho.szego.E1.imag());
  w.key("logE1_re");
  w.value(report.ho.logE1.real());
  w.key("logE1_im");
  w.value(report.ho.logE1.imag());
  w.key("log_detm_dual_re");
  w.value(report.ho.log_detm_dual.real());
  w.key("logE_extracted");
  w.value(report.ho.logE_extracted);
  w.key("logE_spread");
  w.value(report.ho.logE_spread);
  w.key("duality_gap");
  w.value(report.ho.szego.duality_gap);
  if (report.gf) {
    w.key("Gf_re");
    w.value(report.gf->real());
    w.key("Gf_im");
    w.value(report.gf->imag());
  }
  if (report.ef) {
    w.key("Ef_re");
    w.value(report.ef->value.real());
    w.key("Ef_im");
    w.value(report.ef->value.imag());
    w.key("Ef_doubling_delta");
    w.value(report.ef->doubling_delta);
  }
  w.end_obj();
  w.key("flags");
  w.begin_obj();
  w.key("E1_unstable");
  w.value(report.ho.szego.unstable);
  w.key("tail_divergent");
  w.value(report.ho.tail_divergent);
  w.key("toeplitz_invertible");
  w.value(report.probe.toeplitz_invertible);
  w.key("tilde_invertible");
  w.value(report.probe.tilde_invertible);
  w.end_obj();
  w.key("holder_seminorm");
  w.value(report.holder_seminorm_value);
  w.key("rows");
  w.begin_arr();
  for (const auto& r : report.rows) {
    const auto& h = r.ho;
    w.begin_obj();
    w.key("n");
    w.value(h.n);
    w.key("log_det_re");
    w.value(h.log_det.real());
    w.key("log_det_im");
    w.value(h.log_det.imag());
    w.key("widom_rem");
    w.value(h.widom_rem);
    w.key("hoC_rem");
    w.value(h.hoC_rem);
    w.key("hoD_rem");
    w.value(h.hoD_rem);
    w.key("hoE_int");
    w.value(h.hoE_int);
    w.key("tail");
    w.value(h.tail);
    w.key("ratio");
    w.value(h.ratio);
    w.key("tr_last");
    w.value(h.tr_last);
    w.key("removal");
    w.value(h.removal);
    w.key("trace_rem");
    if (r.trace_rem)
      w.value(*r.trace_rem);
    else
      w.null();
    if (h.gap) {
      w.key("gap");
      w.value(true);
    }
    if (!h.error.empty()) {
      w.key("error");
      w.value(h.error);
    }
    w.end_obj();
  }
  w.end_arr();
  w.key("fits");
  w.begin_obj();
  for (const auto& [name, fit] : report.fits) {
    w.key(name);
    write_fit(w, fit);
  }
  w.end_obj();
  w.key("delta_class");
  w.begin_obj();
  w.key("case");
  w.value(std::string(report.delta.o_case ? "o" : "O"));
  w.key("trend");
  w.value(report.delta.trend);
  w.key("threshold");
  w.value(report.delta.threshold);
  w.key("window");
  w.value(report.delta.window);
  w.key("vanishing_proxy");
  w.value(report.delta.vanishing_proxy);
  w.end_obj();
  if (!report.hankel_sv.empty()) {
    w.key("hankel_sv");
    w.begin_arr();
    for (double s : report.hankel_sv) w.value(s);
    w.end_arr();
  }
  if (!report.trunc_rows.empty()) {
    w.key("trunc_check");
    w.begin_obj();
    w.key("max_ratio");
    w.value(report.trunc_max_ratio);
    w.key("rows");
    w.begin_arr();
    for (const auto& t : report.trunc_rows) {
      w.begin_obj();
      w.key("n");
      w.value(t.n);
      w.key("j");
      w.value(t.j);
      w.key("norm_QTb_Dj");
      w.value(t.norms.norm_QTb_Dj);
      w.key("bound_QTb_Dj");
      w.value(t.norms.bound_QTb_Dj);
      w.key("norm_DjTc_Qn");
      w.value(t.norms.norm_DjTc_Qn);
      w.key("bound_DjTc_Qn");
      w.value(t.norms.bound_DjTc_Qn);
      w.key("norm_QnHb");
      w.value(t.norms.norm_QnHb);
      w.key("bound_QnHb");
      w.value(t.norms.bound_QnHb);
      w.key("norm_HctQn");
      w.value(t.norms.norm_HctQn);
      w.key("bound_HctQn");
      w.value(t.norms.bound_HctQn);
      w.end_obj();
    }
    w.end_arr();
    w.end_obj();
  }
  if (!report.notes.empty()) {
    w.key("notes");
    w.begin_arr();
    for (const auto& n : report.notes) w.value(n);
    w.end_arr();
  }
  w.end_obj();
  return w.str();
}

void emit_report(const AsymptoticsReport& report) {
  if (!report.config.out_csv.empty()) {
    std::ofstream out(report.config.out_csv, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + report.config.out_csv);
    out << report_csv(report);
  }
  if (!report.config.out_json.empty()) {
    std::ofstream out(report.config.out_json, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + report.config.out_json);
    out << report_json(report);
  }
}

}  // namespace toeplab
