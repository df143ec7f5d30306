#include "toeplab/regularity.hpp"

#include <algorithm>
#include <cmath>

namespace toeplab {

double iterated_log(int k, double x) {
  double v = x;
  for (int i = 0; i < k; ++i) {
    if (v <= 0.0) throw NumericalError("iterated_log: argument left the domain");
    v = std::log(v);
  }
  return v;
}

double iterated_log_threshold(int k) {
  // l_{k-1}(x_k) = 1, x_1 = 1
  double v = 1.0;
  for (int i = 1; i < k; ++i) v = std::exp(v);
  return v;
}

namespace {
// default b_k = pi * exp^{(k-1)}(e), so l_{k-1}(b_k/pi) >= e and every
// iterated log stays >= 1 on (0, pi]
double default_b(int k) {
  double v = std::exp(1.0);
  for (int i = 1; i < k; ++i) v = std::exp(v);
  return kPi * v;
}
}  // namespace

CharFunction::CharFunction(double gamma, const std::vector<LogFactorSpec>& logs)
    : gamma_(gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ConfigError("CharFunction: gamma must lie in (0,1)");
  int k = 0;
  for (const auto& spec : logs) {
    ++k;
    LogFactor f;
    f.beta = spec.beta;
    f.b = spec.b.value_or(default_b(k));
    if (f.b <= 0.0) throw ConfigError("CharFunction: log constant b must be positive");
    if (f.b / kPi <= iterated_log_threshold(k))
      throw ConfigError("CharFunction: b_" + std::to_string(k) +
                        " too small, iterated log leaves its domain on (0,pi]");
    logs_.push_back(f);
  }
  // positivity and decay to zero along dyadic scales
  double prev = (*this)(kPi);
  if (!(prev > 0.0)) throw ConfigError("CharFunction: w(pi) not positive");
  double smallest = prev;
  for (int j = 1; j <= 40; ++j) {
    const double v = (*this)(kPi * std::pow(2.0, -j));
    if (!(v > 0.0)) throw ConfigError("CharFunction: w not positive on dyadic grid");
    smallest = std::min(smallest, v);
  }
  if (smallest > 0.5 * prev)
    throw ConfigError("CharFunction: w does not decay to zero on the dyadic grid");
}

double CharFunction::operator()(double x) const {
  if (!(x > 0.0 && x <= kPi + 1e-12))
    throw ConfigError("CharFunction: argument outside (0, pi]");
  double v = std::pow(x, gamma_);
  int k = 0;
  for (const auto& f : logs_) {
    ++k;
    v *= std::pow(iterated_log(k, f.b / x), f.beta);
  }
  return v;
}

double CharFunction::almost_increasing_witness(int scales) const {
  double worst = 1.0;
  std::vector<double> vals(scales + 1);
  for (int j = 0; j <= scales; ++j) vals[j] = (*this)(kPi * std::pow(2.0, -j));
  // x = pi 2^{-i} <= y = pi 2^{-j} iff i >= j
  for (int j = 0; j <= scales; ++j)
    for (int i = j; i <= scales; ++i) worst = std::max(worst, vals[i] / vals[j]);
  return worst;
}

namespace {
// Simpson integral of h over [0, s_max] with step ds.
template <typename F>
double simpson(F&& h, double s_max, double ds) {
  const int n = std::max(2, 2 * static_cast<int>(std::ceil(s_max / (2.0 * ds))));
  const double step = s_max / n;
  double acc = h(0.0) + h(s_max);
  for (int i = 1; i < n; ++i) acc += h(i * step) * (i % 2 ? 4.0 : 2.0);
  return acc * step / 3.0;
}
}  // namespace

BariStechkinMargins bari_stechkin_margins(const CharFunction& w, int scales) {
  BariStechkinMargins out;
  const double ln2 = std::log(2.0);
  // log grid of x in (pi 2^{-120}, pi]; the deep scales resolve the x->0
  // endpoint of the second supremum
  for (int i = 0; i <= scales; ++i) {
    const double x = kPi * std::pow(2.0, -120.0 * i / scales);
    const double wx = w(x);
    // int_0^x w(y)/y dy = ln2 * int_0^inf w(x 2^{-s}) ds
    const double s_max = std::min(1200.0, 80.0 / w.gamma());
    const double lower = ln2 * simpson([&](double s) { return w(x * std::pow(2.0, -s)); },
                                       s_max, 0.0625);
    const double tail_probe = w(x * std::pow(2.0, -s_max));
    if (tail_probe > 1e-9 * wx) out.lower_diverged = true;
    out.sup_lower = std::max(out.sup_lower, lower / wx);
    // x int_x^pi w(y)/y^2 dy = ln2 * int_0^{log2(pi/x)} w(x 2^s) 2^{-s} ds
    const double L = std::log2(kPi / x);
    double upper = 0.0;
    if (L > 1e-12)
      upper = ln2 * simpson(
                        [&](double s) { return w(x * std::pow(2.0, s)) * std::pow(2.0, -s); },
                        L, 0.0625);
    out.sup_upper = std::max(out.sup_upper, upper / wx);
  }
  return out;
}

double modulus_estimate(std::span<const Complex> grid_values, double x) {
  const int M = static_cast<int>(grid_values.size());
  if (M < 2 || x <= 0.0) return 0.0;
  int D = static_cast<int>(std::floor(x * M / (2.0 * kPi)));
  D = std::min(D, M / 2);
  double best = 0.0;
  for (int d = 1; d <= D; ++d) {
    for (int j = 0; j < M; ++j) {
      const double diff = std::abs(grid_values[(j + d) % M] - grid_values[j]);
      if (diff > best) best = diff;
    }
  }
  return best;
}

double modulus_estimate(const FourierSymbol& f, double x, int grid_size) {
  const int M = next_pow2(std::max({grid_size, 4096, 2 * f.band() + 2}));
  auto vals = f.eval_grid(M);
  const int N = f.block_size();
  double best = 0.0;
  std::vector<Complex> line(M);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      for (int j = 0; j < M; ++j) line[j] = vals[j](r, c);
      best = std::max(best, modulus_estimate(line, x));
    }
  }
  return best;
}

namespace {
ModulusProfile profile_from_values(const std::vector<double>& moduli,
                                   const CharFunction& w, int scale_count) {
  ModulusProfile p;
  p.scales.resize(scale_count + 1);
  p.values = moduli;
  double best = 0.0;
  std::vector<double> ratios(scale_count + 1);
  for (int i = 0; i <= scale_count; ++i) {
    p.scales[i] = kPi * std::pow(2.0, -i);
    ratios[i] = moduli[i] / w(p.scales[i]);
    best = std::max(best, ratios[i]);
  }
  p.seminorm = best;
  const int I = scale_count;
  if (I >= 3 && best > 0.0) {
    const bool small = ratios[I] < 0.1 * best && ratios[I - 1] < 0.1 * best &&
                       ratios[I - 2] < 0.1 * best;
    const bool decreasing = ratios[I] <= ratios[I - 1] && ratios[I - 1] <= ratios[I - 2];
    p.vanishing = small && decreasing;
  }
  return p;
}
}  // namespace

ModulusProfile holder_seminorm(std::span<const Complex> grid_values,
                               const CharFunction& w, int scale_count) {
  std::vector<double> moduli(scale_count + 1);
  for (int i = 0; i <= scale_count; ++i)
    moduli[i] = modulus_estimate(grid_values, kPi * std::pow(2.0, -i));
  return profile_from_values(moduli, w, scale_count);
}

ModulusProfile holder_seminorm(const FourierSymbol& f, const CharFunction& w,
                               int scale_count, int grid_size) {
  std::vector<double> moduli(scale_count + 1);
  for (int i = 0; i <= scale_count; ++i)
    moduli[i] = modulus_estimate(f, kPi * std::pow(2.0, -i), grid_size);
  return profile_from_values(moduli, w, scale_count);
}

TailSum tail_sum(const CharFunction& w, const CharFunction& p, int m, long n,
                 long direct_cap) {
  if (m < 1) throw ConfigError("tail_sum: m must be >= 1");
  TailSum out;
  const double theta = w.gamma() + p.gamma();
  out.convergent = m * theta > 1.0 + 1e-9;  // exponent test; log factors do not move it
  auto term = [&](double k) {
    const double x = 1.0 / k;
    return std::pow(w(x) * p(x), m);
  };
  const long start = n + 1;
  const long cap = std::max(start, direct_cap);
  double direct = 0.0;
  for (long k = cap; k >= start; --k) direct += term(static_cast<double>(k));  // small-first
  out.partial = direct;
  if (!out.convergent) {
    out.value = direct;
    out.bracket_low = out.bracket_high = std::numeric_limits<double>::infinity();
    return out;
  }
  // integral test for the beyond-cap remainder: int_X^inf g with x = X 2^s
  const double ln2 = std::log(2.0);
  const double rate = m * theta - 1.0;
  const double s_max = std::min(4000.0, 80.0 / rate);
  auto integral_from = [&](double X) {
    return ln2 * simpson(
                     [&](double s) {
                       const double x = X * std::pow(2.0, s);
                       return term(x) * x;
                     },
                     s_max, 0.125);
  };
  out.bracket_high = integral_from(static_cast<double>(cap));      // >= remainder
  out.bracket_low = integral_from(static_cast<double>(cap) + 1.0); // <= remainder
  out.value = direct + 0.5 * (out.bracket_low + out.bracket_high);
  return out;
}

double removal_condition(const CharFunction& w, const CharFunction& p, int m, long n) {
  if (m < 2) throw ConfigError("removal_condition: m must be >= 2");
  double sum = 0.0;
  for (long j = n; j >= 1; --j) {
    const double x = 1.0 / static_cast<double>(j);
    sum += w(x) * p(x);
  }
  const double xn = 1.0 / static_cast<double>(n);
  return std::pow(w(xn) * p(xn), m - 1) * sum;
}

}  // namespace toeplab
