#include "toeplab/factorization.hpp"

#include <algorithm>
#include <cmath>

#include "toeplab/fft.hpp"
#include "toeplab/operators.hpp"

namespace toeplab {

namespace {

// exp of a one-sided scalar polynomial sum_{k>=1} p_k t^{sign*k} (+ p0),
// materialized to band_out by the derivative recurrence
// n u_n = sum_j j p_j u_{n-j}.
std::map<int, Complex> exp_one_sided(const std::map<int, Complex>& p, Complex p0,
                                     int band_out, int sign) {
  std::vector<Complex> u(band_out + 1, Complex(0.0, 0.0));
  std::vector<Complex> pk(band_out + 1, Complex(0.0, 0.0));
  for (const auto& [k, v] : p) {
    const int kk = sign * k;
    if (kk >= 1 && kk <= band_out) pk[kk] = v;
  }
  u[0] = std::exp(p0);
  for (int n = 1; n <= band_out; ++n) {
    Complex acc(0.0, 0.0);
    for (int j = 1; j <= n; ++j)
      if (pk[j] != Complex(0.0, 0.0)) acc += static_cast<double>(j) * pk[j] * u[n - j];
    u[n] = acc / static_cast<double>(n);
  }
  std::map<int, Complex> out;
  for (int n = 0; n <= band_out; ++n)
    if (u[n] != Complex(0.0, 0.0)) out[sign * n] = u[n];
  return out;
}

int side_band(const FourierSymbol& s, int sign) {
  int b = 0;
  for (const auto& [k, blk] : s.coeffs())
    if (sign * k > b) b = sign * k;
  return b;
}

// zero out coefficients on the forbidden side; throw if any exceeds tol
FourierSymbol clip_support(const FourierSymbol& s, int keep_sign, double tol,
                           const char* who) {
  FourierSymbol::CoeffMap kept;
  for (const auto& [k, blk] : s.coeffs()) {
    if (k * keep_sign >= 0) {
      kept[k] = blk;
    } else if (blk.cwiseAbs().maxCoeff() > tol) {
      throw NumericalError(std::string(who) + ": support violation at index " +
                           std::to_string(k) + " of size " +
                           std::to_string(blk.cwiseAbs().maxCoeff()));
    }
  }
  return FourierSymbol(s.block_size(), std::move(kept));
}

}  // namespace

FactorPair scalar_canonical_factor(const FourierSymbol& a, int band_out) {
  if (!a.is_scalar())
    throw ConfigError("scalar_canonical_factor: symbol must be scalar");
  if (band_out < 1) throw ConfigError("scalar_canonical_factor: band must be positive");

  const int grid = next_pow2(std::max({4096, 2 * band_out + 2, 8 * a.band() + 2}));
  auto vals = a.eval_grid(grid);
  std::vector<Complex> curve(grid + 1);
  for (int j = 0; j < grid; ++j) {
    curve[j] = vals[j](0, 0);
    if (std::abs(curve[j]) < 1e-13)
      throw NumericalError("scalar_canonical_factor: symbol vanishes on the grid");
  }
  curve[grid] = curve[0];
  const auto phase = unwrap_phase(curve);
  const double wind = (phase.back() - phase.front()) / (2.0 * kPi);
  if (std::abs(wind) > 1e-6)
    throw NumericalError("scalar_canonical_factor: winding number " +
                         std::to_string(wind) + " nonzero, no canonical factorization");

  // Fourier coefficients of the continuous branch of log a
  std::vector<Matrix> logs(grid);
  for (int j = 0; j < grid; ++j) {
    Matrix m(1, 1);
    m(0, 0) = Complex(std::log(std::abs(curve[j])), phase[j]);
    logs[j] = m;
  }
  const int log_band = std::min(grid / 2 - 1, 2 * band_out + 64);
  const FourierSymbol log_a = FourierSymbol::from_samples(logs, log_band);

  std::map<int, Complex> plus_part, minus_part;
  Complex c0(0.0, 0.0);
  for (const auto& [k, blk] : log_a.coeffs()) {
    if (k == 0)
      c0 = blk(0, 0);
    else if (k > 0)
      plus_part[k] = blk(0, 0);
    else
      minus_part[k] = blk(0, 0);
  }

  FactorPair pair;
  pair.working_band = band_out;
  pair.u_plus = FourierSymbol::scalar(exp_one_sided(plus_part, c0, band_out, +1));
  pair.u_minus = FourierSymbol::scalar(exp_one_sided(minus_part, Complex(0.0, 0.0),
                                                     band_out, -1));
  // scalar factorizations commute
  pair.v_plus = pair.u_plus;
  pair.v_minus = pair.u_minus;
  // inverses at 4x band from the negated log splitting (one-sided exactly)
  const int inv_band = 4 * band_out;
  std::map<int, Complex> neg_plus, neg_minus;
  for (const auto& [k, v] : plus_part) neg_plus[k] = -v;
  for (const auto& [k, v] : minus_part) neg_minus[k] = -v;
  pair.u_plus_inv = FourierSymbol::scalar(exp_one_sided(neg_plus, -c0, inv_band, +1));
  pair.u_minus_inv =
      FourierSymbol::scalar(exp_one_sided(neg_minus, Complex(0.0, 0.0), inv_band, -1));
  pair.v_plus_inv = pair.u_plus_inv;
  pair.v_minus_inv = pair.u_minus_inv;
  pair.b = pair.v_minus.multiply(pair.u_plus_inv);
  pair.c = pair.u_minus_inv.multiply(pair.v_plus);
  return pair;
}

std::pair<FourierSymbol, FactorPair> fixture_block_symbol(const FourierSymbol& u_minus,
                                                          const FourierSymbol& u_plus,
                                                          const FourierSymbol& v_plus,
                                                          const FourierSymbol& v_minus) {
  const int N = u_minus.block_size();
  if (u_plus.block_size() != N || v_plus.block_size() != N || v_minus.block_size() != N)
    throw ConfigError("fixture_block_symbol: block size mismatch");
  if (side_band(u_minus, +1) > 0 || side_band(v_minus, +1) > 0)
    throw NumericalError("fixture_block_symbol: minus factor has positive-index support");
  if (side_band(u_plus, -1) > 0 || side_band(v_plus, -1) > 0)
    throw NumericalError("fixture_block_symbol: plus factor has negative-index support");
  for (const FourierSymbol* f : {&u_minus, &u_plus, &v_plus, &v_minus}) {
    if (std::abs(f->coeff(0).determinant()) < 1e-13)
      throw NumericalError("fixture_block_symbol: zeroth-order block not invertible");
  }

  const FourierSymbol a = u_minus.multiply(u_plus);
  const FourierSymbol a_left = v_plus.multiply(v_minus);
  const FourierSymbol diff = a.plus(a_left.scaled(Complex(-1.0, 0.0)));
  for (const auto& [k, blk] : diff.coeffs()) {
    if (blk.cwiseAbs().maxCoeff() > 1e-9)
      throw NumericalError(
          "fixture_block_symbol: u_- u_+ and v_+ v_- disagree at index " +
          std::to_string(k));
  }

  FactorPair pair;
  pair.u_minus = u_minus;
  pair.u_plus = u_plus;
  pair.v_plus = v_plus;
  pair.v_minus = v_minus;
  const int K = std::max({a.band(), 1});
  pair.working_band = K;
  const int inv_band = 4 * K;
  pair.u_plus_inv = clip_support(u_plus.inverse(inv_band), +1, 1e-9, "u_plus_inv");
  pair.v_plus_inv = clip_support(v_plus.inverse(inv_band), +1, 1e-9, "v_plus_inv");
  pair.u_minus_inv = clip_support(u_minus.inverse(inv_band), -1, 1e-9, "u_minus_inv");
  pair.v_minus_inv = clip_support(v_minus.inverse(inv_band), -1, 1e-9, "v_minus_inv");
  pair.b = pair.v_minus.multiply(pair.u_plus_inv);
  pair.c = pair.u_minus_inv.multiply(pair.v_plus);
  return {a, pair};
}

InvertibilityProbe invertibility_probe(const FourierSymbol& a, int M) {
  if (M < 64) throw ConfigError("invertibility_probe: M must be at least 64");
  InvertibilityProbe out;
  auto stats = [](const FourierSymbol& s, int modes) {
    const auto sv = singular_values(toeplitz_matrix(s, modes - 1));
    return std::pair<double, double>(sv.back(), sv.front());
  };
  const auto [smin1, smax1] = stats(a, M);
  const auto [smin2, smax2] = stats(a, 2 * M);
  out.smin = smin2;
  out.cond = smax2 / std::max(smin2, 1e-300);
  const bool stable = std::abs(smin2 - smin1) <= 0.1 * std::max(smin1, 1e-300);
  out.toeplitz_invertible = smin2 > 1e-6 && stable;

  const FourierSymbol at = a.tilde();
  const auto [tmin1, tmax1] = stats(at, M);
  const auto [tmin2, tmax2] = stats(at, 2 * M);
  out.smin_tilde = tmin2;
  out.cond_tilde = tmax2 / std::max(tmin2, 1e-300);
  const bool tstable = std::abs(tmin2 - tmin1) <= 0.1 * std::max(tmin1, 1e-300);
  out.tilde_invertible = tmin2 > 1e-6 && tstable;
  return out;
}

}  // namespace toeplab
