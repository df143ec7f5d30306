#pragma once

// Independent reference computations for the test suite.  Everything here
// avoids the library's production code paths: quadrature instead of FFT,
// dense projection products instead of slab algebra, eigenvalue and
// matrix-exponential determinant formulas instead of LU.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "toeplab/common.hpp"
#include "toeplab/operators.hpp"
#include "toeplab/symbols.hpp"

namespace oracles {

using toeplab::Complex;
using toeplab::FourierSymbol;
using toeplab::Matrix;
using toeplab::kPi;

// Fourier coefficient by composite midpoint quadrature (no FFT).
inline Complex fourier_coeff_quadrature(const std::function<Complex(double)>& f, int k,
                                        int nodes) {
  Complex acc(0.0, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double th = 2.0 * kPi * (j + 0.5) / nodes;
    acc += f(th) * std::exp(Complex(0.0, -k * th));
  }
  return acc / static_cast<double>(nodes);
}

// det T_n((1-al t)(1-be/t)) by the three-term recurrence
// D_n = (1+al be) D_{n-1} - al be D_{n-2}.
inline double tridiag_det(int n, double al, double be) {
  double dm2 = 1.0;            // D_{-1}
  double dm1 = 1.0 + al * be;  // D_0
  if (n == 0) return dm1;
  for (int i = 1; i <= n; ++i) {
    const double d = (1.0 + al * be) * dm1 - al * be * dm2;
    dm2 = dm1;
    dm1 = d;
  }
  return dm1;
}

inline FourierSymbol tridiag_symbol(double al, double be) {
  return FourierSymbol::scalar({{-1, -be}, {0, 1.0 + al * be}, {1, -al}});
}

// b = (1 - be/t)(1 - al t)^{-1} and c = (1 - be/t)^{-1}(1 - al t) closed forms
inline FourierSymbol tridiag_b(double al, double be, int band) {
  std::map<int, Complex> m;
  m[-1] = -be;
  for (int k = 0; k <= band; ++k) m[k] = (1.0 - al * be) * std::pow(al, k);
  return FourierSymbol::scalar(m);
}

inline FourierSymbol tridiag_c(double al, double be, int band) {
  std::map<int, Complex> m;
  m[1] = -al;
  for (int k = 0; k <= band; ++k) m[-k] = (1.0 - al * be) * std::pow(be, k);
  return FourierSymbol::scalar(m);
}

// strong Szego constant from scalar log coefficients: exp(sum k c_k c_{-k})
inline Complex strong_szego(const std::map<int, Complex>& log_coeffs) {
  Complex acc(0.0, 0.0);
  for (const auto& [k, v] : log_coeffs) {
    if (k < 1) continue;
    auto it = log_coeffs.find(-k);
    if (it != log_coeffs.end()) acc += static_cast<double>(k) * v * it->second;
  }
  return std::exp(acc);
}

// det_m by the eigenvalue formula: prod (1+l_j) exp(sum_{i<m} (-l_j)^i / i)
inline Complex detm_eig(const Matrix& k, int m) {
  Eigen::ComplexEigenSolver<Matrix> es(k, false);
  Complex out(1.0, 0.0);
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const Complex l = es.eigenvalues()(j);
    Complex reg(0.0, 0.0);
    Complex p(1.0, 0.0);
    for (int i = 1; i < m; ++i) {
      p *= -l;
      reg += p / static_cast<double>(i);
    }
    out *= (Complex(1.0, 0.0) + l) * std::exp(reg);
  }
  return out;
}

// det_m by the direct definition det(I + R_m(K)), R_m via a dense matrix
// exponential.
inline Complex detm_expm(const Matrix& k, int m) {
  const Matrix id = Matrix::Identity(k.rows(), k.cols());
  Matrix s = Matrix::Zero(k.rows(), k.cols());
  Matrix p = id;
  for (int j = 1; j < m; ++j) {
    p = p * (-k);
    s += p / static_cast<double>(j);
  }
  const Matrix expo = s.exp();
  const Matrix rm = (id + k) * expo - id;
  return (id + rm).determinant();
}

// random contraction with spectral radius <= rho (seeded, reproducible)
inline Matrix random_contraction(int dim, double rho, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix k(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) k(r, c) = Complex(u(rng), u(rng));
  Eigen::ComplexEigenSolver<Matrix> es(k, false);
  double radius = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    radius = std::max(radius, std::abs(es.eigenvalues()(i)));
  return k * (rho / std::max(radius, 1e-12));
}

// F_{n,k}(b,c) assembled literally from dense M-mode matrices and dense
// projections; the independent check of the slab machinery.
inline Matrix correction_F_dense(const FourierSymbol& b, const FourierSymbol& c, int n,
                                 int k, int M) {
  using toeplab::ProjectionMask;
  const int N = b.block_size();
  const Matrix tb = toeplab::toeplitz_matrix(b, M - 1);
  const Matrix tc = toeplab::toeplitz_matrix(c, M - 1);
  const Matrix hb = toeplab::hankel_matrix(b, M);
  const Matrix hct = toeplab::hankel_matrix(c.tilde(), M);
  ProjectionMask pn{ProjectionMask::Kind::Pn, n, M, N};
  ProjectionMask qn{ProjectionMask::Kind::Qn, n, M, N};
  const Matrix P = pn.dense(), Q = qn.dense();
  Matrix mid = Matrix::Identity(M * N, M * N);
  const Matrix core = Q * hb * hct * Q;
  for (int i = 0; i < k; ++i) mid = mid * core;
  const Matrix full = P * tc * Q * mid * Q * tb * P;
  return full.topLeftCorner((n + 1) * N, (n + 1) * N);
}

// lacunary cosine series sum_{j<=levels} amp 2^{-gamma j} cos(2^j theta)
inline FourierSymbol lacunary_series(double gamma, int levels, double amp) {
  std::map<int, Complex> m;
  for (int j = 0; j <= levels; ++j) {
    const double half = 0.5 * amp * std::pow(2.0, -gamma * j);
    m[1 << j] = half;
    m[-(1 << j)] = half;
  }
  return FourierSymbol::scalar(m);
}

// tail sum by plain direct accumulation to a large cap (integral remainder
// ignored; callers use it only where the cap error is negligible)
inline double direct_tail(const std::function<double(double)>& g, long n, long cap) {
  double acc = 0.0;
  for (long k = cap; k > n; --k) acc += g(static_cast<double>(k));
  return acc;
}

}  // namespace oracles
