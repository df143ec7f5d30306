#include "toeplab/traces.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "toeplab/determinants.hpp"
#include "toeplab/linalg.hpp"
#include "toeplab/operators.hpp"

namespace toeplab {

AnalyticFunctionSpec AnalyticFunctionSpec::polynomial(std::vector<Complex> coeffs) {
  if (coeffs.size() > 33)
    throw ConfigError("AnalyticFunctionSpec: polynomial degree must be <= 32");
  AnalyticFunctionSpec f;
  f.kind = Kind::Polynomial;
  f.poly_coeffs = std::move(coeffs);
  if (f.poly_coeffs.empty()) f.poly_coeffs.push_back(Complex(0.0, 0.0));
  return f;
}

AnalyticFunctionSpec AnalyticFunctionSpec::exponential() {
  AnalyticFunctionSpec f;
  f.kind = Kind::Exp;
  return f;
}

AnalyticFunctionSpec AnalyticFunctionSpec::log_with_cut(double cut_angle) {
  AnalyticFunctionSpec f;
  f.kind = Kind::LogCut;
  f.cut_angle = cut_angle;
  return f;
}

Complex AnalyticFunctionSpec::eval(Complex z) const {
  switch (kind) {
    case Kind::Polynomial: {
      Complex acc(0.0, 0.0);
      for (auto it = poly_coeffs.rbegin(); it != poly_coeffs.rend(); ++it)
        acc = acc * z + *it;
      return acc;
    }
    case Kind::Exp:
      return std::exp(z);
    case Kind::LogCut: {
      // branch with the cut along the ray arg = cut_angle
      const Complex rotated = z * std::exp(Complex(0.0, kPi - cut_angle));
      return std::log(rotated) + Complex(0.0, cut_angle - kPi);
    }
  }
  return Complex(0.0, 0.0);
}

Complex AnalyticFunctionSpec::deriv(Complex z) const {
  switch (kind) {
    case Kind::Polynomial: {
      Complex acc(0.0, 0.0);
      for (size_t q = poly_coeffs.size(); q-- > 1;)
        acc = acc * z + static_cast<double>(q) * poly_coeffs[q];
      return acc;
    }
    case Kind::Exp:
      return std::exp(z);
    case Kind::LogCut:
      return Complex(1.0, 0.0) / z;
  }
  return Complex(0.0, 0.0);
}

SpectrumHull spectrum_hull(const FourierSymbol& a, int M) {
  SpectrumHull out;
  auto add_eigs = [&](const Matrix& t) {
    if (effectively_real(t) && t.real().isApprox(t.real().transpose(), 1e-12)) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(t.real(), Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        out.points.push_back(Complex(es.eigenvalues()(i), 0.0));
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(t, false);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        out.points.push_back(es.eigenvalues()(i));
    }
  };
  add_eigs(toeplitz_matrix(a, M - 1));
  add_eigs(toeplitz_matrix(a.tilde(), M - 1));
  const int grid = next_pow2(std::max(512, 2 * a.band() + 2));
  auto vals = a.eval_grid(grid);
  for (const auto& v : vals) {
    if (a.block_size() == 1) {
      out.points.push_back(v(0, 0));
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(v, false);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        out.points.push_back(es.eigenvalues()(i));
    }
  }
  Complex mean(0.0, 0.0);
  for (auto z : out.points) mean += z;
  mean /= static_cast<double>(out.points.size());
  out.centroid = mean;
  auto hull = convex_hull(out.points);
  for (auto& z : hull) z = mean + 1.1 * (z - mean);  // inflate by 10%
  out.hull = hull;
  for (auto z : out.hull) out.radius = std::max(out.radius, std::abs(z - mean));
  if (out.hull.size() <= 2)  // flat or single-point spectra still get a radius
    for (auto z : out.points)
      out.radius = std::max(out.radius, 1.1 * std::abs(z - mean));
  return out;
}

void validate_contour(const ContourSpec& contour, const SpectrumHull& hull,
                      const AnalyticFunctionSpec& f) {
  if (contour.nodes < 64 || !is_pow2(contour.nodes))
    throw ConfigError("contour: node count must be a power of two >= 64");
  if (!(contour.radius > 0.0)) throw ConfigError("contour: radius must be positive");
  for (int q = 0; q < contour.nodes; ++q) {
    const double th = 2.0 * kPi * q / contour.nodes;
    const Complex node = contour.center + contour.radius * std::exp(Complex(0.0, th));
    const double d = hull_distance(hull.hull.empty() ? hull.points : hull.hull, node);
    if (d < contour.min_clearance)
      throw ConfigError("contour: node " + std::to_string(q) +
                        " within the hull clearance margin (distance " +
                        std::to_string(d) + ")");
  }
  if (f.kind == AnalyticFunctionSpec::Kind::LogCut) {
    // the cut ray from the origin must not meet the closed contour disk
    const Complex dir = std::exp(Complex(0.0, f.cut_angle));
    const double t = std::max(0.0, contour.center.real() * dir.real() +
                                       contour.center.imag() * dir.imag());
    const double dist = std::abs(contour.center - t * dir);
    if (dist <= contour.radius)
      throw ConfigError("contour: log branch cut crosses the contour disk");
  }
}

namespace {

std::vector<Complex> matrix_eigenvalues(const Matrix& t) {
  if (effectively_real(t) && t.real().isApprox(t.real().transpose(), 1e-12)) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t.real(), Eigen::EigenvaluesOnly);
    std::vector<Complex> ev(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      ev[i] = Complex(es.eigenvalues()(i), 0.0);
    return ev;
  }
  Eigen::ComplexEigenSolver<Matrix> es(t, false);
  std::vector<Complex> ev(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev[i] = es.eigenvalues()(i);
  return ev;
}

}  // namespace

TraceValue trace_f(const FourierSymbol& a, const AnalyticFunctionSpec& f, int n) {
  TraceValue out;
  const Matrix t = toeplitz_matrix(a, n);
  for (auto ev : matrix_eigenvalues(t)) out.value += f.eval(ev);
  if (f.is_polynomial()) {
    // exact route: traces of matrix powers
    Complex acc = f.poly_coeffs[0] * static_cast<double>(t.rows());
    Matrix p = Matrix::Identity(t.rows(), t.cols());
    for (size_t q = 1; q < f.poly_coeffs.size(); ++q) {
      p = prod_auto(p, t);
      acc += f.poly_coeffs[q] * p.trace();
    }
    out.exact_poly = acc;
    out.diff = std::abs(out.value - acc);
  }
  return out;
}

Complex gf_constant(const FourierSymbol& a, const AnalyticFunctionSpec& f, int nodes) {
  const int M = next_pow2(std::max({nodes, 1024, 2 * a.band() + 2}));
  auto vals = a.eval_grid(M);
  const int N = a.block_size();
  Complex acc(0.0, 0.0);
  for (const auto& v : vals) {
    if (N == 1) {
      acc += f.eval(v(0, 0));
      continue;
    }
    Eigen::ComplexEigenSolver<Matrix> es(v, true);
    const double cond = [&] {
      Eigen::JacobiSVD<Matrix> svd(es.eigenvectors());
      const auto& s = svd.singularValues();
      return s(0) / std::max(s(s.size() - 1), 1e-300);
    }();
    if (cond <= 1e8) {
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        acc += f.eval(es.eigenvalues()(i));
    } else {
      // defective pointwise value: contour-integral functional calculus
      Complex mean(0.0, 0.0);
      double spread = 0.0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mean += es.eigenvalues()(i);
      mean /= static_cast<double>(N);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        spread = std::max(spread, std::abs(es.eigenvalues()(i) - mean));
      const double r = 2.0 * spread + 1e-6;
      const int P = 256;
      Complex tr(0.0, 0.0);
      for (int q = 0; q < P; ++q) {
        const Complex z = mean + r * std::exp(Complex(0.0, 2.0 * kPi * q / P));
        const Matrix res = (z * Matrix::Identity(N, N) - v).inverse();
        tr += f.eval(z) * res.trace() * (z - mean);
      }
      acc += tr / static_cast<double>(P);
    }
  }
  return acc / static_cast<double>(M);
}

EfResult ef_constant(const FourierSymbol& a, const AnalyticFunctionSpec& f,
                     const ContourSpec& contour, const EfOptions& opts) {
  if (!a.is_scalar())
    throw ConfigError("ef_constant: per-node canonical factorization requires a scalar "
                      "symbol (block symbols would need per-lambda factor fixtures)");
  const SpectrumHull hull = spectrum_hull(a, std::min(opts.truncation, 128));
  validate_contour(contour, hull, f);

  const int P = contour.nodes;
  std::vector<Complex> logdet1(P);
  std::vector<std::string> errors(P);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int q = next.fetch_add(1);
      if (q >= P) return;
      const double th = 2.0 * kPi * q / P;
      const Complex lambda = contour.center + contour.radius * std::exp(Complex(0.0, th));
      try {
        const FourierSymbol shifted = a.minus_lambda(lambda);
        const auto probe = invertibility_probe(shifted, opts.probe_modes);
        if (!probe.toeplitz_invertible || !probe.tilde_invertible)
          throw NumericalError("invertibility probe failed at a contour node");
        const FactorPair pair = scalar_canonical_factor(shifted, opts.factor_band);
        const SzegoConstants sz = szego_constant(shifted, pair, opts.truncation);
        logdet1[q] = sz.logE1;
      } catch (const std::exception& e) {
        errors[q] = e.what();
      }
    }
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (int q = 0; q < P; ++q)
    if (!errors[q].empty())
      throw NumericalError("ef_constant: node " + std::to_string(q) + ": " + errors[q]);

  // continuous branch of log det_1 along the contour
  for (int q = 1; q < P; ++q) {
    double d = logdet1[q].imag() - logdet1[q - 1].imag();
    while (d > kPi) {
      logdet1[q] -= Complex(0.0, 2.0 * kPi);
      d = logdet1[q].imag() - logdet1[q - 1].imag();
    }
    while (d < -kPi) {
      logdet1[q] += Complex(0.0, 2.0 * kPi);
      d = logdet1[q].imag() - logdet1[q - 1].imag();
    }
  }

  auto quadrature = [&](int stride) {
    Complex acc(0.0, 0.0);
    int count = 0;
    for (int q = 0; q < P; q += stride) {
      const double th = 2.0 * kPi * q / P;
      const Complex lambda = contour.center + contour.radius * std::exp(Complex(0.0, th));
      acc += std::exp(Complex(0.0, th)) * f.deriv(lambda) * logdet1[q];
      ++count;
    }
    // E_f = -(1/2pi i) oint f' logdet1 dlambda; dlambda = i R e^{i th} dth
    return -(contour.radius / static_cast<double>(count)) * acc;
  };

  EfResult out;
  out.value = quadrature(1);
  out.value_half = quadrature(2);
  out.doubling_delta = std::abs(out.value - out.value_half);
  if (out.doubling_delta >= opts.doubling_tol)
    throw NumericalError("ef_constant: node-count doubling moved the result by " +
                         std::to_string(out.doubling_delta) +
                         ", quadrature not converged");
  return out;
}

}  // namespace toeplab
