#pragma once

#include <optional>
#include <vector>

#include "toeplab/common.hpp"
#include "toeplab/factorization.hpp"
#include "toeplab/symbols.hpp"

namespace toeplab {

/// f in tr f(T_n(a)): polynomial, exp, or log with a branch-cut ray from
/// the origin (cut_angle is the direction of the forbidden ray).
struct AnalyticFunctionSpec {
  enum class Kind { Polynomial, Exp, LogCut };
  Kind kind = Kind::Polynomial;
  std::vector<Complex> poly_coeffs;  // c0 + c1 x + ... degree <= 32
  double cut_angle = kPi;

  static AnalyticFunctionSpec polynomial(std::vector<Complex> coeffs);
  static AnalyticFunctionSpec exponential();
  static AnalyticFunctionSpec log_with_cut(double cut_angle = kPi);

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  bool is_polynomial() const { return kind == Kind::Polynomial; }
};

/// Circular contour around the spectral hull.
struct ContourSpec {
  Complex center{0.0, 0.0};
  double radius = 0.0;
  int nodes = 512;            // power of two, >= 64
  double min_clearance = 0.0; // required distance of every node from the hull
};

struct SpectrumHull {
  std::vector<Complex> points;  // truncation eigenvalues + symbol range
  std::vector<Complex> hull;    // convex hull inflated by 10%
  Complex centroid{0.0, 0.0};
  double radius = 0.0;  // max distance of hull vertices from the centroid
};

SpectrumHull spectrum_hull(const FourierSymbol& a, int M);

// Clearance check for every contour node against the hull; throws
// ConfigError on violation (and on a log cut crossing the contour disk).
void validate_contour(const ContourSpec& contour, const SpectrumHull& hull,
                      const AnalyticFunctionSpec& f);

struct TraceValue {
  Complex value{0.0, 0.0};              // sum of f over eigenvalues of T_n(a)
  std::optional<Complex> exact_poly;    // combinatorial value for polynomial f
  double diff = 0.0;                    // |value - exact_poly| when available
};

TraceValue trace_f(const FourierSymbol& a, const AnalyticFunctionSpec& f, int n);

// G_f(a) = (1/2pi) int tr f(a(e^{i theta})) d theta by trapezoidal
// quadrature, f applied through the pointwise eigendecomposition with a
// contour-integral fallback for defective values.
Complex gf_constant(const FourierSymbol& a, const AnalyticFunctionSpec& f, int nodes = 1024);

struct EfResult {
  Complex value{0.0, 0.0};
  Complex value_half{0.0, 0.0};  // estimate from every second node
  double doubling_delta = 0.0;
};

struct EfOptions {
  int truncation = 256;   // M for the per-node Szego constant
  int factor_band = 128;  // band of the per-node scalar factorization
  int probe_modes = 64;   // invertibility probe size per node
  int workers = 1;
  double doubling_tol = 1e-6;
};

// E_f(a) = -(1/2pi i) oint f'(lambda) log det_1 T[a-lambda]T[(a-lambda)^{-1}]
// d lambda, each node factored canonically.  Scalar symbols only.
EfResult ef_constant(const FourierSymbol& a, const AnalyticFunctionSpec& f,
                     const ContourSpec& contour, const EfOptions& opts = {});

}  // namespace toeplab
