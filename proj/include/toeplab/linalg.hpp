#pragma once

#include <vector>

#include "toeplab/common.hpp"

namespace toeplab {

// True when every imaginary part is below tol; such matrices take the
// real-arithmetic fast paths (a ~4x saving in the dense kernels).
bool effectively_real(const Matrix& a, double tol = 1e-13);

// Dense product routed through real GEMM when both inputs are real.
Matrix prod_auto(const Matrix& a, const Matrix& b);

// log det(A) by partial-pivot LU.  The imaginary part is the sum of
// principal-branch pivot arguments (plus pi per row swap); callers that
// need a continuous branch unwrap along their own parameter.
// Throws NumericalError when a pivot is exactly zero.
Complex log_det_lu(const Matrix& a);

// Largest singular value estimated by power iteration on A^H A with a
// fixed deterministic start vector.
double operator_norm_estimate(const Matrix& a, int max_iter = 200, double rtol = 1e-10);

// tr(A^p) for small p without forming high powers densely (p<=2 uses
// entrywise sums; larger p falls back to repeated products).
Complex trace_power(const Matrix& a, int p);

// Convex hull (monotone chain) of points in the plane; returns the hull
// polygon in counterclockwise order (degenerate inputs give <=2 points).
std::vector<Complex> convex_hull(std::vector<Complex> pts);

// Signed distance from z to the hull: negative inside, else the Euclidean
// distance to the polygon boundary.
double hull_distance(const std::vector<Complex>& hull, Complex z);

}  // namespace toeplab
