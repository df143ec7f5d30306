#include "toeplab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace toeplab {

bool effectively_real(const Matrix& a, double tol) {
  if (a.size() == 0) return true;
  return a.imag().cwiseAbs().maxCoeff() <= tol;
}

Matrix prod_auto(const Matrix& a, const Matrix& b) {
  if (a.size() > 0 && b.size() > 0 && effectively_real(a) && effectively_real(b)) {
    RealMatrix c = a.real() * b.real();
    return c.cast<Complex>();
  }
  return a * b;
}

Complex log_det_lu(const Matrix& a) {
  if (a.rows() == 0) return Complex(0.0, 0.0);
  if (effectively_real(a)) {
    Eigen::PartialPivLU<RealMatrix> lu(a.real());
    double re = 0.0;
    double sign = lu.permutationP().determinant() > 0 ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double piv = lu.matrixLU()(i, i);
      if (piv == 0.0) throw NumericalError("log_det_lu: exactly singular matrix");
      re += std::log(std::abs(piv));
      if (piv < 0.0) sign = -sign;
    }
    return Complex(re, sign > 0 ? 0.0 : kPi);
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  Complex out(0.0, lu.permutationP().determinant() > 0 ? 0.0 : kPi);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Complex piv = lu.matrixLU()(i, i);
    if (piv == Complex(0.0, 0.0)) throw NumericalError("log_det_lu: exactly singular matrix");
    out += std::log(piv);
  }
  return out;
}

double operator_norm_estimate(const Matrix& a, int max_iter, double rtol) {
  if (a.size() == 0) return 0.0;
  Vector v = Vector::Ones(a.cols());
  v.normalize();
  double s = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = a * v;
    v = a.adjoint() * w;
    const double nrm = v.norm();
    if (nrm == 0.0) return 0.0;
    v /= nrm;
    const double s_new = std::sqrt(nrm);
    if (it > 2 && std::abs(s_new - s) <= rtol * s_new) return s_new;
    s = s_new;
  }
  return s;
}

Complex trace_power(const Matrix& a, int p) {
  if (p == 1) return a.trace();
  if (p == 2) return (a.array() * a.transpose().array()).sum();
  Matrix acc = a;
  for (int i = 1; i < p - 1; ++i) acc = prod_auto(acc, a);
  return (acc.array() * a.transpose().array()).sum();
}

namespace {
double cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}
}  // namespace

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;
  std::vector<Complex> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double hull_distance(const std::vector<Complex>& hull, Complex z) {
  const int n = static_cast<int>(hull.size());
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) return std::abs(z - hull[0]);
  double d = std::numeric_limits<double>::infinity();
  bool inside = n > 2;
  for (int i = 0; i < n; ++i) {
    const Complex a = hull[i], b = hull[(i + 1) % n];
    d = std::min(d, segment_distance(z, a, b));
    if (n > 2 && cross(a, b, z) < 0) inside = false;
  }
  return inside ? -d : d;
}

}  // namespace toeplab
