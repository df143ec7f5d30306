#pragma once

#include <map>
#include <vector>

#include "toeplab/common.hpp"

namespace toeplab {

/// Matrix-valued Laurent symbol on the unit circle, stored as finitely
/// supported Fourier coefficients a_k (N x N blocks).  Values are immutable
/// after construction and safe to share across threads.
class FourierSymbol {
 public:
  using CoeffMap = std::map<int, Matrix>;

  explicit FourierSymbol(int block_size);
  FourierSymbol(int block_size, CoeffMap coeffs, int sample_grid_size = 0);

  static FourierSymbol identity(int block_size);
  static FourierSymbol constant(const Matrix& a0);
  // Scalar Laurent polynomial from {k -> value}.
  static FourierSymbol scalar(const std::map<int, Complex>& coeffs);

  // DFT of uniform samples a(theta_j), theta_j = 2 pi j / M, keeping the
  // band |k| <= band.  Requires M a power of two and M >= 2*band + 2.
  static FourierSymbol from_samples(const std::vector<Matrix>& samples, int band);

  int block_size() const { return block_size_; }
  int band() const { return band_; }
  int sample_grid_size() const { return sample_grid_size_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  Matrix coeff(int k) const;  // zero matrix when absent

  Matrix eval(double theta) const;
  // Values on the uniform grid of a power-of-two size (exact trigonometric
  // evaluation via FFT).
  std::vector<Matrix> eval_grid(int grid_size) const;

  FourierSymbol multiply(const FourierSymbol& rhs) const;
  // Pointwise inversion on a grid of >= 2*band_out+2 nodes followed by
  // from_samples.  Throws NumericalError on a singular sample.
  FourierSymbol inverse(int band_out) const;
  FourierSymbol tilde() const;          // k -> a_{-k}
  FourierSymbol plus(const FourierSymbol& rhs) const;
  FourierSymbol scaled(Complex factor) const;
  FourierSymbol minus_lambda(Complex lambda) const;  // a - lambda I

  // Drops coefficients with Frobenius norm <= tol; returns the dropped mass.
  FourierSymbol compressed(double tol, double* dropped = nullptr) const;

  // Total continuous phase change / 2 pi of a scalar nonvanishing symbol.
  int winding_number() const;
  // sum_k ||a_k||_F^2 |k|, the Krein-algebra weight.
  double krein_weight() const;

  bool is_scalar() const { return block_size_ == 1; }

 private:
  int block_size_ = 1;
  int band_ = 0;
  CoeffMap coeffs_;
  int sample_grid_size_ = 0;
};

// ||a|| = N * max entry magnitude, the display convention for N x N blocks.
double block_norm(const Matrix& a);
// sup over a grid of block_norm(a(theta)); grid of >= 1024 nodes.
double sup_norm(const FourierSymbol& a, int grid_size = 0);

}  // namespace toeplab
