#include "toeplab/symbols.hpp"

#include <cmath>

#include "toeplab/fft.hpp"

namespace toeplab {

namespace {
constexpr double kCoeffZero = 0.0;  // exact-zero drop only; keep tiny values

int grid_for_band(int band, int floor_size) {
  return next_pow2(std::max(floor_size, 2 * band + 2));
}
}  // namespace

FourierSymbol::FourierSymbol(int block_size) : block_size_(block_size) {
  if (block_size < 1) throw ConfigError("FourierSymbol: block size must be positive");
}

FourierSymbol::FourierSymbol(int block_size, CoeffMap coeffs, int sample_grid_size)
    : block_size_(block_size), coeffs_(std::move(coeffs)), sample_grid_size_(sample_grid_size) {
  if (block_size < 1) throw ConfigError("FourierSymbol: block size must be positive");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    const Matrix& m = it->second;
    if (m.rows() != block_size_ || m.cols() != block_size_)
      throw ConfigError("FourierSymbol: coefficient block size mismatch");
    if (m.cwiseAbs().maxCoeff() <= kCoeffZero) {
      it = coeffs_.erase(it);
    } else {
      band_ = std::max(band_, std::abs(it->first));
      ++it;
    }
  }
}

FourierSymbol FourierSymbol::identity(int block_size) {
  CoeffMap m;
  m[0] = Matrix::Identity(block_size, block_size);
  return FourierSymbol(block_size, std::move(m));
}

FourierSymbol FourierSymbol::constant(const Matrix& a0) {
  CoeffMap m;
  m[0] = a0;
  return FourierSymbol(static_cast<int>(a0.rows()), std::move(m));
}

FourierSymbol FourierSymbol::scalar(const std::map<int, Complex>& coeffs) {
  CoeffMap m;
  for (const auto& [k, v] : coeffs) {
    Matrix b(1, 1);
    b(0, 0) = v;
    m[k] = b;
  }
  return FourierSymbol(1, std::move(m));
}

FourierSymbol FourierSymbol::from_samples(const std::vector<Matrix>& samples, int band) {
  const int M = static_cast<int>(samples.size());
  if (!is_pow2(M)) throw ConfigError("from_samples: grid size must be a power of two");
  if (M < 2 * band + 2)
    throw ConfigError("from_samples: grid size " + std::to_string(M) +
                      " below 2*band+2 = " + std::to_string(2 * band + 2) + " (aliasing)");
  const int N = static_cast<int>(samples.front().rows());
  std::vector<std::vector<Complex>> spectra(static_cast<size_t>(N) * N,
                                            std::vector<Complex>(M));
  for (int j = 0; j < M; ++j) {
    const Matrix& s = samples[j];
    if (s.rows() != N || s.cols() != N)
      throw ConfigError("from_samples: inconsistent sample dimensions");
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) spectra[r * N + c][j] = s(r, c);
  }
  for (auto& v : spectra) fft_forward(v);
  CoeffMap coeffs;
  for (int k = -band; k <= band; ++k) {
    const int idx = (k % M + M) % M;
    Matrix b(N, N);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) b(r, c) = spectra[r * N + c][idx] / static_cast<double>(M);
    if (b.cwiseAbs().maxCoeff() > kCoeffZero) coeffs[k] = std::move(b);
  }
  return FourierSymbol(N, std::move(coeffs), M);
}

Matrix FourierSymbol::coeff(int k) const {
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) return Matrix::Zero(block_size_, block_size_);
  return it->second;
}

Matrix FourierSymbol::eval(double theta) const {
  Matrix out = Matrix::Zero(block_size_, block_size_);
  for (const auto& [k, a] : coeffs_)
    out += a * std::exp(Complex(0.0, k * theta));
  return out;
}

std::vector<Matrix> FourierSymbol::eval_grid(int grid_size) const {
  if (!is_pow2(grid_size)) throw ConfigError("eval_grid: grid size must be a power of two");
  if (grid_size < 2 * band_ + 2)
    throw ConfigError("eval_grid: grid too small for the symbol band");
  const int N = block_size_;
  std::vector<Matrix> vals(grid_size, Matrix::Zero(N, N));
  std::vector<Complex> line(grid_size);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      std::fill(line.begin(), line.end(), Complex(0.0, 0.0));
      for (const auto& [k, a] : coeffs_) {
        const int idx = (k % grid_size + grid_size) % grid_size;
        line[idx] += a(r, c);
      }
      // values = sum_k a_k e^{+ik theta_j}: inverse transform times M
      fft_inverse(line);
      for (int j = 0; j < grid_size; ++j)
        vals[j](r, c) = line[j] * static_cast<double>(grid_size);
    }
  }
  return vals;
}

FourierSymbol FourierSymbol::multiply(const FourierSymbol& rhs) const {
  if (block_size_ != rhs.block_size_)
    throw ConfigError("multiply: block size mismatch");
  if (coeffs_.empty() || rhs.coeffs_.empty()) return FourierSymbol(block_size_);
  // dense accumulation over the sum band (map insertion is too slow for
  // wide-band convolutions)
  const int lo = coeffs_.begin()->first + rhs.coeffs_.begin()->first;
  const int hi = coeffs_.rbegin()->first + rhs.coeffs_.rbegin()->first;
  std::vector<Matrix> acc(hi - lo + 1);
  std::vector<bool> used(hi - lo + 1, false);
  for (const auto& [k1, a1] : coeffs_) {
    for (const auto& [k2, a2] : rhs.coeffs_) {
      const int idx = k1 + k2 - lo;
      if (!used[idx]) {
        acc[idx] = a1 * a2;
        used[idx] = true;
      } else {
        acc[idx] += a1 * a2;
      }
    }
  }
  CoeffMap out;
  for (int i = 0; i <= hi - lo; ++i)
    if (used[i]) out.emplace_hint(out.end(), lo + i, std::move(acc[i]));
  return FourierSymbol(block_size_, std::move(out));
}

FourierSymbol FourierSymbol::inverse(int band_out) const {
  const int M = grid_for_band(std::max(band_out, band_), 64);
  auto vals = eval_grid(M);
  for (auto& v : vals) {
    if (std::abs(v.determinant()) < 1e-13)
      throw NumericalError("inverse: singular symbol sample (|det| < 1e-13)");
    v = v.inverse().eval();
  }
  return from_samples(vals, band_out);
}

FourierSymbol FourierSymbol::tilde() const {
  CoeffMap out;
  for (const auto& [k, a] : coeffs_) out[-k] = a;
  return FourierSymbol(block_size_, std::move(out), sample_grid_size_);
}

FourierSymbol FourierSymbol::plus(const FourierSymbol& rhs) const {
  if (block_size_ != rhs.block_size_) throw ConfigError("plus: block size mismatch");
  CoeffMap out = coeffs_;
  for (const auto& [k, a] : rhs.coeffs_) {
    auto it = out.find(k);
    if (it == out.end())
      out[k] = a;
    else
      it->second += a;
  }
  return FourierSymbol(block_size_, std::move(out));
}

FourierSymbol FourierSymbol::scaled(Complex factor) const {
  CoeffMap out = coeffs_;
  for (auto& [k, a] : out) a *= factor;
  return FourierSymbol(block_size_, std::move(out), sample_grid_size_);
}

FourierSymbol FourierSymbol::minus_lambda(Complex lambda) const {
  CoeffMap out = coeffs_;
  auto it = out.find(0);
  if (it == out.end())
    out[0] = -lambda * Matrix::Identity(block_size_, block_size_);
  else
    it->second -= lambda * Matrix::Identity(block_size_, block_size_);
  return FourierSymbol(block_size_, std::move(out));
}

FourierSymbol FourierSymbol::compressed(double tol, double* dropped) const {
  CoeffMap out;
  double mass = 0.0;
  for (const auto& [k, a] : coeffs_) {
    if (a.norm() > tol)
      out[k] = a;
    else
      mass += a.norm();
  }
  if (dropped) *dropped = mass;
  return FourierSymbol(block_size_, std::move(out), sample_grid_size_);
}

int FourierSymbol::winding_number() const {
  if (!is_scalar()) throw ConfigError("winding_number: defined for scalar symbols");
  const int M = grid_for_band(band_, 1024);
  auto vals = eval_grid(M);
  std::vector<Complex> curve(M + 1);
  for (int j = 0; j < M; ++j) {
    curve[j] = vals[j](0, 0);
    if (std::abs(curve[j]) < 1e-13)
      throw NumericalError("winding_number: symbol vanishes on the grid");
  }
  curve[M] = curve[0];
  const auto phase = unwrap_phase(curve);
  const double w = (phase.back() - phase.front()) / (2.0 * kPi);
  const int wi = static_cast<int>(std::lround(w));
  if (std::abs(w - wi) > 1e-6)
    throw NumericalError("winding_number: non-integer winding " + std::to_string(w));
  return wi;
}

double FourierSymbol::krein_weight() const {
  double s = 0.0;
  for (const auto& [k, a] : coeffs_) s += a.squaredNorm() * std::abs(k);
  return s;
}

double block_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return static_cast<double>(a.rows()) * a.cwiseAbs().maxCoeff();
}

double sup_norm(const FourierSymbol& a, int grid_size) {
  const int M = grid_size > 0 ? grid_size
                              : next_pow2(std::max(1024, 2 * a.band() + 2));
  auto vals = a.eval_grid(M);
  double s = 0.0;
  for (const auto& v : vals) s = std::max(s, block_norm(v));
  return s;
}

}  // namespace toeplab
