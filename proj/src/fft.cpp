#include "toeplab/fft.hpp"

#include <cmath>

namespace toeplab {

namespace {

void fft_radix2(std::vector<Complex>& a, int sign) {
  const int n = static_cast<int>(a.size());
  if (!is_pow2(n)) throw ConfigError("fft: size must be a power of two");
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / len;
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

void fft_forward(std::vector<Complex>& data) { fft_radix2(data, -1); }

void fft_inverse(std::vector<Complex>& data) {
  fft_radix2(data, +1);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= inv;
}

std::vector<double> unwrap_phase(const std::vector<Complex>& values, double max_jump) {
  std::vector<double> phase(values.size());
  if (values.empty()) return phase;
  phase[0] = std::arg(values[0]);
  for (size_t i = 1; i < values.size(); ++i) {
    double d = std::arg(values[i]) - std::arg(values[i - 1]);
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    if (std::abs(d) > max_jump)
      throw NumericalError("unwrap_phase: phase jump " + std::to_string(d) +
                           " between adjacent nodes, grid too coarse");
    phase[i] = phase[i - 1] + d;
  }
  return phase;
}

}  // namespace toeplab
