#pragma once

#include <optional>
#include <span>
#include <vector>

#include "toeplab/common.hpp"
#include "toeplab/symbols.hpp"

namespace toeplab {

struct LogFactorSpec {
  double beta = 0.0;
  std::optional<double> b;  // empty = pick the default constant
};

/// Characteristic function w(x) = x^gamma * prod_k l_k^{beta_k}(b_k / x) on
/// (0, pi], with l_1 = log and l_k = log o l_{k-1}.  Construction validates
/// gamma in (0,1), the iterated-log thresholds, and that w(x) -> 0 along
/// dyadic scales.
class CharFunction {
 public:
  struct LogFactor {
    double beta;
    double b;
  };

  explicit CharFunction(double gamma, const std::vector<LogFactorSpec>& logs = {});

  double operator()(double x) const;
  double gamma() const { return gamma_; }
  const std::vector<LogFactor>& log_factors() const { return logs_; }
  // max over a dyadic grid of w(x)/w(y) for x <= y (the almost-increasing
  // witness; finite by construction, reported not certified).
  double almost_increasing_witness(int scales = 40) const;

 private:
  double gamma_;
  std::vector<LogFactor> logs_;
};

// l_k iterated logarithm and its domain threshold x_k (l_{k-1}(x_k) = 1).
double iterated_log(int k, double x);
double iterated_log_threshold(int k);

struct BariStechkinMargins {
  double sup_lower = 0.0;  // sup_x (1/w(x)) int_0^x w(y)/y dy
  double sup_upper = 0.0;  // sup_x (x/w(x)) int_x^pi w(y)/y^2 dy
  bool lower_diverged = false;
  bool upper_diverged = false;
};

BariStechkinMargins bari_stechkin_margins(const CharFunction& w, int scales = 240);

// Grid estimate (lower bound) of the modulus of continuity at scale x from
// uniform samples; nondecreasing in x by construction.
double modulus_estimate(std::span<const Complex> grid_values, double x);
// Max over matrix entries of the entrywise modulus; grid_size >= 4096.
double modulus_estimate(const FourierSymbol& f, double x, int grid_size = 4096);

struct ModulusProfile {
  std::vector<double> scales;  // pi * 2^{-i}
  std::vector<double> values;  // modulus estimates
  double seminorm = 0.0;       // max values[i] / w(scales[i])
  bool vanishing = false;      // numeric proxy for H_0^w membership
};

ModulusProfile holder_seminorm(std::span<const Complex> grid_values,
                               const CharFunction& w, int scale_count = 14);
ModulusProfile holder_seminorm(const FourierSymbol& f, const CharFunction& w,
                               int scale_count = 14, int grid_size = 4096);

struct TailSum {
  double value = 0.0;  // sum_{k>n} [w(1/k) p(1/k)]^m  (partial + bracket midpoint)
  bool convergent = false;
  double bracket_low = 0.0;   // integral-test bracket of the beyond-cap remainder
  double bracket_high = 0.0;
  double partial = 0.0;       // direct summation part
};

TailSum tail_sum(const CharFunction& w, const CharFunction& p, int m, long n,
                 long direct_cap = 1'000'000);

// [w(1/n) p(1/n)]^{m-1} * sum_{j=1}^n w(1/j) p(1/j): the removable-term
// gauge of the higher-order expansions.
double removal_condition(const CharFunction& w, const CharFunction& p, int m, long n);

}  // namespace toeplab
