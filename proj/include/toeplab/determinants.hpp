#pragma once

#include <array>
#include <string>
#include <vector>

#include "toeplab/common.hpp"
#include "toeplab/factorization.hpp"
#include "toeplab/operators.hpp"
#include "toeplab/regularity.hpp"
#include "toeplab/symbols.hpp"

namespace toeplab {

/// log det T_n(a) for n = 0..n_max with the branch chosen continuously in n
/// (consecutive imaginary parts differ by less than pi).
struct LogDetSeries {
  std::vector<Complex> values;
  std::vector<bool> gap;  // exactly singular T_n: value NaN, series continues
};

LogDetSeries log_det_sequence(const FourierSymbol& a, int n_max);

// G(a) = exp of the mean of the continuous branch of log det a over the
// circle.  Throws on vanishing det or nonzero winding of det a.
Complex log_geometric_mean(const FourierSymbol& a, int grid_size = 0);
Complex geometric_mean(const FourierSymbol& a, int grid_size = 0);

// m-regularized determinant det_m(I + K) = det(I+K) exp(sum_{j<m} (-1)^j tr K^j / j),
// evaluated by LU for the determinant and traces of small powers.
Complex regularized_det(const Matrix& k, int m);
Complex log_regularized_det(const Matrix& k, int m);
Complex regularized_det(const OpTruncation& k, int m);

// log det(I - (H(x) H(y))|_M) where H(x)H(y) is restricted to the first M
// modes; banded symbols make this the exact M-truncation of the product.
// With y = (a^{-1})~ this is log det_1 of the M-truncation of T(a)T(a^{-1}).
Complex log_det_one_minus_hankel_product(const FourierSymbol& x, const FourierSymbol& y,
                                         int M, int m = 1);

struct SzegoConstants {
  Complex G{1.0, 0.0};
  Complex logG{0.0, 0.0};
  Complex E1{1.0, 0.0};
  Complex logE1{0.0, 0.0};
  Complex log_det1_dual{0.0, 0.0};  // log det_1 T(c~)T(b~)
  double duality_gap = 0.0;         // |logE1 + log_det1_dual|
  std::array<Complex, 3> logE1_trace{};  // at M/2, M, 2M
  bool unstable = false;
};

// E(a) = det_1 T(a)T(a^{-1}) on the M-truncation, with the dual constant
// 1/det_1 T(c~)T(b~) and a double-M stability check (flag at 1e-6).
SzegoConstants szego_constant(const FourierSymbol& a, const FactorPair& pair, int M);

struct HoRow {
  int n = 0;
  Complex log_det{0.0, 0.0};
  double widom_rem = 0.0;  // log det - (n+1) log G - log E1
  double hoC_rem = 0.0;    // full higher-order remainder (with det_m)
  double hoD_rem = 0.0;    // variant dropping F_{n,m-1}
  double hoE_int = 0.0;    // log det - (n+1) log G - cumulative G corrections
  double tail = 0.0;       // sum_{k>n} [w(1/k) p(1/k)]^m
  double ratio = 0.0;      // remainder / tail (widom for m=1, hoC otherwise)
  double tr_last = 0.0;    // tr F_{n,m-1}
  double removal = 0.0;    // removal-condition gauge at n (m>=2)
  bool gap = false;
  std::string error;
};

struct HoReport {
  std::vector<HoRow> rows;
  Complex logG{0.0, 0.0};
  Complex logE1{0.0, 0.0};
  Complex log_detm_dual{0.0, 0.0};
  double logE_extracted = 0.0;  // median intercept over the last quartile
  double logE_spread = 0.0;
  bool tail_divergent = false;
  SzegoConstants szego;
};

struct HoOptions {
  int truncation = 0;     // M; 0 = large enough for exactness
  int workers = 1;
  double compress_tol = 0.0;  // drop b,c coefficients below this before the expansion
};

HoReport ho_remainders(const FourierSymbol& a, const FactorPair& pair,
                       const CharFunction& w, const CharFunction& p, int m,
                       const std::vector<int>& schedule, const HoOptions& opts = {});

}  // namespace toeplab
