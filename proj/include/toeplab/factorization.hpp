#pragma once

#include <utility>

#include "toeplab/common.hpp"
#include "toeplab/symbols.hpp"

namespace toeplab {

/// Canonical Wiener-Hopf factor data: a = u_- u_+ (right) = v_+ v_- (left),
/// their inverses at 4x the working band, and the derived symbols
/// b = v_- u_+^{-1}, c = u_-^{-1} v_+.  The analytic content of b sits in
/// its positive coefficients and of c in its negative ones; both decay at
/// the rate the Hoelder data dictates and are stored full-band.
class FactorPair {
 public:
  FourierSymbol u_minus, u_plus, v_minus, v_plus;
  FourierSymbol u_minus_inv, u_plus_inv, v_minus_inv, v_plus_inv;
  FourierSymbol b, c;
  int working_band = 0;

  FactorPair()
      : u_minus(1), u_plus(1), v_minus(1), v_plus(1), u_minus_inv(1), u_plus_inv(1),
        v_minus_inv(1), v_plus_inv(1), b(1), c(1) {}

  int block_size() const { return u_plus.block_size(); }
};

// Constructive canonical factorization of a scalar nonvanishing symbol with
// zero winding, by splitting the continuous branch of log a.  The zeroth
// log coefficient goes to the plus factor; v_- = u_-, v_+ = u_+.
FactorPair scalar_canonical_factor(const FourierSymbol& a, int band_out);

// Block symbols enter through fixtures: the four factors are given, the
// symbol is their product.  Validates supports, invertible zeroth blocks,
// and that both factorizations describe the same symbol (1e-9 per
// coefficient).
std::pair<FourierSymbol, FactorPair> fixture_block_symbol(const FourierSymbol& u_minus,
                                                          const FourierSymbol& u_plus,
                                                          const FourierSymbol& v_plus,
                                                          const FourierSymbol& v_minus);

struct InvertibilityProbe {
  bool toeplitz_invertible = false;
  bool tilde_invertible = false;
  double smin = 0.0, smin_tilde = 0.0;
  double cond = 0.0, cond_tilde = 0.0;
};

// Smallest singular value / condition number of the M-truncations of T(a)
// and T(a~), with a double-M stability check.  A numeric proxy, not a proof.
InvertibilityProbe invertibility_probe(const FourierSymbol& a, int M);

}  // namespace toeplab
