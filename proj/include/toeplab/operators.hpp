#pragma once

#include <string>
#include <vector>

#include "toeplab/common.hpp"
#include "toeplab/symbols.hpp"

namespace toeplab {

/// Dense compression of an operator on H^2_N to the first M Fourier modes.
struct OpTruncation {
  int modes = 0;       // M
  int block_size = 1;  // N
  Matrix dense;        // MN x MN
  std::string provenance;
};

struct ProjectionMask {
  enum class Kind { Pn, Qn, Delta };
  Kind kind = Kind::Pn;
  int index = 0;
  int modes = 0;
  int block_size = 1;

  Matrix dense() const;
  // Zeroes the rows this projection kills (applied on the left).
  void apply_rows(Matrix& a) const;
};

// Finite block Toeplitz matrix T_n(a) = (a_{j-k}), size (n+1)N.
Matrix toeplitz_matrix(const FourierSymbol& a, int n);
OpTruncation toeplitz_truncation(const FourierSymbol& a, int modes);

// Hankel matrix (a_{j+k+1}), size MN: the Fourier-basis matrix of P a Q J.
Matrix hankel_matrix(const FourierSymbol& a, int modes);
// Smallest square corner that carries every nonzero entry of H(a).
Matrix hankel_corner(const FourierSymbol& a, int min_modes = 1);

// Correction operator F_{n,k}(b,c) = P_n T(c) Q_n (Q_n H(b) H(c~) Q_n)^k
// Q_n T(b) P_n as a matrix on the P_n range, computed inside the
// M-truncation.  Banded factors make the result exact once M exceeds n
// plus the total bandwidths; smaller M throws (cutoff too small).
Matrix correction_F(const FourierSymbol& b, const FourierSymbol& c, int n, int k, int M);

// G_{l,k}(b,c) = P_0 T(c) Q_l (Q_l H(b) H(c~) Q_l)^k Q_l T(b) P_0, an
// N x N block.
Matrix correction_G(const FourierSymbol& b, const FourierSymbol& c, int ell, int k, int M);

// Internal slab primitives shared with the determinant expansions.  The
// core is H(b) H(c~) on its corner; slabs carry the Q_n / P_n compressions
// of the banded Toeplitz factors.
struct CorrectionEngine {
  CorrectionEngine(const FourierSymbol& b, const FourierSymbol& c);

  int corner() const { return corner_; }  // modes in the Hankel corner
  const Matrix& core() const { return core_; }                // H(b) H(c~)
  const Matrix& core_flip() const { return core_flip_; }      // H(c~) H(b)
  // P_n range matrix of F_{n,k}(b,c).
  Matrix correction(int n, int k) const;
  Complex correction_trace(int n, int k) const;
  // tr G_{l,k} for l = 0..l_max as one sweep (prefix sums for k = 0).
  std::vector<Complex> g_traces(int l_max, int k) const;

  int block_size = 1;
  int band_b_pos = 0;  // positive band of b (rows reached by Q_n T(b) P_n)
  int band_c_neg = 0;

 private:
  const FourierSymbol b_, c_;
  int corner_ = 0;
  Matrix core_, core_flip_;
};

std::vector<double> singular_values(const OpTruncation& a);
std::vector<double> singular_values(const Matrix& a);
double schatten_norm(const std::vector<double>& sv, double p);

struct TruncationNorms {
  // spectral norms inside the M-truncation
  double norm_QTb_Dj = 0.0;
  double norm_DjTc_Qn = 0.0;
  double norm_QnHb = 0.0;
  double norm_HctQn = 0.0;
  // right-hand bounds without the N-dependent constant:
  // ||v-||_inf * max_entry w(u+^{-1}, 1/(n-j+1)) etc.
  double bound_QTb_Dj = 0.0;
  double bound_DjTc_Qn = 0.0;
  double bound_QnHb = 0.0;
  double bound_HctQn = 0.0;
};

class FactorPair;  // from factorization.hpp

TruncationNorms truncation_norms(const FactorPair& pair, int n, int j, int M);

}  // namespace toeplab
