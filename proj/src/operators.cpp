#include "toeplab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "toeplab/factorization.hpp"
#include "toeplab/linalg.hpp"
#include "toeplab/regularity.hpp"

namespace toeplab {

Matrix ProjectionMask::dense() const {
  const int dim = modes * block_size;
  Matrix p = Matrix::Zero(dim, dim);
  auto block_range = [&](int lo, int hi) {  // mode indices [lo, hi)
    for (int i = lo * block_size; i < hi * block_size; ++i) p(i, i) = 1.0;
  };
  switch (kind) {
    case Kind::Pn: block_range(0, std::min(index + 1, modes)); break;
    case Kind::Qn: block_range(std::min(index + 1, modes), modes); break;
    case Kind::Delta: block_range(std::min(index, modes), std::min(index + 1, modes)); break;
  }
  return p;
}

void ProjectionMask::apply_rows(Matrix& a) const {
  const int nb = block_size;
  switch (kind) {
    case Kind::Pn:
      if ((index + 1) * nb < a.rows())
        a.bottomRows(a.rows() - (index + 1) * nb).setZero();
      break;
    case Kind::Qn:
      a.topRows(std::min<Eigen::Index>((index + 1) * nb, a.rows())).setZero();
      break;
    case Kind::Delta: {
      Matrix keep = Matrix::Zero(a.rows(), a.cols());
      const Eigen::Index lo = static_cast<Eigen::Index>(index) * nb;
      if (lo < a.rows()) {
        const Eigen::Index len = std::min<Eigen::Index>(nb, a.rows() - lo);
        keep.middleRows(lo, len) = a.middleRows(lo, len);
      }
      a = keep;
      break;
    }
  }
}

Matrix toeplitz_matrix(const FourierSymbol& a, int n) {
  const int N = a.block_size();
  Matrix t = Matrix::Zero((n + 1) * N, (n + 1) * N);
  for (const auto& [k, blk] : a.coeffs()) {
    if (k > n || k < -n) continue;
    for (int j = std::max(0, k); j <= std::min(n, n + k); ++j)
      t.block(j * N, (j - k) * N, N, N) = blk;
  }
  return t;
}

OpTruncation toeplitz_truncation(const FourierSymbol& a, int modes) {
  OpTruncation t;
  t.modes = modes;
  t.block_size = a.block_size();
  t.dense = toeplitz_matrix(a, modes - 1);
  t.provenance = "T(a)";
  return t;
}

Matrix hankel_matrix(const FourierSymbol& a, int modes) {
  const int N = a.block_size();
  Matrix h = Matrix::Zero(modes * N, modes * N);
  for (const auto& [k, blk] : a.coeffs()) {
    if (k < 1 || k > 2 * modes - 1) continue;
    for (int j = std::max(0, k - modes); j <= std::min(modes - 1, k - 1); ++j)
      h.block(j * N, (k - 1 - j) * N, N, N) = blk;
  }
  return h;
}

Matrix hankel_corner(const FourierSymbol& a, int min_modes) {
  int pos_band = 0;
  for (const auto& [k, blk] : a.coeffs())
    if (k > pos_band) pos_band = k;
  return hankel_matrix(a, std::max(min_modes, pos_band));
}

namespace {
int positive_band(const FourierSymbol& s) {
  int b = 0;
  for (const auto& [k, blk] : s.coeffs())
    if (k > b) b = k;
  return b;
}
int negative_band(const FourierSymbol& s) {
  int b = 0;
  for (const auto& [k, blk] : s.coeffs())
    if (-k > b) b = -k;
  return b;
}
}  // namespace

CorrectionEngine::CorrectionEngine(const FourierSymbol& b, const FourierSymbol& c)
    : b_(b), c_(c) {
  if (b.block_size() != c.block_size())
    throw ConfigError("CorrectionEngine: block size mismatch");
  block_size = b.block_size();
  band_b_pos = positive_band(b);
  band_c_neg = negative_band(c);
  corner_ = std::max({band_b_pos, band_c_neg, 1});
  const Matrix hb = hankel_matrix(b_, corner_);
  const Matrix hct = hankel_matrix(c_.tilde(), corner_);
  core_ = prod_auto(hb, hct);
  core_flip_ = prod_auto(hct, hb);
}

Matrix CorrectionEngine::correction(int n, int k) const {
  const int N = block_size;
  const int cols = (n + 1) * N;
  if (band_b_pos == 0 || band_c_neg == 0) return Matrix::Zero(cols, cols);
  const int L = n + 1 + corner_;  // absolute modes that can carry entries
  // slab of Q_n T(b) P_n in absolute modes
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(L) * N, cols);
  for (const auto& [kk, blk] : b_.coeffs()) {
    if (kk < 1) continue;
    for (int col = 0; col <= n; ++col) {
      const int row = col + kk;
      if (row > n && row < L) s.block(row * N, col * N, N, N) = blk;
    }
  }
  const Eigen::Index cdim = static_cast<Eigen::Index>(corner_) * N;
  for (int it = 0; it < k; ++it) {
    // the core H(b)H(c~) lives on modes < corner_, everything beyond is killed
    Matrix top = prod_auto(core_, s.topRows(std::min<Eigen::Index>(cdim, s.rows())));
    s.setZero();
    s.topRows(top.rows()) = top;
    s.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(n + 1) * N, s.rows()))
        .setZero();  // Q_n
    if (s.cwiseAbs().maxCoeff() == 0.0) return Matrix::Zero(cols, cols);
  }
  // P_n T(c) Q_n over the same absolute modes
  Matrix l = Matrix::Zero(cols, static_cast<Eigen::Index>(L) * N);
  for (const auto& [kk, blk] : c_.coeffs()) {
    if (kk > -1) continue;
    const int d = -kk;
    for (int row = 0; row <= n; ++row) {
      const int colm = row + d;
      if (colm > n && colm < L) l.block(row * N, colm * N, N, N) = blk;
    }
  }
  return prod_auto(l, s);
}

Complex CorrectionEngine::correction_trace(int n, int k) const {
  if (band_b_pos == 0 || band_c_neg == 0) return Complex(0.0, 0.0);
  if (k == 0) {
    // tr F_{n,0} = sum_{d>=1} min(d, n+1) tr(c_{-d} b_d)
    Complex acc(0.0, 0.0);
    for (const auto& [kk, blk] : b_.coeffs()) {
      if (kk < 1) continue;
      const Matrix cm = c_.coeff(-kk);
      acc += static_cast<double>(std::min(kk, n + 1)) * (cm * blk).trace();
    }
    return acc;
  }
  return correction(n, k).trace();
}

std::vector<Complex> CorrectionEngine::g_traces(int l_max, int k) const {
  const int N = block_size;
  std::vector<Complex> out(l_max + 1, Complex(0.0, 0.0));
  if (band_b_pos == 0 || band_c_neg == 0) return out;
  if (k == 0) {
    // tr G_{l,0} = sum_{i>l} tr(c_{-i} b_i): one suffix-sum sweep
    const int top = std::max(band_b_pos, band_c_neg);
    std::vector<Complex> suffix_at(top + 2, Complex(0.0, 0.0));
    for (int i = top; i >= 1; --i) {
      const Matrix bi = b_.coeff(i), ci = c_.coeff(-i);
      suffix_at[i] = suffix_at[i + 1] + (ci * bi).trace();
    }
    for (int l = 0; l <= l_max; ++l)
      out[l] = (l + 1 <= top) ? suffix_at[l + 1] : Complex(0.0, 0.0);
    return out;
  }
  // k >= 1: thin columns through the core
  const Eigen::Index dim = static_cast<Eigen::Index>(corner_) * N;
  Matrix bcol = Matrix::Zero(dim, N);  // T(b) P_0 restricted to the corner
  Matrix crow = Matrix::Zero(N, dim);  // P_0 T(c) restricted to the corner
  for (const auto& [kk, blk] : b_.coeffs())
    if (kk >= 1 && kk < corner_) bcol.block(kk * N, 0, N, N) = blk;
  for (const auto& [kk, blk] : c_.coeffs())
    if (kk <= -1 && -kk < corner_) crow.block(0, -kk * N, N, N) = blk;
  for (int l = 0; l <= l_max; ++l) {
    Matrix v = bcol;
    v.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(l + 1) * N, v.rows()))
        .setZero();
    bool dead = false;
    for (int it = 0; it < k; ++it) {
      v = prod_auto(core_, v);
      v.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(l + 1) * N, v.rows()))
          .setZero();
      if (v.cwiseAbs().maxCoeff() == 0.0) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    out[l] = (crow * v).trace();
  }
  return out;
}

namespace {
void check_correction_cutoff(const FourierSymbol& b, const FourierSymbol& c, int n, int M) {
  const int need = n + 1 + positive_band(b) + negative_band(c);
  if (M < need)
    throw NumericalError("correction: cutoff too small, M=" + std::to_string(M) +
                         " below the exactness threshold " + std::to_string(need));
}
}  // namespace

Matrix correction_F(const FourierSymbol& b, const FourierSymbol& c, int n, int k, int M) {
  if (k < 0) throw ConfigError("correction_F: k must be nonnegative");
  check_correction_cutoff(b, c, n, M);
  return CorrectionEngine(b, c).correction(n, k);
}

Matrix correction_G(const FourierSymbol& b, const FourierSymbol& c, int ell, int k, int M) {
  if (k < 0) throw ConfigError("correction_G: k must be nonnegative");
  check_correction_cutoff(b, c, ell, M);
  CorrectionEngine eng(b, c);
  const int N = b.block_size();
  const Eigen::Index dim = static_cast<Eigen::Index>(std::max(eng.corner(), ell + 2)) * N;
  Matrix bcol = Matrix::Zero(dim, N);
  Matrix crow = Matrix::Zero(N, dim);
  for (const auto& [kk, blk] : b.coeffs())
    if (kk >= 1 && static_cast<Eigen::Index>(kk) * N < dim) bcol.block(kk * N, 0, N, N) = blk;
  for (const auto& [kk, blk] : c.coeffs())
    if (kk <= -1 && static_cast<Eigen::Index>(-kk) * N < dim)
      crow.block(0, -kk * N, N, N) = blk;
  Matrix v = bcol;
  v.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(ell + 1) * N, v.rows())).setZero();
  const Eigen::Index cdim = static_cast<Eigen::Index>(eng.corner()) * N;
  for (int it = 0; it < k; ++it) {
    Matrix top = prod_auto(eng.core(), v.topRows(std::min(cdim, v.rows())));
    v.setZero();
    v.topRows(top.rows()) = top;
    v.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(ell + 1) * N, v.rows()))
        .setZero();
  }
  return crow * v;
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  if (effectively_real(a)) {
    Eigen::BDCSVD<RealMatrix> svd(a.real());
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
  }
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::vector<double> singular_values(const OpTruncation& a) { return singular_values(a.dense); }

double schatten_norm(const std::vector<double>& sv, double p) {
  double acc = 0.0;
  for (double s : sv) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

TruncationNorms truncation_norms(const FactorPair& pair, int n, int j, int M) {
  if (j < 0 || j > n) throw ConfigError("truncation_norms: j must lie in {0..n}");
  const int N = pair.block_size();
  const FourierSymbol& b = pair.b;
  const FourierSymbol& c = pair.c;
  if (M <= n) throw NumericalError("truncation_norms: cutoff too small");
  TruncationNorms out;

  // Q_n T(b) Delta_j: rows > n, block column j
  {
    Matrix col = Matrix::Zero(static_cast<Eigen::Index>(M - n - 1) * N, N);
    for (const auto& [k, blk] : b.coeffs()) {
      const int row = j + k;
      if (row > n && row < M) col.block((row - n - 1) * N, 0, N, N) = blk;
    }
    Eigen::JacobiSVD<Matrix> svd(col);
    out.norm_QTb_Dj = col.size() ? svd.singularValues()(0) : 0.0;
  }
  // Delta_j T(c) Q_n: block row j, columns > n
  {
    Matrix row = Matrix::Zero(N, static_cast<Eigen::Index>(M - n - 1) * N);
    for (const auto& [k, blk] : c.coeffs()) {
      const int col = j - k;
      if (col > n && col < M) row.block(0, (col - n - 1) * N, N, N) = blk;
    }
    Eigen::JacobiSVD<Matrix> svd(row);
    out.norm_DjTc_Qn = row.size() ? svd.singularValues()(0) : 0.0;
  }
  // Q_n H(b) and H(c~) Q_n inside the M-truncation
  {
    const Matrix hb = hankel_matrix(b, M);
    out.norm_QnHb =
        operator_norm_estimate(hb.bottomRows(static_cast<Eigen::Index>(M - n - 1) * N));
    const Matrix hct = hankel_matrix(c.tilde(), M);
    out.norm_HctQn =
        operator_norm_estimate(hct.rightCols(static_cast<Eigen::Index>(M - n - 1) * N));
  }

  const double vminf = sup_norm(pair.v_minus);
  const double vpinf = sup_norm(pair.v_plus);
  const double x_nj = 1.0 / static_cast<double>(n - j + 1);
  const double x_n = 1.0 / static_cast<double>(n + 1);
  out.bound_QTb_Dj = vminf * modulus_estimate(pair.u_plus_inv, x_nj);
  out.bound_DjTc_Qn = vpinf * modulus_estimate(pair.u_minus_inv, x_nj);
  out.bound_QnHb = vminf * modulus_estimate(pair.u_plus_inv, x_n);
  out.bound_HctQn = vpinf * modulus_estimate(pair.u_minus_inv, x_n);
  return out;
}

}  // namespace toeplab
