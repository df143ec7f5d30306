#include "toeplab/determinants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "toeplab/fft.hpp"
#include "toeplab/linalg.hpp"

namespace toeplab {

namespace {

// shift Im part by multiples of 2 pi so that |Im(z - anchor)| <= pi
Complex align_branch(Complex z, Complex anchor) {
  double d = z.imag() - anchor.imag();
  while (d > kPi) {
    z -= Complex(0.0, 2.0 * kPi);
    d = z.imag() - anchor.imag();
  }
  while (d < -kPi) {
    z += Complex(0.0, 2.0 * kPi);
    d = z.imag() - anchor.imag();
  }
  return z;
}

int positive_band_of(const FourierSymbol& s) {
  int b = 0;
  for (const auto& [k, blk] : s.coeffs())
    if (k > b) b = k;
  return b;
}

void assign(RealMatrix& h, Eigen::Index r, Eigen::Index c, const Complex& v) {
  h(r, c) = v.real();
}
void assign(Matrix& h, Eigen::Index r, Eigen::Index c, const Complex& v) { h(r, c) = v; }

}  // namespace

LogDetSeries log_det_sequence(const FourierSymbol& a, int n_max) {
  LogDetSeries out;
  out.values.resize(n_max + 1);
  out.gap.assign(n_max + 1, false);
  Complex prev(0.0, 0.0);
  bool have_prev = false;
  for (int n = 0; n <= n_max; ++n) {
    const Matrix t = toeplitz_matrix(a, n);
    Complex ld;
    try {
      ld = log_det_lu(t);
    } catch (const NumericalError&) {
      out.gap[n] = true;
      out.values[n] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      continue;
    }
    if (have_prev) ld = align_branch(ld, prev);
    out.values[n] = ld;
    prev = ld;
    have_prev = true;
  }
  return out;
}

Complex log_geometric_mean(const FourierSymbol& a, int grid_size) {
  const int M = grid_size > 0
                    ? next_pow2(grid_size)
                    : next_pow2(std::max(4096, 8 * a.band() + 2));
  auto vals = a.eval_grid(M);
  std::vector<Complex> dets(M + 1);
  for (int j = 0; j < M; ++j) {
    dets[j] = vals[j].determinant();
    if (std::abs(dets[j]) < 1e-13)
      throw NumericalError("geometric_mean: det a vanishes on the grid");
  }
  dets[M] = dets[0];
  const auto phase = unwrap_phase(dets);
  const double wind = (phase.back() - phase.front()) / (2.0 * kPi);
  if (std::abs(wind) > 1e-6)
    throw NumericalError("geometric_mean: nonzero winding of det a: " +
                         std::to_string(wind));
  Complex acc(0.0, 0.0);
  for (int j = 0; j < M; ++j)
    acc += Complex(std::log(std::abs(dets[j])), phase[j]);
  return acc / static_cast<double>(M);
}

Complex geometric_mean(const FourierSymbol& a, int grid_size) {
  return std::exp(log_geometric_mean(a, grid_size));
}

Complex log_regularized_det(const Matrix& k, int m) {
  if (m < 1) throw ConfigError("regularized_det: m must be >= 1");
  const Matrix ipk = Matrix::Identity(k.rows(), k.cols()) + k;
  Complex logdet = log_det_lu(ipk);
  for (int j = 1; j < m; ++j)
    logdet += (j % 2 ? -1.0 : 1.0) * trace_power(k, j) / static_cast<double>(j);
  return logdet;
}

Complex regularized_det(const Matrix& k, int m) { return std::exp(log_regularized_det(k, m)); }

Complex regularized_det(const OpTruncation& k, int m) { return regularized_det(k.dense, m); }

Complex log_det_one_minus_hankel_product(const FourierSymbol& x, const FourierSymbol& y,
                                         int M, int m) {
  const int N = x.block_size();
  if (y.block_size() != N)
    throw ConfigError("hankel product determinant: block size mismatch");
  const int kx = positive_band_of(x);
  const int ky = positive_band_of(y);
  // rows beyond the band of H(x) vanish, so I - D is block triangular with
  // identity there: the determinant and traces live on the square corner
  // side = min(M, kx)
  const int side = std::min(M, kx);
  const int inner = std::min(kx, ky);
  if (side <= 0 || ky == 0 || inner == 0) return Complex(0.0, 0.0);

  // rectangular Hankel slices: hx is (side x inner), hy is (inner x side)
  const bool realpath = [&] {
    for (const auto& [kk, blk] : x.coeffs())
      if (!effectively_real(blk)) return false;
    for (const auto& [kk, blk] : y.coeffs())
      if (!effectively_real(blk)) return false;
    return true;
  }();

  auto fill_x = [&](auto& h) {
    for (const auto& [kk, blk] : x.coeffs()) {
      if (kk < 1) continue;
      for (int i = std::max(0, kk - inner); i <= std::min(side - 1, kk - 1); ++i) {
        const int l = kk - 1 - i;
        if (l < inner)
          for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) assign(h, i * N + r, l * N + c, blk(r, c));
      }
    }
  };
  auto fill_y = [&](auto& h) {
    for (const auto& [kk, blk] : y.coeffs()) {
      if (kk < 1) continue;
      for (int l = std::max(0, kk - side); l <= std::min(inner - 1, kk - 1); ++l) {
        const int j = kk - 1 - l;
        if (j < side)
          for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) assign(h, l * N + r, j * N + c, blk(r, c));
      }
    }
  };

  Matrix d;
  if (realpath) {
    RealMatrix hx = RealMatrix::Zero(static_cast<Eigen::Index>(side) * N,
                                     static_cast<Eigen::Index>(inner) * N);
    RealMatrix hy = RealMatrix::Zero(static_cast<Eigen::Index>(inner) * N,
                                     static_cast<Eigen::Index>(side) * N);
    fill_x(hx);
    fill_y(hy);
    RealMatrix dr = hx * hy;
    d = dr.cast<Complex>();
  } else {
    Matrix hx = Matrix::Zero(static_cast<Eigen::Index>(side) * N,
                             static_cast<Eigen::Index>(inner) * N);
    Matrix hy = Matrix::Zero(static_cast<Eigen::Index>(inner) * N,
                             static_cast<Eigen::Index>(side) * N);
    fill_x(hx);
    fill_y(hy);
    d = hx * hy;
  }
  // log det_m(I - D) = log det(I - D) + sum_{j<m} tr(D^j)/j
  Complex out = log_det_lu(Matrix::Identity(d.rows(), d.cols()) - d);
  for (int j = 1; j < m; ++j) out += trace_power(d, j) / static_cast<double>(j);
  return out;
}

SzegoConstants szego_constant(const FourierSymbol& a, const FactorPair& pair, int M) {
  if (M < 128) throw ConfigError("szego_constant: M must be at least 128");
  SzegoConstants out;
  out.logG = log_geometric_mean(a);
  out.G = std::exp(out.logG);
  FourierSymbol a_inv = pair.u_plus_inv.multiply(pair.u_minus_inv).compressed(1e-15);
  const FourierSymbol a_inv_tilde = a_inv.tilde();
  out.logE1_trace[0] = log_det_one_minus_hankel_product(a, a_inv_tilde, M / 2);
  out.logE1_trace[1] = log_det_one_minus_hankel_product(a, a_inv_tilde, M);
  out.logE1_trace[2] = log_det_one_minus_hankel_product(a, a_inv_tilde, 2 * M);
  out.logE1 = out.logE1_trace[1];
  out.E1 = std::exp(out.logE1);
  out.unstable = std::abs(std::exp(out.logE1_trace[2]) - std::exp(out.logE1_trace[1])) >
                 1e-6 * std::max(1.0, std::abs(out.E1));
  out.log_det1_dual = log_det_one_minus_hankel_product(pair.c.tilde(), pair.b, M);
  out.duality_gap = std::abs(out.logE1 + out.log_det1_dual);
  return out;
}

HoReport ho_remainders(const FourierSymbol& a, const FactorPair& pair,
                       const CharFunction& w, const CharFunction& p, int m,
                       const std::vector<int>& schedule, const HoOptions& opts) {
  if (m < 1) throw ConfigError("ho_remainders: m must be >= 1");
  if (schedule.empty()) {
    HoReport empty;
    empty.tail_divergent = !tail_sum(w, p, m, 1).convergent;
    return empty;
  }
  std::vector<int> ns = schedule;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.front() < 1) throw ConfigError("ho_remainders: schedule entries must be >= 1");
  const int n_max = ns.back();

  HoReport rep;
  const int M = opts.truncation;
  rep.szego = szego_constant(a, pair, M > 0 ? std::max(M, 128) : 256);
  rep.logG = rep.szego.logG;
  rep.logE1 = rep.szego.logE1;
  rep.tail_divergent = !tail_sum(w, p, m, ns.front()).convergent;

  FourierSymbol b = pair.b, c = pair.c;
  if (opts.compress_tol > 0.0) {
    b = b.compressed(opts.compress_tol);
    c = c.compressed(opts.compress_tol);
  }
  const CorrectionEngine engine(b, c);
  // log det_m T(c~)T(b~) on the corner (exact beyond the corner size)
  rep.log_detm_dual =
      log_det_one_minus_hankel_product(c.tilde(), b, engine.corner() + 1, m);

  const LogDetSeries series = log_det_sequence(a, n_max);

  // cumulative HO1-6 corrections over all l <= n
  std::vector<Complex> cumul(n_max + 1, Complex(0.0, 0.0));
  if (m >= 2) {
    std::vector<std::vector<Complex>> gk(m - 1);
    for (int k = 0; k <= m - 2; ++k) gk[k] = engine.g_traces(n_max, k);
    const int N = a.block_size();
    const bool need_matrices = (m >= 3) && (N > 1);
    for (int l = 1; l <= n_max; ++l) {
      Complex corr(0.0, 0.0);
      if (!need_matrices) {
        // scalar blocks: tr[(sum_k G)^j] = (sum_k tr G)^j
        for (int j = 1; j <= m - 1; ++j) {
          Complex s(0.0, 0.0);
          for (int k = 0; k <= m - j - 1; ++k) s += gk[k][l];
          Complex pw(1.0, 0.0);
          for (int q = 0; q < j; ++q) pw *= s;
          corr += pw / static_cast<double>(j);
        }
      } else {
        for (int j = 1; j <= m - 1; ++j) {
          Matrix s = Matrix::Zero(N, N);
          for (int k = 0; k <= m - j - 1; ++k)
            s += correction_G(b, c, l, k, l + 1 + engine.band_b_pos + engine.band_c_neg);
          corr += trace_power(s, j) / static_cast<double>(j);
        }
      }
      cumul[l] = cumul[l - 1] + corr;
    }
  }

  rep.rows.resize(ns.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= ns.size()) return;
      const int n = ns[i];
      HoRow row;
      row.n = n;
      try {
        if (series.gap[n]) {
          row.gap = true;
          row.error = "singular T_n";
          rep.rows[i] = row;
          continue;
        }
        row.log_det = series.values[n];
        const Complex base = row.log_det - static_cast<double>(n + 1) * rep.logG;
        row.widom_rem = (base - rep.logE1).real();
        // HO1-3 / HO1-5 correction sums
        Complex corr_full(0.0, 0.0), corr_drop(0.0, 0.0);
        Complex tr_last(0.0, 0.0);
        if (m >= 2) {
          if (m == 2) {
            const Complex f0 = engine.correction_trace(n, 0);
            const Complex f1 = engine.correction_trace(n, 1);
            corr_full = f0 + f1;
            corr_drop = f0;
            tr_last = f1;
          } else {
            const int dimN = (n + 1) * a.block_size();
            Matrix fsum = Matrix::Zero(dimN, dimN);
            Matrix fdrop = Matrix::Zero(dimN, dimN);
            for (int k = 0; k <= m - 1; ++k) {
              const Matrix fk = engine.correction(n, k);
              fsum += fk;
              if (k <= m - 2) fdrop += fk;
              if (k == m - 1) tr_last = fk.trace();
            }
            for (int j = 1; j <= m - 1; ++j) {
              corr_full += trace_power(fsum, j) / static_cast<double>(j);
              corr_drop += trace_power(fdrop, j) / static_cast<double>(j);
            }
          }
          row.removal = removal_condition(w, p, m, n);
        }
        row.hoC_rem = (base - corr_full + rep.log_detm_dual).real();
        row.hoD_rem = (base - corr_drop + rep.log_detm_dual).real();
        row.tr_last = tr_last.real();
        row.hoE_int = (base - cumul[n]).real();
        const TailSum ts = tail_sum(w, p, m, n);
        row.tail = ts.value;
        const double rem = (m == 1) ? std::abs(row.widom_rem) : std::abs(row.hoC_rem);
        row.ratio = row.tail > 0.0 ? rem / row.tail : 0.0;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rep.rows[i] = row;
    }
  };
  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // intercept extraction: median over the last quartile of rows
  const size_t R = rep.rows.size();
  const size_t q = std::max<size_t>(1, R / 4);
  std::vector<double> tailv;
  for (size_t i = R - q; i < R; ++i)
    if (!rep.rows[i].gap && rep.rows[i].error.empty()) tailv.push_back(rep.rows[i].hoE_int);
  if (!tailv.empty()) {
    std::sort(tailv.begin(), tailv.end());
    rep.logE_extracted = tailv[tailv.size() / 2];
    if (tailv.size() % 2 == 0)
      rep.logE_extracted = 0.5 * (tailv[tailv.size() / 2 - 1] + tailv[tailv.size() / 2]);
    rep.logE_spread = tailv.back() - tailv.front();
  }
  return rep;
}

}  // namespace toeplab
