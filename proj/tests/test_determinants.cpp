#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "toeplab/determinants.hpp"
#include "toeplab/linalg.hpp"

using namespace toeplab;

TEST_CASE("log_det_sequence: constants, identity, tridiagonal recurrence") {
  const auto two = FourierSymbol::scalar({{0, 2.0}});
  const auto s2 = log_det_sequence(two, 12);
  for (int n = 0; n <= 12; ++n)
    CHECK(s2.values[n].real() == doctest::Approx((n + 1) * std::log(2.0)).epsilon(1e-14));

  const auto sid = log_det_sequence(FourierSymbol::identity(2), 8);
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(sid.values[n]) < 1e-13);

  const auto tri = oracles::tridiag_symbol(0.5, 0.3);
  const auto st = log_det_sequence(tri, 64);
  for (int n = 0; n <= 64; ++n) {
    const double expect = oracles::tridiag_det(n, 0.5, 0.3);
    CHECK(std::exp(st.values[n].real()) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::abs(st.values[n].imag()) < 1e-12);
  }
  // closed form (1 - 0.15^{n+2})/0.85 at n = 3
  CHECK(std::exp(st.values[3].real()) == doctest::Approx(1.176381).epsilon(1e-6));
}

TEST_CASE("log_det_sequence branch continuity for a complex symbol") {
  const auto a = FourierSymbol::scalar(
      {{0, Complex(2.0, 0.6)}, {1, Complex(0.5, 0.4)}, {-1, Complex(-0.3, 0.2)}});
  const auto s = log_det_sequence(a, 40);
  for (int n = 1; n <= 40; ++n)
    CHECK(std::abs(s.values[n].imag() - s.values[n - 1].imag()) < kPi);
}

TEST_CASE("geometric mean") {
  CHECK(std::abs(geometric_mean(FourierSymbol::scalar({{0, 2.0}})) - 2.0) < 1e-13);
  CHECK(std::abs(geometric_mean(oracles::tridiag_symbol(0.5, 0.3)) - 1.0) < 1e-12);
  // exp of a mean-zero series has geometric mean one
  const auto w = oracles::lacunary_series(0.4, 5, 1.0);
  const int M = 512;
  std::vector<Matrix> vals(M);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    vals[j] = Matrix::Constant(1, 1, std::exp(w.eval(th)(0, 0)));
  }
  const auto a = FourierSymbol::from_samples(vals, 160);
  CHECK(std::abs(geometric_mean(a) - 1.0) < 1e-10);
  CHECK_THROWS_AS(geometric_mean(FourierSymbol::scalar({{1, 1.0}})), NumericalError);
}

TEST_CASE("regularized determinants: closed forms") {
  const Matrix z = Matrix::Zero(6, 6);
  for (int m : {1, 2, 3}) CHECK(std::abs(regularized_det(z, m) - 1.0) < 1e-15);

  // rank-1 with eigenvalue 0.1, m = 2: 1.1 e^{-0.1}
  Matrix r1 = Matrix::Zero(4, 4);
  r1(0, 0) = 0.1;
  CHECK(regularized_det(r1, 2).real() ==
        doctest::Approx(1.1 * std::exp(-0.1)).epsilon(1e-12));
  CHECK(regularized_det(r1, 2).real() == doctest::Approx(0.9953212).epsilon(1e-6));

  std::mt19937 rng(41);
  const Matrix k = oracles::random_contraction(8, 0.4, rng);
  CHECK(std::abs(regularized_det(k, 1) -
                 (Matrix::Identity(8, 8) + k).determinant()) < 1e-12);
}

TEST_CASE("det_m consistency: eigenvalue formula vs direct R_m on contractions") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 6; ++trial) {
    const Matrix k = oracles::random_contraction(16, 0.5, rng);
    for (int m : {1, 2, 3}) {
      const Complex via_eig = oracles::detm_eig(k, m);
      const Complex via_expm = oracles::detm_expm(k, m);
      const Complex impl = regularized_det(k, m);
      CHECK(std::abs(via_eig - via_expm) < 1e-8);
      CHECK(std::abs(impl - via_eig) < 1e-8);
    }
  }
}

TEST_CASE("szego constant: tridiagonal and exp(0.2 cos)") {
  {
    const auto a = oracles::tridiag_symbol(0.5, 0.3);
    const auto pair = scalar_canonical_factor(a, 64);
    const auto sz = szego_constant(a, pair, 256);
    // strong Szego oracle: exp(sum k c_k c_{-k}) = exp(-log(1-0.15)) = 1/0.85
    CHECK(sz.E1.real() == doctest::Approx(1.0 / 0.85).epsilon(1e-8));
    CHECK(!sz.unstable);
    CHECK(sz.duality_gap < 1e-8);
    CHECK(std::abs(sz.G - 1.0) < 1e-12);
  }
  {
    // a = exp(0.2 cos): log coefficients 0.1 at +-1, E1 = e^{0.01}
    const int M = 64;
    std::vector<Matrix> vals(M);
    for (int j = 0; j < M; ++j)
      vals[j] = Matrix::Constant(
          1, 1, Complex(std::exp(0.2 * std::cos(2.0 * kPi * j / M)), 0.0));
    const auto a = FourierSymbol::from_samples(vals, 16);
    const auto pair = scalar_canonical_factor(a, 64);
    const auto sz = szego_constant(a, pair, 256);
    CHECK(sz.E1.real() == doctest::Approx(std::exp(0.01)).epsilon(1e-8));
    CHECK(sz.E1.real() == doctest::Approx(1.010050).epsilon(1e-6));
    CHECK(sz.duality_gap < 1e-8);
  }
  {
    const auto c = FourierSymbol::scalar({{0, 3.0}});
    const auto pair = scalar_canonical_factor(c, 8);
    const auto sz = szego_constant(c, pair, 256);
    CHECK(std::abs(sz.E1 - 1.0) < 1e-14);
  }
}

TEST_CASE("GCBO cross-check: widom remainder equals the compressed corner det") {
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(a, 64);
  const auto sz = szego_constant(a, pair, 256);
  const auto series = log_det_sequence(a, 12);
  for (int n : {1, 4, 8}) {
    const int L = 128;
    const Matrix hb = hankel_matrix(pair.b, L);
    const Matrix hct = hankel_matrix(pair.c.tilde(), L);
    const Matrix core = hb * hct;
    const int d = L - (n + 1);
    const Matrix block = Matrix::Identity(d, d) - core.bottomRightCorner(d, d);
    const Complex lhs =
        series.values[n] - static_cast<double>(n + 1) * sz.logG - sz.logE1;
    const Complex rhs = log_det_lu(block);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("ho_remainders: identity symbol gives zero rows") {
  const auto id = FourierSymbol::scalar({{0, 1.0}});
  const auto pair = scalar_canonical_factor(id, 8);
  const CharFunction w(0.5);
  const auto rep = ho_remainders(id, pair, w, w, 1, {2, 4, 8});
  for (const auto& r : rep.rows) {
    CHECK(std::abs(r.widom_rem) < 1e-12);
    CHECK(std::abs(r.hoC_rem) < 1e-12);
    CHECK(std::abs(r.hoE_int) < 1e-12);
  }
}

TEST_CASE("ho_remainders: tridiagonal closed-form remainders, m = 1") {
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(a, 64);
  const CharFunction w(0.75);
  const auto rep = ho_remainders(a, pair, w, w, 1, {2, 3, 5, 8, 10});
  for (const auto& r : rep.rows) {
    // r0_n = log(1 - 0.15^{n+2}) exactly
    const double expect = std::log(1.0 - std::pow(0.15, r.n + 2));
    CHECK(r.widom_rem == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(rep.rows[2].widom_rem == doctest::Approx(-1.709e-6).epsilon(1e-3));
  for (const auto& r : rep.rows) {
    CHECK(std::abs(r.hoC_rem - r.widom_rem) < 1e-8);
    CHECK(r.hoD_rem == r.hoC_rem);
  }
  // cross-theorem: the intercept is log E1 when m = 1
  CHECK(rep.logE_extracted == doctest::Approx(std::log(1.0 / 0.85)).epsilon(1e-8));
}

TEST_CASE("ho_remainders: tridiagonal m = 2 gains and removal gate") {
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(a, 64);
  const CharFunction w(0.75);
  const auto rep = ho_remainders(a, pair, w, w, 2, {2, 4, 6, 8, 12, 16});
  for (const auto& r : rep.rows) {
    CHECK(std::abs(r.hoC_rem) <= std::abs(r.widom_rem) + 1e-12);
    if (r.n >= 6) CHECK(std::abs(r.hoC_rem) < 1e-7);
  }
  // tr F_{n,1} -> 0 fast for this analytic symbol (removal gate holds)
  CHECK(std::abs(rep.rows[0].tr_last) > std::abs(rep.rows[4].tr_last));
  CHECK(std::abs(rep.rows[5].tr_last) < 1e-12);
  CHECK(rep.logE_spread < 1e-9);
}

TEST_CASE("ho_remainders: workers do not change results") {
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(a, 48);
  const CharFunction w(0.6);
  HoOptions o1, o3;
  o1.workers = 1;
  o3.workers = 3;
  const auto r1 = ho_remainders(a, pair, w, w, 2, {2, 4, 8, 16}, o1);
  const auto r3 = ho_remainders(a, pair, w, w, 2, {2, 4, 8, 16}, o3);
  for (size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].hoC_rem == r3.rows[i].hoC_rem);
    CHECK(r1.rows[i].tail == r3.rows[i].tail);
  }
}
