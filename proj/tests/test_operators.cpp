#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "toeplab/factorization.hpp"
#include "toeplab/operators.hpp"

using namespace toeplab;

TEST_CASE("toeplitz matrices") {
  const auto cosal = FourierSymbol::scalar({{1, 1.0}, {-1, 1.0}});
  const Matrix t = toeplitz_matrix(cosal, 2);
  Matrix expect(3, 3);
  expect << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK((t - expect.cast<Complex>()).cwiseAbs().maxCoeff() == 0.0);

  CHECK((toeplitz_matrix(FourierSymbol::identity(2), 3) - Matrix::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const Matrix tri = toeplitz_matrix(oracles::tridiag_symbol(0.5, 0.3), 1);
  CHECK(tri(0, 0).real() == doctest::Approx(1.15));
  CHECK(tri(0, 1).real() == doctest::Approx(-0.3));
  CHECK(tri(1, 0).real() == doctest::Approx(-0.5));
  CHECK(tri(1, 1).real() == doctest::Approx(1.15));
}

TEST_CASE("hankel matrices") {
  const Matrix h1 = hankel_matrix(FourierSymbol::scalar({{1, 1.0}}), 4);
  CHECK(h1(0, 0).real() == doctest::Approx(1.0));
  CHECK(h1.cwiseAbs().sum() == doctest::Approx(1.0));

  const Matrix h3 = hankel_matrix(FourierSymbol::scalar({{3, 1.0}}), 4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      CHECK(h3(j, k).real() == doctest::Approx(j + k == 2 ? 1.0 : 0.0));

  CHECK(hankel_matrix(FourierSymbol::scalar({{-1, 1.0}}), 4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection algebra") {
  const int M = 8, N = 2;
  ProjectionMask pn{ProjectionMask::Kind::Pn, 3, M, N};
  ProjectionMask qn{ProjectionMask::Kind::Qn, 3, M, N};
  const Matrix P = pn.dense(), Q = qn.dense();
  CHECK(((P * P) - P).cwiseAbs().maxCoeff() == 0.0);
  CHECK((P * Q).cwiseAbs().maxCoeff() == 0.0);
  CHECK(((P + Q) - Matrix::Identity(M * N, M * N)).cwiseAbs().maxCoeff() == 0.0);
  Matrix sum = Matrix::Zero(M * N, M * N);
  for (int j = 0; j <= 3; ++j)
    sum += ProjectionMask{ProjectionMask::Kind::Delta, j, M, N}.dense();
  CHECK((sum - P).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("correction_F: degenerate and shift examples") {
  const auto c1 = FourierSymbol::scalar({{0, 2.0}});
  const auto c2 = FourierSymbol::scalar({{0, 3.0}});
  CHECK(correction_F(c1, c2, 4, 0, 64).cwiseAbs().maxCoeff() == 0.0);
  CHECK(correction_F(c1, c2, 4, 2, 64).cwiseAbs().maxCoeff() == 0.0);

  // b = t carries the positive datum, c = 1/t the negative one:
  // F_{n,0} is the single entry 1 at (n,n)
  const auto t = FourierSymbol::scalar({{1, 1.0}});
  const auto tinv = FourierSymbol::scalar({{-1, 1.0}});
  for (int n : {0, 1, 3}) {
    const Matrix f = correction_F(t, tinv, n, 0, 64);
    CHECK(f(n, n).real() == doctest::Approx(1.0));
    CHECK(f.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(f.trace().real() == doctest::Approx(1.0));
    // k >= 1 dies: the Hankel core lives at mode 0 only and Q_n kills it
    CHECK(correction_F(t, tinv, n, 1, 64).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("correction_F against the dense projection oracle") {
  const auto b = oracles::tridiag_b(0.5, 0.3, 20);
  const auto c = oracles::tridiag_c(0.5, 0.3, 20);
  for (int n : {2, 5}) {
    for (int k : {0, 1, 2}) {
      const Matrix slab = correction_F(b, c, n, k, 64);
      const Matrix dense = oracles::correction_F_dense(b, c, n, k, 64);
      CHECK((slab - dense).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
  // block case
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  const FourierSymbol um(2, {{0, Matrix::Identity(2, 2)}, {-1, 0.4 * e12}});
  const FourierSymbol up(2, {{0, Matrix::Identity(2, 2)}, {1, 0.5 * e12}});
  auto [a, pair] = fixture_block_symbol(um, up, up, um);
  const auto bb = pair.b.compressed(1e-12);
  const auto cc = pair.c.compressed(1e-12);
  for (int k : {0, 1}) {
    const Matrix slab = correction_F(bb, cc, 3, k, 64);
    const Matrix dense = oracles::correction_F_dense(bb, cc, 3, k, 64);
    CHECK((slab - dense).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("correction_F cutoff and stability") {
  const auto b = oracles::tridiag_b(0.5, 0.3, 20);
  const auto c = oracles::tridiag_c(0.5, 0.3, 20);
  CHECK_THROWS_AS(correction_F(b, c, 10, 0, 16), NumericalError);
  // doubling M leaves entries unchanged (banded exactness)
  const Matrix f1 = correction_F(b, c, 5, 1, 64);
  const Matrix f2 = correction_F(b, c, 5, 1, 128);
  CHECK((f1 - f2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correction_G examples and oracle") {
  const auto t = FourierSymbol::scalar({{1, 1.0}});
  const auto tinv = FourierSymbol::scalar({{-1, 1.0}});
  CHECK(correction_G(t, tinv, 0, 0, 64)(0, 0).real() == doctest::Approx(1.0));
  CHECK(correction_G(t, tinv, 1, 0, 64).cwiseAbs().maxCoeff() == 0.0);
  const auto c2 = FourierSymbol::scalar({{0, 3.0}});
  CHECK(correction_G(c2, c2, 1, 0, 64).cwiseAbs().maxCoeff() == 0.0);

  const auto b = oracles::tridiag_b(0.5, 0.3, 20);
  const auto c = oracles::tridiag_c(0.5, 0.3, 20);
  CorrectionEngine eng(b, c);
  const auto traces0 = eng.g_traces(6, 0);
  const auto traces1 = eng.g_traces(6, 1);
  for (int l : {0, 1, 4}) {
    // dense oracle: G_{l,k} = top-left block of the F-style product with P_0
    using toeplab::ProjectionMask;
    const int M = 64;
    const Matrix tb = toeplitz_matrix(b, M - 1);
    const Matrix tc = toeplitz_matrix(c, M - 1);
    const Matrix hb = hankel_matrix(b, M);
    const Matrix hct = hankel_matrix(c.tilde(), M);
    const Matrix Q = ProjectionMask{ProjectionMask::Kind::Qn, l, M, 1}.dense();
    Matrix g0 = tc.row(0) * Q * tb.col(0);
    CHECK(std::abs(correction_G(b, c, l, 0, M)(0, 0) - g0(0, 0)) < 1e-13);
    CHECK(std::abs(traces0[l] - g0(0, 0)) < 1e-13);
    Matrix g1 = tc.row(0) * Q * hb * hct * Q * tb.col(0);
    CHECK(std::abs(correction_G(b, c, l, 1, M)(0, 0) - g1(0, 0)) < 1e-13);
    CHECK(std::abs(traces1[l] - g1(0, 0)) < 1e-13);
  }
}

TEST_CASE("singular values") {
  const auto sv3 = singular_values(hankel_matrix(FourierSymbol::scalar({{3, 1.0}}), 6));
  CHECK(sv3[0] == doctest::Approx(1.0));
  CHECK(sv3[1] == doctest::Approx(1.0));
  CHECK(sv3[2] == doctest::Approx(1.0));
  CHECK(sv3[3] == doctest::Approx(0.0));

  const auto svi = singular_values(Matrix::Identity(5, 5).eval());
  for (double s : svi) CHECK(s == doctest::Approx(1.0));
  CHECK(schatten_norm(svi, 2.0) == doctest::Approx(std::sqrt(5.0)));

  // lacunary C^0.4 staircase: slope over [8,128] in [-0.5,-0.3]
  const auto lac = oracles::lacunary_series(0.4, 10, 1.0);
  const auto sv = singular_values(hankel_corner(lac));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = 8; n <= 128; ++n) {
    const double x = std::log(static_cast<double>(n)), y = std::log(sv[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  CHECK(slope < -0.3);
  CHECK(slope > -0.5);
}

TEST_CASE("toeplitz algebra identity on interior blocks") {
  // I - T(a)T(a^{-1}) equals H(a)H(a~^{-1}) up to boundary terms
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto ainv = a.inverse(60);
  const int M = 96;
  const Matrix lhs = Matrix::Identity(M, M) -
                     toeplitz_matrix(a, M - 1) * toeplitz_matrix(ainv, M - 1);
  const Matrix rhs = hankel_matrix(a, M) * hankel_matrix(ainv.tilde(), M);
  CHECK((lhs - rhs).topLeftCorner(M / 2, M / 2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("trace bound of the Delta decomposition") {
  // |tr F| <= N sum_j ||Delta_j F Delta_j||
  const auto b = oracles::tridiag_b(0.5, 0.3, 20);
  const auto c = oracles::tridiag_c(0.5, 0.3, 20);
  const int n = 6;
  const Matrix f = correction_F(b, c, n, 1, 64);
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) sum += std::abs(f(j, j));
  CHECK(std::abs(f.trace()) <= 1.0 * sum + 1e-15);
}

TEST_CASE("truncation norms: band structure and explicit Hankel") {
  const auto tri = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(tri, 48);
  {
    // constants: all four norms vanish
    FactorPair cpair;
    cpair.u_minus = FourierSymbol::scalar({{0, 1.0}});
    cpair.u_plus = FourierSymbol::scalar({{0, 2.0}});
    cpair.v_minus = cpair.u_minus;
    cpair.v_plus = cpair.u_plus;
    cpair.u_plus_inv = FourierSymbol::scalar({{0, 0.5}});
    cpair.u_minus_inv = cpair.u_minus;
    cpair.v_plus_inv = cpair.u_plus_inv;
    cpair.v_minus_inv = cpair.u_minus_inv;
    cpair.b = FourierSymbol::scalar({{0, 0.5}});
    cpair.c = FourierSymbol::scalar({{0, 2.0}});
    const auto tn = truncation_norms(cpair, 8, 2, 64);
    CHECK(tn.norm_QTb_Dj == doctest::Approx(0.0));
    CHECK(tn.norm_DjTc_Qn == doctest::Approx(0.0));
    CHECK(tn.norm_QnHb == doctest::Approx(0.0));
    CHECK(tn.norm_HctQn == doctest::Approx(0.0));
  }
  {
    // polynomial b of degree d and n-j >= d: Q_n T(b) Delta_j = 0
    FactorPair ppair = pair;
    ppair.b = FourierSymbol::scalar({{0, 1.0}, {1, 0.4}, {2, 0.2}});
    const auto tn = truncation_norms(ppair, 8, 4, 64);
    CHECK(tn.norm_QTb_Dj == doctest::Approx(0.0));
  }
  {
    const auto tn = truncation_norms(pair, 8, 0, 96);
    // ||Q_n H(b)|| <= ||H(b)||, both from the geometric Hankel structure
    const auto svb = singular_values(hankel_matrix(pair.b, 96));
    CHECK(tn.norm_QnHb <= svb[0] + 1e-10);
    CHECK(tn.norm_QnHb > 0.0);
    // bounds are positive and comparable to the measured norms
    CHECK(tn.bound_QTb_Dj > 0.0);
    CHECK(tn.norm_QTb_Dj <= 10.0 * tn.bound_QTb_Dj);
  }
}
