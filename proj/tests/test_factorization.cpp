#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "toeplab/determinants.hpp"
#include "toeplab/factorization.hpp"

using namespace toeplab;

namespace {
double side_residual(const FourierSymbol& s, int keep_sign) {
  double worst = 0.0;
  for (const auto& [k, blk] : s.coeffs())
    if (k * keep_sign < 0) worst = std::max(worst, blk.cwiseAbs().maxCoeff());
  return worst;
}

double coeff_distance(const FourierSymbol& a, const FourierSymbol& b) {
  double worst = 0.0;
  for (const auto& [k, blk] : a.coeffs())
    worst = std::max(worst, (blk - b.coeff(k)).cwiseAbs().maxCoeff());
  for (const auto& [k, blk] : b.coeffs())
    worst = std::max(worst, (blk - a.coeff(k)).cwiseAbs().maxCoeff());
  return worst;
}
}  // namespace

TEST_CASE("scalar factorization: constant symbol, c0 convention") {
  const auto pair = scalar_canonical_factor(FourierSymbol::scalar({{0, 4.0}}), 4);
  CHECK(std::abs(pair.u_plus.coeff(0)(0, 0) - 4.0) < 1e-12);
  CHECK(std::abs(pair.u_minus.coeff(0)(0, 0) - 1.0) < 1e-12);
  CHECK(pair.u_minus.band() == 0);
}

TEST_CASE("scalar factorization: tridiagonal against the log-series oracle") {
  const auto a = oracles::tridiag_symbol(0.5, 0.3);
  const auto pair = scalar_canonical_factor(a, 48);
  // oracle: log(1-0.5t) + log(1-0.3/t) splits exactly into the two factors
  CHECK(std::abs(pair.u_minus.coeff(0)(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(pair.u_minus.coeff(-1)(0, 0) - (-0.3)) < 1e-10);
  CHECK(std::abs(pair.u_minus.coeff(-2)(0, 0)) < 1e-10);
  CHECK(std::abs(pair.u_plus.coeff(0)(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(pair.u_plus.coeff(1)(0, 0) - (-0.5)) < 1e-10);
  CHECK(std::abs(pair.u_plus.coeff(2)(0, 0)) < 1e-10);

  // supports
  CHECK(side_residual(pair.u_plus, +1) == 0.0);
  CHECK(side_residual(pair.u_minus, -1) == 0.0);
  CHECK(side_residual(pair.b.multiply(pair.c), +1) < 1e-9);  // bc = 1

  // reconstruction within 1e-9 per coefficient
  CHECK(coeff_distance(pair.u_minus.multiply(pair.u_plus), a) < 1e-9);

  // b, c closed forms
  CHECK(coeff_distance(pair.b.compressed(1e-11), oracles::tridiag_b(0.5, 0.3, 30)) < 1e-9);
  CHECK(coeff_distance(pair.c.compressed(1e-11), oracles::tridiag_c(0.5, 0.3, 30)) < 1e-9);
}

TEST_CASE("scalar factorization: pure plus factor") {
  const auto a = FourierSymbol::scalar({{0, 1.0}, {1, -0.5}});
  const auto pair = scalar_canonical_factor(a, 32);
  CHECK(coeff_distance(pair.u_plus, a) < 1e-10);
  CHECK(coeff_distance(pair.u_minus, FourierSymbol::identity(1)) < 1e-10);
}

TEST_CASE("scalar factorization: band doubling agreement") {
  const auto a = FourierSymbol::scalar({{0, 3.0}, {1, 0.8}, {-1, 0.4}, {2, -0.2}});
  const auto p1 = scalar_canonical_factor(a, 24);
  const auto p2 = scalar_canonical_factor(a, 48);
  for (int k = 0; k <= 24; ++k) {
    CHECK(std::abs(p1.u_plus.coeff(k)(0, 0) - p2.u_plus.coeff(k)(0, 0)) < 1e-8);
    CHECK(std::abs(p1.u_minus.coeff(-k)(0, 0) - p2.u_minus.coeff(-k)(0, 0)) < 1e-8);
  }
}

TEST_CASE("scalar factorization: exp(c0) equals the geometric mean") {
  const auto a = FourierSymbol::scalar({{0, 2.0}, {1, 0.5}, {-1, 0.3}, {-2, 0.1}});
  const auto pair = scalar_canonical_factor(a, 32);
  // u+(0) = exp(c0); u-(0) = 1
  const Complex g = geometric_mean(a);
  CHECK(std::abs(pair.u_plus.coeff(0)(0, 0) - g) < 1e-10);
}

TEST_CASE("scalar factorization errors") {
  CHECK_THROWS_AS(scalar_canonical_factor(FourierSymbol::scalar({{1, 1.0}}), 8),
                  NumericalError);  // winding 1
  CHECK_THROWS_AS(
      scalar_canonical_factor(FourierSymbol::scalar({{1, 1.0}, {-1, 1.0}}), 8),
      NumericalError);  // vanishing symbol
  CHECK_THROWS_AS(scalar_canonical_factor(FourierSymbol::identity(2), 8), ConfigError);
}

TEST_CASE("fixture blocks: identity and matrix-unit example") {
  const auto id = FourierSymbol::identity(2);
  {
    auto [a, pair] = fixture_block_symbol(id, id, id, id);
    CHECK(coeff_distance(a, id) == 0.0);
    CHECK(coeff_distance(pair.b, id) < 1e-12);
    CHECK(coeff_distance(pair.c, id) < 1e-12);
  }
  {
    // matrix-unit factors in the same nilpotent direction: the two
    // factorizations agree and the hand product is exact
    Matrix e12 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    FourierSymbol um(2, {{0, Matrix::Identity(2, 2)}, {-1, 0.4 * e12}});
    FourierSymbol up(2, {{0, Matrix::Identity(2, 2)}, {1, 0.5 * e12}});
    auto [a, pair] = fixture_block_symbol(um, up, up, um);
    CHECK((a.coeff(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.coeff(-1) - 0.4 * e12).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.coeff(1) - 0.5 * e12).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(side_residual(pair.u_plus_inv, +1) == 0.0);
    CHECK(side_residual(pair.u_minus_inv, -1) == 0.0);
  }
  {
    // crossing matrix units do not give equal right and left products
    // (E12 E21 != E21 E12): rejected by the product check
    Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    e21(1, 0) = 1.0;
    FourierSymbol um(2, {{0, Matrix::Identity(2, 2)}, {-1, 0.4 * e12}});
    FourierSymbol up(2, {{0, Matrix::Identity(2, 2)}, {1, 0.5 * e21}});
    CHECK_THROWS_AS(fixture_block_symbol(um, up, up, um), NumericalError);
  }
}

TEST_CASE("fixture blocks: diagonal embedding matches scalar factorization") {
  const auto tri = oracles::tridiag_symbol(0.5, 0.3);
  const auto sp = scalar_canonical_factor(tri, 32);
  auto embed = [](const FourierSymbol& s) {
    FourierSymbol::CoeffMap m;
    for (const auto& [k, blk] : s.coeffs()) {
      Matrix b = Matrix::Zero(2, 2);
      b(0, 0) = blk(0, 0);
      b(1, 1) = blk(0, 0);
      m[k] = b;
    }
    return FourierSymbol(2, std::move(m));
  };
  auto [a, pair] = fixture_block_symbol(embed(sp.u_minus), embed(sp.u_plus),
                                        embed(sp.v_plus), embed(sp.v_minus));
  const FourierSymbol bc = pair.b.compressed(1e-10);
  for (const auto& [k, blk] : bc.coeffs()) {
    CHECK(std::abs(blk(0, 0) - sp.b.coeff(k)(0, 0)) < 1e-8);
    CHECK(std::abs(blk(0, 1)) < 1e-12);
  }
}

TEST_CASE("fixture blocks: error paths") {
  const auto id = FourierSymbol::identity(2);
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  const FourierSymbol bad_minus(2, {{0, Matrix::Identity(2, 2)}, {1, 0.4 * e12}});
  CHECK_THROWS_AS(fixture_block_symbol(bad_minus, id, id, id), NumericalError);
  // product mismatch
  const FourierSymbol um(2, {{0, Matrix::Identity(2, 2)}, {-1, 0.4 * e12}});
  CHECK_THROWS_AS(fixture_block_symbol(um, id, id, id), NumericalError);
  // singular zeroth block
  const FourierSymbol sing(2, {{0, e12}});
  CHECK_THROWS_AS(fixture_block_symbol(sing, id, id, sing), NumericalError);
}

TEST_CASE("invertibility probe") {
  const auto probe_id = invertibility_probe(FourierSymbol::identity(1), 64);
  CHECK(probe_id.toeplitz_invertible);
  CHECK(probe_id.tilde_invertible);
  CHECK(probe_id.cond == doctest::Approx(1.0));

  const auto probe_t = invertibility_probe(FourierSymbol::scalar({{1, 1.0}}), 64);
  CHECK(!probe_t.toeplitz_invertible);  // truncated shift has a zero singular value

  const auto probe_tri = invertibility_probe(oracles::tridiag_symbol(0.5, 0.3), 64);
  CHECK(probe_tri.toeplitz_invertible);
  CHECK(probe_tri.tilde_invertible);
}
