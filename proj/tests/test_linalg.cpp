#include <doctest.h>

#include "helpers.hpp"

#include "dhdist/linalg.hpp"

using namespace dhdist;

TEST_SUITE("linalg") {
  TEST_CASE("sym_eig on the identity") {
    const SymEig eig = sym_eig(Matrix::Identity(2, 2));
    CHECK(eig.values(0) == doctest::Approx(1.0));
    CHECK(eig.values(1) == doctest::Approx(1.0));
    CHECK((eig.vectors.transpose() * eig.vectors - Matrix::Identity(2, 2))
              .norm() <= 1e-10);
  }

  TEST_CASE("sym_eig orders eigenvalues ascending") {
    Matrix s(2, 2);
    s << 3, 0, 0, -1;
    const SymEig eig = sym_eig(s);
    CHECK(eig.values(0) == doctest::Approx(-1.0));
    CHECK(eig.values(1) == doctest::Approx(3.0));
  }

  TEST_CASE("sym_eig residual and orthogonality on random instances") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
      const Index n = 2 + trial % 5;
      Matrix f = rng.gaussian_matrix(n, n);
      Matrix s = f + f.transpose();
      const SymEig eig = sym_eig(s);
      for (Index c = 0; c < n; ++c) {
        const double residual =
            (s * eig.vectors.col(c) - eig.values(c) * eig.vectors.col(c))
                .norm();
        CHECK(residual <= 1e-12 * std::max(1.0, s.norm()));
      }
      CHECK((eig.vectors.transpose() * eig.vectors - Matrix::Identity(n, n))
                .norm() <= 1e-10);
    }
  }

  TEST_CASE("sym_eig rejects bad inputs") {
    Matrix skewish(2, 2);
    skewish << 0, 1, -1, 0;
    CHECK_THROWS_AS(sym_eig(skewish), ValidationError);
    CHECK_THROWS_AS(sym_eig(Matrix::Ones(2, 3)), ValidationError);
    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sym_eig(bad), ValidationError);
  }

  TEST_CASE("smallest eigenvalue of the numeric1 bound matrix") {
    // E, J, R of the 2x2 reference pencil; the published four-digit value
    // 0.5819 is on the square-root scale, lambda_min itself is 0.33860
    const DHPencil p = fixture("numeric1").to_pencil();
    const Matrix s = p.J().transpose() * p.J() + p.E() * p.E() + p.R() * p.R();
    const SymEig eig = sym_eig(s);
    CHECK(eig.values(0) == doctest::Approx(0.3386028648).epsilon(1e-8));
    CHECK(std::sqrt(eig.values(0)) == doctest::Approx(0.5819).epsilon(2e-4));
  }

  TEST_CASE("min_singular_value on the numeric1 stacked and side blocks") {
    const DHPencil p = fixture("numeric1").to_pencil();
    const Matrix a = p.lhs();
    Matrix stacked(4, 2), side(2, 4);
    stacked << a, p.E();
    side << a, p.E();
    CHECK(min_singular_value(stacked) == doctest::Approx(0.1908).epsilon(6e-4));
    CHECK(min_singular_value(side) == doctest::Approx(0.6056).epsilon(2e-4));
    CHECK(min_singular_value(Matrix::Zero(3, 3)) == doctest::Approx(0.0));
  }

  TEST_CASE("kernel_basis") {
    Matrix d(2, 2);
    d << 1, 0, 0, 0;
    const Matrix k = kernel_basis(d);
    REQUIRE(k.cols() == 1);
    CHECK(std::abs(std::abs(k(1, 0)) - 1.0) <= 1e-14);
    CHECK(std::abs(k(0, 0)) <= 1e-14);

    Rng rng(5);
    const Matrix full =
        rng.gaussian_matrix(3, 3) + 3.0 * Matrix::Identity(3, 3);
    CHECK(kernel_basis(full).cols() == 0);

    Matrix ones = Matrix::Ones(2, 2);
    const Matrix k2 = kernel_basis(ones);
    REQUIRE(k2.cols() == 1);
    const Vector expected = (Vector(2) << 1, -1).finished() / std::sqrt(2.0);
    CHECK(std::min((k2.col(0) - expected).norm(),
                   (k2.col(0) + expected).norm()) <= 1e-12);
  }

  TEST_CASE("kernel_basis columns satisfy the residual bound") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 3 + trial % 4;
      const Matrix x = random_psd(rng, n, static_cast<int>(n) - 1 - trial % 2);
      const Matrix k = kernel_basis(x);
      for (Index c = 0; c < k.cols(); ++c)
        CHECK((x * k.col(c)).norm() <= 1e-10 * std::max(1.0, x.norm()));
      CHECK((k.transpose() * k - Matrix::Identity(k.cols(), k.cols()))
                .norm() <= 1e-10);
    }
  }

  TEST_CASE("is_psd") {
    CHECK(is_psd(Matrix::Identity(3, 3)));
    Matrix indef(2, 2);
    indef << 1, 0, 0, -1;
    CHECK_FALSE(is_psd(indef));
    CHECK(is_psd(fixture("numeric1").to_pencil().R()));
  }

  TEST_CASE("split_sym_skew") {
    Matrix sym(2, 2);
    sym << 2, 1, 1, 5;
    auto [s1, k1] = split_sym_skew(sym);
    CHECK((s1 - sym).norm() == doctest::Approx(0.0));
    CHECK(k1.norm() == doctest::Approx(0.0));

    Matrix skew(2, 2);
    skew << 0, 3, -3, 0;
    auto [s2, k2] = split_sym_skew(skew);
    CHECK(s2.norm() == doctest::Approx(0.0));
    CHECK((k2 - skew).norm() == doctest::Approx(0.0));

    Matrix x(2, 2);
    x << 1, 2, 0, 1;
    auto [s3, k3] = split_sym_skew(x);
    Matrix expect_sym(2, 2), expect_skew(2, 2);
    expect_sym << 1, 1, 1, 1;
    expect_skew << 0, 1, -1, 0;
    CHECK((s3 - expect_sym).norm() <= 1e-15);
    CHECK((k3 - expect_skew).norm() <= 1e-15);
    const double lhs = x.squaredNorm();
    const double rhs = s3.squaredNorm() + k3.squaredNorm();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK((s3 + k3 - x).norm() <= 1e-15 * x.norm());
  }

  TEST_CASE("split_sym_skew reconstructs random matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix x = rng.gaussian_matrix(4, 4);
      auto [s, k] = split_sym_skew(x);
      CHECK((s + k - x).norm() <= 1e-15 * std::max(1.0, x.norm()));
      CHECK(x.squaredNorm() ==
            doctest::Approx(s.squaredNorm() + k.squaredNorm()).epsilon(1e-12));
    }
  }

  TEST_CASE("tuple_frobenius") {
    CHECK(tuple_frobenius({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}) ==
          doctest::Approx(2.0));
    CHECK(tuple_frobenius({Matrix::Zero(3, 3)}) == doctest::Approx(0.0));
    Matrix a(2, 2), b(2, 2);
    a << 1, 0, 0, 0;
    b << 0, 1, 1, 0;
    CHECK(tuple_frobenius({a, b}) == doctest::Approx(std::sqrt(3.0)));
    Rng rng(8);
    const Matrix x = rng.gaussian_matrix(3, 5);
    CHECK(tuple_frobenius({x}) == doctest::Approx(x.norm()).epsilon(1e-15));
    CHECK_THROWS_AS(tuple_frobenius({}), ValidationError);
  }

  TEST_CASE("rank_decision flags borderline cases") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-3;
    Tolerance tol;
    tol.rank_rel = 1e-3;  // a singular value sitting exactly at threshold
    const RankDecision decision = rank_decision(d, tol);
    CHECK(decision.ambiguous);
    const RankDecision clean = rank_decision(Matrix::Identity(3, 3));
    CHECK(clean.rank == 3);
    CHECK_FALSE(clean.ambiguous);
  }
}
