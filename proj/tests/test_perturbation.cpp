#include <doctest.h>

#include "helpers.hpp"

#include "dhdist/perturbation.hpp"

using namespace dhdist;

TEST_SUITE("perturbation") {
  TEST_CASE("delta_general on the identity") {
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    const Matrix delta = delta_general(Matrix::Identity(2, 2), e1);
    Matrix expected(2, 2);
    expected << -1, 0, 0, 0;
    CHECK((delta - expected).norm() <= 1e-15);
    const Matrix moved = Matrix::Identity(2, 2) + delta;
    CHECK((moved * e1).norm() <= 1e-15);
  }

  TEST_CASE("delta_general vanishes when u is already in the kernel") {
    Rng rng(21);
    const Matrix x = random_psd(rng, 4, 3);
    const Matrix kernel = kernel_basis(x);
    REQUIRE(kernel.cols() == 1);
    const Matrix delta = delta_general(x, kernel.col(0));
    CHECK(delta.norm() <= 1e-12 * std::max(1.0, x.norm()));
  }

  TEST_CASE("delta_general kills u on both sides with rank at most two") {
    Rng rng(22);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix y = rng.gaussian_matrix(4, 4);
      const Vector u = rng.unit_vector(4);
      const Matrix delta = delta_general(y, u);
      CHECK(((y + delta) * u).norm() <= 1e-12 * (1.0 + y.norm()));
      CHECK((u.transpose() * (y + delta)).norm() <= 1e-12 * (1.0 + y.norm()));
      const Vector sv = singular_values(delta);
      if (sv.size() > 2) CHECK(sv(2) <= 1e-12 * std::max(1.0, sv(0)));
    }
  }

  TEST_CASE("norm identity for general perturbations") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = 2 + trial % 5;
      const Matrix y = rng.gaussian_matrix(n, n);
      const Vector u = rng.unit_vector(n);
      const Matrix delta = delta_general(y, u);
      const Vector yu = y * u;
      const double uyu = u.dot(yu);
      const Vector tangential_right = yu - uyu * u;
      const Vector ytu = y.transpose() * u;
      const Vector tangential_left = ytu - uyu * u;
      const double expected = tangential_right.squaredNorm() +
                              tangential_left.squaredNorm() + uyu * uyu;
      CHECK(delta.squaredNorm() ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }

  TEST_CASE("delta_skew example and norm") {
    Matrix j(2, 2);
    j << 0, 1, -1, 0;
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    const Matrix delta = delta_skew(j, e1);
    CHECK((delta + j).norm() <= 1e-15);  // delta equals -J here
    CHECK(delta.squaredNorm() == doctest::Approx(2.0));
    CHECK((2.0 * (j * e1).squaredNorm()) == doctest::Approx(2.0));

    // J u = 0 gives a zero perturbation
    Matrix j3 = Matrix::Zero(3, 3);
    j3(0, 1) = 1.0;
    j3(1, 0) = -1.0;
    Vector e3 = Vector::Zero(3);
    e3(2) = 1.0;
    CHECK(delta_skew(j3, e3).norm() == 0.0);
  }

  TEST_CASE("squared skew norm formula matches the constructed matrix") {
    // |Delta|_F^2 = 2 |Ju|^2, not 2 |Ju|: the squared form is the one the
    // explicit matrix satisfies, which is the brute-force oracle here
    Rng rng(24);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = 2 + trial % 5;
      const Matrix j = random_skew(rng, n);
      const Vector u = rng.unit_vector(n);
      const Matrix delta = delta_skew(j, u);
      const double ju_sq = (j * u).squaredNorm();
      CHECK(delta.squaredNorm() ==
            doctest::Approx(2.0 * ju_sq).epsilon(1e-12));
      CHECK((delta + delta.transpose()).norm() <= 1e-14 * (1.0 + j.norm()));
      CHECK(((j + delta) * u).norm() <= 1e-12 * (1.0 + j.norm()));
    }
  }

  TEST_CASE("delta_psd examples") {
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    const Matrix d1 = delta_psd(Matrix::Identity(3, 3), e1);
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = -1.0;
    CHECK((d1 - expected).norm() <= 1e-15);
    CHECK(d1.squaredNorm() == doctest::Approx(1.0));

    // the projector uu^T is wiped entirely
    Rng rng(25);
    const Vector u = rng.unit_vector(4);
    const Matrix proj = u * u.transpose();
    const Matrix d2 = delta_psd(proj, u);
    CHECK((d2 + proj).norm() <= 1e-13);
    CHECK(d2.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // E of the numeric1 pencil annihilates e1 already
    const DHPencil p = fixture("numeric1").to_pencil();
    Vector e2 = Vector::Zero(2);
    e2(0) = 1.0;
    CHECK(delta_psd(p.E(), e2).norm() == 0.0);
  }

  TEST_CASE("delta_psd preserves semidefiniteness and the norm formula") {
    Rng rng(26);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = 2 + trial % 5;
      const Matrix x = random_psd(rng, n, trial % 3 == 0
                                              ? static_cast<int>(n) - 1
                                              : -1);
      const Vector u = rng.unit_vector(n);
      const Matrix delta = delta_psd(x, u);
      const Matrix moved = x + delta;
      CHECK(is_psd(moved));
      CHECK((moved * u).norm() <= 1e-12 * (1.0 + x.norm()));
      const Vector xu = x * u;
      const double uxu = u.dot(xu);
      const double tangential = (xu - uxu * u).squaredNorm();
      CHECK(delta.squaredNorm() ==
            doctest::Approx(2.0 * tangential + uxu * uxu).epsilon(1e-12));
      CHECK_FALSE(is_psd(x) == false);
    }
    CHECK_THROWS_AS(
        delta_psd((Matrix(2, 2) << 1, 0, 0, -1).finished(), Vector::Ones(2)),
        ValidationError);
  }

  TEST_CASE("build_perturbation on (0, [I, I])") {
    const StructuredTuple t(Matrix::Zero(2, 2),
                            {Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    const PerturbationSet p = build_perturbation(t, e1);
    CHECK(p.total_norm == doctest::Approx(std::sqrt(2.0)));
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = -1.0;
    CHECK((p.delta_Xs[0] - expected).norm() <= 1e-15);
    CHECK((p.delta_Xs[1] - expected).norm() <= 1e-15);
    CHECK(p.delta_J.norm() == 0.0);
  }

  TEST_CASE("build_perturbation is zero on a common kernel direction") {
    Rng rng(27);
    const StructuredTuple t = random_tuple(rng, 4, 2, 1);
    const CommonKernelReport kernel = common_kernel_check(t);
    REQUIRE(kernel.has_common_kernel);
    const PerturbationSet p = build_perturbation(t, kernel.kernel.col(0));
    CHECK(p.total_norm <= 1e-10);
  }

  TEST_CASE("perturbed tuple keeps the structure and gains the kernel") {
    Rng rng(28);
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = 2 + trial % 5;
      const StructuredTuple t = random_tuple(rng, n, 1 + trial % 3);
      const Vector u = rng.unit_vector(n);
      const PerturbationSet p = build_perturbation(t, u);
      const StructuredTuple moved = apply_perturbation(t, p);  // validates
      CHECK((moved.J() * u).norm() <= 1e-12 * (1.0 + t.J().norm()));
      for (std::size_t i = 0; i < moved.num_x(); ++i)
        CHECK((moved.X(i) * u).norm() <= 1e-12 * (1.0 + t.X(i).norm()));
      // total norm square equals the sum of the member squares
      double sq = p.delta_J.squaredNorm();
      for (const Matrix& dx : p.delta_Xs) sq += dx.squaredNorm();
      CHECK(p.total_norm * p.total_norm ==
            doctest::Approx(sq).epsilon(1e-12));
      // both readings of the skew formula are reported
      CHECK(p.skew_norm_sq_squared_form ==
            doctest::Approx(p.delta_J.squaredNorm()).epsilon(1e-10));
      CHECK(p.skew_norm_sq_printed_form ==
            doctest::Approx(2.0 * (t.J() * u).norm()).epsilon(1e-12));
    }
  }

  TEST_CASE("zero directions are rejected") {
    CHECK_THROWS_AS(delta_general(Matrix::Identity(2, 2), Vector::Zero(2)),
                    ValidationError);
    CHECK_THROWS_AS(normalize_unit(Vector::Zero(3)), ValidationError);
  }
}
