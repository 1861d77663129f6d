#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "esvd/error.hpp"
#include "esvd/givens.hpp"
#include "esvd/random.hpp"
#include "oracles.hpp"

using namespace esvd;
namespace orc = esvd::oracle;

namespace {

constexpr double kPi = std::numbers::pi;

DenseMatrix first_columns_of_identity(Eigen::Index m, Eigen::Index r) {
  return DenseMatrix::Identity(m, r);
}

double roundtrip_error(const DenseMatrix& a) {
  const AngleSet theta = givens_angles(a);
  return orc::max_abs_diff(reconstruct_orthonormal(theta).values(), a);
}

}  // namespace

TEST_CASE("compute_rotation worked examples") {
  Rotation r = compute_rotation(1.0, 0.0);
  CHECK(r.c == 1.0);
  CHECK(r.d == 0.0);
  CHECK(r.s_new == 1.0);

  r = compute_rotation(0.0, 1.0);
  CHECK(r.c == 0.0);
  CHECK(r.d == 1.0);
  CHECK(r.s_new == 1.0);
  CHECK(r.angle() == doctest::Approx(kPi / 2));

  r = compute_rotation(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  CHECK(r.c == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.d == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.s_new == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.angle() == doctest::Approx(kPi / 4).epsilon(1e-15));

  r = compute_rotation(0.0, 0.0);
  CHECK(r.c == 1.0);
  CHECK(r.d == 0.0);
  CHECK(r.s_new == 0.0);
  CHECK(r.angle() == 0.0);
}

TEST_CASE("compute_rotation keeps c^2 + d^2 = 1 and s_new >= 0") {
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const double s = rng.uniform(-3, 3);
    const double a = rng.uniform(-3, 3);
    const Rotation r = compute_rotation(s, a);
    CHECK(r.s_new >= 0.0);
    CHECK(std::abs(r.c * r.c + r.d * r.d - 1.0) <= 1e-12);
    CHECK(r.angle() > -kPi);
    CHECK(r.angle() <= kPi);
  }
}

TEST_CASE("compute_rotation rejects non-finite input") {
  try {
    compute_rotation(NAN, 1.0);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
  CHECK_THROWS_AS(compute_rotation(1.0, INFINITY), Error);
}

TEST_CASE("orthonormality_residual examples") {
  CHECK(orthonormality_residual(DenseMatrix::Identity(3, 3)) == 0.0);
  DenseMatrix a(3, 2);
  a << 1, 0, 0, 2, 0, 0;
  CHECK(orthonormality_residual(a) == 3.0);

  Rng rng(11);
  CHECK(orthonormality_residual(random_orthonormal(100, 10, rng)) <= 1e-13);

  try {
    orthonormality_residual(DenseMatrix::Zero(2, 3));
    FAIL("expected ShapeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeError);
  }
}

TEST_CASE("givens_angles of identity columns is all zeros") {
  for (Eigen::Index m = 1; m <= 6; ++m) {
    for (Eigen::Index r = 1; r <= m; ++r) {
      const AngleSet theta = givens_angles(first_columns_of_identity(m, r));
      CHECK(theta.angles.size() == angle_count(m, r));
      for (double t : theta.angles) CHECK(t == 0.0);
      CHECK_FALSE(theta.reflected);
    }
  }
}

TEST_CASE("single swap rotation") {
  DenseMatrix a(2, 1);
  a << 0, 1;
  const AngleSet theta = givens_angles(a);
  REQUIRE(theta.angles.size() == 1);
  CHECK(theta.angles[0] == doctest::Approx(kPi / 2).epsilon(1e-15));

  const DenseMatrix back = reconstruct_orthonormal(2, 1, AngleSet{2, 1, {kPi / 2}, false}).values();
  CHECK(std::abs(back(0, 0)) <= 1e-16);
  CHECK(back(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reconstruct from zero angles gives [I; 0]") {
  const DenseMatrix b = reconstruct_orthonormal(4, 2, AngleSet{4, 2, std::vector<double>(5, 0.0), false}).values();
  CHECK(b == first_columns_of_identity(4, 2));
}

TEST_CASE("random 6x3: explicit full-matrix product reaches [I3; 0]") {
  Rng rng(2022);
  const DenseMatrix a = random_orthonormal(6, 3, rng);
  const AngleSet theta = givens_angles(a);
  const DenseMatrix reduced = orc::forward_product(6, 3, theta.angles) * a;
  CHECK(orc::max_abs_diff(reduced, first_columns_of_identity(6, 3)) <= 1e-10);
}

TEST_CASE("100 random 6x3 round trips within 1e-12") {
  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    CHECK(roundtrip_error(random_orthonormal(6, 3, rng)) <= 1e-12);
  }
}

TEST_CASE("round trip over the shape grid") {
  Rng rng(5);
  for (std::size_t m = 2; m <= 12; ++m) {
    for (std::size_t r = 1; r <= m; ++r) {
      for (int rep = 0; rep < 5; ++rep) {
        CAPTURE(m);
        CAPTURE(r);
        CHECK(roundtrip_error(random_orthonormal(m, r, rng)) <= 1e-12);
      }
    }
  }
  for (std::size_t r : {1, 10, 50, 99, 100}) CHECK(roundtrip_error(random_orthonormal(100, r, rng)) <= 1e-12);
  for (std::size_t r : {1, 120, 375}) CHECK(roundtrip_error(random_orthonormal(375, r, rng)) <= 1e-12);
}

TEST_CASE("optimized sweep matches the textbook full-matrix reduction") {
  Rng rng(31);
  for (std::size_t m = 2; m <= 12; ++m) {
    for (std::size_t r = 1; r <= std::min<std::size_t>(5, m); ++r) {
      const DenseMatrix a = random_orthonormal(m, r, rng);
      const AngleSet theta = givens_angles(a);
      const std::vector<double> ref = orc::reference_angles(a);
      REQUIRE(ref.size() == theta.angles.size());
      for (std::size_t q = 0; q < ref.size(); ++q) {
        // Angles near +-pi may wrap; compare on the circle.
        const double diff = std::remainder(ref[q] - theta.angles[q], 2 * kPi);
        CHECK(std::abs(diff) <= 1e-10);
      }
      const DenseMatrix reversed = orc::reverse_product(m, r, theta.angles, theta.reflected);
      CHECK(orc::max_abs_diff(reconstruct_orthonormal(theta).values(), reversed) <= 1e-10);
    }
  }
}

TEST_CASE("intermediate blocks keep the identity/orthonormal structure") {
  Rng rng(17);
  const std::size_t m = 9;
  const std::size_t r = 4;
  const DenseMatrix a = random_orthonormal(m, r, rng);
  int calls = 0;
  givens_angles(OrthonormalColumns(a), kDefaultOrthoTol,
                [&](std::size_t k, const DenseMatrix& work) {
                  ++calls;
                  const auto done = static_cast<Eigen::Index>(k + 1);
                  CHECK(orc::max_abs_diff(work.topRows(done),
                                          DenseMatrix::Identity(m, r).topRows(done)) <= 1e-10);
                  CHECK(work.bottomLeftCorner(m - done, done).cwiseAbs().maxCoeff() <= 1e-10);
                  if (done < static_cast<Eigen::Index>(r)) {
                    const DenseMatrix trailing = work.bottomRightCorner(m - done, r - done);
                    CHECK(orthonormality_residual(trailing) <= 1e-10);
                  }
                });
  CHECK(calls == static_cast<int>(r));
}

TEST_CASE("reverse transform is orthonormal for arbitrary angles") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + rng.below(30);
    const std::size_t r = 1 + rng.below(m);
    AngleSet theta{m, r, std::vector<double>(angle_count(m, r)), false};
    for (double& x : theta.angles) x = rng.uniform(-10, 10);
    CHECK(orthonormality_residual(reconstruct_orthonormal(theta).values()) <= 1e-12);
  }
}

TEST_CASE("square factors with determinant -1 round trip through the reflection bit") {
  Rng rng(41);
  int reflected = 0;
  for (int t = 0; t < 40; ++t) {
    const DenseMatrix a = random_orthonormal(5, 5, rng);
    const AngleSet theta = givens_angles(a);
    CHECK(theta.reflected == (a.determinant() < 0));
    reflected += theta.reflected;
    CHECK(orc::max_abs_diff(reconstruct_orthonormal(theta).values(), a) <= 1e-12);
  }
  CHECK(reflected > 0);
}

TEST_CASE("zero leading entries use the explicit fallback") {
  // Column 1 = e_m: every partial norm is zero until the last row.
  DenseMatrix a = DenseMatrix::Zero(5, 2);
  a(4, 0) = 1.0;
  a(1, 1) = -1.0;
  CHECK(roundtrip_error(a) <= 1e-15);

  // Subnormal leading entries.
  DenseMatrix b = DenseMatrix::Zero(4, 2);
  b(0, 0) = 1e-310;
  b(1, 0) = 1e-310;
  b(2, 0) = 1.0;
  b(0, 1) = std::sqrt(0.5);
  b(1, 1) = -std::sqrt(0.5);
  CHECK(roundtrip_error(b) <= 1e-15);

  // Signed permutation.
  DenseMatrix p = DenseMatrix::Zero(4, 4);
  p(3, 0) = -1;
  p(0, 1) = 1;
  p(2, 2) = -1;
  p(1, 3) = 1;
  CHECK(roundtrip_error(p) <= 1e-15);
}

TEST_CASE("angle count, range and packing order") {
  Rng rng(8);
  const DenseMatrix a = random_orthonormal(7, 3, rng);
  const AngleSet theta = givens_angles(a);
  CHECK(theta.angles.size() == 7 * 3 - 3 * 4 / 2);
  for (double t : theta.angles) {
    CHECK(t > -kPi);
    CHECK(t <= kPi);
  }
}

TEST_CASE("error paths") {
  DenseMatrix not_ortho(3, 2);
  not_ortho << 1, 0, 0, 2, 0, 0;
  try {
    givens_angles(not_ortho);
    FAIL("expected OrthonormalityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrthonormalityViolation);
  }
  try {
    reconstruct_orthonormal(4, 2, AngleSet{4, 2, std::vector<double>(4, 0.0), false});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  try {
    reconstruct_orthonormal(4, 2, AngleSet{4, 2, {0, 0, NAN, 0, 0}, false});
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
  CHECK_THROWS_AS(reconstruct_orthonormal(5, 2, AngleSet{4, 2, std::vector<double>(5, 0.0), false}), Error);
}

TEST_CASE("forward sweep time grows about linearly in m at fixed r") {
  // Soft check: best-of-five timings, r = 50.
  Rng rng(123);
  auto best_time = [&](std::size_t m) {
    const OrthonormalColumns a(random_orthonormal(m, 50, rng));
    double best = 1e9;
    for (int t = 0; t < 5; ++t) {
      const auto start = std::chrono::steady_clock::now();
      const AngleSet theta = givens_angles(a);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      CHECK(theta.angles.size() == angle_count(m, 50));
      best = std::min(best, dt.count());
    }
    return best;
  };
  const double t1 = best_time(2000);
  const double t2 = best_time(4000);
  const double ratio = t2 / t1;
  MESSAGE("time ratio m=4000/m=2000: " << ratio);
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.6);
}
