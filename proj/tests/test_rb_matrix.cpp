#include <doctest.h>

#include <complex>
#include <random>

#include "nrbmf/rb_matrix.hpp"
#include "oracles.hpp"

using namespace nrbmf;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using oracle::random_rb;
using oracle::rel_diff;

namespace {

RBMatrix scalar(double q0, double q1, double q2, double q3) {
  MatrixXd a(1, 1), b(1, 1), c(1, 1), d(1, 1);
  a << q0;
  b << q1;
  c << q2;
  d << q3;
  return RBMatrix(a, b, c, d);
}

}  // namespace

TEST_CASE("construction validates shapes and values") {
  CHECK_THROWS_AS(RBMatrix(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 3),
                           MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2)),
                  ShapeError);
  MatrixXd bad = MatrixXd::Zero(2, 2);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(RBMatrix(bad, MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2),
                           MatrixXd::Zero(2, 2)),
                  NonFiniteError);
  const RBMatrix z(3, 4);
  CHECK(z.rows() == 3);
  CHECK(z.cols() == 4);
  CHECK(fro_norm(z) == 0.0);
  CHECK(scalar(1, 2, 3, 4)(0, 0) == RBScalar(1, 2, 3, 4));
}

TEST_CASE("transpose, conjugate, Hermitian") {
  CHECK(hermitian(scalar(1, 2, 3, 4)) == scalar(1, -2, 3, -4));
  std::mt19937_64 rng(1);
  const RBMatrix a = random_rb(3, 2, rng);
  CHECK(transpose(transpose(a)) == a);
  const RBMatrix b = random_rb(4, 3, rng);
  CHECK(hermitian(hermitian(b)) == b);
  CHECK(conj(b).q1() == -b.q1());
  CHECK(conj(b).q2() == b.q2());
  CHECK(hermitian(b).rows() == 3);
}

TEST_CASE("products") {
  std::mt19937_64 rng(2);
  const RBMatrix b = random_rb(2, 3, rng);
  CHECK(rel_diff(multiply(RBMatrix::identity(2), b), b) == 0.0);
  CHECK(multiply(scalar(0, 1, 0, 0), scalar(0, 0, 1, 0)) == scalar(0, 0, 0, 1));
  CHECK_THROWS_AS(multiply(random_rb(2, 3, rng), random_rb(2, 3, rng)),
                  ShapeError);

  const RBMatrix a = random_rb(5, 4, rng), c = random_rb(4, 3, rng);
  const RBMatrix ref = oracle::naive_mul(a, c);
  for (auto route : {MulRoute::kDirect, MulRoute::kE1E2, MulRoute::kAuto}) {
    CHECK(rel_diff(multiply(a, c, route), ref) <= 1e-12);
  }
}

TEST_CASE("routes agree across shapes") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Index> dim(1, 20);
  for (int t = 0; t < 50; ++t) {
    const Index m = dim(rng), l = dim(rng), n = dim(rng);
    const RBMatrix a = random_rb(m, l, rng), b = random_rb(l, n, rng);
    const RBMatrix d = multiply(a, b, MulRoute::kDirect);
    CHECK(rel_diff(multiply(a, b, MulRoute::kE1E2), d) <= 1e-10);
    CHECK(rel_diff(d, oracle::naive_mul(a, b)) <= 1e-12);
  }
}

TEST_CASE("product identities") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const RBMatrix a = random_rb(4, 3, rng), b = random_rb(3, 5, rng),
                   c = random_rb(5, 2, rng);
    CHECK(rel_diff(hermitian(multiply(a, b)),
                   multiply(hermitian(b), hermitian(a))) <= 1e-12);
    CHECK(rel_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) <=
          1e-10);
  }
}

TEST_CASE("non-negative structured products are exactly non-negative") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const RBMatrix w = oracle::random_nonneg(30, 12, rng);
    const RBMatrix h = oracle::random_nonneg_j(12, 25, rng);
    const RBMatrix p = multiply(w, h);
    for (int s = 0; s < 4; ++s) CHECK(p.block(s).minCoeff() >= 0.0);
  }
}

TEST_CASE("inner product and norm") {
  CHECK(fro_norm(RBMatrix(2, 2)) == 0.0);
  CHECK(fro_norm(scalar(1, 2, 3, 4)) == doctest::Approx(std::sqrt(30.0)));
  std::mt19937_64 rng(6);
  const RBMatrix q = random_rb(3, 3, rng), p = random_rb(3, 3, rng);
  double sum_sq = 0.0;
  for (Index r = 0; r < 3; ++r) {
    for (Index c = 0; c < 3; ++c) sum_sq += std::pow(modulus(q(r, c)), 2);
  }
  CHECK(std::abs(inner(q, q).real() - sum_sq) <= 1e-12 * sum_sq);
  CHECK(std::abs(fro_norm(q) * fro_norm(q) -
                 (q.q0().squaredNorm() + q.q1().squaredNorm() +
                  q.q2().squaredNorm() + q.q3().squaredNorm())) <= 1e-12 * sum_sq);

  // <Q, P> as the entrywise sum of conj(q) p
  RBScalar ref;
  for (Index r = 0; r < 3; ++r) {
    for (Index c = 0; c < 3; ++c) ref += conj(q(r, c)) * p(r, c);
  }
  const RBScalar got = inner(q, p);
  CHECK(modulus(got - ref) <= 1e-12 * std::max(1.0, modulus(ref)));
  CHECK(re_inner(q, p) == doctest::Approx(ref.real()).epsilon(1e-12));
  CHECK_THROWS_AS(inner(q, random_rb(3, 2, rng)), ShapeError);
}

TEST_CASE("vectorization") {
  MatrixXd q0(2, 2);
  q0 << 1, 3, 2, 4;
  const RBMatrix v = vec(RBMatrix::from_real(q0));
  REQUIRE(v.rows() == 4);
  REQUIRE(v.cols() == 1);
  for (int i = 0; i < 4; ++i) CHECK(v.q0()(i, 0) == i + 1);

  std::mt19937_64 rng(7);
  const RBMatrix row = random_rb(1, 5, rng);
  CHECK(vec(row) == transpose(row));
  const RBMatrix q = random_rb(3, 4, rng);
  CHECK(unvec(vec(q), 3, 4) == q);
  CHECK_THROWS_AS(unvec(vec(q), 5, 4), ShapeError);

  const RBMatrix parts[] = {column(q, 0), column(q, 1), column(q, 2),
                            column(q, 3)};
  CHECK(hstack(parts) == q);
}

TEST_CASE("e1-e2 matrix form") {
  std::mt19937_64 rng(8);
  const RBMatrix q = random_rb(3, 2, rng);
  const E1E2Matrix e = to_e1e2(q);
  CHECK(e.m1.real() == q.q0() + q.q2());
  CHECK(e.m1.imag() == q.q1() + q.q3());
  CHECK(e.m2.real() == q.q0() - q.q2());
  CHECK(e.m2.imag() == q.q1() - q.q3());
  CHECK(rel_diff(from_e1e2(e), q) <= 1e-15);
}

TEST_CASE("inverse") {
  CHECK(inverse(RBMatrix::identity(3)) == RBMatrix::identity(3));
  CHECK(inverse(scalar(2, 0, 0, 0)) == scalar(0.5, 0, 0, 0));
  try {
    inverse(scalar(0.5, 0, 0.5, 0));
    FAIL("expected SingularComponentError");
  } catch (const SingularComponentError& e) {
    CHECK(e.component() == 2);
  }
  try {
    inverse(scalar(0.5, 0, -0.5, 0));
    FAIL("expected SingularComponentError");
  } catch (const SingularComponentError& e) {
    CHECK(e.component() == 1);
  }
  CHECK_THROWS_AS(inverse(RBMatrix(2, 3)), ShapeError);

  std::mt19937_64 rng(9);
  int tested = 0;
  while (tested < 20) {
    const RBMatrix a = random_rb(5, 5, rng);
    if (cond(a).max() > 1e6) continue;
    ++tested;
    const RBMatrix prod = multiply(a, inverse(a));
    CHECK(fro_norm(prod - RBMatrix::identity(5)) <= 1e-8);
  }
}

TEST_CASE("condition numbers") {
  auto c = cond(RBMatrix::identity(4));
  CHECK(c.m1 == doctest::Approx(1.0));
  CHECK(c.m2 == doctest::Approx(1.0));
  c = cond(scalar(2, 0, 0, 0));
  CHECK(c.m1 == doctest::Approx(1.0));
  CHECK(c.m2 == doctest::Approx(1.0));

  // components with singular values {10, 1} and {3, 0.3}
  E1E2Matrix e;
  e.m1 = MatrixXcd::Zero(2, 2);
  e.m2 = MatrixXcd::Zero(2, 2);
  e.m1(0, 0) = {0, 10};
  e.m1(1, 1) = {1, 0};
  e.m2(0, 0) = {3, 0};
  e.m2(1, 1) = {0, -0.3};
  c = cond(from_e1e2(e));
  CHECK(c.m1 == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(c.m2 == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(c.max() == doctest::Approx(10.0).epsilon(1e-12));

  CHECK(cond(scalar(0.5, 0, 0.5, 0)).m2 == std::numeric_limits<double>::infinity());
}
