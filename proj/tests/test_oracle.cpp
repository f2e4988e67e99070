#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wrof/instances.hpp"
#include "wrof/oracle.hpp"
#include "wrof/wrof.hpp"

using namespace wrof;
using test::dirac1d;
using test::measure1d;

TEST_CASE("brute force on a single far pair") {
  CHECK(brute_force_wrof(dirac1d(0.0), dirac1d(3.0), 1.0) ==
        doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("brute force on identical measures") {
  DiscreteMeasure m = measure1d({0.0, 1.0, 2.0}, {0.2, 0.3, 0.5});
  CHECK(brute_force_wrof(m, m, 0.5) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("brute force matches the huber transport value") {
  DiscreteMeasure mu = measure1d({0.0, 1.0}, {0.5, 0.5});
  DiscreteMeasure nu = measure1d({2.0, 3.0}, {0.5, 0.5});
  const double huber = solve_transport(mu, nu, CostKind::huber(1.0)).value;
  CHECK(brute_force_wrof(mu, nu, 1.0) == doctest::Approx(huber).epsilon(1e-9));
}

TEST_CASE("candidate augmentation does not improve the optimum") {
  for (std::uint64_t i = 0; i < 6; ++i) {
    RandomInstance inst = make_instance(601, i, {4, 2, 0.1, 0.8});
    const double base = brute_force_wrof(inst.mu, inst.nu, inst.lambda);
    const double augmented =
        brute_force_wrof_augmented(inst.mu, inst.nu, inst.lambda, 10, 600 + i);
    CHECK(base - augmented <= 1e-9);
  }
}

TEST_CASE("enumerate transport: uniform permutation case") {
  DiscreteMeasure mu = measure1d({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  DiscreteMeasure nu = measure1d({0.5, 1.5, 2.5}, {1.0, 1.0, 1.0});
  for (CostKind kind : {CostKind::quadratic(), CostKind::euclidean(), CostKind::huber(0.7)}) {
    const double exact = enumerate_transport(mu, nu, kind);
    CHECK(solve_transport(mu, nu, kind).value == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("enumerate transport: generic basis enumeration") {
  DiscreteMeasure mu = measure1d({0.0, 0.7, 1.4}, {0.2, 0.5, 0.3});
  DiscreteMeasure nu = measure1d({0.3, 1.0, 1.9, 2.4}, {0.25, 0.25, 0.25, 0.25});
  for (CostKind kind : {CostKind::quadratic(), CostKind::euclidean(), CostKind::huber(0.5)}) {
    const double exact = enumerate_transport(mu, nu, kind);
    CHECK(std::abs(solve_transport(mu, nu, kind).value - exact) <= 1e-9);
  }
}

TEST_CASE("enumerate transport: single coupling") {
  CHECK(enumerate_transport(dirac1d(0.0), dirac1d(3.0), CostKind::huber(1.0)) ==
        doctest::Approx(2.5));
}

TEST_CASE("budget limits") {
  RandomInstance inst = make_instance(3, 0, {30, 1, 0.1, 0.5});
  if (inst.mu.size() * inst.nu.size() > 12)
    CHECK_THROWS_AS(enumerate_transport(inst.mu, inst.nu, CostKind::quadratic()), Error);
  PointMatrix big(200, 1);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(200);
  for (int i = 0; i < 200; ++i) big(i, 0) = static_cast<double>(i);
  DiscreteMeasure large(big, w);
  CHECK_THROWS_AS(brute_force_wrof(large, large, 0.5), Error);
}

TEST_CASE("oracle certifies the main solver on random instances") {
  for (std::uint64_t i = 0; i < 8; ++i) {
    RandomInstance inst = make_instance(701, i, {5, 3, 0.1, 0.9});
    WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
    OracleReport report =
        certify_wrof("t" + std::to_string(i), inst.mu, inst.nu, inst.lambda, sol.value);
    CHECK(report.certified());
    CHECK(report.candidate_support_size > 0);
  }
}

TEST_CASE("oracle is deterministic") {
  RandomInstance inst = make_instance(801, 0, {4, 2, 0.1, 0.8});
  const double a = brute_force_wrof(inst.mu, inst.nu, inst.lambda);
  const double b = brute_force_wrof(inst.mu, inst.nu, inst.lambda);
  CHECK(a == b);
}
