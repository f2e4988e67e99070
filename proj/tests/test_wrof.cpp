#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wrof/instances.hpp"
#include "wrof/wrof.hpp"

using namespace wrof;
using test::dirac1d;
using test::measure1d;
using test::row1;

TEST_CASE("soft thresholding") {
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
  CHECK(soft_threshold(2.0, 1.0) == 1.0);
  CHECK(soft_threshold(-2.0, 1.0) == -1.0);
  CHECK(soft_threshold(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(soft_threshold(1.0, 0.0), Error);
}

TEST_CASE("threshold displacement") {
  CHECK(threshold_displacement(row1(0.0), row1(3.0), 1.0)[0] == doctest::Approx(1.0));
  CHECK(threshold_displacement(row1(0.0), row1(0.4), 1.0)[0] == 0.4);
  CHECK(threshold_displacement(row1(2.0), row1(2.0), 1.0)[0] == 2.0);
  // |result − x| = min(λ, |x−y|)
  Eigen::RowVectorXd x(2), y(2);
  x << 0.0, 0.0;
  y << 3.0, 4.0;
  Eigen::RowVectorXd z = threshold_displacement(x, y, 2.0);
  CHECK((z - x).norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((z - x).normalized().dot((y - x).normalized()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(threshold_displacement(row1(0.0), row1(1.0), -1.0), Error);
}

TEST_CASE("wrof on a single far pair") {
  WrofSolution sol = solve_wrof(dirac1d(0.0), dirac1d(3.0), 1.0);
  REQUIRE(sol.rho.size() == 1);
  CHECK(sol.rho.points()(0, 0) == doctest::Approx(1.0));
  CHECK(sol.w2sq_mu_rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.w1_rho_nu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sol.divergence == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.max_displacement == doctest::Approx(1.0));
}

TEST_CASE("wrof identity and near branch") {
  DiscreteMeasure m = measure1d({0.0, 1.0}, {0.5, 0.5});
  WrofSolution same = solve_wrof(m, m, 0.3);
  CHECK(same.rho == m);
  CHECK(same.value == doctest::Approx(0.0));
  CHECK(same.divergence == doctest::Approx(0.0).epsilon(1e-12));

  WrofSolution near = solve_wrof(dirac1d(0.0), dirac1d(0.5), 1.0);
  CHECK(near.rho == dirac1d(0.5));
  CHECK(near.value == doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(solve_wrof(m, m, 0.0), Error);
}

TEST_CASE("sandwich bounds") {
  WrofSolution sol = solve_wrof(dirac1d(0.0), dirac1d(3.0), 1.0);
  auto [upper, lower] = sandwich_bounds(sol, dirac1d(0.0), dirac1d(3.0));
  CHECK(upper == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lower == doctest::Approx(2.0).epsilon(1e-14));

  DiscreteMeasure m = measure1d({0.0, 1.0}, {0.5, 0.5});
  WrofSolution same = solve_wrof(m, m, 1.0);
  auto [u0, l0] = sandwich_bounds(same, m, m);
  CHECK(u0 == 0.0);
  CHECK(l0 == 0.0);

  for (std::uint64_t i = 0; i < 10; ++i) {
    RandomInstance inst = make_instance(31, i, {5, 1, 0.1, 0.6});
    WrofSolution s = solve_wrof(inst.mu, inst.nu, inst.lambda);
    auto [u, l] = sandwich_bounds(s, inst.mu, inst.nu);
    CHECK(u + 1e-8 >= s.divergence);
    CHECK(s.divergence >= l - 1e-8);
  }
}

TEST_CASE("ball membership") {
  DiscreteMeasure m = measure1d({0.0, 2.0}, {0.5, 0.5});
  CHECK(in_ball(m, m, 0.5));
  CHECK_FALSE(in_ball(dirac1d(0.0), dirac1d(3.0), 1.0));
  for (std::uint64_t i = 0; i < 10; ++i) {
    RandomInstance inst = make_instance(99, i, {8, 2, 0.1, 0.8});
    WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
    CHECK(in_ball(inst.mu, sol.rho, inst.lambda));
  }
}

TEST_CASE("split masses") {
  auto huber_split = [](const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
    TransportPlan plan = solve_transport(mu, nu, CostKind::huber(lambda));
    return split_masses(plan, mu, nu, lambda);
  };
  SplitMasses far = huber_split(dirac1d(0.0), dirac1d(3.0), 1.0);
  CHECK(far.mass_small == 0.0);
  CHECK(far.mass_large == doctest::Approx(1.0));

  DiscreteMeasure m = measure1d({0.0, 1.0}, {0.5, 0.5});
  SplitMasses same = huber_split(m, m, 1.0);
  CHECK(same.mass_small == doctest::Approx(1.0));
  CHECK(same.mass_large == 0.0);

  SplitMasses near = huber_split(measure1d({0.0, 5.0}, {0.5, 0.5}),
                                 measure1d({0.2, 5.0}, {0.5, 0.5}), 1.0);
  CHECK(near.mass_small == doctest::Approx(1.0));
  CHECK(near.mass_large == 0.0);

  TransportPlan quad = solve_transport(m, m, CostKind::quadratic());
  CHECK_THROWS_AS(split_masses(quad, m, m, 1.0), Error);
}

TEST_CASE("decomposition on a single far pair") {
  TransportDecomposition d = decompose(dirac1d(0.0), dirac1d(3.0), 1.0);
  REQUIRE(d.s0.entries.size() == 1);
  CHECK(d.s0.source_points(0, 0) == 3.0);
  CHECK(d.s0.target_points(0, 0) == 0.0);
  CHECK(d.s_lambda.target_points(0, 0) == doctest::Approx(1.0));
  CHECK(d.t_inv.target_points(0, 0) == 0.0);
  // composition reproduces S0 entrywise
  for (size_t e = 0; e < d.s0.entries.size(); ++e) {
    CHECK(d.s_lambda.entries[e].source == d.s0.entries[e].source);
    CHECK(d.t_inv.entries[e].target == d.s0.entries[e].target);
    CHECK(d.s_lambda.entries[e].mass == d.s0.entries[e].mass);
  }
}

TEST_CASE("decomposition identity and near branch") {
  DiscreteMeasure m = measure1d({0.0, 1.0}, {0.5, 0.5});
  TransportDecomposition same = decompose(m, m, 1.0);
  for (size_t e = 0; e < same.s0.entries.size(); ++e) {
    const PlanEntry& sl = same.s_lambda.entries[e];
    CHECK((same.s_lambda.target_points.row(sl.target) -
           same.s_lambda.source_points.row(sl.source))
              .norm() == 0.0);
  }
  TransportDecomposition near = decompose(dirac1d(0.0), dirac1d(0.5), 1.0);
  CHECK(near.s_lambda.target_points(0, 0) == 0.5);  // s_1(0.5) = 0: ν stays put
  CHECK(near.t_inv.target_points(0, 0) == 0.0);
}

TEST_CASE("soft-threshold consistency of the decomposition") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    RandomInstance inst = make_instance(13, i, {8, 3, 0.1, 0.8});
    TransportDecomposition d = decompose(inst.mu, inst.nu, inst.lambda);
    DiscreteMeasure rho = solve_wrof(inst.mu, inst.nu, inst.lambda).rho;
    PointMatrix pts = d.s_lambda.target_points;
    Eigen::VectorXd w(static_cast<Eigen::Index>(d.s_lambda.entries.size()));
    for (size_t e = 0; e < d.s_lambda.entries.size(); ++e) {
      const PlanEntry& sl = d.s_lambda.entries[e];
      const PlanEntry& s0 = d.s0.entries[e];
      const double move = (d.s_lambda.target_points.row(sl.target) -
                           d.s_lambda.source_points.row(sl.source))
                              .norm();
      const double s0_move = (d.s0.target_points.row(s0.target) -
                              d.s0.source_points.row(s0.source))
                                 .norm();
      CHECK(move == doctest::Approx(soft_threshold(s0_move, inst.lambda)).epsilon(1e-12));
      w[static_cast<Eigen::Index>(e)] = sl.mass;
    }
    // target marginal of S_λ is ρ
    CHECK(w1(DiscreteMeasure(pts, w), rho) <= 1e-9);
  }
}

TEST_CASE("restore point") {
  PointMatrix grid(4, 1);
  grid << 0.0, 1.0, 2.0, 3.0;
  SUBCASE("zero potential gives nearest grid point") {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(4);
    CHECK(restore_point(row1(1.9), phi, grid)[0] == 2.0);
  }
  SUBCASE("linear potential of slope lambda steps by lambda") {
    Eigen::VectorXd phi(4);
    phi << 0.0, 1.0, 2.0, 3.0;
    Eigen::Index arg = -1;
    CHECK(restore_point(row1(0.0), phi, grid, &arg)[0] == 1.0);
    CHECK(arg == 1);
  }
  SUBCASE("single point grid") {
    PointMatrix one(1, 1);
    one << 7.0;
    CHECK(restore_point(row1(0.0), Eigen::VectorXd::Zero(1), one)[0] == 7.0);
  }
  SUBCASE("empty grid") {
    PointMatrix none(0, 1);
    CHECK_THROWS_AS(restore_point(row1(0.0), Eigen::VectorXd(), none), Error);
  }
}

TEST_CASE("value identity against the huber transport cost") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    RandomInstance inst = make_instance(7, i, {15, 3, 0.05, 1.0});
    WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
    CHECK(std::abs(sol.value - sol.huber_plan.value) <=
          1e-8 * (1.0 + std::abs(sol.huber_plan.value)));
    CHECK(sol.max_displacement <= inst.lambda + 1e-9);
    CHECK(sol.divergence >= -1e-9);
  }
}

TEST_CASE("huber transport cost is nondecreasing in lambda") {
  for (std::uint64_t i = 0; i < 5; ++i) {
    RandomInstance inst = make_instance(55, i, {10, 2, 0.1, 1.0});
    double prev = 0.0;
    for (double lambda : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
      const double val = solve_transport(inst.mu, inst.nu, CostKind::huber(lambda)).value;
      CHECK(val >= prev - 1e-10);
      prev = val;
    }
  }
}

TEST_CASE("extremality of the dual potential") {
  // ⟨φ_λ, ν − ρ_λ⟩ = λW₁(ρ_λ, ν), with φ_λ extended by double c-transform.
  for (std::uint64_t i = 0; i < 12; ++i) {
    RandomInstance inst = make_instance(201, i, {10, 2, 0.1, 0.8});
    WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
    const CostKind kind = CostKind::huber(inst.lambda);
    Eigen::VectorXd phi_mu =
        c_transform(sol.huber_plan.target_potential, kind, inst.mu.points(), inst.nu.points());
    Eigen::VectorXd phi_on_nu = c_transform(phi_mu, kind, inst.nu.points(), inst.mu.points());
    Eigen::VectorXd phi_on_rho = c_transform(phi_mu, kind, sol.rho.points(), inst.mu.points());
    const double pairing = phi_on_nu.dot(inst.nu.weights()) - phi_on_rho.dot(sol.rho.weights());
    CHECK(std::abs(pairing - inst.lambda * sol.w1_rho_nu) <= 1e-6);
  }
}

TEST_CASE("explicit and implicit Euler coincide on separated clusters") {
  for (std::uint64_t i = 0; i < 8; ++i) {
    RandomInstance inst = make_separated_cluster_instance(17, i, 4, 0.25);
    WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
    // explicit step: move each μ atom by exactly λ along its W₁ pairing
    TransportPlan w1_plan = solve_transport(inst.mu, inst.nu, CostKind::euclidean());
    PointMatrix pts(static_cast<Eigen::Index>(w1_plan.entries.size()), inst.mu.dim());
    Eigen::VectorXd w(static_cast<Eigen::Index>(w1_plan.entries.size()));
    for (size_t e = 0; e < w1_plan.entries.size(); ++e) {
      const PlanEntry& p = w1_plan.entries[e];
      const Eigen::RowVectorXd x = inst.mu.point(p.source);
      const Eigen::RowVectorXd y = inst.nu.point(p.target);
      pts.row(static_cast<Eigen::Index>(e)) =
          x + inst.lambda * (y - x).normalized();
      w[static_cast<Eigen::Index>(e)] = p.mass;
    }
    const double dist = std::sqrt(w2_squared(DiscreteMeasure(pts, w), sol.rho));
    CHECK(dist <= 1e-9);
  }
}
