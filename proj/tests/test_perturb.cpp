#include "vhi/examples.hpp"
#include "vhi/perturb.hpp"
#include "vhi/solvers.hpp"

#include <doctest.h>

#include <cmath>

using namespace vhi;

namespace {

VhiProblem identity_problem(const Vector& f) {
  const int n = static_cast<int>(f.size());
  return VhiProblem("identity", n, ConstraintSet::whole_space(n), OperatorA::scaled_identity(1.0),
                    BiFunctional::zero(n), zero_functional(n), f);
}

LipschitzFunctional scaled_half_square(double c) {
  LipschitzFunctional j = half_squared_norm(1);
  j.value = [c](const Vector& u) { return 0.5 * c * u.squaredNorm(); };
  j.clarke_dd = [c](const Vector& u, const Vector& v) { return c * inner(u, v); };
  j.subgradient = [c](const Vector& u) { return (c * u).eval(); };
  return j;
}

}  // namespace

TEST_SUITE("perturb") {
  TEST_CASE("load schedules") {
    const auto base = identity_problem(make_vector({1.0, 1.0}));
    const auto s = load_schedule(base, {make_vector({2.0, 1.0}), make_vector({1.0, 1.5})});
    CHECK(s.steps() == 2);
    CHECK(s.df(0) == 1.0);
    CHECK(epsilon_of_step(s, 1) == 0.5);
    CHECK_THROWS_AS(epsilon_of_step(s, 2), std::out_of_range);
    CHECK_NOTHROW(verify_schedule(s));
  }

  TEST_CASE("declared bounds are checked") {
    const auto base = identity_problem(make_vector({0.0}));
    // j_n = 0.05 u^2 shifts j0(u; v - u) by 0.1 u (v - u), at most |v - u| on the sampling box [-10, 10].
    const auto under = make_schedule(base, {}, {scaled_half_square(0.1)}, {make_vector({0.0})}, {0.0}, {0.5});
    CHECK_THROWS_AS(verify_schedule(under), ScheduleViolation);
    const auto over = make_schedule(base, {}, {scaled_half_square(0.1)}, {make_vector({0.0})}, {0.0}, {1.0});
    CHECK_NOTHROW(verify_schedule(over));
  }

  TEST_CASE("identity equation converges at the certified rate") {
    const auto base = identity_problem(make_vector({1.0, -1.0, 2.0}));
    std::vector<Vector> fs;
    for (int n = 0; n < 8; ++n) fs.push_back(base.f() + std::ldexp(1.0, -n) * make_vector({0.6, 0.0, 0.8}));
    const auto t = perturbation_experiment(load_schedule(base, fs), monotone_point_solver());
    CHECK(t.pass);
    CHECK(t.monotone);
    for (const auto& r : t.rows) {
      CHECK(r.pass);
      CHECK(r.error == doctest::Approx(r.df_n).epsilon(1e-9));
      CHECK(r.bound.value() == doctest::Approx(r.eps_n));
    }
    CHECK((t.reference - base.f()).norm() < 1e-10);
  }

  TEST_CASE("sequence errors") {
    ApproxSequence seq{{0.1, 0.01}, {make_vector({1.0, 0.0}), make_vector({0.0, 0.0})}};
    const auto e = sequence_errors(seq, make_vector({0.0, 0.0}));
    CHECK(e == std::vector<double>{1.0, 0.0});
  }

  TEST_CASE("solution map moduli") {
    const auto family1 = [](const Vector& f) { return examples::example1_problem(f(0)); };
    std::vector<Vector> away;
    for (double f : {-1.0, 0.0, 1.0, 1.5, 4.5, 6.0}) away.push_back(make_vector({f}));
    const auto t = solution_map_probe(family1, away, grid_point_solver(-10, 10, 1e-3));
    for (const auto& r : t.rows) CHECK(r.modulus == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(t.lipschitz_bound.has_value());

    const auto family2 = [](const Vector& f) { return examples::example1_problem(f(0), 2.0); };
    std::vector<Vector> grid;
    for (double f = -2.0; f <= 8.0; f += 0.5) grid.push_back(make_vector({f}));
    const auto m = solution_map_probe(family2, grid, grid_point_solver(-10, 10, 1e-3));
    CHECK(m.lipschitz_bound.value() == doctest::Approx(1.0));
    CHECK(m.within_bound);
    CHECK(m.max_modulus <= 1.0 + 1e-6);
    CHECK(m.max_modulus >= 0.99);  // slope 1 on [3, 4]
  }
}
