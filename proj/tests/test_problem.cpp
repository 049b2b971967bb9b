#include "vhi/examples.hpp"
#include "vhi/problem.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace vhi;

namespace {

VhiProblem box_problem(const Vector& f) {
  const int n = static_cast<int>(f.size());
  return VhiProblem("box", n, ConstraintSet::box(std::vector<double>(n, -1.0), std::vector<double>(n, 1.0)),
                    OperatorA::scaled_identity(1.0), BiFunctional::zero(n), zero_functional(n), f);
}

}  // namespace

TEST_SUITE("problem") {
  TEST_CASE("constraint sets") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto K = ConstraintSet::box({-1.0, 0.0}, {1.0, inf}, 5.0);
    CHECK(K.contains(make_vector({0.5, 100.0})));
    CHECK_FALSE(K.contains(make_vector({0.5, -0.1})));
    const Vector p = K.project(make_vector({3.0, -2.0}));
    CHECK(p(0) == 1.0);
    CHECK(p(1) == 0.0);
    const auto pts = K.sample_feasible(300, 4);
    CHECK(pts.size() == 300);
    for (const auto& x : pts) {
      CHECK(K.contains(x));
      CHECK(x(1) <= 5.0);
    }
    CHECK(K.sample_feasible(300, 4) == pts);
    const auto W = ConstraintSet::whole_space(3);
    CHECK(W.is_whole_space);
    CHECK(W.contains(make_vector({1e9, -1e9, 0.0})));
  }

  TEST_CASE("operators and bifunctionals") {
    const auto I2 = OperatorA::scaled_identity(2.0);
    CHECK(I2.apply(make_vector({1.5}))(0) == 3.0);
    CHECK(*I2.m_A == 2.0);
    Matrix M(2, 2);
    M << 3.0, 1.0, 1.0, 2.0;
    const auto A = OperatorA::linear(M, 0.5 * (5.0 - std::sqrt(5.0)));
    CHECK(A.lipschitz.value() == doctest::Approx(0.5 * (5.0 + std::sqrt(5.0))));
    const auto pairs = random_pairs(2, 2000, 3.0, 9);
    const double m = sampled_monotonicity_constant(A, pairs);
    CHECK(m >= *A.m_A - 1e-12);
    CHECK(m <= *A.m_A + 0.02);
    const double L = sampled_lipschitz_constant(A.apply, pairs);
    CHECK(L <= *A.lipschitz + 1e-12);
    CHECK(L >= *A.lipschitz - 0.02);

    const auto phi = BiFunctional::linear_pairing([](const Vector& u) { return (0.3 * u).eval(); }, 2);
    std::vector<std::array<Vector, 4>> quads;
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2)
      quads.push_back({pairs[i].first, pairs[i].second, pairs[i + 1].first, pairs[i + 1].second});
    const double a = sampled_alpha_phi(phi, quads);
    CHECK(a <= 0.3 + 1e-12);
    CHECK(a >= 0.29);
    CHECK(midpoint_convexity_defect(phi, make_vector({1.0, 1.0}), pairs) <= 1e-12);

    BiFunctional concave = BiFunctional::zero(1);
    concave.value = [](const Vector&, const Vector& v) { return -v.squaredNorm(); };
    CHECK(midpoint_convexity_defect(concave, make_vector({0.0}), random_pairs(1, 50, 1.0, 2)) > 0.0);
  }

  TEST_CASE("gap follows its definition") {
    const auto p = examples::example1_problem(1.0);
    const Vector u = make_vector({0.5});
    for (double v : {-3.0, 0.0, 0.49, 0.51, 2.0, 7.0}) {
      const Vector V = make_vector({v});
      const double expected = (0.5 - 1.0) * (v - 0.5) + p.j().clarke_dd(u, V - u);
      CHECK(gap(p, u, V) == doctest::Approx(expected));
      CHECK(gap(p, u, V) >= -1e-15);
    }
    const auto b = box_problem(make_vector({3.0, 0.0}));
    CHECK_THROWS_AS(gap(b, make_vector({2.0, 0.0}), make_vector({0.0, 0.0})), InfeasiblePointError);
    CHECK_THROWS_AS(gap(b, make_vector({1.0}), make_vector({0.0})), DimensionError);
  }

  TEST_CASE("smallness margin and selection residual") {
    CHECK(smallness_margin(examples::example1_problem(1.0)).value() == doctest::Approx(0.0));
    CHECK(smallness_margin(examples::example1_problem(1.0, 2.0)).value() == doctest::Approx(1.0));
    CHECK(smallness_margin(examples::example2_problem(1.0)).value() == doctest::Approx(-1.0));
    auto b = box_problem(make_vector({0.2}));
    CHECK(smallness_margin(b).value() == doctest::Approx(1.0));
    OperatorA undeclared;
    undeclared.apply = [](const Vector& u) { return u; };
    const VhiProblem q("q", 1, ConstraintSet::whole_space(1), undeclared, BiFunctional::zero(1), zero_functional(1),
                       make_vector({0.0}));
    CHECK_FALSE(smallness_margin(q).has_value());
    const auto e1 = examples::example1_problem(3.0);
    CHECK(selection_residual_vector(e1, make_vector({0.5}))(0) == doctest::Approx(0.5 + 0.5 - 3.0));
    LipschitzFunctional nosel = zero_functional(1);
    nosel.subgradient = nullptr;
    CHECK_THROWS_AS(selection_residual_vector(q.with_j(nosel), make_vector({0.0})), std::logic_error);
  }

  TEST_CASE("derived problems keep or drop hooks") {
    const auto p = examples::example1_problem(2.0);
    REQUIRE(p.closed_form_omega());
    const auto q = p.with_f(make_vector({3.0}));
    CHECK(q.f()(0) == 3.0);
    CHECK(q.closed_form_omega());
    const auto r = p.with_j(zero_functional(1));
    CHECK_FALSE(r.closed_form_omega());
    CHECK(p.with_name("renamed").name() == "renamed");
    CHECK_THROWS_AS((void)p.with_f(make_vector({1.0, 2.0})), DimensionError);
  }
}
