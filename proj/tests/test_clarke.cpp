#include "vhi/clarke.hpp"
#include "vhi/examples.hpp"
#include "vhi/problem.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace vhi;

namespace {

std::vector<CalculusSample> sample_points(int dim, std::size_t count, double radius, std::uint64_t seed) {
  std::vector<CalculusSample> out;
  const auto pairs = random_pairs(dim, count, radius, seed);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.push_back({pairs[i].first, pairs[i].second, 0.25 + static_cast<double>(i % 7)});
  return out;
}

}  // namespace

TEST_SUITE("clarke") {
  TEST_CASE("analytic directional derivatives match difference quotients") {
    const auto e1 = examples::ex1_functional();
    const auto e2 = examples::ex2_functional();
    for (double u : {-1.3, 0.0, 0.7, 1.0, 1.5, 2.0, 2.001, 3.2}) {
      for (double v : {-1.0, 0.5, 2.0}) {
        const Vector U = make_vector({u});
        const Vector V = make_vector({v});
        CHECK(std::abs(e1.clarke_dd(U, V) - clarke_dd_oracle(e1.value, U, V, 1e-4, 12)) <= 1e-3 * (1 + std::abs(v)));
        CHECK(std::abs(e2.clarke_dd(U, V) - clarke_dd_oracle(e2.value, U, V, 1e-4, 12)) <= 1e-3 * (1 + std::abs(v)));
      }
    }
    // Convex kink of example 1: j0(2; v) = max(0, 2 v).
    CHECK(e1.clarke_dd(make_vector({2.0}), make_vector({1.0})) == doctest::Approx(2.0));
    CHECK(e1.clarke_dd(make_vector({2.0}), make_vector({-1.0})) == doctest::Approx(0.0));
  }

  TEST_CASE("closed-form functionals agree with the oracle") {
    for (const auto& j : {half_squared_norm(3), norm_functional(3)}) {
      const auto pts = random_pairs(3, 40, 2.0, 11);
      for (const auto& [u, v] : pts) {
        const double o = clarke_dd_oracle(j.value, u, v, 1e-4, 12);
        CHECK(std::abs(j.clarke_dd(u, v) - o) <= 1e-3 * (1 + v.norm()));
      }
    }
    const auto n = norm_functional(2);
    const Vector v = make_vector({0.6, -0.8});
    CHECK(n.clarke_dd(Vector::Zero(2), v) == doctest::Approx(1.0));
    CHECK(zero_functional(4).clarke_dd(make_vector({1, 2, 3, 4}), make_vector({1, 1, 1, 1})) == 0.0);
  }

  TEST_CASE("linear functional realizes <P u, v>") {
    const auto j = linear_clarke_functional("P", [](const Vector& u) { return (2.0 * u).eval(); }, 2);
    CHECK(j.clarke_dd(make_vector({1.0, 2.0}), make_vector({3.0, -1.0})) == doctest::Approx(2.0 * (3.0 - 2.0)));
  }

  TEST_CASE("calculus properties hold for the registered functionals") {
    for (const auto& j : {examples::ex1_functional(), examples::ex2_functional()}) {
      auto s = sample_points(1, 400, 4.0, 3);
      s.push_back({make_vector({2.0}), make_vector({1.0}), 3.0});
      s.push_back({make_vector({1.0}), make_vector({-1.0}), 0.5});
      const auto rep = check_calculus_properties(j, s, 1e-9);
      CHECK(rep.ok());
      CHECK(rep.checks > 1000);
    }
    for (const auto& j : {half_squared_norm(3), norm_functional(3)}) {
      CHECK(check_calculus_properties(j, sample_points(3, 200, 2.0, 5), 1e-9).ok());
    }
  }

  TEST_CASE("broken derivatives are reported, not thrown") {
    LipschitzFunctional bad = zero_functional(1);
    bad.name = "squared_direction";
    bad.clarke_dd = [](const Vector&, const Vector& v) { return v.squaredNorm() - 0.5 * v.sum(); };
    bad.subgradient = [](const Vector&) { return make_vector({5.0}); };
    const auto rep = check_calculus_properties(bad, sample_points(1, 50, 2.0, 1), 1e-9);
    CHECK_FALSE(rep.ok());
    bool homogeneity = false, bound = false;
    for (const auto& v : rep.violations) {
      homogeneity |= v.check == CalculusCheck::Homogeneity;
      bound |= v.check == CalculusCheck::SubgradientBound;
      CHECK(v.slack > 0.0);
    }
    CHECK(homogeneity);
    CHECK(bound);
    CHECK(std::string(to_string(CalculusCheck::Subadditivity)).size() > 0);
  }

  TEST_CASE("relaxed monotonicity constants") {
    const auto pairs1 = random_pairs(1, 4000, 5.0, 2);
    CHECK(estimate_alpha_j(examples::ex1_functional(), pairs1) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(estimate_alpha_j(examples::ex2_functional(), pairs1) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(estimate_alpha_j(half_squared_norm(3), random_pairs(3, 500, 3.0, 4)) == 0.0);
    CHECK_THROWS_AS(estimate_alpha_j(half_squared_norm(1), {}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_alpha_j(half_squared_norm(1), {{make_vector({1.0}), make_vector({1.0})}}),
                    std::invalid_argument);
  }

  TEST_CASE("difference quotients") {
    const ScalarField sq = [](const Vector& u) { return u.squaredNorm(); };
    CHECK(one_sided_quotient(sq, make_vector({1.0}), make_vector({1.0}), 1e-3) == doctest::Approx(2.001));
    const ScalarField nan = [](const Vector&) { return std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(clarke_dd_oracle(nan, make_vector({0.0}), make_vector({1.0}), 1e-3, 4), NonFiniteError);
  }
}
