#include "oracles.hpp"
#include "vhi/examples.hpp"

#include <doctest.h>

#include <cmath>

using namespace vhi;
using namespace vhi::examples;

namespace {

// Every endpoint of `set` sits on the boundary of the oracle level set:
// members just inside, non-members just outside (unless the neighbour is in
// another part of the set).
void check_boundary(const IntervalSet& set, const std::function<double(double)>& r, double eps) {
  for (const auto& iv : set.parts()) {
    CHECK(r(iv.lo) <= eps + 1e-12);
    CHECK(r(iv.hi) <= eps + 1e-12);
    if (!set.contains(iv.lo - 1e-6)) CHECK(r(iv.lo - 1e-6) > eps);
    if (!set.contains(iv.hi + 1e-6)) CHECK(r(iv.hi + 1e-6) > eps);
  }
}

}  // namespace

TEST_SUITE("examples") {
  TEST_CASE("potentials and slopes") {
    for (double u : {-2.0, 0.3, 1.0, 1.7, 2.0, 2.5}) {
      CHECK(ex1_p(u) == doctest::Approx(oracle::ex1_slope(u)));
      CHECK(ex2_p(u) == doctest::Approx(oracle::ex2_slope(u)));
      const double h = 1e-6;
      if (std::abs(u - 2.0) > 1e-3) CHECK((ex1_j(u + h) - ex1_j(u - h)) / (2 * h) == doctest::Approx(ex1_p(u)));
      CHECK((ex2_j(u + h) - ex2_j(u - h)) / (2 * h) == doctest::Approx(ex2_p(u)));
    }
    CHECK(ex1_j(1.0) == doctest::Approx(0.5));
    CHECK(ex1_j(2.0) == doctest::Approx(1.0));
    CHECK(ex2_j(1.0) == doctest::Approx(2.0));
  }

  TEST_CASE("solution sets agree with the residual oracle") {
    for (int i = 0; i <= 200; ++i) {
      const double f = -3.0 + i / 20.0;
      const auto s1 = ex1_solutions(f);
      const auto s2 = ex2_solutions(f);
      const auto r1 = [f](double u) { return oracle::ex1_residual(f, u); };
      const auto r2 = [f](double u) { return oracle::ex2_residual(f, u); };
      const auto o1 = oracle::level_runs(r1, 1e-12, -10.0, 10.0, 1e-3);
      REQUIRE_FALSE(s1.empty());
      for (const auto& iv : s1.parts()) CHECK(r1(iv.lo) <= 1e-12);
      for (const auto& run : o1) CHECK(s1.contains(run.first, 2e-3));
      for (const auto& iv : s2.parts()) CHECK(r2(iv.lo) <= 1e-12);
      for (const auto& run : oracle::level_runs(r2, 1e-12, -10.0, 10.0, 1e-3)) CHECK(s2.contains(run.first, 2e-3));
    }
    CHECK(ex1_solutions(2.0).parts().front().lo == 1.0);
    CHECK(ex1_solutions(2.0).parts().front().hi == 2.0);
    CHECK(ex1_solutions(3.0).parts().front().lo == 2.0);
    CHECK(ex1_solutions(5.0).parts().front().lo == 2.5);
    CHECK(ex2_solutions(1.0).empty());
    CHECK(ex2_solutions(2.0).endpoints().front() == 1.0);
    CHECK(ex2_solutions(3.0).parts().size() == 2);
    CHECK(ex2_solutions(4.0).diameter() == doctest::Approx(4.0));
  }

  TEST_CASE("omega sets agree with the residual oracle") {
    for (double f : {-1.0, 0.0, 1.0, 1.9, 2.0, 2.1, 3.0, 3.9, 4.5}) {
      for (double eps : {1.0, 0.5, 0.2, 0.05, 1e-3}) {
        const auto o1 = ex1_omega(f, eps);
        check_boundary(o1.set, [f](double u) { return oracle::ex1_residual(f, u); }, eps);
        const auto o2 = ex2_omega(f, eps);
        check_boundary(o2.set, [f](double u) { return oracle::ex2_residual(f, u); }, eps);
        CHECK(o1.set.diameter() >= ex1_solutions(f).diameter());
      }
    }
    CHECK(ex1_omega(1.0, 0.5).stated);
    CHECK_FALSE(ex1_omega(1.0, 1.5).stated);
    CHECK(ex1_omega(2.0, 0.2).set.parts().front().lo == doctest::Approx(0.9));
    CHECK_THROWS_AS(ex1_omega(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ex2_omega(1.0, -1.0), std::invalid_argument);
    // Omega of example 2 is empty below f = 2 for small eps.
    CHECK(ex2_omega(1.0, 0.5).set.empty());
  }

  TEST_CASE("scaled operator") {
    // A = 2 I: u = f/3 below 3, f - 2 on [3, 4], 2 on [4, 6], f/3 beyond.
    const auto expect = [](double f) { return f < 3 ? f / 3 : f <= 4 ? f - 2 : f <= 6 ? 2.0 : f / 3; };
    for (double f = -2.0; f <= 9.0; f += 0.25) {
      const auto s = ex1_omega_scaled(2.0, f, 0.0);
      REQUIRE(s.parts().size() == 1);
      CHECK(s.diameter() == 0.0);
      CHECK(*s.min() == doctest::Approx(expect(f)));
      const auto e = ex1_omega_scaled(2.0, f, 0.1);
      check_boundary(e, [f](double u) { return oracle::ex1_residual(f, u, 2.0); }, 0.1);
      CHECK(e.diameter() <= 2 * 0.1 + 1e-12);
    }
  }

  TEST_CASE("diameter limits") {
    CHECK(ex1_diam_limit(1.0) == 0.0);
    CHECK(ex1_diam_limit(2.0) == 1.0);
    CHECK(ex1_diam_limit(3.0) == 0.0);
    CHECK_FALSE(ex2_diam_limit(1.0).has_value());
    CHECK(*ex2_diam_limit(2.0) == 0.0);
    CHECK(*ex2_diam_limit(3.0) == 2.0);
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      CHECK(ex2_omega(3.0, eps).set.diameter() == doctest::Approx(2.0).epsilon(1e-2));
      CHECK(ex1_omega(2.0, eps).set.diameter() == doctest::Approx(1.0 + eps / 2));
    }
  }

  TEST_CASE("registered problems") {
    const auto p = example1_problem(2.0);
    CHECK(p.dim() == 1);
    CHECK(p.name() == "example1");
    CHECK(p.closed_form_omega()(p, 0.2)->diameter() == doctest::Approx(1.1));
    CHECK(example1_problem(1.0, 2.0).name() != "example1");
    CHECK(example2_problem(3.0).j().breakpoints == std::vector<double>{1.0});
    CHECK(*ex1_functional().alpha_j == 1.0);
    CHECK(*ex2_functional().alpha_j == 2.0);
  }
}
