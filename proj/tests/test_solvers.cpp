#include "oracles.hpp"
#include "vhi/examples.hpp"
#include "vhi/solvers.hpp"

#include <doctest.h>

#include <cmath>

using namespace vhi;

namespace {

VhiProblem quadratic_box_problem(const Matrix& M, const Vector& f, double lo, double hi) {
  const int n = static_cast<int>(f.size());
  const double m = Eigen::SelfAdjointEigenSolver<Matrix>(M).eigenvalues().minCoeff();
  return VhiProblem("qp", n, ConstraintSet::box(std::vector<double>(n, lo), std::vector<double>(n, hi)),
                    OperatorA::linear(M, m), BiFunctional::zero(n), zero_functional(n), f);
}

// min 0.5 x'Mx - f'x on a box by coordinate descent, an independent route to the solution.
Vector coordinate_descent(const Matrix& M, const Vector& f, double lo, double hi) {
  Vector x = Vector::Zero(f.size());
  for (int sweep = 0; sweep < 20000; ++sweep) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = f(i) - M.row(i).dot(x) + M(i, i) * x(i);
      x(i) = std::min(hi, std::max(lo, r / M(i, i)));
    }
  }
  return x;
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("grid scan recovers the example solution sets") {
    for (double f : {-1.0, 0.0, 1.0, 1.9, 2.1, 3.0, 5.0}) {
      const auto rep = solve_1d_grid(examples::example1_problem(f), -10, 10, 1e-3);
      REQUIRE(rep.unique_point());
      CHECK(rep.components[0].representative(0) == doctest::Approx(*examples::ex1_solutions(f).min()).epsilon(1e-9));
    }
    const auto two = solve_1d_grid(examples::example1_problem(2.0), -10, 10, 1e-3);
    REQUIRE(two.components.size() == 1);
    REQUIRE(two.components[0].extent.has_value());
    CHECK(two.components[0].extent->lo == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(two.components[0].extent->hi == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(solve_1d_grid(examples::example2_problem(1.0), -10, 10, 1e-3).components.empty());
    const auto e3 = solve_1d_grid(examples::example2_problem(3.0), -10, 10, 1e-3);
    REQUIRE(e3.components.size() == 2);
    CHECK(e3.components[1].representative(0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(solve_1d_grid(examples::example1_problem(1.0), 1.0, 0.0, 0.1), std::invalid_argument);
  }

  TEST_CASE("forward-backward iteration") {
    Matrix M(3, 3);
    M << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    const Vector f = make_vector({5.0, -4.0, 1.0});
    const auto p = quadratic_box_problem(M, f, -0.5, 0.5);
    const auto rep = solve_strongly_monotone(p);
    CHECK(rep.converged);
    REQUIRE(rep.unique_point());
    const Vector ref = coordinate_descent(M, f, -0.5, 0.5);
    CHECK((rep.components[0].representative - ref).norm() < 1e-8);
    CHECK(rep.components[0].residual <= 1e-10);

    const auto m = examples::example1_problem(5.0, 2.0);
    MonotoneOptions o;
    o.tol = 0.0;
    const auto r2 = solve_strongly_monotone(m, o);
    CHECK(r2.components[0].representative(0) == doctest::Approx(2.0).epsilon(1e-10));

    CHECK_THROWS_AS(solve_strongly_monotone(examples::example1_problem(1.0)), std::invalid_argument);

    MonotoneOptions wild;
    wild.rho = 10.0;
    const auto d = solve_strongly_monotone(quadratic_box_problem(M, f, -1e9, 1e9), wild);
    CHECK_FALSE(d.converged);
    CHECK_FALSE(d.message.empty());

    MonotoneOptions few;
    few.max_iter = 2;
    CHECK_THROWS_AS(monotone_point_solver(few)(p, 1e-12), SolverError);
    CHECK_THROWS_AS(grid_point_solver(-10, 10, 1e-3)(examples::example1_problem(2.0), 0.0), SolverError);
  }

  TEST_CASE("observer sees a decreasing residual") {
    const auto m = examples::example1_problem(1.0, 2.0);
    MonotoneOptions o;
    std::vector<double> seen;
    o.observer = [&](std::size_t, const Vector&, double r) { seen.push_back(r); };
    solve_strongly_monotone(m, o);
    REQUIRE(seen.size() > 2);
    CHECK(seen.back() <= 1e-10);
    CHECK(seen.back() < seen.front());
  }

  TEST_CASE("equations") {
    EquationOperator cubic;
    cubic.T = [](const Vector& u) { return make_vector({u(0) * u(0) * u(0) + u(0)}); };
    const auto b = solve_equation(cubic, make_vector({10.0}), EquationMethod::Bisection1D, 1e-12);
    CHECK(b.components[0].representative(0) == doctest::Approx(2.0));

    Matrix M(2, 2);
    M << 2, 1, -1, 2;
    EquationOperator lin = EquationOperator::from_parts(
        2, {[M](const Vector& u) { return (M * u).eval(); }, [](const Vector& u) { return (0.0 * u).eval(); },
            [](const Vector& u) { return (0.5 * u).eval(); }},
        2.5);
    const Vector f = make_vector({1.0, 2.0});
    const auto d = solve_equation(lin, f, EquationMethod::DampedIteration, 1e-12);
    const Matrix T = M + 0.5 * Matrix::Identity(2, 2);
    CHECK((d.components[0].representative - T.lu().solve(f)).norm() < 1e-10);
    CHECK(lin.decomposition_defect({f, -f}) == 0.0);
    CHECK(ball_membership(lin, f, d.components[0].representative, 1e-11));
    CHECK_FALSE(ball_membership(lin, f, Vector::Zero(2), 0.5));

    const auto vp = equation_problem(lin, f);
    CHECK(residual(vp, d.components[0].representative) <= 1e-9);

    EquationOperator positive;
    positive.T = [](const Vector& u) { return make_vector({u(0) * u(0) + 1.0}); };
    CHECK_THROWS_AS(solve_equation(positive, make_vector({0.0}), EquationMethod::Bisection1D, 1e-9), NoBracketError);
    EquationOperator sign;
    sign.T = [](const Vector& u) { return make_vector({u(0) >= 0 ? 1.0 : -1.0}); };
    CHECK_THROWS_AS(solve_equation(sign, make_vector({0.0}), EquationMethod::Bisection1D, 1e-9), SolverError);
  }

  TEST_CASE("equation probe") {
    EquationOperator lin;
    lin.T = [](const Vector& u) { return (3.0 * u).eval(); };
    lin.m_T = 3.0;
    EquationProbeOptions o;
    o.grid = std::array<double, 3>{-10, 10, 1e-3};
    const auto rep = equation_wellposed_probe(lin, {make_vector({0.0}), make_vector({2.0})}, 1e-3, 1e-6, o);
    CHECK(rep.verdict == ProbeVerdict::ContinuousCandidate);
    for (const auto& r : rep.rows) CHECK(r.modulus == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    EquationOperator flat;
    flat.T = [](const Vector& u) { return make_vector({std::clamp(u(0), -1.0, 1.0)}); };
    flat.breakpoints = {-1.0, 1.0};
    const auto bad = equation_wellposed_probe(flat, {make_vector({0.0}), make_vector({1.0})}, 1e-3, 1e-6, o);
    CHECK(bad.verdict == ProbeVerdict::Suspect);
    CHECK(bad.rows[0].status == "ok");
    CHECK(bad.rows[1].status != "ok");
  }
}
