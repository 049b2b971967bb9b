#include "oracles.hpp"
#include "vhi/config.hpp"
#include "vhi/contact.hpp"

#include <doctest.h>

#include <cmath>

using namespace vhi;
using namespace vhi::contact;

namespace {

// Root of an increasing scalar map by bisection.
double increasing_root(const std::function<double(double)>& h, double lo = -100.0, double hi = 100.0) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (h(m) < 0.0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

// One node, diagonal stiffness s, B = [-b, b] with weight w, p = c r+, F = mu r+.
struct SingleNode {
  double s = 10.0, w = 3.0, b = 0.1, c = 2.0, mu = 0.5, g = 0.05, k = 0.3;

  ContactModel model(double fn, double ft) const {
    auto m = make_model(1, 1, s * Matrix::Identity(2, 2), StrainSet::box(-b, b), compliance_law("linear", {c}),
                        friction_law("linear", {mu}), make_vector({g}), make_vector({k}));
    m.omega = Vector::Constant(2, w);
    m.f0 = make_vector({fn, ft});
    return m;
  }

  // Elastic part of the operator on one coordinate: s u + w (u - clamp(u)).
  double elastic(double u) const { return s * u + w * (u - std::clamp(u, -b, b)); }

  Vector solution(double fn, double ft) const {
    double un = increasing_root([&](double u) { return elastic(u) + c * std::max(0.0, u - g) - fn; });
    un = std::min(un, k);
    const double Fb = mu * std::max(0.0, un - g);
    double ut = 0.0;
    if (std::abs(ft) > Fb) {
      const double target = ft - (ft > 0 ? Fb : -Fb);
      ut = increasing_root([&](double u) { return elastic(u) - target; });
    }
    return make_vector({un, ut});
  }
};

}  // namespace

TEST_SUITE("contact") {
  TEST_CASE("constitutive laws") {
    const auto cap = compliance_law("capped", {2.0, 0.5});
    CHECK(cap.value(-1.0) == 0.0);
    CHECK(cap.value(0.1) == doctest::Approx(0.2));
    CHECK(cap.value(3.0) == 0.5);
    CHECK(cap.lipschitz == 2.0);
    const auto hump = compliance_law("hump", {2.0, 0.4});
    CHECK_FALSE(hump.nondecreasing);
    CHECK(hump.value(0.4) == doctest::Approx(0.8));
    CHECK(hump.value(0.5) == doctest::Approx(0.6));
    CHECK(hump.value(2.0) == doctest::Approx(0.4));
    for (const auto& law : {cap, hump, compliance_law("linear", {1.5}), friction_law("capped", {0.3, 0.1})}) {
      for (double r : {-0.5, 0.05, 0.3, 0.55, 1.7}) {
        // Trapezoid rule for the antiderivative.
        double acc = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
          const double a = r * i / n, b = r * (i + 1) / n;
          acc += 0.5 * (b - a) * (law.value(a) + law.value(b));
        }
        CHECK(law.antiderivative(r) == doctest::Approx(acc).epsilon(1e-6));
        const double h = 1e-7;
        CHECK(std::abs(law.value(r + h) - law.value(r)) <= law.lipschitz * h * (1 + 1e-6));
      }
    }
    CHECK_THROWS_AS(compliance_law("cubic", {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(friction_law("linear", {}), std::invalid_argument);
    CHECK(compliance_law_names().size() == 3);
    CHECK(friction_law_names().size() == 2);
  }

  TEST_CASE("strain sets") {
    const auto box = StrainSet::box(-0.2, 0.1);
    const Vector p = box.project(make_vector({1.0, -1.0}));
    CHECK(p(0) == 0.1);
    CHECK(p(1) == -0.2);
    CHECK(box.contains(p));
    const auto ball = StrainSet::ball(1.0);
    CHECK(ball.project(make_vector({3.0, 4.0})).norm() == doctest::Approx(1.0));
    CHECK(StrainSet::whole().contains(make_vector({1e6, 1e6})));
    CHECK_FALSE(box.describe().empty());
  }

  TEST_CASE("model validation") {
    SingleNode s;
    auto m = s.model(1.0, 0.0);
    CHECK_NOTHROW(m.validate());
    CHECK(m.m_F() == doctest::Approx(10.0));
    CHECK(m.smallness_margin() == doctest::Approx(7.5));
    auto bad = m;
    bad.g = make_vector({0.5});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = m;
    bad.B = StrainSet::box(0.1, 0.2);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = m;
    bad.B = StrainSet::ball(1.0);
    bad.omega = make_vector({1.0, 2.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = m;
    bad.stiffness(0, 1) = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = m;
    bad.p = compliance_law("linear", {12.0});
    CHECK_THROWS_AS(assemble(bad), SmallnessViolation);
    CHECK_NOTHROW(assemble(bad, AssembleMode::Relaxed));

    const Matrix S = chain_stiffness(3, 1, 5.0, 10.0);
    CHECK((S - S.transpose()).norm() == 0.0);
    CHECK(S(0, 0) == 15.0);
    CHECK(S(2, 2) == 20.0);
    CHECK(S(0, 2) == -5.0);
    const Matrix E = config::default_contact_model().elongation();
    CHECK(E(2, 0) == -1.0);
    CHECK(E(2, 2) == 1.0);
  }

  TEST_CASE("single node solution matches the scalar oracle") {
    SingleNode s;
    for (double fn : {-1.0, 0.2, 0.9, 1.6, 5.0}) {
      for (double ft : {-2.0, -0.05, 0.0, 0.4, 3.0}) {
        const auto m = s.model(fn, ft);
        const auto prob = assemble(m);
        MonotoneOptions o;
        o.tol = 0.0;
        const auto rep = solve_strongly_monotone(prob, o);
        REQUIRE(rep.unique_point());
        const Vector expect = s.solution(fn, ft);
        CHECK((rep.components[0].representative - expect).norm() < 1e-9);
        CHECK(exact_residual(m, prob, expect) < 1e-9);
      }
    }
  }

  TEST_CASE("exact residual dominates the sampled estimate") {
    const auto m = config::default_contact_model();
    const auto prob = assemble(m);
    ProbeOptions o;
    o.directions = 4000;
    o.use_exact = false;
    for (const auto& pt : prob.K().sample_feasible(30, 3)) {
      const Vector u = 0.05 * pt;
      const double ex = exact_residual(m, prob, u);
      const double sm = residual(prob, u, o);
      CHECK(sm <= ex * (1 + 1e-4) + 1e-6);
      CHECK(sm >= 0.8 * ex);
    }
  }

  TEST_CASE("default model solution passes a direct gap check") {
    const auto m = config::default_contact_model();
    CHECK(m.smallness_margin() == doctest::Approx(8.5));
    const auto prob = assemble(m);
    const auto rep = solve_strongly_monotone(prob);
    REQUIRE(rep.converged);
    const Vector u = rep.components[0].representative;
    double worst = 0.0;
    for (const auto& v : prob.K().sample_feasible(5000, 9)) {
      const Vector w = u + 0.01 * (v - u);
      if (!prob.K().contains(w) || (w - u).norm() == 0.0) continue;
      worst = std::min(worst, gap(prob, u, w) / (w - u).norm());
    }
    CHECK(worst >= -1e-9);
  }

  TEST_CASE("gap perturbation bounds and schedules") {
    const auto m = config::default_contact_model();
    const auto [b, c] = gap_perturbation_bounds(m, Vector::Constant(3, 0.1));
    CHECK(b == doctest::Approx(0.5 * std::sqrt(3.0) * 0.05));
    CHECK(c == doctest::Approx(1.0 * std::sqrt(3.0) * 0.05));
    CHECK_THROWS_AS(gap_perturbation_bounds(m, Vector::Constant(3, 0.5)), std::invalid_argument);
    std::vector<Vector> gs;
    for (int n = 0; n < 6; ++n) gs.push_back(m.g + std::ldexp(1.0, -(n + 1)) * (m.k - m.g));
    const auto sched = contact_schedule(m, gs, {});
    CHECK(sched.steps() == 6);
    CHECK_NOTHROW(verify_schedule(sched, 500));
    const auto t = contact_convergence_study(m, gs, {}, monotone_point_solver());
    CHECK(t.monotone);
    for (const auto& r : t.rows) CHECK(r.pass);
  }

  TEST_CASE("ill-posedness witness") {
    const auto m = config::degenerate_contact_model();
    const auto w = illposed_witness(m);
    CHECK(w.points.size() >= 3);
    const auto prob = assemble(m, AssembleMode::Relaxed);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
      CHECK(w.residuals[i] <= 1e-12);
      // Directly from the definition: gap(u, v) >= 0 on a cloud of feasible v.
      for (const auto& v : prob.K().sample_feasible(500, i)) CHECK(gap(prob, w.points[i], v) >= -1e-12);
    }
    auto stiff = m;
    stiff.stiffness = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(illposed_witness(stiff), std::invalid_argument);
    auto pinned = m;
    pinned.B = StrainSet::box(0.0, 0.0);
    CHECK_THROWS_AS(illposed_witness(pinned), DegenerateWitnessError);
  }
}
