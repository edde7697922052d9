#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "choquard/agmon.hpp"
#include "choquard/errors.hpp"
#include "doctest.h"

using namespace choquard;
using namespace choquard::agmon;

namespace {

// Largest relative deviation of H from c·exact on [lo, hi], with c fixed at the first node.
template <class F>
double shape_error(const MinimalSolution& s, F log_exact, double lo, double hi) {
  double worst = 0.0, shift = NAN;
  for (Eigen::Index i = 0; i < s.profile.size(); ++i) {
    const double r = s.profile.grid(i);
    if (r < lo || r > hi) continue;
    const double d = s.log_values(i) - log_exact(r);
    if (std::isnan(shift)) shift = d;
    worst = std::max(worst, std::abs(std::expm1(d - shift)));
  }
  return worst;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(LinearProblem(3, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(LinearProblem(3, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(LinearProblem(3, 0.0, 1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LinearProblem(3, 1.0, 1.0, 0.1, 0.5), DomainError);
  CHECK_THROWS_AS(LinearProblem(3, 0.0, 1.0, 2.0, 1.0), DomainError);  // W² < 0 at ρ
  CHECK_THROWS_AS(LinearProblem(3, 1.0, 1.0, 0.0, 2.0, 1.0, 0.6), DomainError);
  const LinearProblem pb(3, 1.0, 1.0);
  CHECK(pb.beta_default);
  CHECK(pb.beta_agmon == doctest::Approx(0.25));
}

TEST_CASE("minimal solution of the Yukawa problem") {
  SUBCASE("N = 3: e^{-r}/r") {
    const auto s = minimal_solution(LinearProblem(3, 0, 1), 100);
    CHECK(shape_error(s, [](double r) { return -r - std::log(r); }, 1, 50) < 1e-6);
    CHECK(sandwich_holds(LinearProblem(3, 0, 1), s));
  }
  SUBCASE("N = 3, lambda = 2: e^{-2r}/r") {
    const auto s = minimal_solution(LinearProblem(3, 0, 2), 40);
    CHECK(shape_error(s, [](double r) { return -2 * r - std::log(r); }, 1, 25) < 1e-6);
  }
  SUBCASE("N = 1: e^{-r}") {
    const auto s = minimal_solution(LinearProblem(1, 0, 1), 60);
    CHECK(shape_error(s, [](double r) { return -r; }, 1, 30) < 1e-6);
  }
  SUBCASE("N = 5: (1 + r) e^{-r}/r^3") {
    const auto s = minimal_solution(LinearProblem(5, 0, 1), 60);
    CHECK(shape_error(s, [](double r) { return std::log1p(r) - r - 3 * std::log(r); }, 1, 30) < 1e-6);
  }
  SUBCASE("H is positive and decreasing") {
    const auto s = minimal_solution(LinearProblem(3, 0.5, 1, 0.2, 1.5), 300);
    for (Eigen::Index i = 1; i < s.log_values.size(); ++i) CHECK(s.log_values(i) < s.log_values(i - 1));
  }
}

TEST_CASE("normalised ratio and sandwich for a perturbed problem") {
  const LinearProblem pb(3, 1.0, 1.0, 0.1, 2.0);
  const auto s = minimal_solution(pb, 1e3);
  double lo = INFINITY, hi = -INFINITY;
  for (Eigen::Index i = 0; i < s.profile.size(); ++i)
    if (s.profile.grid(i) >= 100) {
      lo = std::min(lo, s.normalized(i));
      hi = std::max(hi, s.normalized(i));
    }
  CHECK(lo >= 0.98);
  CHECK(hi <= 1.02);
  CHECK(sandwich_holds(pb, s));
}

TEST_CASE("psi: closed forms and expansion") {
  SUBCASE("unperturbed") {
    const LinearProblem pb(3, 0.5, 2.0);
    for (double r : {2.0, 10.0, 1e3})
      CHECK(psi_integral(pb, 1.0, r) == doctest::Approx(2.0 * (std::pow(r, 0.75) - 1) / 0.75).epsilon(1e-10));
  }
  SUBCASE("log case has an O(1) remainder") {
    const LinearProblem pb(3, 0, 1, 0.25, 1);
    double lo = INFINITY, hi = -INFINITY;
    for (double r = 1e2; r <= 1e4; r *= 1.5) {
      const auto e = psi_expansion(pb, 1.0, r, 1);
      CHECK(e.log_case);
      const double d = psi_integral(pb, 1.0, r) - e.value;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(hi - lo < 0.05);
  }
  SUBCASE("more terms shrink the remainder") {
    const LinearProblem pb(3, 0.5, 1, 0.3, 1.25);
    const double r = 1e4, exact = psi_integral(pb, 2.0, r);
    const double e0 = std::abs(exact - psi_expansion(pb, 2.0, r, 0).value);
    const double e1 = std::abs(exact - psi_expansion(pb, 2.0, r, 1).value);
    CHECK(e1 < e0);
  }
  CHECK_THROWS_AS(psi_expansion(LinearProblem(3, 0, 1, 0.25, 1), 1.0, 10.0, 5), DomainError);
}

TEST_CASE("incomplete beta") {
  SUBCASE("positive b against Boost") {
    for (double a : {0.5, 1.5, 3.0})
      for (double b : {0.3, 1.0, 2.5})
        for (double x : {0.01, 0.4, 0.95})
          CHECK(incomplete_beta(x, a, b) == doctest::Approx(boost::math::beta(a, b, x)).epsilon(1e-12));
  }
  SUBCASE("negative b against direct quadrature") {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double b : {-0.25, -0.75, -2.0})
      for (double x : {0.2, 0.7, 0.99}) {
        const double direct =
            ts.integrate([&](double t) { return std::pow(t, 0.5) * std::pow(1 - t, b - 1); }, 0.0, x);
        CHECK(incomplete_beta(x, 1.5, b) == doctest::Approx(direct).epsilon(1e-10));
      }
  }
  CHECK(incomplete_beta(0.0, 1.5, -0.5) == 0.0);
  CHECK_THROWS_AS(incomplete_beta(1.0, 1.5, 1.0), DomainError);
}

TEST_CASE("incomplete beta form of psi") {
  for (double gamma : {0.0, 0.5, 0.8}) {
    const double lambda = 1.0, m = 0.1;
    const double s0 = std::pow(m / (lambda * lambda), 1.0 / (1.0 - gamma));
    const LinearProblem pb(3, gamma, lambda, m, 1.0, s0);
    for (double x : {1.0, 10.0, 1e3, 1e5}) {
      const double psi = psi_integral(pb, s0, x);
      CHECK(std::abs(incomplete_beta_form(gamma, lambda, m, x) - psi) <= 1e-8 * std::max(1.0, psi));
    }
  }
  CHECK_THROWS_AS(incomplete_beta_form(1.2, 1, 0.1, 10), DomainError);
}

TEST_CASE("Agmon ansatz") {
  const LinearProblem pb(3, 1.0, 1.0, 0.1, 2.0);
  SUBCASE("log Φ_τ differentiates to φ_τ") {
    for (double r : {2.0, 20.0, 200.0}) {
      const double h = 1e-4 * r;
      const double fd = (log_phi_tau(pb, 0.5, r + h) - log_phi_tau(pb, 0.5, r - h)) / (2 * h);
      CHECK(fd == doctest::Approx(phi_tau_log_derivative(pb, 0.5, r)).epsilon(1e-7));
    }
  }
  SUBCASE("super and subsolution beyond the matching radius") {
    const auto g = log_grid(1.0, 1e4, 32);
    for (double tau : {1.0, -1.0}) {
      const double R = matching_radius(pb, tau, g);
      REQUIRE(std::isfinite(R));
      for (Eigen::Index i = 0; i < g.size(); ++i)
        if (g(i) >= R) CHECK(tau * phi_tau_residual(pb, tau, g(i)) > 0.0);
    }
  }
  SUBCASE("phi_tau samples the ansatz") {
    const auto g = log_grid(1.0, 100.0, 16);
    const auto f = phi_tau(pb, 1.0, g);
    CHECK(f.values(0) == doctest::Approx(std::exp(log_phi_tau(pb, 1.0, 1.0))));
    CHECK(f.values(g.size() - 1) == doctest::Approx(std::exp(log_phi_tau(pb, 1.0, 100.0))));
  }
}
