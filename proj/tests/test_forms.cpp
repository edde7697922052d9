#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "choquard/errors.hpp"
#include "choquard/forms.hpp"
#include "doctest.h"

using namespace choquard;
using namespace choquard::forms;
using regimes::ProblemParams;
using regimes::Slow;
using riesz::RieszParams;

namespace {

const double pi = std::numbers::pi;

// ∫ g over [a, b] split at the test function's breakpoints.
template <class G>
double piecewise(const TestFunction& phi, G g, double a, double b) {
  std::vector<double> cuts = {a};
  for (double x : phi.breakpoints())
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  double s = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, cuts[i], cuts[i + 1], 15, 1e-13);
  return s;
}

// Newtonian energy in R^3: 4π ∫ φ(r) r² P(r) dr with
// P(r) = r^{-1} ∫_0^r φ s² ds + ∫_r^∞ φ s ds.
double newtonian_energy(const TestFunction& phi) {
  const double lo = phi.support_lo(), hi = phi.support_hi();
  auto P = [&](double r) {
    const double in = r > lo ? piecewise(phi, [&](double s) { return phi(s) * s * s; }, lo, std::min(r, hi)) : 0.0;
    const double out = r < hi ? piecewise(phi, [&](double s) { return phi(s) * s; }, std::max(r, lo), hi) : 0.0;
    return in / r + out;
  };
  return 4 * pi * piecewise(phi, [&](double r) { return phi(r) * r * r * P(r); }, lo, hi);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("test functions") {
  const auto b = TestFunction::bump(1.0, 3.0);
  CHECK(b(0.9) == 0.0);
  CHECK(b(2.0) == 1.0);
  CHECK(b(3.0) == 1.0);
  CHECK(b(6.5) == 0.0);
  CHECK(b(1.5) == doctest::Approx(0.5));
  for (double r : {1.2, 1.7, 3.3, 5.1}) {
    const double h = 1e-6;
    CHECK(b.derivative(r) == doctest::Approx((b(r + h) - b(r - h)) / (2 * h)).epsilon(1e-7));
  }
  const auto c = TestFunction::bump(1.0, 3.0, Smoothness::C1Cubic);
  CHECK(c(1.5) == doctest::Approx(0.5));
  const auto s = b.scaled(4.0);
  CHECK(s(10.0) == b(2.5));
  CHECK(s.support_hi() == 24.0);
  const auto t = TestFunction::tapered_power(-1.5, 1.0, 10.0);
  CHECK(t(5.0) == doctest::Approx(std::pow(5.0, -1.5)));
  const auto tr = TestFunction::truncated_power(-2.5, 1.0, 10.0);
  CHECK(tr(5.0) == doctest::Approx(std::pow(5.0, -2.5)));
  CHECK(tr(10.5) == 0.0);
  CHECK_THROWS_AS(tr.derivative(5.0), DomainError);
  CHECK_THROWS_AS(TestFunction::bump(1.0, 1.5), DomainError);
  CHECK(kind_name(TestFunction::zero()) == "zero");
}

TEST_CASE("the zero function has zero forms") {
  const auto z = TestFunction::zero();
  CHECK(gradient_energy(z, 3) == 0.0);
  CHECK(weighted_mass(z, 3, 2.0) == 0.0);
  CHECK(riesz_energy(z, {3, 2.0}) == 0.0);
  CHECK_THROWS_AS(rayleigh_quotient(z, {3, 2.0}), DomainError);
}

TEST_CASE("closed forms in three dimensions") {
  SUBCASE("constant on a shell: weighted mass") {
    const auto tr = TestFunction::truncated_power(0.0, 1.0, 2.0);
    CHECK(rel(weighted_mass(tr, 3, 0.0), 4 * pi * 7.0 / 3.0) < 1e-12);
    CHECK(rel(weighted_mass(tr, 3, 1.0), pi * 15.0) < 1e-12);
  }
  SUBCASE("truncated r^{-5/2}: E = 4π(4 log b - 8 + 8 b^{-1/2})") {
    const RieszParams p(3, 2.0);
    for (double b : {10.0, 1e3, 1e6}) {
      const auto tr = TestFunction::truncated_power(-2.5, 1.0, b);
      const double E = 4 * pi * (4 * std::log(b) - 8 + 8 / std::sqrt(b));
      CHECK(rel(riesz_energy(tr, p), E) < 1e-6);
      const auto rq = rayleigh_quotient(tr, p);
      CHECK(rel(rq.mass, 4 * pi * std::log(b)) < 1e-12);
      CHECK(rel(rq.ratio, 4 - (8 - 8 / std::sqrt(b)) / std::log(b)) < 1e-6);
    }
  }
  SUBCASE("bumps against the Newtonian double integral") {
    const RieszParams p(3, 2.0);
    for (auto phi : {TestFunction::bump(1.0, 2.0), TestFunction::bump(0.5, 4.0, Smoothness::C1Cubic),
                     TestFunction::tapered_power(-1.0, 1.0, 10.0)})
      CHECK(rel(riesz_energy(phi, p), newtonian_energy(phi)) < 1e-5);
  }
}

TEST_CASE("scaling laws") {
  const auto phi = TestFunction::bump(1.0, 3.0);
  const regimes::PotentialSpec V = Slow{1.3, 0.5};
  for (auto [N, alpha] : {std::pair{3, 2.0}, std::pair{5, 1.0}}) {
    const RieszParams p(N, alpha);
    const double g0 = gradient_energy(phi, N), v0 = potential_energy(phi, V, N), e0 = riesz_energy(phi, p);
    for (double R : {2.0, 8.0, 32.0}) {
      const auto s = phi.scaled(R);
      CHECK(rel(gradient_energy(s, N), std::pow(R, N - 2) * g0) < 1e-10);
      CHECK(rel(potential_energy(s, V, N), std::pow(R, N - 0.5) * v0) < 1e-10);
      CHECK(rel(riesz_energy(s, p), std::pow(R, N + alpha) * e0) < 1e-10);
    }
  }
}

TEST_CASE("no test function beats the Stein-Weiss constant") {
  for (auto [N, alpha] : {std::pair{3, 2.0}, std::pair{5, 1.0}, std::pair{4, 1.5}}) {
    const RieszParams p(N, alpha);
    const double cap = riesz::sigma_star(p) * (1 + 1e-3);
    const double mid = -(N + alpha) / 2.0;
    for (auto phi : {TestFunction::bump(1, 2), TestFunction::bump(1, 100), TestFunction::tapered_power(mid, 1, 1e4),
                     TestFunction::tapered_power(mid + 0.3, 1, 1e3), TestFunction::truncated_power(mid, 1, 1e5),
                     TestFunction::truncated_power(mid - 0.5, 1, 1e2)}) {
      INFO(kind_name(phi) << " N=" << N);
      CHECK(rayleigh_quotient(phi, p).ratio < cap);
    }
  }
}

TEST_CASE("best truncated power grows with the support") {
  const RieszParams p(3, 2.0);
  const auto short_scan = best_truncated_power(p, {-2.5, -2.4}, {3});
  const auto long_scan = best_truncated_power(p, {-2.5, -2.4}, {3, 6});
  CHECK(long_scan.ratio > short_scan.ratio);
  CHECK(rel(short_scan.ratio, 4 - (8 - 8 / std::sqrt(1e3)) / std::log(1e3)) < 1e-3);
  CHECK(long_scan.phi.exponent == -2.5);
  CHECK_THROWS_AS(best_truncated_power(p, {}, {3}), DomainError);
}

TEST_CASE("positivity gap changes sign across the threshold") {
  const auto phi = TestFunction::tapered_power(-2.5, 1.0, 1e6);
  const auto below = positivity_gap(phi, {3, 2, 0.5, 0.5, Slow{1.0, -2.0}});
  const auto above = positivity_gap(phi, {3, 2, 0.5, 0.5, Slow{3.0, -2.0}});
  CHECK(below.gap < 0.0);
  CHECK(above.gap > 0.0);
  CHECK(below.rhs == doctest::Approx(above.rhs));
  // On γ = -α the classifier rules out λ = 1 < λ* and admits λ = 3 > λ*.
  CHECK(regimes::classify({3, 2, 0.5, 0.5, Slow{1.0, -2.0}}).existence == regimes::Existence::NotExists);
  CHECK(regimes::classify({3, 2, 0.5, 0.5, Slow{3.0, -2.0}}).existence == regimes::Existence::ThresholdDependent);
  CHECK_THROWS_AS(positivity_gap(phi, {3, 2, 0.6, 0.5, Slow{1.0, -2.0}}), DomainError);
  CHECK_THROWS_AS(positivity_gap(phi, {3, 2, 0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(positivity_gap(phi, {3, 2, 0.5, 0.5, Slow{1.0, -2.0}, 2.0}), DomainError);
}

TEST_CASE("annulus estimate") {
  const auto g = log_grid(1.0, 1e4, 32);
  SUBCASE("constant profile: both factors are shell volumes") {
    const RadialFunction u(g, Eigen::ArrayXd::Ones(g.size()), Envelope::power(0.0));
    const ProblemParams P(3, 2, 3, 1);
    const double R = 10;
    const auto rep = annulus_bound_check(u, P, R);
    CHECK(rel(rep.rhs, (4 * pi / 3 * (8 * R * R * R - 1)) * (4 * pi / 3 * 7 * R * R * R)) < 1e-10);
  }
  SUBCASE("lhs scales as R^e") {
    const RadialFunction u(g, g.pow(-1.0), Envelope::power(1.0));
    for (const ProblemParams& P : {ProblemParams(3, 2, 3, 3), ProblemParams(3, 2, 3, 3, Slow{1, 0.5})}) {
      const auto a = annulus_bound_check(u, P, 10), b = annulus_bound_check(u, P, 20);
      CHECK(rel(b.lhs / a.lhs, std::pow(2.0, a.params.at("exponent"))) < 1e-12);
    }
    CHECK(annulus_bound_check(u, {3, 2, 3, 3}, 10).params.at("exponent") == doctest::Approx(2.0));
    CHECK(annulus_bound_check(u, {3, 2, 3, 3, Slow{1, 0.5}}, 10).params.at("exponent") == doctest::Approx(3.5));
  }
  SUBCASE("needs R >= 2 rho") {
    const RadialFunction u(g, g.pow(-1.0), Envelope::power(1.0));
    CHECK_THROWS_AS(annulus_bound_check(u, {3, 2, 3, 3, regimes::Zero{}, 1.0}, 1.5), DomainError);
  }
}

TEST_CASE("Phragmen-Lindelof inequalities on homogeneous solutions") {
  const auto g = log_grid(1e-2, 1e4, 64);
  const RadialFunction f(g, Eigen::ArrayXd::Zero(g.size()), Envelope::compact());
  for (auto [N, nu] : {std::pair{3, 0.7}, std::pair{4, 1.5}}) {
    const double k = (N - 2) / 2.0;
    // Tolerances reflect the log-linear interpolation of the sampled profiles.
    // Growing solution r^{ν-k}: the outer ratio is 2^{ν+N/2+1} at every pair of scales.
    const RadialFunction up(g, g.pow(nu - k), Envelope::power(k - nu));
    // Decaying solution r^{-ν-k}: the inner ratio is 2^{-(N-k-ν)}.
    const RadialFunction down(g, g.pow(-nu - k), Envelope::power(k + nu));
    for (auto [r, R] : {std::pair{0.5, 10.0}, std::pair{2.0, 500.0}}) {
      CHECK(rel(phragmen_lindelof_check(up, f, N, nu, r, R).first.params.at("implied_constant"),
                std::pow(2.0, nu + N / 2.0 + 1)) < 1e-4);
      CHECK(rel(phragmen_lindelof_check(down, f, N, nu, r, R).second.params.at("implied_constant"),
                std::pow(2.0, -(N - k - nu))) < 1e-4);
    }
  }
  const auto zero = phragmen_lindelof_check(f, f, 3, 1.0, 1.0, 10.0);
  CHECK(zero.first.params.at("implied_constant") == 0.0);
  CHECK_THROWS_AS(phragmen_lindelof_check(f, f, 3, 1.0, 1.0, 1.5), DomainError);
}
