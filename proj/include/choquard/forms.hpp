#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "choquard/radial_function.hpp"
#include "choquard/regimes.hpp"
#include "choquard/riesz.hpp"

namespace choquard::forms {

enum class Smoothness { C1Cubic, C2Quintic };

// Radial test functions with analytic derivatives.
//   Bump: rises on [a, 2a], equals 1 on [2a, b], falls on [b, 2b].
//   TaperedPower: r^exponent times the bump.
//   TruncatedPower: r^exponent on [a, b], zero elsewhere (not differentiable).
struct TestFunction {
  enum class Kind { Zero, Bump, TaperedPower, TruncatedPower };

  Kind kind = Kind::Zero;
  double a = 1.0;
  double b = 2.0;
  double exponent = 0.0;
  Smoothness smoothness = Smoothness::C2Quintic;

  static TestFunction zero() { return {}; }
  static TestFunction bump(double a, double b, Smoothness s = Smoothness::C2Quintic);
  static TestFunction tapered_power(double exponent, double a, double b,
                                    Smoothness s = Smoothness::C2Quintic);
  static TestFunction truncated_power(double exponent, double a, double b);
  // supp φ ⊂ B₄∖B_{1/2}, φ = 1 on B₂∖B₁.
  static TestFunction annulus_reference() { return bump(0.5, 2.0); }

  // φ_R(x) = φ(x/R).
  TestFunction scaled(double R) const;

  double support_lo() const { return a; }
  double support_hi() const { return kind == Kind::TruncatedPower ? b : 2.0 * b; }
  // Points where the formula changes; pieces between them are smooth.
  std::vector<double> breakpoints() const;

  double operator()(double r) const;
  // Throws DomainError for TruncatedPower.
  double derivative(double r) const;
};

std::string kind_name(const TestFunction& phi);

// ∫|∇φ|², ∫Vφ², and their sum, over R^N.
double gradient_energy(const TestFunction& phi, int N);
double potential_energy(const TestFunction& phi, const regimes::PotentialSpec& V, int N);
double dirichlet_energy(const TestFunction& phi, const regimes::PotentialSpec& V, int N);

// ∫|x|^s φ² over R^N.
double weighted_mass(const TestFunction& phi, int N, double s);

// ∫∫ φ(x) I_α(x - y) φ(y) dx dy, from the radial convolution of φ sampled on
// a log grid with about `per_decade` nodes per decade spanning the support (so
// φ_R is sampled on R times the grid of φ), with one Richardson step against
// the same grid at half density.
double riesz_energy(const TestFunction& phi, const riesz::RieszParams& p, int per_decade = 128);

struct FormReport {
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::map<std::string, double> params;
};

// lhs = ∫|∇φ|² + λ²∫|x|^{-γ}φ², rhs = riesz_energy(φ). Needs p + q = 1 and a
// slow potential, with supp φ outside B_ρ.
FormReport positivity_gap(const TestFunction& phi, const regimes::ProblemParams& params,
                          int per_decade = 128);

// Annulus estimate at scale R for a positive supersolution u:
//   rhs = (∫_{B_{2R}∖B_ρ} u^p)(∫_{B_{2R}∖B_R} u^{q-1}),
//   lhs = C R^e with C = (4^{N-α}/A_α)(∫|∇φ|² + potential part) for the
//   reference bump, e = 2N - α - 2 (e = 2N - α - γ for slow potentials).
// Needs R ≥ 2ρ.
FormReport annulus_bound_check(const RadialFunction& u, const regimes::ProblemParams& params,
                               double R);

// The two weighted inequalities for -Δu + (ν² - ((N-2)/2)²)|x|^{-2} u ≥ f on
// scales r < R/2; params["implied_constant"] = lhs/rhs.
std::pair<FormReport, FormReport> phragmen_lindelof_check(const RadialFunction& u,
                                                          const RadialFunction& f, int N,
                                                          double nu, double r, double R);

struct RayleighResult {
  TestFunction phi;
  double riesz = 0.0;
  double mass = 0.0;
  double ratio = 0.0;  // riesz / ∫|x|^α φ²
};

RayleighResult rayleigh_quotient(const TestFunction& phi, const riesz::RieszParams& p,
                                 int per_decade = 128);

// Scans TruncatedPower{e, 1, 10^d} over the given exponents and support
// lengths (in decades) and returns the largest quotient. The whole scan
// shares one convolution table.
RayleighResult best_truncated_power(const riesz::RieszParams& p,
                                    const std::vector<double>& exponents,
                                    const std::vector<double>& decades, int per_decade = 128);

// |S^{N-1}| ∫_lo^hi g(r, u(r)) r^{N-1} dr for a sampled profile, split at the
// grid nodes.
double shell_integral(const RadialFunction& u, int N, double lo, double hi,
                      const std::function<double(double, double)>& g);

}  // namespace choquard::forms
