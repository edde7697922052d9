#pragma once

#include <Eigen/Dense>

#include "choquard/radial_function.hpp"

namespace choquard::agmon {

// -Δu + λ²|x|^{-γ} u = m|x|^{-σ} u outside B_ρ, written as -Δu + W(|x|)²|x|^{-γ} u = 0
// with W(s)² = λ² - m s^{γ-σ}.
struct LinearProblem {
  int N;
  double gamma;
  double lambda;
  double m = 0.0;
  double sigma = 0.0;
  double rho = 1.0;
  // Exponent of the τ-correction in φ_τ; must lie in (0, 1 - γ/2).
  double beta_agmon = 0.0;
  bool beta_default = true;

  // beta_agmon <= 0 selects the default (1 - γ/2)/2.
  LinearProblem(int N, double gamma, double lambda, double m = 0.0, double sigma = 0.0,
                double rho = 1.0, double beta_agmon = 0.0);

  double W(double s) const;
  double W_prime(double s) const;
  // W(s)² s^{-γ}.
  double Q(double s) const;
};

// ψ(r) = ∫_{rho0}^r (λ²/s^γ - m/s^σ)^{1/2} ds.
double psi_integral(const LinearProblem& pb, double rho0, double r);

struct PsiExpansion {
  double value;
  bool log_case;
};

// Truncated Taylor series of ψ(r) - ψ(rho0) with k correction terms. In the
// logarithmic case k = (1 - γ/2)/(σ - γ) the k-th term becomes a log r term.
PsiExpansion psi_expansion(const LinearProblem& pb, double rho0, double r, int k);

// B_x(a, b) = ∫_0^x t^{a-1} (1-t)^{b-1} dt for 0 <= x < 1 and any real b.
double incomplete_beta(double x, double a, double b);

// ψ(|x|) for σ = 1 and γ < 1, started at the turning point s0 = (m/λ²)^{1/(1-γ)}:
// λ s0^{1-γ/2}/(1-γ) · B_{1-(s0/|x|)^{1-γ}}(3/2, -(2-γ)/(2(1-γ))).
double incomplete_beta_form(double gamma, double lambda, double m, double x_norm);

// Agmon's ansatz: φ_τ(s) and log Φ_τ(r) = ∫_ρ^r φ_τ.
double phi_tau_log_derivative(const LinearProblem& pb, double tau, double s);
double log_phi_tau(const LinearProblem& pb, double tau, double r);
RadialFunction phi_tau(const LinearProblem& pb, double tau, const Eigen::ArrayXd& grid);

// ω_τ and the normalised residual (-ΔΦ_τ + W²|x|^{-γ}Φ_τ)/Φ_τ at r.
double omega_tau(const LinearProblem& pb, double tau, double r);
double phi_tau_residual(const LinearProblem& pb, double tau, double r);

// First grid radius beyond which |ω_τ| < 2|τ| inf W for every sampled radius,
// i.e. Φ_τ is a supersolution (τ > 0) or subsolution (τ < 0) from there on.
// Returns +inf if no such radius exists on the grid.
double matching_radius(const LinearProblem& pb, double tau, const Eigen::ArrayXd& grid);

struct MinimalSolution {
  RadialFunction profile;        // H on [ρ, r_max]; may underflow to 0 far out
  Eigen::ArrayXd log_values;     // log H, never underflows
  Eigen::ArrayXd normalized;     // H r^{(N-1)/2-γ/4} exp ψ_ρ(r)
  double log_normalization = 0;  // log of the factor applied to the raw ODE solution
  double psi_ref = 0;            // ψ_ρ(r_max) used for the normalisation
  double tau_lo = -1, tau_hi = 1;
  double matching_radius = 0;    // max of the R* of the two bounds
  double beta_agmon = 0;
  bool beta_default = true;
};

// Decaying solution of -H'' - (N-1)H'/r + W²r^{-γ}H = 0 on [ρ, r_max], integrated
// backwards in log r from Φ_{tau_hi} data at r_max; normalised by the median of
// H r^{(N-1)/2-γ/4} exp ψ over the last decade.
MinimalSolution minimal_solution(const LinearProblem& pb, double r_max, int per_decade = 64,
                                 double tau_lo = -1.0, double tau_hi = 1.0);

// Φ_{τ_lo} <= H <= Φ_{τ_hi} for r >= R*, with both bounds matched to H at R*.
bool sandwich_holds(const LinearProblem& pb, const MinimalSolution& sol, double rel_tol = 1e-9);

}  // namespace choquard::agmon
