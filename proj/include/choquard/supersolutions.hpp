#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>

#include "choquard/agmon.hpp"
#include "choquard/radial_function.hpp"
#include "choquard/regimes.hpp"

namespace choquard::supersolutions {

using regimes::ProblemParams;

enum class Family {
  GreenDecay,      // μ r^{2-N} (1 - (1 + log(r/ρ))^{-β})
  LogCorrected,    // μ r^{2-N} (κ + log(r/ρ))^{(N-2)κ}, κ = 1/(N-α-2)
  PowerShift,      // μ r^{-(N-2-m)}
  Sublinear,       // μ r^{-(N-α-2)/(1-q)}
  HardySublinear,  // same profile, Hardy potential
  SlowPoly,        // μ (r² + ν²)^{-e/2}
  SlowLog,         // μ (log(r² + ν²))^{1/(1-q-p)} (r² + ν²)^{-N/(2p)}
  SlowHom,         // r^{-(N+α)/(2p)} outside B_ρ
  ExpMinimal,      // μ H with H minimal for -Δ + λ²r^{-γ} - m r^{-σ}
  Constant,        // μ; only for tests
};

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct CandidateOptions {
  double mu = 1.0;
  double beta = 1.0;       // GreenDecay
  double m = 0.1;          // PowerShift shift; ExpMinimal coupling
  double nu = 0.0;         // SlowPoly / SlowLog shift; <= 0 picks one automatically
  double sigma = 0.0;      // ExpMinimal decay of the coupling; <= 0 means 2 (q > 1) or N-α (q = 1)
  double r_max = 1e4;      // ExpMinimal: end of the ODE range, in units of ρ
  std::optional<double> exponent;  // SlowPoly: override of e
};

// Local data of the unscaled profile v (u = μ v) at one radius.
struct Local {
  double log_v;      // -inf where v = 0
  double neg_lap;    // -Δv
  double lap_ratio;  // -Δv / v (finite where v > 0)
};

struct CandidateSupersolution {
  Family family;
  double mu = 1.0;
  double beta = 1.0, nu = 0.0, m = 0.0;
  double rho = 1.0;
  double exponent = 0.0;  // main power of decay
  double log_power = 0.0;  // SlowLog / LogCorrected log exponent
  // Subtracted from log v; SlowPoly and SlowLog are scaled so that v(ρ) = 1.
  double log_scale = 0.0;
  int N = 3;
  double alpha = 1.0;
  std::shared_ptr<const agmon::LinearProblem> linear;
  std::shared_ptr<const agmon::MinimalSolution> minimal;

  Local local(double r) const;
  // Envelope of v as r → ∞.
  Envelope tail() const;
};

// Builds the paper's construction for `family`, with exponents taken from
// params. Throws DomainError when the family does not apply.
CandidateSupersolution make_candidate(Family family, const ProblemParams& params,
                                      const CandidateOptions& opts = {});

RadialFunction evaluate(const CandidateSupersolution& c, const Eigen::ArrayXd& grid);
// -Δu on the grid.
RadialFunction radial_laplacian(const CandidateSupersolution& c, const Eigen::ArrayXd& grid);

struct ResidualReport {
  Eigen::ArrayXd grid;
  Eigen::ArrayXd residual;    // L[u] with the convolution error bound folded in
  Eigen::ArrayXd normalized;  // L[u]/u where u > 0, else L[u]
  double min_residual = 0.0;
  double min_normalized = 0.0;
  std::optional<double> first_violation_radius;
  double mu_used = 1.0;
  bool grid_ok = false;  // normalized >= 0 at every node
  bool tail_ok = false;  // the inequality persists beyond the grid
  std::string tail_note;
  bool certified() const { return grid_ok && tail_ok; }
};

// L[u] = -Δu + Vu - (I_α * u^p) u^q on [ρ, 10^decades ρ], 64 nodes per decade.
// The Riesz potential is computed on a grid extended by `extension` decades.
ResidualReport residual(const CandidateSupersolution& c, const ProblemParams& params,
                        double decades = 4.0, int per_decade = 64, double extension = 2.0);

// First μ on the ladder 2^{20}, ..., 2^{-20} (p+q > 1) or 2^{-20}, ..., 2^{20}
// (p+q < 1) whose certified residual is nonnegative; μ = 1 when p+q = 1.
// Throws NoAdmissibleMu, or propagates TailDivergence.
ResidualReport pick_mu(const CandidateSupersolution& c, const ProblemParams& params,
                       double decades = 4.0, int per_decade = 64, double extension = 2.0);

}  // namespace choquard::supersolutions
