#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "choquard/errors.hpp"
#include "choquard/radial_function.hpp"
#include "choquard/special.hpp"

namespace choquard::riesz {

struct RieszParams {
  int dim;
  double alpha;

  RieszParams(int N, double a) : dim(N), alpha(a) {
    if (N < 1) throw DomainError("RieszParams: dimension must be >= 1");
    if (!(a > 0.0 && a < N)) throw DomainError("RieszParams: need 0 < alpha < N");
  }
};

// A_α = Γ((N-α)/2) / (Γ(α/2) π^{N/2} 2^α).
template <typename Scalar = double>
Scalar normalization_constant(int N, Scalar alpha) {
  using std::pow;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return gamma((Scalar(N) - alpha) / Scalar(2)) /
         (gamma(alpha / Scalar(2)) * pow(pi, Scalar(N) / Scalar(2)) * pow(Scalar(2), alpha));
}

inline double normalization_constant(const RieszParams& p) {
  return normalization_constant<double>(p.dim, p.alpha);
}

// σ_α(β) = A_{N-β+α}/A_{N-β}, so that I_α ∗ |y|^{-β} = σ_α(β) |x|^{α-β}.
template <typename Scalar = double>
Scalar sigma(const RieszParams& p, Scalar beta) {
  const Scalar N = Scalar(p.dim), a = Scalar(p.alpha);
  if (!(beta > a && beta < N)) throw DomainError("sigma: need alpha < beta < N");
  return std::pow(Scalar(2), -a) * gamma((beta - a) / Scalar(2)) * gamma((N - beta) / Scalar(2)) /
         (gamma((N - beta + a) / Scalar(2)) * gamma(beta / Scalar(2)));
}

// λ* = 2^{-α/2} Γ((N-α)/4) / Γ((N+α)/4).
template <typename Scalar = double>
Scalar lambda_star(const RieszParams& p) {
  const Scalar N = Scalar(p.dim), a = Scalar(p.alpha);
  return std::pow(Scalar(2), -a / Scalar(2)) * gamma((N - a) / Scalar(4)) / gamma((N + a) / Scalar(4));
}

// min over β of σ_α(β), attained at β = (N+α)/2; defined as λ*² so the
// identity between the two holds exactly.
template <typename Scalar = double>
Scalar sigma_star(const RieszParams& p) {
  const Scalar l = lambda_star<Scalar>(p);
  return l * l;
}

template <typename Scalar = double>
Scalar semigroup_oracle(const RieszParams& p, Scalar beta, Scalar r) {
  return sigma<Scalar>(p, beta) * std::pow(r, Scalar(p.alpha) - beta);
}

// Envelope of I_α ∗ v given the envelope of v.
Envelope asymptotic_envelope(const Envelope& in, const RieszParams& p);

// Radial kernel in scaled form: (I_α ∗ f)(r) = r^{α-1} ∫ κ(s/r) f(s) ds.
double kernel_profile(const RieszParams& p, double t);
double log_kernel_profile(const RieszParams& p, double t);

struct ConvolutionResult {
  RadialFunction potential;
  // Pointwise bound on the discretisation error (interpolation of f between
  // nodes); always nonnegative.
  Eigen::ArrayXd error_bound;
  // Set when f had no declared tail: the tail was dropped and
  // `dropped_tail_bound` estimates what was lost (may be +inf).
  bool tail_dropped = false;
  Eigen::ArrayXd dropped_tail_bound;
};

// Precomputed weights of the Riesz potential on a log-uniform grid with step h.
// f is interpolated linearly in log r between nodes, so the weights only
// depend on the node offset.
class RadialConvolution {
 public:
  RadialConvolution(const RieszParams& p, double log_step, Eigen::Index max_nodes);

  ConvolutionResult apply(const RadialFunction& f) const;

  const RieszParams& params() const { return params_; }
  double log_step() const { return h_; }
  Eigen::Index max_nodes() const { return n_; }

 private:
  // Weight of node j seen from node i, split into the part on the cell to the
  // right of j (w_right) and on the cell to its left (w_left).
  double w_right(Eigen::Index d) const { return m0_[d + n_]; }
  double w_left(Eigen::Index d) const { return m1_[d - 1 + n_]; }

  RieszParams params_;
  double h_;
  Eigen::Index n_;
  std::vector<double> m0_, m1_;  // cell moments for cells c = -n .. n-1
};

// One-shot convenience over RadialConvolution. Requires a log-uniform grid.
ConvolutionResult radial_convolution(const RadialFunction& f, const RieszParams& p);

}  // namespace choquard::riesz
