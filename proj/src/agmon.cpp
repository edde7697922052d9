#include "choquard/agmon.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "choquard/errors.hpp"
#include "choquard/quadrature.hpp"
#include "choquard/special.hpp"

namespace choquard::agmon {

LinearProblem::LinearProblem(int N_, double gamma_, double lambda_, double m_, double sigma_,
                             double rho_, double beta_)
    : N(N_), gamma(gamma_), lambda(lambda_), m(m_), sigma(sigma_), rho(rho_) {
  if (N < 1) throw DomainError("LinearProblem: N must be >= 1");
  if (!(gamma < 2.0) || !std::isfinite(gamma)) throw DomainError("LinearProblem: need gamma < 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("LinearProblem: need lambda > 0");
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("LinearProblem: need m >= 0");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("LinearProblem: need rho > 0");
  if (m == 0.0 && !(sigma > gamma)) sigma = gamma + 1.0;
  if (!(sigma > gamma) || !std::isfinite(sigma)) throw DomainError("LinearProblem: need sigma > gamma");
  if (lambda * lambda < m * std::pow(rho, gamma - sigma))
    throw DomainError("LinearProblem: W^2 = lambda^2 - m s^(gamma-sigma) is negative at s = rho");
  const double top = 1.0 - gamma / 2.0;
  if (beta_ <= 0.0) {
    beta_agmon = top / 2.0;
    beta_default = true;
  } else {
    if (!(beta_ < top)) throw DomainError("LinearProblem: need 0 < beta_agmon < 1 - gamma/2");
    beta_agmon = beta_;
    beta_default = false;
  }
}

double LinearProblem::W(double s) const {
  return std::sqrt(std::max(lambda * lambda - m * std::pow(s, gamma - sigma), 0.0));
}

double LinearProblem::W_prime(double s) const {
  if (m == 0.0) return 0.0;
  const double w = W(s);
  return m * (sigma - gamma) * std::pow(s, gamma - sigma - 1.0) / (2.0 * w);
}

double LinearProblem::Q(double s) const {
  return lambda * lambda * std::pow(s, -gamma) - m * std::pow(s, -sigma);
}

namespace {

// ∫_a^b W(s) s^{-γ/2} ds for rho-admissible a <= b, in the variable log s.
double psi_piece(const LinearProblem& pb, double a, double b, bool singular_start) {
  const double la = std::log(a), lb = std::log(b);
  auto g = [&](double t) {
    const double s = std::exp(t);
    return std::sqrt(std::max(pb.Q(s), 0.0)) * s;
  };
  double total = 0.0;
  const int pieces = std::max(1, int(std::ceil((lb - la) / 0.5)));
  const double h = (lb - la) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double x0 = la + k * h, x1 = (k + 1 == pieces) ? lb : la + (k + 1) * h;
    total += (k == 0 && singular_start) ? quad::endpoint(g, x0, x1, 1e-13)
                                        : quad::smooth(g, x0, x1, 1e-13, 1e-9);
  }
  return total;
}

void check_turning_point(const LinearProblem& pb, double rho0) {
  if (!(rho0 > 0.0)) throw DomainError("psi_integral: rho0 must be > 0");
  const double l2 = pb.lambda * pb.lambda * std::pow(rho0, -pb.gamma);
  const double q = l2 - pb.m * std::pow(rho0, -pb.sigma);
  if (q < -1e-13 * l2)
    throw DomainError("psi_integral: lambda^2/s^gamma - m/s^sigma is negative at rho0");
}

// ψ_ρ at every node of an increasing grid with grid(0) >= ρ.
Eigen::ArrayXd psi_cumulative(const LinearProblem& pb, const Eigen::ArrayXd& grid) {
  Eigen::ArrayXd out(grid.size());
  double acc = grid(0) > pb.rho ? psi_piece(pb, pb.rho, grid(0), true) : 0.0;
  out(0) = acc;
  for (Eigen::Index i = 1; i < grid.size(); ++i) {
    acc += psi_piece(pb, grid(i - 1), grid(i), false);
    out(i) = acc;
  }
  return out;
}

double prefactor_power(const LinearProblem& pb) { return (pb.N - 1.0) / 2.0 - pb.gamma / 4.0; }

}  // namespace

double psi_integral(const LinearProblem& pb, double rho0, double r) {
  check_turning_point(pb, rho0);
  if (r == rho0) return 0.0;
  if (r < rho0) {
    check_turning_point(pb, r);
    return -psi_piece(pb, r, rho0, false);
  }
  return psi_piece(pb, rho0, r, true);
}

PsiExpansion psi_expansion(const LinearProblem& pb, double rho0, double r, int k) {
  if (k < 0) throw DomainError("psi_expansion: k must be >= 0");
  const double a = 1.0 - pb.gamma / 2.0, d = pb.sigma - pb.gamma;
  const double ratio = a / d;
  if (pb.m > 0.0 && k > int(std::ceil(ratio - 1e-12)))
    throw DomainError("psi_expansion: k exceeds ceil((1 - gamma/2)/(sigma - gamma))");
  const bool log_case = pb.m > 0.0 && k >= 1 && std::abs(ratio - k) <= 1e-12 * std::max(1.0, ratio);
  const double c = pb.m / (4.0 * pb.lambda * pb.lambda);
  auto F = [&](double s) {
    double v = std::pow(s, a) / a;
    const int top = log_case ? k - 1 : k;
    for (int j = 1; j <= top && pb.m > 0.0; ++j) {
      const double e = a - j * d;
      v -= central_binomial(j) / (2.0 * j - 1.0) * std::pow(c, j) * std::pow(s, e) / e;
    }
    if (log_case) v -= central_binomial(k) / (2.0 * k - 1.0) * std::pow(c, k) * std::log(s);
    return pb.lambda * v;
  };
  return {F(r) - F(rho0), log_case};
}

double incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("incomplete_beta: need 0 <= x < 1");
  if (!(a > 0.0)) throw DomainError("incomplete_beta: need a > 0");
  if (x == 0.0) return 0.0;
  // t = 1 - e^{-w}: the (1-t)^{b-1} factor becomes e^{-bw}, smooth for any b.
  const double wmax = -std::log1p(-x);
  auto g = [&](double w) {
    const double t = -std::expm1(-w);
    if (t <= 0.0) return 0.0;
    return std::exp((a - 1.0) * std::log(t) - b * w);
  };
  return quad::endpoint(g, 0.0, wmax, 1e-13);
}

double incomplete_beta_form(double gamma, double lambda, double m, double x_norm) {
  if (!(gamma < 1.0)) throw DomainError("incomplete_beta_form: need gamma < 1");
  if (!(lambda > 0.0) || !(m > 0.0)) throw DomainError("incomplete_beta_form: need lambda, m > 0");
  const double g1 = 1.0 - gamma;
  if (!(lambda * lambda * std::pow(x_norm, g1) > m))
    throw DomainError("incomplete_beta_form: need lambda^2 |x|^(1-gamma) > m");
  const double s0 = std::pow(m / (lambda * lambda), 1.0 / g1);
  const double x = -std::expm1(g1 * std::log(s0 / x_norm));
  const double b = -(2.0 - gamma) / (2.0 * g1);
  return lambda * std::pow(s0, 1.0 - gamma / 2.0) / g1 * incomplete_beta(x, 1.5, b);
}

double phi_tau_log_derivative(const LinearProblem& pb, double tau, double s) {
  const double c = (pb.N - 1.0 - pb.gamma / 2.0) / 2.0;
  return -c / s - pb.W(s) * std::pow(s, -pb.gamma / 2.0) + tau * std::pow(s, -1.0 - pb.beta_agmon);
}

double log_phi_tau(const LinearProblem& pb, double tau, double r) {
  if (r < pb.rho) throw DomainError("log_phi_tau: r < rho");
  const double c = (pb.N - 1.0 - pb.gamma / 2.0) / 2.0, b = pb.beta_agmon;
  return -c * std::log(r / pb.rho) - psi_integral(pb, pb.rho, r) +
         tau * (std::pow(pb.rho, -b) - std::pow(r, -b)) / b;
}

RadialFunction phi_tau(const LinearProblem& pb, double tau, const Eigen::ArrayXd& grid) {
  if (grid.size() < 2 || grid(0) < pb.rho) throw DomainError("phi_tau: grid must start at r >= rho");
  const double c = (pb.N - 1.0 - pb.gamma / 2.0) / 2.0, b = pb.beta_agmon;
  const Eigen::ArrayXd psi = psi_cumulative(pb, grid);
  Eigen::ArrayXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    v(i) = std::exp(-c * std::log(grid(i) / pb.rho) - psi(i) +
                    tau * (std::pow(pb.rho, -b) - std::pow(grid(i), -b)) / b);
  const double rp = 1.0 - pb.gamma / 2.0;
  return RadialFunction(grid, v, Envelope::exponential(prefactor_power(pb), pb.lambda / rp, rp));
}

double omega_tau(const LinearProblem& pb, double tau, double r) {
  const double g = pb.gamma, b = pb.beta_agmon;
  const double c1 = pb.N - 1.0 - g / 2.0, c2 = pb.N - 3.0 + g / 2.0;
  return pb.W_prime(r) * std::pow(r, 1.0 + b) + c1 * c2 / 4.0 * std::pow(r, -(1.0 - g / 2.0 - b)) +
         tau * (1.0 - g / 2.0 + b) * std::pow(r, -(1.0 - g / 2.0)) -
         tau * tau * std::pow(r, -(1.0 - g / 2.0 + b));
}

double phi_tau_residual(const LinearProblem& pb, double tau, double r) {
  return (2.0 * tau * pb.W(r) + omega_tau(pb, tau, r)) *
         std::pow(r, -(1.0 + pb.gamma / 2.0 + pb.beta_agmon));
}

double matching_radius(const LinearProblem& pb, double tau, const Eigen::ArrayXd& grid) {
  const double bound = 2.0 * std::abs(tau) * pb.W(pb.rho);
  Eigen::Index first = grid.size();
  for (Eigen::Index i = grid.size() - 1; i >= 0; --i) {
    if (!(std::abs(omega_tau(pb, tau, grid(i))) < bound)) break;
    first = i;
  }
  return first == grid.size() ? std::numeric_limits<double>::infinity() : grid(first);
}

MinimalSolution minimal_solution(const LinearProblem& pb, double r_max, int per_decade,
                                 double tau_lo, double tau_hi) {
  if (!(r_max > pb.rho)) throw DomainError("minimal_solution: need r_max > rho");
  if (!(tau_lo < 0.0 && tau_hi > 0.0)) throw DomainError("minimal_solution: need tau_lo < 0 < tau_hi");
  const Eigen::ArrayXd grid = log_grid(pb.rho, r_max, per_decade);
  const Eigen::Index n = grid.size();

  // State (y, log H) with y = H'/H, as functions of t = log r.
  using State = std::array<double, 2>;
  const double N1 = pb.N - 1.0;
  auto rhs = [&](const State& x, State& dx, double t) {
    const double r = std::exp(t);
    dx[0] = r * pb.Q(r) - r * x[0] * x[0] - N1 * x[0];
    dx[1] = r * x[0];
  };
  State x{phi_tau_log_derivative(pb, tau_hi, r_max), log_phi_tau(pb, tau_hi, r_max)};
  std::vector<double> times(n);
  for (Eigen::Index i = 0; i < n; ++i) times[i] = std::log(grid(n - 1 - i));
  times.back() = std::log(pb.rho);
  Eigen::ArrayXd logH(n);
  std::size_t seen = 0;
  auto observer = [&](const State& s, double) {
    logH(n - 1 - Eigen::Index(seen)) = s[1];
    ++seen;
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-12, 1e-11, ode::runge_kutta_dopri5<State>());
  const double h0 = -1e-4 / std::max(1.0, std::sqrt(pb.Q(r_max)) * r_max);
  try {
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), h0, observer,
                         ode::max_step_checker(200000));
  } catch (const std::exception& e) {
    throw StiffnessFailure(std::string("minimal_solution: step control failed: ") + e.what());
  }
  if (seen != std::size_t(n) || !logH.allFinite())
    throw StiffnessFailure("minimal_solution: integration did not reach rho");

  MinimalSolution sol;
  const Eigen::ArrayXd psi = psi_cumulative(pb, grid);
  const double e = prefactor_power(pb);
  Eigen::ArrayXd L = logH + e * grid.log() + psi;
  std::vector<double> last;
  for (Eigen::Index i = 0; i < n; ++i)
    if (grid(i) >= r_max / 10.0) last.push_back(L(i));
  std::nth_element(last.begin(), last.begin() + last.size() / 2, last.end());
  const double c = last[last.size() / 2];
  sol.log_values = logH - c;
  sol.normalized = (L - c).exp();
  sol.log_normalization = -c;
  sol.psi_ref = psi(n - 1);
  const double rp = 1.0 - pb.gamma / 2.0;
  sol.profile = RadialFunction(grid, sol.log_values.exp(),
                               Envelope::exponential(e, pb.lambda / rp, rp));
  sol.tau_lo = tau_lo;
  sol.tau_hi = tau_hi;
  sol.matching_radius = std::max(matching_radius(pb, tau_lo, grid), matching_radius(pb, tau_hi, grid));
  sol.beta_agmon = pb.beta_agmon;
  sol.beta_default = pb.beta_default;
  return sol;
}

bool sandwich_holds(const LinearProblem& pb, const MinimalSolution& sol, double rel_tol) {
  const Eigen::ArrayXd& g = sol.profile.grid;
  if (!std::isfinite(sol.matching_radius)) return false;
  Eigen::Index k = 0;
  while (k < g.size() && g(k) < sol.matching_radius) ++k;
  if (k >= g.size()) return false;
  const double lo0 = log_phi_tau(pb, sol.tau_lo, g(k)), hi0 = log_phi_tau(pb, sol.tau_hi, g(k));
  const Eigen::ArrayXd psi = psi_cumulative(pb, g);
  const double c = (pb.N - 1.0 - pb.gamma / 2.0) / 2.0, b = pb.beta_agmon;
  for (Eigen::Index i = k; i < g.size(); ++i) {
    auto logphi = [&](double tau) {
      return -c * std::log(g(i) / pb.rho) - psi(i) + tau * (std::pow(pb.rho, -b) - std::pow(g(i), -b)) / b;
    };
    const double h = sol.log_values(i);
    const double tol = rel_tol * std::max(1.0, std::abs(h));
    if (logphi(sol.tau_lo) - lo0 + sol.log_values(k) > h + tol) return false;
    if (logphi(sol.tau_hi) - hi0 + sol.log_values(k) < h - tol) return false;
  }
  return true;
}

}  // namespace choquard::agmon
