#include "choquard/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "choquard/errors.hpp"
#include "choquard/quadrature.hpp"
#include "choquard/special.hpp"

namespace choquard::forms {

namespace {

double step(Smoothness s, double t) {
  if (s == Smoothness::C1Cubic) return t * t * (3.0 - 2.0 * t);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double step_prime(Smoothness s, double t) {
  if (s == Smoothness::C1Cubic) return 6.0 * t * (1.0 - t);
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

double shell(int N) { return sphere_area<double>(N); }

// |S^{N-1}| ∫_lo^hi g(r) r^{N-1} dr over the smooth pieces of φ, in log r.
template <class G>
double radial(const TestFunction& phi, int N, G g) {
  const std::vector<double> bp = phi.breakpoints();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    auto h = [&](double v) {
      const double r = std::exp(v);
      return g(r) * std::pow(r, N);
    };
    s += quad::smooth(h, std::log(bp[i]), std::log(bp[i + 1]), 1e-12);
  }
  return shell(N) * s;
}

// ∫ φ (I_α ∗ φ) with φ sampled on `grid`; the product is integrated with the
// trapezoid rule in log r, matching the piecewise-linear interpolation used by
// the convolution.
double energy_on_grid(const riesz::RadialConvolution& op, const TestFunction& phi,
                      const Eigen::ArrayXd& grid) {
  const int N = op.params().dim;
  Eigen::ArrayXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v(i) = phi(grid(i));
  // Keep the end values of a truncated power even though the closed support
  // puts them on the boundary.
  if (phi.kind == TestFunction::Kind::TruncatedPower) v = grid.pow(phi.exponent);
  const RadialFunction f(grid, v, Envelope::compact(), grid(0));
  const riesz::ConvolutionResult c = op.apply(f);
  const Eigen::ArrayXd w = v * c.potential.values * grid.pow(N);
  const double h = op.log_step();
  const double trap = h * (w.sum() - 0.5 * (w(0) + w(w.size() - 1)));
  return shell(N) * trap;
}

// Richardson step on the O(h²) trapezoid/hat error: the coarse pass uses every
// other node of `grid`, which must have an odd number of nodes.
double extrapolated_energy(const riesz::RadialConvolution& fine, const riesz::RadialConvolution& coarse,
                           const TestFunction& phi, const Eigen::ArrayXd& grid) {
  const Eigen::Index n = (grid.size() + 1) / 2;
  Eigen::ArrayXd half(n);
  for (Eigen::Index i = 0; i < n; ++i) half(i) = grid(2 * i);
  return (4.0 * energy_on_grid(fine, phi, grid) - energy_on_grid(coarse, phi, half)) / 3.0;
}

// Log grid from lo to hi with an even number of cells, about per_decade per decade.
Eigen::ArrayXd even_log_grid(double lo, double hi, int per_decade) {
  const double decades = std::log10(hi / lo);
  const auto half = std::max<Eigen::Index>(1, Eigen::Index(std::ceil(decades * per_decade / 2.0 - 1e-9)));
  Eigen::ArrayXd g = Eigen::ArrayXd::LinSpaced(2 * half + 1, std::log(lo), std::log(hi)).exp();
  g(0) = lo;
  g(2 * half) = hi;
  return g;
}

void require_positive_scale(double R, const char* who) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError(std::string(who) + ": scale must be positive");
}

}  // namespace

TestFunction TestFunction::bump(double a, double b, Smoothness s) {
  if (!(a > 0.0) || !(b >= 2.0 * a) || !std::isfinite(b))
    throw DomainError("bump: need 0 < a and b >= 2a");
  return {Kind::Bump, a, b, 0.0, s};
}

TestFunction TestFunction::tapered_power(double exponent, double a, double b, Smoothness s) {
  TestFunction out = bump(a, b, s);
  if (!std::isfinite(exponent)) throw DomainError("tapered_power: exponent must be finite");
  out.kind = Kind::TaperedPower;
  out.exponent = exponent;
  return out;
}

TestFunction TestFunction::truncated_power(double exponent, double a, double b) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b) || !std::isfinite(exponent))
    throw DomainError("truncated_power: need 0 < a < b");
  return {Kind::TruncatedPower, a, b, exponent, Smoothness::C2Quintic};
}

TestFunction TestFunction::scaled(double R) const {
  require_positive_scale(R, "scaled");
  TestFunction out = *this;
  out.a *= R;
  out.b *= R;
  return out;
}

std::vector<double> TestFunction::breakpoints() const {
  switch (kind) {
    case Kind::Zero: return {};
    case Kind::Bump:
    case Kind::TaperedPower:
      if (b == 2.0 * a) return {a, 2.0 * a, 2.0 * b};
      return {a, 2.0 * a, b, 2.0 * b};
    case Kind::TruncatedPower: return {a, b};
  }
  return {};
}

double TestFunction::operator()(double r) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::TaperedPower: {
      TestFunction base = *this;
      base.kind = Kind::Bump;
      return std::pow(r, exponent) * base(r);
    }
    case Kind::Bump:
      if (r <= a || r >= 2.0 * b) return 0.0;
      if (r < 2.0 * a) return step(smoothness, (r - a) / a);
      if (r <= b) return 1.0;
      return step(smoothness, (2.0 * b - r) / b);
    case Kind::TruncatedPower:
      if (r < a || r > b) return 0.0;
      return std::pow(r, exponent);
  }
  return 0.0;
}

double TestFunction::derivative(double r) const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::TaperedPower: {
      TestFunction base = *this;
      base.kind = Kind::Bump;
      const double pw = std::pow(r, exponent);
      return pw * (exponent / r * base(r) + base.derivative(r));
    }
    case Kind::Bump:
      if (r <= a || r >= 2.0 * b) return 0.0;
      if (r < 2.0 * a) return step_prime(smoothness, (r - a) / a) / a;
      if (r <= b) return 0.0;
      return -step_prime(smoothness, (2.0 * b - r) / b) / b;
    case Kind::TruncatedPower:
      throw DomainError("TruncatedPower has no weak gradient");
  }
  return 0.0;
}

std::string kind_name(const TestFunction& phi) {
  switch (phi.kind) {
    case TestFunction::Kind::Zero: return "zero";
    case TestFunction::Kind::Bump:
      return phi.smoothness == Smoothness::C1Cubic ? "bump-c1" : "bump-c2";
    case TestFunction::Kind::TaperedPower: return "tapered-power";
    case TestFunction::Kind::TruncatedPower: return "truncated-power";
  }
  return "?";
}

double gradient_energy(const TestFunction& phi, int N) {
  if (phi.kind == TestFunction::Kind::TruncatedPower) phi.derivative(phi.a);
  return radial(phi, N, [&](double r) {
    const double d = phi.derivative(r);
    return d * d;
  });
}

double potential_energy(const TestFunction& phi, const regimes::PotentialSpec& V, int N) {
  regimes::validate(V);
  if (std::holds_alternative<regimes::Zero>(V)) return 0.0;
  return radial(phi, N, [&](double r) {
    const double f = phi(r);
    return regimes::potential_value(V, N, r) * f * f;
  });
}

double dirichlet_energy(const TestFunction& phi, const regimes::PotentialSpec& V, int N) {
  return gradient_energy(phi, N) + potential_energy(phi, V, N);
}

double weighted_mass(const TestFunction& phi, int N, double s) {
  return radial(phi, N, [&](double r) {
    const double f = phi(r);
    return std::pow(r, s) * f * f;
  });
}

double riesz_energy(const TestFunction& phi, const riesz::RieszParams& p, int per_decade) {
  if (phi.kind == TestFunction::Kind::Zero) return 0.0;
  if (per_decade < 4) throw DomainError("riesz_energy: per_decade must be >= 4");
  const Eigen::ArrayXd grid = even_log_grid(phi.support_lo(), phi.support_hi(), per_decade);
  const double h = std::log(grid(grid.size() - 1) / grid(0)) / double(grid.size() - 1);
  const riesz::RadialConvolution fine(p, h, grid.size()), coarse(p, 2.0 * h, (grid.size() + 1) / 2);
  return extrapolated_energy(fine, coarse, phi, grid);
}

FormReport positivity_gap(const TestFunction& phi, const regimes::ProblemParams& params,
                          int per_decade) {
  const auto* slow = std::get_if<regimes::Slow>(&params.potential);
  if (!slow) throw DomainError("positivity_gap: needs a slow potential");
  if (std::abs(params.p + params.q - 1.0) > 1e-12) throw DomainError("positivity_gap: needs p + q = 1");
  if (phi.kind != TestFunction::Kind::Zero && phi.support_lo() < params.rho)
    throw DomainError("positivity_gap: test function must be supported outside B_rho");
  const double grad = phi.kind == TestFunction::Kind::Zero ? 0.0 : gradient_energy(phi, params.N);
  const double pot = phi.kind == TestFunction::Kind::Zero
                         ? 0.0
                         : slow->lambda * slow->lambda * weighted_mass(phi, params.N, -slow->gamma);
  FormReport out;
  out.kind = "positivity_gap";
  out.lhs = grad + pot;
  out.rhs = riesz_energy(phi, params.riesz(), per_decade);
  out.gap = out.lhs - out.rhs;
  out.params = {{"N", params.N},           {"alpha", params.alpha},   {"lambda", slow->lambda},
                {"gamma", slow->gamma},    {"a", phi.a},              {"b", phi.b},
                {"gradient", grad},        {"potential", pot}};
  return out;
}

double shell_integral(const RadialFunction& u, int N, double lo, double hi,
                      const std::function<double(double, double)>& g) {
  if (!(hi > lo) || !(lo > 0.0)) return 0.0;
  std::vector<double> cuts{lo};
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u.grid(i) > lo && u.grid(i) < hi) cuts.push_back(u.grid(i));
  if (u.inner_radius > lo && u.inner_radius < hi) cuts.push_back(u.inner_radius);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    auto h = [&](double v) {
      const double r = std::exp(v);
      return g(r, u(r)) * std::pow(r, N);
    };
    s += quad::smooth(h, std::log(cuts[i]), std::log(cuts[i + 1]), 1e-11);
  }
  return shell(N) * s;
}

FormReport annulus_bound_check(const RadialFunction& u, const regimes::ProblemParams& P,
                               double R) {
  require_positive_scale(R, "annulus_bound_check");
  if (R < 2.0 * P.rho) throw DomainError("annulus_bound_check: need R >= 2 rho");
  const int N = P.N;
  const double p = P.p, q = P.q;

  auto positive = [&](double r, double v) {
    if (!(v > 0.0)) throw DomainError("annulus_bound_check: u must be positive on the annuli");
    (void)r;
    return v;
  };
  const double mass_p =
      shell_integral(u, N, P.rho, 2.0 * R, [&](double r, double v) { return std::pow(positive(r, v), p); });
  const double mass_q = shell_integral(u, N, R, 2.0 * R, [&](double r, double v) {
    return q == 1.0 ? 1.0 : std::pow(positive(r, v), q - 1.0);
  });

  const TestFunction ref = TestFunction::annulus_reference();
  const double grad = gradient_energy(ref, N);
  double pot = 0.0, e = 2.0 * N - P.alpha - 2.0;
  if (const auto* h = std::get_if<regimes::Hardy>(&P.potential)) {
    pot = potential_energy(ref, *h, N);
  } else if (const auto* f = std::get_if<regimes::Fast>(&P.potential)) {
    pot = std::max(f->lambda, 0.0) * weighted_mass(ref, N, -f->gamma);
  } else if (const auto* s = std::get_if<regimes::Slow>(&P.potential)) {
    pot = s->lambda * s->lambda * weighted_mass(ref, N, -s->gamma);
    e = 2.0 * N - P.alpha - s->gamma;
  }
  const double C = std::pow(4.0, N - P.alpha) / riesz::normalization_constant(P.riesz()) * (grad + pot);

  FormReport out;
  out.kind = "annulus_bound";
  out.lhs = C * std::pow(R, e);
  out.rhs = mass_p * mass_q;
  out.gap = out.lhs - out.rhs;
  out.params = {{"N", N},          {"alpha", P.alpha}, {"p", p},          {"q", q},
                {"rho", P.rho},    {"R", R},           {"C", C},          {"exponent", e},
                {"scaled_mass", out.rhs / std::pow(R, e)}};
  return out;
}

std::pair<FormReport, FormReport> phragmen_lindelof_check(const RadialFunction& u,
                                                          const RadialFunction& f, int N,
                                                          double nu, double r, double R) {
  if (N < 2) throw DomainError("phragmen_lindelof_check: needs N >= 2");
  if (!(nu > 0.0)) throw DomainError("phragmen_lindelof_check: needs nu > 0");
  if (!(r > 0.0) || !(R > 2.0 * r)) throw DomainError("phragmen_lindelof_check: needs R > 2r > 0");
  const double k = 0.5 * (N - 2), big = 0.5 * (N + 2);
  auto value = [](double, double v) { return v; };
  const double outer = shell_integral(u, N, R, 2.0 * R, value);
  const double inner = shell_integral(u, N, 0.5 * r, r, value);
  const double f_plus =
      shell_integral(f, N, r, R, [&](double x, double v) { return v * std::pow(x, -(k + nu)); });
  const double f_minus =
      shell_integral(f, N, r, R, [&](double x, double v) { return v * std::pow(x, -(k - nu)); });

  auto report = [&](const char* kind, double lhs, double rhs) {
    FormReport o;
    o.kind = kind;
    o.lhs = lhs;
    o.rhs = rhs;
    o.gap = lhs - rhs;
    double implied = 0.0;
    if (rhs > 0.0) implied = lhs / rhs;
    else if (lhs > 0.0) implied = std::numeric_limits<double>::infinity();
    o.params = {{"N", N}, {"nu", nu}, {"r", r}, {"R", R}, {"implied_constant", implied}};
    return o;
  };
  return {report("phragmen_lindelof_outer", std::pow(R, -(big + nu)) * outer + f_plus,
                 std::pow(r, -(big + nu)) * inner),
          report("phragmen_lindelof_inner", std::pow(r, -(big - nu)) * inner + f_minus,
                 std::pow(R, -(big - nu)) * outer)};
}

RayleighResult rayleigh_quotient(const TestFunction& phi, const riesz::RieszParams& p,
                                 int per_decade) {
  if (phi.kind == TestFunction::Kind::Zero) throw DomainError("rayleigh_quotient: zero test function");
  RayleighResult out;
  out.phi = phi;
  out.riesz = riesz_energy(phi, p, per_decade);
  out.mass = weighted_mass(phi, p.dim, p.alpha);
  out.ratio = out.riesz / out.mass;
  return out;
}

RayleighResult best_truncated_power(const riesz::RieszParams& p,
                                    const std::vector<double>& exponents,
                                    const std::vector<double>& decades, int per_decade) {
  if (exponents.empty() || decades.empty()) throw DomainError("best_truncated_power: empty scan");
  if (per_decade < 4) throw DomainError("best_truncated_power: per_decade must be >= 4");
  const double h = std::log(10.0) / per_decade;
  Eigen::Index n_max = 0;
  for (double d : decades) {
    if (!(d > 0.0)) throw DomainError("best_truncated_power: decades must be positive");
    n_max = std::max<Eigen::Index>(n_max, 2 * std::llround(d * per_decade / 2.0) + 1);
  }
  const riesz::RadialConvolution op(p, h, n_max), coarse(p, 2.0 * h, (n_max + 1) / 2);
  RayleighResult best;
  best.ratio = -1.0;
  for (double d : decades) {
    const Eigen::Index n = std::max<Eigen::Index>(2 * std::llround(d * per_decade / 2.0) + 1, 3);
    const Eigen::ArrayXd grid = (h * Eigen::ArrayXd::LinSpaced(n, 0.0, double(n - 1))).exp();
    for (double e : exponents) {
      const TestFunction phi = TestFunction::truncated_power(e, 1.0, grid(n - 1));
      RayleighResult r;
      r.phi = phi;
      r.riesz = extrapolated_energy(op, coarse, phi, grid);
      r.mass = weighted_mass(phi, p.dim, p.alpha);
      r.ratio = r.riesz / r.mass;
      if (r.ratio > best.ratio) best = r;
    }
  }
  return best;
}

}  // namespace choquard::forms
