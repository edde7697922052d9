#include "choquard/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "choquard/quadrature.hpp"

namespace choquard::riesz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ĵ(τ) = ∫_0^π (1 + τ² - 2τ cos θ)^{(α-N)/2} sin^{N-2}θ dθ for 0 ≤ τ < 1,
// the angular integral after x = cos θ (which also absorbs the (1-x²)^{-1/2}
// end point weight when N = 2).
// `omt` is 1 - τ, passed separately to keep precision as τ → 1.
double angular_integral(int N, double alpha, double tau, double omt) {
  const double e = 0.5 * (alpha - N);
  if (N == 3) {
    const double a = alpha - 1.0;
    if (tau < 1e-300) return 2.0;
    const double lp = std::log1p(tau), lm = tau < 0.5 ? std::log1p(-tau) : std::log(omt);
    if (std::abs(a) < 1e-14) return (lp - lm) / tau;
    const double x = a * lp, y = a * lm;
    return std::exp(y) * std::expm1(x - y) / (a * tau);
  }
  const double d = omt * omt;
  auto g = [&](double th) {
    const double s = std::sin(0.5 * th);
    const double base = d + 4.0 * tau * s * s;
    if (N == 2) return std::pow(base, e);
    const double st = std::sin(th);
    if (st == 0.0) return 0.0;
    return std::exp(e * std::log(base) + (N - 2) * std::log(st));
  };
  const double pi = std::numbers::pi;
  if (omt > 0.25) return quad::smooth(g, 0.0, pi, 1e-9);
  // Near τ = 1 the integrand peaks on the scale θ ~ 1 - τ; resolve the peak
  // directly and the power-law decay away from it in log θ.
  const double th1 = std::min(10.0 * omt, 1.0);
  const double near = quad::smooth(g, 0.0, th1, 1e-9);
  const double far = quad::smooth([&](double u) { return g(std::exp(u)) * std::exp(u); },
                                  std::log(th1), std::log(pi), 1e-9);
  return near + far;
}

// log κ as a function of z = log t.
double log_kappa_z(const RieszParams& p, double z) {
  const int N = p.dim;
  const double a = p.alpha;
  static thread_local int cached_N = -1;
  static thread_local double cached_alpha = -1.0, cached_log_pref = 0.0;
  if (cached_N != N || cached_alpha != a) {
    const double A = normalization_constant(p);
    cached_log_pref = N == 1 ? std::log(A) : std::log(A * sphere_area<double>(N - 1));
    cached_N = N;
    cached_alpha = a;
  }
  if (N == 1) {
    // A(|1 - t|^{α-1} + (1 + t)^{α-1}), written in τ = min(t, 1/t).
    const double tau = std::exp(-std::abs(z));
    const double s = std::pow(-std::expm1(-std::abs(z)), a - 1.0) +
                     std::pow(1.0 + tau, a - 1.0);
    const double lead = z > 0.0 ? (a - 1.0) * z : 0.0;
    return cached_log_pref + lead + std::log(s);
  }
  const double tau = std::exp(-std::abs(z));
  // Below |z| ~ 1e-100 the (integrable) singularity is frozen.
  const double omt = std::max(-std::expm1(-std::abs(z)), 1e-100);
  const double lj = std::log(angular_integral(N, a, tau, omt));
  if (z <= 0.0) return cached_log_pref + (N - 1) * z + lj;
  return cached_log_pref + (a - 1.0) * z + lj;
}

bool tail_integrable(const Envelope& env, double alpha) {
  using K = Envelope::Kind;
  if (env.kind == K::Compact || env.kind == K::None) return true;
  if (env.rate > 0.0 && env.rate_power > 0.0) return true;
  if (env.exponent > alpha) return true;
  if (env.exponent < alpha) return false;
  if (env.log_power < -1.0) return true;
  if (env.log_power > -1.0) return false;
  return env.loglog_power < -1.0;
}

}  // namespace

double log_kernel_profile(const RieszParams& p, double t) {
  if (!(t > 0.0)) throw DomainError("kernel_profile: t must be positive");
  return log_kappa_z(p, std::log(t));
}

double kernel_profile(const RieszParams& p, double t) { return std::exp(log_kernel_profile(p, t)); }

Envelope asymptotic_envelope(const Envelope& in, const RieszParams& p) {
  using K = Envelope::Kind;
  const double N = p.dim, a = p.alpha;
  if (in.kind == K::None) return Envelope::none();
  if (in.kind == K::Compact || (in.rate > 0.0 && in.rate_power > 0.0)) return Envelope::power(N - a);
  const double b = in.exponent;
  if (b < a || (b == a && !tail_integrable(in, a)))
    throw DomainError("asymptotic_envelope: the potential may diverge (beta <= alpha)");
  if (b > N) return Envelope::power(N - a);
  if (b < N) {
    Envelope out = in;
    out.exponent = b - a;
    return out;
  }
  const double s = in.log_power, ll = in.loglog_power;
  if (s < -1.0) return Envelope::power(N - a);
  if (s > -1.0) {
    Envelope out = in;
    out.exponent = N - a;
    out.log_power = s + 1.0;
    out.kind = ll != 0.0 ? K::LogLog : K::PowerLog;
    return out;
  }
  if (ll < -1.0) return Envelope::power(N - a);
  Envelope out = Envelope::log_log(N - a);
  out.loglog_power = ll + 1.0;
  return out;
}

RadialConvolution::RadialConvolution(const RieszParams& p, double h, Eigen::Index n)
    : params_(p), h_(h), n_(n) {
  if (!(h > 0.0) || n < 2) throw DomainError("RadialConvolution: bad grid description");
  m0_.resize(2 * n);
  m1_.resize(2 * n);
  for (Eigen::Index c = -n; c < n; ++c) {
    const double z0 = double(c) * h;
    auto K = [&](double x) { return std::exp(log_kappa_z(params_, z0 + x) + z0 + x); };
    auto f0 = [&](double x) { return (1.0 - x / h) * K(x); };
    auto f1 = [&](double x) { return (x / h) * K(x); };
    if (c == 0) {
      m0_[c + n] = quad::endpoint(f0, 0.0, h);
      m1_[c + n] = quad::endpoint(f1, 0.0, h);
    } else if (c == -1) {
      // Measure from the singular end so that z = 0 is never rounded into.
      auto Km = [&](double y) { return std::exp(log_kappa_z(params_, -y) - y); };
      m0_[c + n] = quad::endpoint([&](double y) { return (y / h) * Km(y); }, 0.0, h);
      m1_[c + n] = quad::endpoint([&](double y) { return (1.0 - y / h) * Km(y); }, 0.0, h);
    } else {
      m0_[c + n] = quad::smooth(f0, 0.0, h);
      m1_[c + n] = quad::smooth(f1, 0.0, h);
    }
  }
}

namespace {

// r^{-α} times the potential of f restricted to [r_edge, ∞) (upward = true)
// or (r_inner, r_edge] (upward = false), where log f(s) = log_f_edge +
// E(log s) - E(log r_edge), seen from the node at log radius vi.
template <class LogShape>
double outer_piece(const RieszParams& p, double vi, double v_edge, double log_f_edge, LogShape E,
                   bool upward, double v_stop) {
  const double z_edge = v_edge - vi;
  const double E_edge = E(v_edge);
  auto integrand = [&](double z) {
    const double lv = vi + z;
    return std::exp(log_kappa_z(p, z) + z + log_f_edge + E(lv) - E_edge);
  };
  if (upward) return quad::half_line([&](double y) { return integrand(z_edge + y); }, 1e-10);
  if (std::isinf(v_stop))
    return quad::half_line([&](double y) { return integrand(z_edge - y); }, 1e-10);
  return quad::endpoint(integrand, v_stop - vi, z_edge, 1e-10);
}

}  // namespace

ConvolutionResult RadialConvolution::apply(const RadialFunction& f) const {
  const Eigen::Index n = f.size();
  if (n > n_) throw DomainError("RadialConvolution: grid longer than the precomputed table");
  if (!f.log_uniform(1e-7) || std::abs(f.log_step() - h_) > 1e-7 * h_)
    throw DomainError("RadialConvolution: grid is not log-uniform with the tabulated step");
  if ((f.values < 0.0).any()) throw DomainError("radial_convolution: f must be nonnegative");

  const double a = params_.alpha;
  const Eigen::ArrayXd& v = f.values;
  Eigen::ArrayXd lr = f.grid.log();

  // Interpolation error per node, for the error bound.
  Eigen::ArrayXd e = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index j = 1; j + 1 < n; ++j) e(j) = 0.25 * std::abs(v(j - 1) - 2.0 * v(j) + v(j + 1));
  if (n > 2) {
    e(0) = e(1);
    e(n - 1) = e(n - 2);
  }

  // Head: below the first node, extrapolated as a power law down to inner_radius.
  const bool has_head = f.inner_radius < f.grid(0) * (1.0 - 1e-12) && v(0) > 0.0;
  double head_slope = 0.0;
  if (has_head && v(1) > 0.0) head_slope = std::log(v(1) / v(0)) / (lr(1) - lr(0));
  if (has_head && f.inner_radius == 0.0 && -head_slope >= params_.dim)
    throw TailDivergence("radial_convolution: profile not integrable at the origin");
  auto head_shape = [&](double lv) { return head_slope * lv; };

  // Tail: beyond the last node.
  Envelope tail = f.tail;
  bool dropped = false;
  if (!tail.declared()) {
    dropped = true;
    if (v(n - 1) > 0.0 && v(n - 2) > 0.0)
      tail = Envelope::power(-std::log(v(n - 1) / v(n - 2)) / (lr(n - 1) - lr(n - 2)));
    else
      tail = Envelope::compact();
  }
  const bool tail_ok = tail_integrable(tail, a);
  if (!dropped && !tail_ok)
    throw TailDivergence("radial_convolution: tail envelope " + tail.name() +
                         " is not integrable against the kernel");
  const bool has_tail = tail.kind != Envelope::Kind::Compact && v(n - 1) > 0.0;
  auto tail_shape = [&](double lv) { return tail.log_shape_at(lv); };

  Eigen::ArrayXd P(n), bound(n), lost = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0, b = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index d = j - i;
      double w = 0.0;
      if (j + 1 < n) w += w_right(d);
      if (j > 0) w += w_left(d);
      s += w * v(j);
      b += (w_right(d) + (j > 0 ? w_left(d) : 0.0)) * e(j);
    }
    if (has_head) {
      const double stop = f.inner_radius > 0.0 ? std::log(f.inner_radius) : -kInf;
      s += outer_piece(params_, lr(i), lr(0), std::log(v(0)), head_shape, false, stop);
    }
    double t = 0.0;
    if (has_tail) {
      if (tail_ok)
        t = outer_piece(params_, lr(i), lr(n - 1), std::log(v(n - 1)), tail_shape, true, 0.0);
      else
        t = kInf;
    }
    const double ra = std::exp(a * lr(i));
    if (dropped)
      lost(i) = ra * t;
    else
      s += t;
    P(i) = ra * s;
    bound(i) = ra * b;
  }

  ConvolutionResult out;
  out.potential = RadialFunction(f.grid, P, asymptotic_envelope(f.tail, params_), 0.0);
  out.error_bound = bound;
  out.tail_dropped = dropped;
  out.dropped_tail_bound = lost;
  return out;
}

ConvolutionResult radial_convolution(const RadialFunction& f, const RieszParams& p) {
  RadialConvolution op(p, f.log_step(), f.size());
  return op.apply(f);
}

}  // namespace choquard::riesz
