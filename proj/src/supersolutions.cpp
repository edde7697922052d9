#include "choquard/supersolutions.hpp"

#include <cmath>
#include <limits>

#include "choquard/errors.hpp"
#include "choquard/riesz.hpp"

namespace choquard::supersolutions {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const regimes::Slow* slow_of(const ProblemParams& P) {
  return std::get_if<regimes::Slow>(&P.potential);
}

// Linear interpolation of log H in log r on the agmon grid.
double interp_log(const agmon::MinimalSolution& s, double r) {
  const Eigen::ArrayXd& g = s.profile.grid;
  const Eigen::Index n = g.size();
  const double lr = std::log(r);
  const double l0 = std::log(g(0)), h = (std::log(g(n - 1)) - l0) / double(n - 1);
  double x = (lr - l0) / h;
  Eigen::Index i = std::clamp<Eigen::Index>(Eigen::Index(std::floor(x)), 0, n - 2);
  const double t = x - double(i);
  return (1.0 - t) * s.log_values(i) + t * s.log_values(i + 1);
}

// Smallest ν = 2^k with -Δv/v + V > 0 on [ρ, 10^8 ρ].
double auto_nu(CandidateSupersolution c, const ProblemParams& P) {
  const Eigen::ArrayXd g = log_grid(c.rho, c.rho * 1e8, 16);
  for (int k = 0; k <= 30; ++k) {
    c.nu = std::ldexp(1.0, k);
    if (c.family == Family::SlowLog && c.nu <= 1.0) continue;
    bool ok = true;
    for (Eigen::Index i = 0; i < g.size() && ok; ++i)
      ok = c.local(g(i)).lap_ratio + regimes::potential_value(P.potential, P.N, g(i)) > 0.0;
    if (ok) return c.nu;
  }
  throw DomainError("make_candidate: no shift nu <= 2^30 makes -Delta v + V v positive");
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::GreenDecay: return "GreenDecay";
    case Family::LogCorrected: return "LogCorrected";
    case Family::PowerShift: return "PowerShift";
    case Family::Sublinear: return "Sublinear";
    case Family::HardySublinear: return "HardySublinear";
    case Family::SlowPoly: return "SlowPoly";
    case Family::SlowLog: return "SlowLog";
    case Family::SlowHom: return "SlowHom";
    case Family::ExpMinimal: return "ExpMinimal";
    case Family::Constant: return "Constant";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::GreenDecay, Family::LogCorrected, Family::PowerShift, Family::Sublinear,
                   Family::HardySublinear, Family::SlowPoly, Family::SlowLog, Family::SlowHom,
                   Family::ExpMinimal, Family::Constant}) {
    std::string a = family_name(f), b = s;
    for (auto& ch : a) ch = char(std::tolower(ch));
    for (auto& ch : b) ch = char(std::tolower(ch));
    if (a == b) return f;
  }
  throw DomainError("unknown supersolution family '" + s + "'");
}

Local CandidateSupersolution::local(double r) const {
  if (!(r >= rho)) throw DomainError("candidate evaluated at r < rho");
  const double Nd = N, lr = std::log(r);
  switch (family) {
    case Family::GreenDecay: {
      const double L = 1.0 + std::log(r / rho);
      const double g = -std::expm1(-beta * std::log(L));
      const double lap = beta * std::exp(-Nd * lr - (beta + 1.0) * std::log(L)) *
                         ((Nd - 2.0) + (beta + 1.0) / L);
      const double logv = g > 0.0 ? (2.0 - Nd) * lr + std::log(g) : -kInf;
      return {logv, lap, g > 0.0 ? lap / std::exp(logv) : kInf};
    }
    case Family::LogCorrected: {
      const double kappa = 1.0 / (Nd - alpha - 2.0), c = log_power;
      const double L = kappa + std::log(r / rho);
      const double logv = (2.0 - Nd) * lr + c * std::log(L);
      const double ratio = ((Nd - 2.0) * c / L - c * (c - 1.0) / (L * L)) / (r * r);
      return {logv, ratio * std::exp(logv), ratio};
    }
    case Family::PowerShift:
    case Family::Sublinear:
    case Family::HardySublinear:
    case Family::SlowHom: {
      const double e = exponent;
      const double ratio = e * (Nd - 2.0 - e) / (r * r);
      const double logv = -e * lr;
      return {logv, ratio * std::exp(logv), ratio};
    }
    case Family::SlowPoly: {
      const double w = r * r + nu * nu, h = exponent / 2.0;
      const double g1 = -h / w, g2 = h * (h + 1.0) / (w * w);
      const double ratio = -4.0 * r * r * g2 - 2.0 * Nd * g1;
      const double logv = -h * std::log(w) - log_scale;
      return {logv, ratio * std::exp(logv), ratio};
    }
    case Family::SlowLog: {
      const double w = r * r + nu * nu, l = std::log(w), k = log_power, a = Nd / (2.0 * exponent);
      // exponent holds p here; v = l^k w^{-a}.
      const double g1 = (k / l - a) / w;
      const double g2 = ((-a - 1.0) * (k / l - a) + k * (k - 1.0) / (l * l) - a * k / l) / (w * w);
      const double ratio = -4.0 * r * r * g2 - 2.0 * Nd * g1;
      const double logv = k * std::log(l) - a * std::log(w) - log_scale;
      return {logv, ratio * std::exp(logv), ratio};
    }
    case Family::ExpMinimal: {
      const double logv = interp_log(*minimal, r);
      const double ratio = linear->m * std::pow(r, -linear->sigma) -
                           linear->lambda * linear->lambda * std::pow(r, -linear->gamma);
      return {logv, ratio * std::exp(logv), ratio};
    }
    case Family::Constant:
      return {0.0, 0.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

Envelope CandidateSupersolution::tail() const {
  switch (family) {
    case Family::GreenDecay: return Envelope::power(N - 2.0);
    case Family::LogCorrected: return Envelope::power_log(N - 2.0, log_power);
    case Family::PowerShift:
    case Family::Sublinear:
    case Family::HardySublinear:
    case Family::SlowPoly:
    case Family::SlowHom: return Envelope::power(exponent);
    case Family::SlowLog: return Envelope::power_log(N / exponent, log_power);
    case Family::ExpMinimal: return minimal->profile.tail;
    case Family::Constant: return mu == 0.0 ? Envelope::compact() : Envelope::power(0.0);
  }
  return Envelope::none();
}

CandidateSupersolution make_candidate(Family family, const ProblemParams& P,
                                      const CandidateOptions& o) {
  CandidateSupersolution c;
  c.family = family;
  c.N = P.N;
  c.alpha = P.alpha;
  c.rho = P.rho;
  c.mu = o.mu;
  if (!(o.mu > 0.0) && !(family == Family::Constant && o.mu == 0.0))
    throw DomainError("make_candidate: need mu > 0");
  const double N = P.N, a = P.alpha, p = P.p, q = P.q;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw DomainError(family_name(family) + ": " + what);
  };
  const bool laplace_like = std::holds_alternative<regimes::Zero>(P.potential) ||
                            std::holds_alternative<regimes::Fast>(P.potential);
  switch (family) {
    case Family::GreenDecay:
      need(P.N >= 3 && laplace_like, "needs N >= 3 and a zero or fast potential");
      need(o.beta > 0.0, "needs beta > 0");
      c.beta = o.beta;
      c.exponent = N - 2.0;
      break;
    case Family::LogCorrected:
      need(P.N >= 3 && a < N - 2.0 && laplace_like, "needs N >= 3, alpha < N-2 and a zero or fast potential");
      c.log_power = (N - 2.0) / (N - a - 2.0);
      c.exponent = N - 2.0;
      break;
    case Family::PowerShift: {
      need(P.N >= 3 && laplace_like, "needs N >= 3 and a zero or fast potential");
      double m = o.m;
      const double cap = N - 2.0 - N / p;
      if (cap > 0.0) m = std::min(m, cap - 1e-9);
      need(m > 0.0 && m < N - 2.0, "needs 0 < m < N-2");
      c.m = m;
      c.exponent = N - 2.0 - m;
      break;
    }
    case Family::Sublinear:
      need(P.N >= 3 && q < 1.0 && laplace_like, "needs N >= 3, q < 1 and a zero or fast potential");
      c.exponent = (N - a - 2.0) / (1.0 - q);
      break;
    case Family::HardySublinear:
      need(P.N >= 3 && q < 1.0 && std::holds_alternative<regimes::Hardy>(P.potential),
           "needs N >= 3, q < 1 and a Hardy potential");
      c.nu = std::get<regimes::Hardy>(P.potential).nu;
      c.exponent = (N - a - 2.0) / (1.0 - q);
      break;
    case Family::SlowPoly: {
      const auto* s = slow_of(P);
      need(s && q < 1.0, "needs a slow potential and q < 1");
      const double g = s->gamma;
      if (o.exponent)
        c.exponent = *o.exponent;
      else if (p + q < 1.0 && g < -a && q < 1.0 - (N - a - g) * p / N)
        c.exponent = -(a + g) / (1.0 - q - p);
      else
        c.exponent = (N - a - g) / (1.0 - q);
      c.nu = o.nu > 0.0 ? o.nu : auto_nu(c, P);
      c.log_scale = c.local(c.rho).log_v;
      break;
    }
    case Family::SlowLog:
      need(slow_of(P) && p + q < 1.0, "needs a slow potential and p + q < 1");
      c.exponent = p;
      c.log_power = 1.0 / (1.0 - q - p);
      need(o.nu <= 0.0 || o.nu > 1.0, "needs nu > 1");
      c.nu = o.nu > 0.0 ? o.nu : auto_nu(c, P);
      c.log_scale = c.local(c.rho).log_v;
      break;
    case Family::SlowHom:
      need(slow_of(P) != nullptr, "needs a slow potential");
      c.exponent = (N + a) / (2.0 * p);
      break;
    case Family::ExpMinimal: {
      const auto* s = slow_of(P);
      need(s != nullptr, "needs a slow potential");
      const double sigma = o.sigma > 0.0 ? o.sigma : (q > 1.0 ? 2.0 : N - a);
      c.m = o.m;
      c.linear = std::make_shared<agmon::LinearProblem>(P.N, s->gamma, s->lambda, o.m, sigma, P.rho);
      c.minimal = std::make_shared<agmon::MinimalSolution>(
          agmon::minimal_solution(*c.linear, o.r_max * P.rho, 64));
      c.exponent = (N - 1.0) / 2.0 - s->gamma / 4.0;
      break;
    }
    case Family::Constant:
      break;
  }
  return c;
}

RadialFunction evaluate(const CandidateSupersolution& c, const Eigen::ArrayXd& grid) {
  Eigen::ArrayXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v(i) = c.mu * std::exp(c.local(grid(i)).log_v);
  return RadialFunction(grid, v, c.tail(), c.rho);
}

RadialFunction radial_laplacian(const CandidateSupersolution& c, const Eigen::ArrayXd& grid) {
  Eigen::ArrayXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) v(i) = c.mu * c.local(grid(i)).neg_lap;
  const Envelope t = c.tail();
  return RadialFunction(grid, v, t.declared() ? t * Envelope::power(2.0) : t, c.rho);
}

namespace {

// μ-independent ingredients of the residual.
struct Pieces {
  Eigen::ArrayXd grid, log_v, neg_lap, ratio, V, conv;  // conv includes the error bound
  bool tail_ok = false;
  std::string tail_note;
};

Envelope lhs_envelope(const CandidateSupersolution& c, const ProblemParams& P) {
  const Envelope t = c.tail();
  switch (c.family) {
    case Family::GreenDecay: return Envelope::power_log(c.N, -c.beta - 1.0);
    case Family::LogCorrected: return Envelope::power_log(c.N, c.log_power - 1.0);
    case Family::PowerShift:
    case Family::Sublinear:
    case Family::HardySublinear: return t * Envelope::power(2.0);
    case Family::SlowPoly:
    case Family::SlowLog:
    case Family::SlowHom: return t * Envelope::power(std::get<regimes::Slow>(P.potential).gamma);
    case Family::ExpMinimal: return t * Envelope::power(c.linear->sigma);
    case Family::Constant: return Envelope::none();
  }
  return Envelope::none();
}

Pieces pieces(const CandidateSupersolution& c, const ProblemParams& P, double decades,
              int per_decade, double extension) {
  if (c.N != P.N || c.alpha != P.alpha) throw DomainError("residual: candidate built for other (N, alpha)");
  if (c.family == Family::ExpMinimal) {
    const double end = c.minimal->profile.grid(c.minimal->profile.size() - 1);
    decades = std::min(decades, std::log10(end / c.rho));
    extension = 0.0;
  }
  Pieces out;
  out.grid = log_grid(c.rho, c.rho * std::pow(10.0, decades), per_decade);
  const Eigen::ArrayXd ext = log_grid(c.rho, c.rho * std::pow(10.0, decades + extension), per_decade);
  const Eigen::Index n = out.grid.size();
  out.log_v.resize(n);
  out.neg_lap.resize(n);
  out.ratio.resize(n);
  out.V.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Local l = c.local(out.grid(i));
    out.log_v(i) = l.log_v;
    out.neg_lap(i) = l.neg_lap;
    out.ratio(i) = l.lap_ratio;
    out.V(i) = regimes::potential_value(P.potential, P.N, out.grid(i));
  }

  // I_α * v^p (unit μ), with the discretisation bound added.
  Eigen::ArrayXd vp(ext.size());
  for (Eigen::Index i = 0; i < ext.size(); ++i) {
    const double lv = c.local(ext(i)).log_v;
    vp(i) = std::isfinite(lv) ? std::exp(P.p * lv) : 0.0;
  }
  if (c.family == Family::Constant && c.mu == 0.0) vp.setZero();
  const Envelope vt = c.tail();
  const RadialFunction f(ext, vp, vt.pow(P.p), c.rho);
  const auto conv = riesz::radial_convolution(f, P.riesz());
  out.conv = (conv.potential.values + conv.error_bound).head(n);

  const Envelope lhs = lhs_envelope(c, P);
  if (!lhs.declared() || vt.kind == Envelope::Kind::Compact) {
    out.tail_ok = true;
    out.tail_note = "no tail comparison";
  } else {
    const Envelope rhs = riesz::asymptotic_envelope(vt.pow(P.p), P.riesz()) * vt.pow(P.q);
    const int cmp = compare_decay(lhs, rhs);
    out.tail_ok = cmp <= 0;
    out.tail_note = "lhs ~ " + lhs.name() + ", rhs ~ " + rhs.name() +
                    (cmp < 0 ? ": rhs decays faster" : cmp == 0 ? ": same order, grid check governs"
                                                                : ": rhs decays slower");
  }
  return out;
}

ResidualReport assemble(const Pieces& pc, const CandidateSupersolution& c, const ProblemParams& P,
                        double mu) {
  const Eigen::Index n = pc.grid.size();
  ResidualReport rep;
  rep.grid = pc.grid;
  rep.residual.resize(n);
  rep.normalized.resize(n);
  rep.mu_used = mu;
  const double p = P.p, q = P.q;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lv = pc.log_v(i);
    if (std::isfinite(lv)) {
      const double nr = pc.ratio(i) + pc.V(i) - std::pow(mu, p + q - 1.0) * pc.conv(i) * std::exp((q - 1.0) * lv);
      rep.normalized(i) = nr;
      rep.residual(i) = mu * std::exp(lv) * nr;
    } else {
      // u = 0 at this node.
      double rhs = 0.0;
      if (q == 0.0) rhs = std::pow(mu, p) * pc.conv(i);
      if (q < 0.0) rhs = kInf;
      rep.residual(i) = mu * pc.neg_lap(i) - rhs;
      rep.normalized(i) = rep.residual(i);
    }
    if (!(rep.normalized(i) >= 0.0) && !rep.first_violation_radius) rep.first_violation_radius = pc.grid(i);
  }
  if (c.family == Family::Constant && c.mu == 0.0) {
    rep.residual.setZero();
    rep.normalized.setZero();
    rep.first_violation_radius.reset();
  }
  rep.min_residual = rep.residual.minCoeff();
  rep.min_normalized = rep.normalized.minCoeff();
  rep.grid_ok = !rep.first_violation_radius.has_value();
  rep.tail_ok = pc.tail_ok;
  rep.tail_note = pc.tail_note;
  return rep;
}

}  // namespace

ResidualReport residual(const CandidateSupersolution& c, const ProblemParams& params, double decades,
                        int per_decade, double extension) {
  const Pieces pc = pieces(c, params, decades, per_decade, extension);
  return assemble(pc, c, params, c.mu);
}

ResidualReport pick_mu(const CandidateSupersolution& c, const ProblemParams& params, double decades,
                       int per_decade, double extension) {
  Pieces pc;
  try {
    pc = pieces(c, params, decades, per_decade, extension);
  } catch (const TailDivergence& e) {
    throw NoAdmissibleMu(std::string("pick_mu: no mu can work, ") + e.what());
  }
  const double s = params.p + params.q;
  std::vector<double> ladder;
  if (s == 1.0) {
    ladder.push_back(1.0);
  } else {
    for (int k = 20; k >= -20; --k) ladder.push_back(std::ldexp(1.0, s > 1.0 ? k : -k));
  }
  ResidualReport last;
  for (double mu : ladder) {
    last = assemble(pc, c, params, mu);
    if (last.certified()) return last;
  }
  if (!pc.tail_ok) throw NoAdmissibleMu("pick_mu: tail check fails for every mu (" + pc.tail_note + ")");
  char buf[160];
  std::snprintf(buf, sizeof buf, "pick_mu: ladder exhausted; last mu %.3g violates at r = %.6g",
                last.mu_used, last.first_violation_radius.value_or(0.0));
  throw NoAdmissibleMu(buf);
}

}  // namespace choquard::supersolutions
