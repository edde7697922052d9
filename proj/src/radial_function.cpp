#include "choquard/radial_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "choquard/errors.hpp"

namespace choquard {

bool Envelope::finite() const {
  return std::isfinite(exponent) && std::isfinite(log_power) && std::isfinite(loglog_power) &&
         std::isfinite(rate) && std::isfinite(rate_power);
}

double Envelope::log_shape_at(double lr) const {
  if (kind == Kind::Compact) return -std::numeric_limits<double>::infinity();
  const double L = lr > 40.0 ? lr : std::log(std::numbers::e + std::exp(lr));
  double s = -exponent * lr;
  if (log_power != 0.0) s += log_power * std::log(L);
  if (loglog_power != 0.0) s += loglog_power * std::log(std::log(1.0 + L));
  if (rate != 0.0) s -= rate * std::exp(rate_power * lr);
  return s;
}

Envelope Envelope::pow(double k) const {
  if (kind == Kind::None || kind == Kind::Compact) return *this;
  Envelope e = *this;
  e.exponent *= k;
  e.log_power *= k;
  e.loglog_power *= k;
  e.rate *= k;
  return e;
}

Envelope Envelope::operator*(const Envelope& o) const {
  if (kind == Kind::None || o.kind == Kind::None) return none();
  if (kind == Kind::Compact || o.kind == Kind::Compact) return compact();
  Envelope e;
  e.exponent = exponent + o.exponent;
  e.log_power = log_power + o.log_power;
  e.loglog_power = loglog_power + o.loglog_power;
  if (rate != 0.0 && o.rate != 0.0 && rate_power != o.rate_power) {
    // Keep the dominant exponential; the slower one is absorbed.
    const Envelope& dom = rate_power > o.rate_power ? *this : o;
    e.rate = dom.rate;
    e.rate_power = dom.rate_power;
  } else {
    e.rate = rate + o.rate;
    e.rate_power = rate != 0.0 ? rate_power : o.rate_power;
  }
  if (e.rate != 0.0)
    e.kind = Kind::Exponential;
  else if (e.loglog_power != 0.0)
    e.kind = Kind::LogLog;
  else if (e.log_power != 0.0)
    e.kind = Kind::PowerLog;
  else
    e.kind = Kind::Power;
  return e;
}

std::string Envelope::name() const {
  switch (kind) {
    case Kind::None: return "None";
    case Kind::Compact: return "Compact";
    case Kind::Power: return "Power";
    case Kind::PowerLog: return "PowerLog";
    case Kind::LogLog: return "LogLog";
    case Kind::Exponential: return "Exponential";
  }
  return "None";
}

int compare_decay(const Envelope& a, const Envelope& b) {
  if (!a.declared() || !b.declared()) throw DomainError("compare_decay: undeclared envelope");
  const bool ca = a.kind == Envelope::Kind::Compact, cb = b.kind == Envelope::Kind::Compact;
  if (ca || cb) return ca == cb ? 0 : (ca ? 1 : -1);
  auto key = [](const Envelope& e) {
    const double k = e.rate > 0.0 ? e.rate_power : 0.0;
    const double c = e.rate > 0.0 ? e.rate : 0.0;
    return std::array<double, 5>{k, c, e.exponent, -e.log_power, -e.loglog_power};
  };
  const auto ka = key(a), kb = key(b);
  // Exponents built by arithmetic on the same inputs may differ by rounding.
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (std::abs(ka[i] - kb[i]) <= 1e-9 * std::max({1.0, std::abs(ka[i]), std::abs(kb[i])})) continue;
    return ka[i] > kb[i] ? 1 : -1;
  }
  return 0;
}

Eigen::ArrayXd log_grid(double r0, double r1, int per_decade) {
  if (!(r0 > 0.0) || !(r1 > r0) || per_decade < 1)
    throw DomainError("log_grid: need 0 < r0 < r1 and a positive density");
  const double decades = std::log10(r1 / r0);
  const auto n = static_cast<Eigen::Index>(std::ceil(decades * per_decade - 1e-9)) + 1;
  Eigen::ArrayXd g(std::max<Eigen::Index>(n, 2));
  const Eigen::Index m = g.size() - 1;
  const double l0 = std::log(r0), l1 = std::log(r1);
  for (Eigen::Index i = 0; i <= m; ++i) g(i) = std::exp(l0 + (l1 - l0) * double(i) / double(m));
  g(0) = r0;
  g(m) = r1;
  return g;
}

RadialFunction::RadialFunction(Eigen::ArrayXd g, Eigen::ArrayXd v, Envelope t,
                               std::optional<double> inner)
    : grid(std::move(g)), values(std::move(v)), tail(t) {
  if (grid.size() < 2) throw DomainError("RadialFunction: need at least two nodes");
  if (grid.size() != values.size()) throw DomainError("RadialFunction: grid/values size mismatch");
  if (!(grid(0) > 0.0)) throw DomainError("RadialFunction: radii must be positive");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1))) throw DomainError("RadialFunction: grid not strictly increasing");
  if (!values.allFinite()) throw DomainError("RadialFunction: non-finite values");
  if (!tail.finite()) throw DomainError("RadialFunction: non-finite envelope");
  inner_radius = inner.value_or(grid(0));
  if (!(inner_radius >= 0.0)) throw DomainError("RadialFunction: negative inner radius");
}

bool RadialFunction::log_uniform(double rel_tol) const {
  const double h = log_step();
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (std::abs(std::log(grid(i) / grid(i - 1)) - h) > rel_tol * h) return false;
  return true;
}

double RadialFunction::log_step() const {
  return std::log(grid(grid.size() - 1) / grid(0)) / double(grid.size() - 1);
}

double RadialFunction::operator()(double r) const {
  const Eigen::Index n = grid.size();
  if (r < inner_radius) return 0.0;
  if (r < grid(0)) return values(0);
  if (r > grid(n - 1)) {
    if (!tail.declared() || tail.kind == Envelope::Kind::Compact) return 0.0;
    return values(n - 1) * std::exp(tail.log_shape(r) - tail.log_shape(grid(n - 1)));
  }
  const double* b = grid.data();
  const auto j = std::clamp<Eigen::Index>(std::upper_bound(b, b + n, r) - b, 1, n - 1);
  const double w = std::log(r / grid(j - 1)) / std::log(grid(j) / grid(j - 1));
  return (1.0 - w) * values(j - 1) + w * values(j);
}

bool tail_consistent(const RadialFunction& f, double tol) {
  if (!f.tail.declared()) return true;
  const Eigen::Index n = f.size();
  const double r1 = f.grid(n - 1);
  const double r0 = std::max(f.grid(0), r1 / 100.0);
  const double v0 = f(r0), v1 = f.values(n - 1);
  if (f.tail.kind == Envelope::Kind::Compact) return v1 == 0.0;
  if (!(v0 > 0.0) || !(v1 > 0.0)) return v1 == 0.0;
  const double fitted = std::log(v1 / v0) / std::log(r1 / r0);
  const double model = (f.tail.log_shape(r1) - f.tail.log_shape(r0)) / std::log(r1 / r0);
  return std::abs(fitted - model) <= tol;
}

}  // namespace choquard
