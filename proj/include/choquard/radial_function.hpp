#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

namespace choquard {

// Asymptotic shape of a radial profile as r → ∞:
//   exp(-rate r^rate_power) · r^{-exponent} · (log r)^log_power · (log log r)^loglog_power.
// The kind is a label for the cases of the envelope lemmas; products and powers
// of envelopes keep all five fields.
struct Envelope {
  enum class Kind { None, Compact, Power, PowerLog, LogLog, Exponential };

  Kind kind = Kind::None;
  double exponent = 0.0;
  double log_power = 0.0;
  double loglog_power = 0.0;
  double rate = 0.0;
  double rate_power = 0.0;

  static Envelope none() { return {}; }
  static Envelope compact() { return {Kind::Compact}; }
  static Envelope power(double e) { return {Kind::Power, e}; }
  static Envelope power_log(double e, double sigma) { return {Kind::PowerLog, e, sigma}; }
  static Envelope log_log(double e) { return {Kind::LogLog, e, 0.0, 1.0}; }
  static Envelope exponential(double prefactor_power, double rate, double rate_power) {
    return {Kind::Exponential, prefactor_power, 0.0, 0.0, rate, rate_power};
  }

  bool declared() const { return kind != Kind::None; }
  bool finite() const;

  // Log of the shape at r. Logarithms are taken of log(e + r) so that the
  // shape is defined for every r > 0.
  double log_shape(double r) const { return log_shape_at(std::log(r)); }
  // Same, as a function of log r (safe for radii beyond double range).
  double log_shape_at(double log_r) const;

  // u^k and u·v at the level of envelopes.
  Envelope pow(double k) const;
  Envelope operator*(const Envelope& other) const;

  std::string name() const;
  bool operator==(const Envelope&) const = default;
};

// > 0 if a decays strictly faster than b, 0 if same order, < 0 if slower.
int compare_decay(const Envelope& a, const Envelope& b);

// Uniform in log r, with both end points hit exactly.
Eigen::ArrayXd log_grid(double r0, double r1, int per_decade = 64);

// Samples of a radial profile on a log-spaced grid. Below inner_radius the
// function is zero; beyond the last node it follows `tail`.
struct RadialFunction {
  Eigen::ArrayXd grid;
  Eigen::ArrayXd values;
  Envelope tail;
  double inner_radius = 0.0;

  RadialFunction() = default;
  // inner_radius defaults to grid(0), i.e. zero below the first node.
  RadialFunction(Eigen::ArrayXd grid, Eigen::ArrayXd values, Envelope tail = {},
                 std::optional<double> inner_radius = std::nullopt);

  Eigen::Index size() const { return grid.size(); }
  bool log_uniform(double rel_tol = 1e-9) const;
  double log_step() const;

  // Linear interpolation in log r; zero below inner_radius; envelope beyond
  // the last node (zero if no envelope was declared).
  double operator()(double r) const;
};

// Checks that the declared tail matches the local log-log slope of the last
// two decades of samples: |fitted slope - envelope slope| <= tol.
bool tail_consistent(const RadialFunction& f, double tol);

}  // namespace choquard
