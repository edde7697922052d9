#pragma once

// Thin wrappers over Boost.Math quadrature that turn poor error estimates
// into QuadratureFailure.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "choquard/errors.hpp"

namespace choquard::quad {

inline void check(double value, double err, double l1, double accept, const char* who) {
  if (!std::isfinite(value) || err > accept * std::max(l1, 1e-300) + 1e-300)
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: error estimate %.3e exceeds tolerance for |integral| %.3e",
                  who, err, l1);
    throw QuadratureFailure(buf);
  }
}

// Smooth integrands on a finite interval (adaptive Gauss–Kronrod 31).
template <class F>
double smooth(F f, double a, double b, double tol = 1e-9, double accept = 1e-6) {
  if (a == b) return 0.0;
  // Integrate on [0, 1]; Boost's error estimate misbehaves on tiny intervals.
  const double w = b - a;
  auto g = [&](double x) { return f(a + w * x); };
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 12, tol, &err, &l1);
  check(v, err, l1, accept, "gauss_kronrod");
  return v * w;
}

// Integrable endpoint singularities on a finite interval (tanh-sinh).
template <class F>
double endpoint(F f, double a, double b, double tol = 1e-10, double accept = 1e-6) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  double err = 0.0, l1 = 0.0;
  const double v = ts.integrate(f, a, b, tol, &err, &l1);
  check(v, err, l1, accept, "tanh_sinh");
  return v;
}

// ∫_0^∞ f(y) dy for integrands decaying at infinity, possibly singular at 0.
template <class F>
double half_line(F f, double tol = 1e-10, double accept = 1e-6) {
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  double err = 0.0, l1 = 0.0;
  const double v = es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), tol, &err, &l1);
  check(v, err, l1, accept, "exp_sinh");
  return v;
}

}  // namespace choquard::quad
