#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <type_traits>

namespace choquard {

// Lanczos approximation (g = 7, nine terms), good to ~1e-15 in double.
template <typename Scalar>
Scalar lanczos_gamma(Scalar z) {
  using std::exp;
  using std::pow;
  using std::sin;
  using std::sqrt;
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (z < Scalar(0.5)) return pi / (sin(pi * z) * lanczos_gamma(Scalar(1) - z));
  z -= Scalar(1);
  Scalar x = Scalar(c[0]);
  for (int i = 1; i < 9; ++i) x += Scalar(c[i]) / (z + Scalar(i));
  const Scalar t = z + Scalar(7.5);
  // Split the power to delay overflow for large arguments.
  const Scalar h = pow(t, (z + Scalar(0.5)) / Scalar(2));
  return sqrt(Scalar(2) * pi) * h * (h * exp(-t)) * x;
}

// Γ(z): the C library for builtin floating types, Lanczos otherwise.
template <typename Scalar>
Scalar gamma(Scalar z) {
  if constexpr (std::is_floating_point_v<Scalar>) return std::tgamma(z);
  else return lanczos_gamma(z);
}

// log Γ(z) for z > 0.
template <typename Scalar>
Scalar log_gamma(Scalar z) {
  using std::log;
  if constexpr (std::is_floating_point_v<Scalar>) return std::lgamma(z);
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z < Scalar(0.5)) return log(gamma(z));
  z -= Scalar(1);
  Scalar x = Scalar(c[0]);
  for (int i = 1; i < 9; ++i) x += Scalar(c[i]) / (z + Scalar(i));
  const Scalar t = z + Scalar(7.5);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return Scalar(0.5) * log(Scalar(2) * pi) + (z + Scalar(0.5)) * log(t) - t + log(x);
}

// Central binomial coefficient C(2j, j).
inline double central_binomial(int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (j + i) / i;
  return c;
}

// Surface area of the unit sphere S^{n-1} in R^n (n >= 1; S^0 has two points).
template <typename Scalar>
Scalar sphere_area(int n) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return Scalar(2) * std::pow(pi, Scalar(n) / Scalar(2)) / gamma(Scalar(n) / Scalar(2));
}

}  // namespace choquard
