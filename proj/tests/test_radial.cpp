#include <cmath>
#include <limits>

#include "choquard/errors.hpp"
#include "choquard/radial_function.hpp"
#include "doctest.h"

using namespace choquard;

TEST_CASE("log_grid") {
  const auto g = log_grid(1e-2, 1e3, 40);
  CHECK(g.size() == 201);
  CHECK(g(0) == 1e-2);
  CHECK(g(g.size() - 1) == 1e3);
  const RadialFunction f(g, Eigen::ArrayXd::Ones(g.size()));
  CHECK(f.log_uniform());
  CHECK(f.log_step() == doctest::Approx(std::log(10.0) / 40));
  CHECK(log_grid(1.0, 1.5, 64).size() >= 2);
  CHECK_THROWS_AS(log_grid(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_grid(2.0, 1.0), DomainError);
}

TEST_CASE("construction checks") {
  Eigen::ArrayXd g(3), v(3);
  g << 1, 2, 4;
  v << 1, 1, 1;
  CHECK_NOTHROW(RadialFunction(g, v));
  CHECK_THROWS_AS(RadialFunction(g, Eigen::ArrayXd::Ones(2)), DomainError);
  Eigen::ArrayXd bad = g;
  bad(2) = 2;
  CHECK_THROWS_AS(RadialFunction(bad, v), DomainError);
  Eigen::ArrayXd nan = v;
  nan(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(RadialFunction(g, nan), DomainError);
  CHECK_THROWS_AS(RadialFunction(g, v, Envelope::power(INFINITY)), DomainError);
}

TEST_CASE("evaluation: nodes, log-linear interpolation, head and tail") {
  const auto g = log_grid(1.0, 100.0, 8);
  const Eigen::ArrayXd v = g.log();
  const RadialFunction f(g, v, Envelope::power(2.0), 0.5);
  for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(f(g(i)) == doctest::Approx(v(i)).epsilon(1e-14));
  // log r is linear in log r, so interpolation is exact.
  for (double r : {1.3, 7.7, 42.0}) CHECK(f(r) == doctest::Approx(std::log(r)).epsilon(1e-12));
  CHECK(f(0.4) == 0.0);
  CHECK(f(0.7) == v(0));
  CHECK(f(1000.0) == doctest::Approx(v(g.size() - 1) * 1e-2).epsilon(1e-12));
  const RadialFunction c(g, v, Envelope::compact());
  CHECK(c(1000.0) == 0.0);
}

TEST_CASE("envelope algebra") {
  const auto a = Envelope::power_log(2.0, 1.0);
  CHECK(a.pow(3.0) == Envelope::power_log(6.0, 3.0));
  CHECK((Envelope::power(1.0) * Envelope::power(2.5)) == Envelope::power(3.5));
  CHECK((Envelope::power(1.0) * Envelope::compact()).kind == Envelope::Kind::Compact);
  CHECK((Envelope::power(1.0) * Envelope::none()).kind == Envelope::Kind::None);
  const auto e = Envelope::exponential(1.0, 2.0, 0.5) * Envelope::power(1.0);
  CHECK(e.kind == Envelope::Kind::Exponential);
  CHECK(e.exponent == 2.0);
  CHECK(e.rate == 2.0);
  CHECK(Envelope::log_log(1.0).name() == "LogLog");
}

TEST_CASE("log_shape follows the envelope") {
  const auto e = Envelope::exponential(0.75, 2.0, 0.5);
  const double r = 1e4;
  CHECK(e.log_shape(r) == doctest::Approx(-0.75 * std::log(r) - 2.0 * std::sqrt(r)).epsilon(1e-12));
  CHECK(Envelope::power(3.0).log_shape(r) == doctest::Approx(-3.0 * std::log(r)));
  CHECK(std::isinf(Envelope::compact().log_shape(r)));
}

TEST_CASE("compare_decay orders envelopes by speed of decay") {
  const auto p2 = Envelope::power(2.0), p3 = Envelope::power(3.0);
  CHECK(compare_decay(p3, p2) == 1);
  CHECK(compare_decay(p2, p3) == -1);
  CHECK(compare_decay(p2, Envelope::power(2.0 + 1e-12)) == 0);
  CHECK(compare_decay(Envelope::power_log(2.0, 1.0), p2) == -1);
  CHECK(compare_decay(Envelope::power_log(2.0, -1.0), p2) == 1);
  CHECK(compare_decay(Envelope::exponential(5.0, 1.0, 0.5), Envelope::power(100.0)) == 1);
  CHECK(compare_decay(Envelope::exponential(5.0, 1.0, 0.5), Envelope::exponential(0.0, 1.0, 0.6)) == -1);
  CHECK(compare_decay(Envelope::compact(), Envelope::exponential(0.0, 9.0, 1.0)) == 1);
  CHECK(compare_decay(Envelope::compact(), Envelope::compact()) == 0);
  CHECK_THROWS_AS(compare_decay(Envelope::none(), p2), DomainError);
}

TEST_CASE("tail consistency") {
  const auto g = log_grid(1.0, 1e3, 16);
  const RadialFunction ok(g, g.pow(-2.0), Envelope::power(2.0));
  CHECK(tail_consistent(ok, 1e-6));
  const RadialFunction wrong(g, g.pow(-2.0), Envelope::power(3.0));
  CHECK_FALSE(tail_consistent(wrong, 1e-2));
  const RadialFunction none(g, g.pow(-2.0));
  CHECK(tail_consistent(none, 1e-6));
}
