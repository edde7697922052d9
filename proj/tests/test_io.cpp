#include <limits>
#include <sstream>

#include "choquard/errors.hpp"
#include "choquard/io.hpp"
#include "doctest.h"
#include "tuple_sampler.hpp"

using namespace choquard;
using namespace choquard::io;

TEST_CASE("verdicts round-trip through JSON text") {
  table::Sampler s(4242);
  for (int k = 0; k < 2000; ++k) {
    bool on = false;
    const auto v = regimes::classify(s.next(on).params());
    const auto back = verdict_from_json(json::parse(dump(to_json(v))));
    REQUIRE(back == v);
  }
}

TEST_CASE("verdict JSON layout") {
  const auto j = to_json(regimes::classify({3, 2, 2, 1, regimes::Slow{1, 0}}));
  CHECK(j.at("schema") == kSchema);
  CHECK(j.at("existence") == "Exists");
  CHECK(j.at("decay").at("variant") == "ExpPsi");
  CHECK(j.at("citations").size() >= 1);
  const auto none = to_json(regimes::classify({3, 2, 3, 1.5}));
  CHECK(none.at("decay").is_null());
}

TEST_CASE("schema and field checks") {
  auto j = to_json(regimes::classify({3, 2, 3, 3}));
  j["schema"] = "0";
  CHECK_THROWS_AS(verdict_from_json(j), DomainError);
  j.erase("schema");
  CHECK_THROWS_AS(verdict_from_json(j), DomainError);
  CHECK_THROWS_AS(parse_existence("Maybe"), DomainError);
  CHECK_THROWS_AS(decay_from_json(json{{"variant", "Cubic"}}), DomainError);
}

TEST_CASE("envelopes round-trip") {
  for (const auto& e : {Envelope::none(), Envelope::compact(), Envelope::power(2.5), Envelope::power_log(3, 1.5),
                        Envelope::log_log(1), Envelope::exponential(0.75, 2, 0.5)})
    CHECK(envelope_from_json(json::parse(to_json(e).dump())) == e);
}

TEST_CASE("profiles round-trip through CSV exactly") {
  const auto g = log_grid(1.0, 1e3, 17);
  Eigen::ArrayXd v = g.pow(-1.2345678901234567) * 3.14159;
  const RadialFunction f(g, v, Envelope::power(1.2345678901234567), 0.5);
  std::stringstream ss;
  write_csv(f, ss);
  const auto side = sidecar(f);
  const auto back = read_csv(ss, envelope_from_json(side.at("envelope")));
  CHECK((back.grid == f.grid).all());
  CHECK((back.values == f.values).all());
  CHECK(back.tail == f.tail);
  CHECK(side.at("nodes") == f.size());
  std::istringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad), DomainError);
  std::istringstream row("r,value\n1;2\n");
  CHECK_THROWS_AS(read_csv(row), DomainError);
}

TEST_CASE("reports") {
  forms::FormReport r;
  r.kind = "demo";
  r.lhs = std::numeric_limits<double>::infinity();
  r.rhs = std::numeric_limits<double>::quiet_NaN();
  r.params = {{"x", 1.0}};
  const auto j = to_json(r);
  CHECK(j.at("lhs") == "inf");
  CHECK(j.at("rhs") == "nan");
  CHECK(j.at("params").at("x") == 1.0);

  const regimes::ProblemParams P(5, 1, 3, 0);
  const auto rep = supersolutions::pick_mu(supersolutions::make_candidate(supersolutions::Family::Sublinear, P), P);
  const auto jr = to_json(rep);
  CHECK(jr.at("certified") == true);
  CHECK(jr.at("mu") == rep.mu_used);
  std::ostringstream csv;
  write_csv(rep, csv);
  const std::string s = csv.str();
  CHECK(s.rfind("r,residual,normalized\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == rep.grid.size() + 1);
}

TEST_CASE("dump is stable") {
  const auto j = to_json(regimes::classify({5, 1, 3, 1.0 / 3}));
  CHECK(dump(j) == dump(json::parse(dump(j))));
  CHECK(dump(j).back() == '\n');
}
