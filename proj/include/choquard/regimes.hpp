#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "choquard/riesz.hpp"

namespace choquard::regimes {

struct Zero {
  bool operator==(const Zero&) const = default;
};
// V = λ/|x|^γ, γ > 2.
struct Fast {
  double lambda;
  double gamma;
  bool operator==(const Fast&) const = default;
};
// V = (ν² - ((N-2)/2)²)/|x|².
struct Hardy {
  double nu;
  bool operator==(const Hardy&) const = default;
};
// V = λ²/|x|^γ, γ < 2.
struct Slow {
  double lambda;
  double gamma;
  bool operator==(const Slow&) const = default;
};

using PotentialSpec = std::variant<Zero, Fast, Hardy, Slow>;

void validate(const PotentialSpec& v);
std::string potential_name(const PotentialSpec& v);
// V(r) for the given dimension.
double potential_value(const PotentialSpec& v, int N, double r);

struct ProblemParams {
  int N;
  double alpha;
  double p;
  double q;
  PotentialSpec potential;
  double rho = 1.0;

  ProblemParams(int N, double alpha, double p, double q, PotentialSpec potential = Zero{},
                double rho = 1.0);

  riesz::RieszParams riesz() const { return {N, alpha}; }
};

enum class Existence { Exists, NotExists, ThresholdDependent, Open };
std::string to_string(Existence e);

// liminf u |x|^e > 0.
struct Power {
  double e;
  bool operator==(const Power&) const = default;
};
// liminf u |x|^e (log|x|)^{-l} > 0.
struct PowerLog {
  double e;
  double l;
  bool operator==(const PowerLog&) const = default;
};
// liminf u |x|^{e-m} > 0 for some m > 0.
struct PowerFamily {
  double e;
  bool operator==(const PowerFamily&) const = default;
};
// liminf u |x|^{prefactor} exp ψ_m(|x|) > 0 for some m, with
// ψ_m(r) = ∫ (λ²/s^γ - m/s^σ)^{1/2} ds.
struct ExpPsi {
  double prefactor_power;
  double gamma;
  double sigma;
  double lambda;
  bool m_family = true;
  bool operator==(const ExpPsi&) const = default;
};
// liminf u |x|^{prefactor} exp(rate |x|^{power}) > 0, rate = 2λ/(2-γ).
// With m_family, λ is replaced by λ - m for some m ∈ (0, λ).
struct ExpPlain {
  double prefactor_power;
  double rate;
  double power;
  bool m_family = false;
  bool operator==(const ExpPlain&) const = default;
};

using DecayRate = std::variant<Power, PowerLog, PowerFamily, ExpPsi, ExpPlain>;
std::string decay_name(const DecayRate& d);

struct Verdict {
  Existence existence = Existence::Open;
  std::string detail;  // ρ-dependence for ThresholdDependent, reason for Open
  // Name of the decay region inside an existence region (e.g. "green",
  // "sublinear"); empty otherwise.
  std::string region;
  std::optional<DecayRate> decay;
  std::vector<std::string> citations;
  bool boundary = false;

  bool operator==(const Verdict&) const = default;
};

Verdict classify(const ProblemParams& params);

// Throws NoDecayClaim when the verdict carries no rate.
DecayRate decay_rate(const ProblemParams& params);

// Short code identifying existence and decay variant, used for region maps.
std::string verdict_code(const Verdict& v);

struct Range {
  double lo;
  double hi;
};
// Parses "lo..hi" (inclusive); a single number gives lo == hi.
Range parse_range(const std::string& s);

struct RegionMap {
  int N;
  double alpha;
  PotentialSpec potential;
  double rho;
  Range p_range, q_range;
  int resolution;
  // Row-major: codes[j * resolution + i] is the cell (p_i, q_j).
  std::vector<std::string> codes;

  double p_at(int i) const;
  double q_at(int j) const;
  const std::string& at(int i, int j) const { return codes[std::size_t(j) * resolution + i]; }
};

RegionMap region_scan(int N, double alpha, const PotentialSpec& potential, Range p_range,
                      Range q_range, int resolution, double rho = 1.0);

// a·p + b·q = c.
struct Line {
  double a, b, c;
  std::string label;
  double signed_distance(double p, double q) const;
};

// The straight lines in the (p,q)-plane along which the verdict may change.
std::vector<Line> analytic_lines(int N, double alpha, const PotentialSpec& potential);

// format: "svg" or "csv".
void emit_region_diagram(const RegionMap& map, const std::string& format, std::ostream& out);

}  // namespace choquard::regimes
