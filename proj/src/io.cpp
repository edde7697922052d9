#include "choquard/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "choquard/errors.hpp"

namespace choquard::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: bad field '") + key + "': " + e.what());
  }
}

// JSON has no infinities; they are written as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

}  // namespace

regimes::Existence parse_existence(const std::string& s) {
  using regimes::Existence;
  for (Existence e : {Existence::Exists, Existence::NotExists, Existence::ThresholdDependent, Existence::Open})
    if (regimes::to_string(e) == s) return e;
  throw DomainError("unknown existence value '" + s + "'");
}

json to_json(const regimes::DecayRate& d) {
  using namespace regimes;
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Power>) return {{"variant", "Power"}, {"e", x.e}};
        else if constexpr (std::is_same_v<T, PowerLog>)
          return {{"variant", "PowerLog"}, {"e", x.e}, {"l", x.l}};
        else if constexpr (std::is_same_v<T, PowerFamily>) return {{"variant", "PowerFamily"}, {"e", x.e}};
        else if constexpr (std::is_same_v<T, ExpPsi>)
          return {{"variant", "ExpPsi"},  {"prefactor_power", x.prefactor_power},
                  {"gamma", x.gamma},     {"sigma", x.sigma},
                  {"lambda", x.lambda},   {"m_family", x.m_family}};
        else
          return {{"variant", "ExpPlain"}, {"prefactor_power", x.prefactor_power},
                  {"rate", x.rate},        {"power", x.power},
                  {"m_family", x.m_family}};
      },
      d);
}

regimes::DecayRate decay_from_json(const json& j) {
  using namespace regimes;
  const auto v = field<std::string>(j, "variant");
  if (v == "Power") return Power{field<double>(j, "e")};
  if (v == "PowerLog") return PowerLog{field<double>(j, "e"), field<double>(j, "l")};
  if (v == "PowerFamily") return PowerFamily{field<double>(j, "e")};
  if (v == "ExpPsi")
    return ExpPsi{field<double>(j, "prefactor_power"), field<double>(j, "gamma"), field<double>(j, "sigma"),
                  field<double>(j, "lambda"), field<bool>(j, "m_family")};
  if (v == "ExpPlain")
    return ExpPlain{field<double>(j, "prefactor_power"), field<double>(j, "rate"), field<double>(j, "power"),
                    field<bool>(j, "m_family")};
  throw DomainError("unknown decay variant '" + v + "'");
}

json to_json(const regimes::Verdict& v) {
  json j;
  j["schema"] = kSchema;
  j["existence"] = regimes::to_string(v.existence);
  j["detail"] = v.detail;
  j["region"] = v.region;
  j["decay"] = v.decay ? to_json(*v.decay) : json(nullptr);
  j["citations"] = v.citations;
  j["boundary"] = v.boundary;
  j["code"] = regimes::verdict_code(v);
  return j;
}

regimes::Verdict verdict_from_json(const json& j) {
  if (field<std::string>(j, "schema") != kSchema) throw DomainError("json: unsupported schema");
  regimes::Verdict v;
  v.existence = parse_existence(field<std::string>(j, "existence"));
  v.detail = field<std::string>(j, "detail");
  v.region = field<std::string>(j, "region");
  if (!j.at("decay").is_null()) v.decay = decay_from_json(j.at("decay"));
  v.citations = field<std::vector<std::string>>(j, "citations");
  v.boundary = field<bool>(j, "boundary");
  return v;
}

json to_json(const Envelope& e) {
  static const char* names[] = {"None", "Compact", "Power", "PowerLog", "LogLog", "Exponential"};
  return {{"kind", names[int(e.kind)]},   {"exponent", e.exponent}, {"log_power", e.log_power},
          {"loglog_power", e.loglog_power}, {"rate", e.rate},       {"rate_power", e.rate_power},
          {"name", e.name()}};
}

Envelope envelope_from_json(const json& j) {
  static const char* names[] = {"None", "Compact", "Power", "PowerLog", "LogLog", "Exponential"};
  const auto k = field<std::string>(j, "kind");
  Envelope e;
  bool found = false;
  for (int i = 0; i < 6; ++i)
    if (k == names[i]) {
      e.kind = Envelope::Kind(i);
      found = true;
    }
  if (!found) throw DomainError("unknown envelope kind '" + k + "'");
  e.exponent = field<double>(j, "exponent");
  e.log_power = field<double>(j, "log_power");
  e.loglog_power = field<double>(j, "loglog_power");
  e.rate = field<double>(j, "rate");
  e.rate_power = field<double>(j, "rate_power");
  return e;
}

void write_csv(const RadialFunction& f, std::ostream& out) {
  out << "r,value\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) out << sci(f.grid(i)) << ',' << sci(f.values(i)) << '\n';
}

RadialFunction read_csv(std::istream& in, const Envelope& tail) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,value", 0) != 0) throw DomainError("csv: expected header 'r,value'");
  std::vector<double> r, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("csv: malformed row '" + line + "'");
    try {
      r.push_back(std::stod(line.substr(0, comma)));
      v.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DomainError("csv: malformed row '" + line + "'");
    }
  }
  if (r.size() < 2) throw DomainError("csv: need at least two rows");
  return RadialFunction(Eigen::Map<Eigen::ArrayXd>(r.data(), Eigen::Index(r.size())),
                        Eigen::Map<Eigen::ArrayXd>(v.data(), Eigen::Index(v.size())), tail);
}

json sidecar(const RadialFunction& f) {
  return {{"schema", kSchema}, {"envelope", to_json(f.tail)}, {"inner_radius", f.inner_radius},
          {"nodes", f.size()}};
}

json to_json(const supersolutions::ResidualReport& r) {
  json j;
  j["schema"] = kSchema;
  j["certified"] = r.certified();
  j["grid_ok"] = r.grid_ok;
  j["tail_ok"] = r.tail_ok;
  j["tail_note"] = r.tail_note;
  j["mu"] = r.mu_used;
  j["min_residual"] = number(r.min_residual);
  j["min_normalized"] = number(r.min_normalized);
  j["first_violation_radius"] = r.first_violation_radius ? json(*r.first_violation_radius) : json(nullptr);
  if (r.grid.size() > 0) j["r_range"] = {r.grid(0), r.grid(r.grid.size() - 1)};
  j["nodes"] = r.grid.size();
  return j;
}

void write_csv(const supersolutions::ResidualReport& r, std::ostream& out) {
  out << "r,residual,normalized\n";
  for (Eigen::Index i = 0; i < r.grid.size(); ++i)
    out << sci(r.grid(i)) << ',' << sci(r.residual(i)) << ',' << sci(r.normalized(i)) << '\n';
}

json to_json(const forms::FormReport& r) {
  json p = json::object();
  for (const auto& [k, v] : r.params) p[k] = number(v);
  return {{"schema", kSchema}, {"kind", r.kind}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)},
          {"gap", number(r.gap)}, {"params", p}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace choquard::io
