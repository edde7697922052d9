#include "choquard/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace choquard::regimes {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kBoundaryTol = 1e-12;

// Comparisons that treat values within kBoundaryTol (relative to max(1, |l|,
// |r|)) as equal, so that tuples placed on a boundary line in floating point
// get the equality case; records whether any comparison was such a tie.
struct Cmp {
  bool boundary = false;
  bool tie(double l, double r) {
    const bool t = std::abs(l - r) <= kBoundaryTol * std::max({1.0, std::abs(l), std::abs(r)});
    boundary = boundary || t;
    return t;
  }
  bool gt(double l, double r) { return !tie(l, r) && l > r; }
  bool ge(double l, double r) { return tie(l, r) || l > r; }
  bool lt(double l, double r) { return !tie(l, r) && l < r; }
  bool le(double l, double r) { return tie(l, r) || l < r; }
  bool eq(double l, double r) { return tie(l, r); }
};

Verdict exists(DecayRate d, std::string region, std::vector<std::string> cites) {
  Verdict v;
  v.existence = Existence::Exists;
  v.decay = d;
  v.region = std::move(region);
  v.citations = std::move(cites);
  return v;
}

Verdict not_exists(std::vector<std::string> cites) {
  Verdict v;
  v.existence = Existence::NotExists;
  v.citations = std::move(cites);
  return v;
}

Verdict open(std::string why, std::vector<std::string> cites = {}) {
  Verdict v;
  v.existence = Existence::Open;
  v.detail = std::move(why);
  v.citations = std::move(cites);
  return v;
}

// Unperturbed Laplacian and fast decay potentials, N >= 3.
Verdict classify_green(const ProblemParams& P, Cmp& c, const std::string& cite) {
  const double N = P.N, a = P.alpha, p = P.p, q = P.q;
  const double crit = a / (N - 2.0);
  bool ok = c.gt(p, crit) && c.gt(p + q, (N + a) / (N - 2.0));
  if (a > N - 2.0)
    ok = ok && c.gt(q, crit);
  else if (a == N - 2.0)
    ok = ok && c.ge(q, 1.0);
  else
    ok = ok && c.gt(q, 1.0 - (N - a - 2.0) * p / N);
  if (!ok) return not_exists({cite});
  if (c.gt(q, crit)) return exists(Power{N - 2.0}, "green", {cite});
  if (c.eq(q, crit)) {
    if (crit == 1.0) return exists(PowerFamily{N - 2.0}, "green-family", {cite});
    return exists(PowerLog{N - 2.0, (N - 2.0) / (N - a - 2.0)}, "green-log", {cite});
  }
  return exists(Power{(N - a - 2.0) / (1.0 - q)}, "sublinear", {cite});
}

Verdict classify_hardy(const ProblemParams& P, double nu, Cmp& c) {
  const double N = P.N, a = P.alpha, p = P.p, q = P.q;
  const std::string cite = "Thm-Hardy";
  const double k = (N - 2.0) / 2.0 + nu;
  // q threshold of the Green decay region; equals 1 when α = N - 2.
  const double qc = 1.0 + (a - (N - 2.0)) / k;
  bool ok = c.gt(p, a / k) && c.gt(p + q, 1.0 + (a + 2.0) / k);
  if (a > N - 2.0) {
    ok = ok && c.gt(q, qc);
  } else if (a == N - 2.0) {
    ok = ok && c.ge(q, 1.0);
  } else {
    ok = ok && c.gt(q, 1.0 - (N - a - 2.0) * p / N);
    if (nu < (N - 2.0) / 2.0) ok = ok && c.gt(q, 1.0 - (N - a - 2.0) / ((N - 2.0) / 2.0 - nu));
  }
  if (!ok) return not_exists({cite});
  if (c.gt(q, qc)) return exists(Power{k}, "green", {cite});
  if (c.eq(q, qc)) {
    if (a == N - 2.0) return exists(PowerFamily{k}, "green-family", {cite});
    return exists(PowerLog{k, k / (N - a - 2.0)}, "green-log", {cite});
  }
  return exists(Power{(N - a - 2.0) / (1.0 - q)}, "sublinear", {cite});
}

Verdict classify_slow(const ProblemParams& P, const Slow& V, Cmp& c) {
  const double N = P.N, a = P.alpha, p = P.p, q = P.q, g = V.gamma, l = V.lambda;
  const double pref = (N - 1.0) / 2.0 - g / 4.0;

  if (c.gt(q, 1.0))
    return exists(ExpPlain{pref, 2.0 * l / (2.0 - g), (2.0 - g) / 2.0, false}, "exp", {"Thm-exp"});

  if (c.eq(q, 1.0)) {
    std::vector<std::string> cites;
    if (P.N == 3 && a == 2.0 && p == 2.0) cites.push_back("TheoremA");
    cites.push_back("Thm-exp+");
    if (!c.le(g, N - a)) return not_exists(cites);
    if (c.lt(g, N - a)) return exists(ExpPsi{pref, g, N - a, l, true}, "exp-psi", cites);
    return exists(ExpPlain{pref, 2.0 * l / (2.0 - g), (2.0 - g) / 2.0, true}, "exp-m", cites);
  }

  // q < 1.
  if (c.eq(p + q, 1.0)) {
    const double ls = riesz::lambda_star(P.riesz());
    const std::string rho_note =
        "exists for rho > rho0 for some rho0 > 0; rho0 is not explicit (given rho = " +
        [&] {
          char b[32];
          std::snprintf(b, sizeof b, "%.17g", P.rho);
          return std::string(b);
        }() + ")";
    auto threshold = [&](std::vector<std::string> cites) {
      Verdict v;
      v.existence = Existence::ThresholdDependent;
      v.detail = rho_note;
      v.decay = Power{N / (1.0 - q)};
      v.region = "homogeneous";
      v.citations = std::move(cites);
      return v;
    };
    if (c.gt(g, -a)) return not_exists({P.N >= 2 ? "t-pq1" : "nonSlowDecayq"});
    if (c.eq(g, -a)) {
      if (c.lt(l, ls)) {
        if (P.N >= 2) return not_exists({"t-pq1"});
        return open("N = 1 below the Stein-Weiss threshold is not covered", {"t-pq1-open"});
      }
      if (c.gt(l, ls)) return threshold({P.N >= 2 ? "t-pq1" : "proptsrn"});
      return open("lambda = lambda* at gamma = -alpha: no claim", {"t-pq1-open"});
    }
    if (P.N >= 2) return threshold({"t-pq1"});
    return open("N = 1, p + q = 1, gamma < -alpha is not covered", {"t-pq1-open"});
  }

  if (c.ge(g, N - a)) return not_exists({"Thm-slow"});

  const double moderate = 1.0 - (N - a - g) * p / N;
  if (c.gt(g, -a)) {
    if (!c.gt(q, moderate)) return not_exists({"Thm-slow-moderate"});
    return exists(Power{(N - a - g) / (1.0 - q)}, "moderate", {"Thm-slow-moderate"});
  }

  const std::string cite = "Thm-slow-fast";
  if (!c.gt(q, 1.0 + g * p / a)) return not_exists({cite});
  if (c.gt(q, moderate)) return exists(Power{(N - a - g) / (1.0 - q)}, "moderate", {cite});
  if (c.eq(q, moderate)) return exists(PowerLog{N / p, 1.0 / (1.0 - q - p)}, "fast-log", {cite});
  return exists(Power{-(a + g) / (1.0 - q - p)}, "fast-growth", {cite});
}

}  // namespace

void validate(const PotentialSpec& v) {
  std::visit(overloaded{
                 [](const Zero&) {},
                 [](const Fast& f) {
                   if (!std::isfinite(f.lambda) || !(f.gamma > 2.0) || !std::isfinite(f.gamma))
                     throw DomainError("Fast potential requires gamma > 2 and finite lambda");
                 },
                 [](const Hardy& h) {
                   if (!(h.nu > 0.0) || !std::isfinite(h.nu))
                     throw DomainError("Hardy potential requires nu > 0");
                 },
                 [](const Slow& s) {
                   if (!(s.lambda > 0.0) || !std::isfinite(s.lambda))
                     throw DomainError("Slow potential requires lambda > 0");
                   if (!(s.gamma < 2.0) || !std::isfinite(s.gamma))
                     throw DomainError("Slow potential requires gamma < 2");
                 },
             },
             v);
}

std::string potential_name(const PotentialSpec& v) {
  return std::visit(overloaded{[](const Zero&) { return std::string("zero"); },
                               [](const Fast&) { return std::string("fast"); },
                               [](const Hardy&) { return std::string("hardy"); },
                               [](const Slow&) { return std::string("slow"); }},
                    v);
}

double potential_value(const PotentialSpec& v, int N, double r) {
  return std::visit(
      overloaded{[](const Zero&) { return 0.0; },
                 [&](const Fast& f) { return f.lambda * std::pow(r, -f.gamma); },
                 [&](const Hardy& h) {
                   const double k0 = 0.5 * (N - 2.0);
                   return (h.nu * h.nu - k0 * k0) / (r * r);
                 },
                 [&](const Slow& s) { return s.lambda * s.lambda * std::pow(r, -s.gamma); }},
      v);
}

ProblemParams::ProblemParams(int N_, double alpha_, double p_, double q_, PotentialSpec pot,
                             double rho_)
    : N(N_), alpha(alpha_), p(p_), q(q_), potential(pot), rho(rho_) {
  riesz::RieszParams check(N, alpha);
  (void)check;
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("ProblemParams: p must be > 0");
  if (!std::isfinite(q)) throw DomainError("ProblemParams: q must be finite");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("ProblemParams: rho must be > 0");
  validate(potential);
}

std::string to_string(Existence e) {
  switch (e) {
    case Existence::Exists: return "Exists";
    case Existence::NotExists: return "NotExists";
    case Existence::ThresholdDependent: return "ThresholdDependent";
    case Existence::Open: return "Open";
  }
  return "Open";
}

std::string decay_name(const DecayRate& d) {
  return std::visit(overloaded{[](const Power&) { return std::string("Power"); },
                               [](const PowerLog&) { return std::string("PowerLog"); },
                               [](const PowerFamily&) { return std::string("PowerFamily"); },
                               [](const ExpPsi&) { return std::string("ExpPsi"); },
                               [](const ExpPlain&) { return std::string("ExpPlain"); }},
                    d);
}

Verdict classify(const ProblemParams& P) {
  Cmp c;
  Verdict v = std::visit(
      overloaded{
          [&](const Zero&) {
            if (P.N <= 2) return not_exists({"dim12"});
            return classify_green(P, c, "Thm-free");
          },
          [&](const Fast&) {
            if (P.N <= 2) return open("fast decay potentials in dimensions 1 and 2 are not covered");
            return classify_green(P, c, "Thm-fast");
          },
          [&](const Hardy& h) {
            if (P.N < 2) return open("Hardy potentials in dimension 1 are not covered");
            return classify_hardy(P, h.nu, c);
          },
          [&](const Slow& s) { return classify_slow(P, s, c); },
      },
      P.potential);
  v.boundary = c.boundary;
  return v;
}

DecayRate decay_rate(const ProblemParams& P) {
  const Verdict v = classify(P);
  if (!v.decay) throw NoDecayClaim("no decay rate is stated for a " + to_string(v.existence) + " tuple");
  return *v.decay;
}

std::string verdict_code(const Verdict& v) {
  std::string s = to_string(v.existence);
  if (!v.region.empty()) s += "/" + v.region;
  return s;
}

Range parse_range(const std::string& s) {
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(t, &used);
    } catch (const std::exception&) {
      throw DomainError("bad range '" + s + "'");
    }
    if (used != t.size() || !std::isfinite(x)) throw DomainError("bad range '" + s + "'");
    return x;
  };
  const auto pos = s.find("..");
  if (pos == std::string::npos) {
    const double x = num(s);
    return {x, x};
  }
  Range r{num(s.substr(0, pos)), num(s.substr(pos + 2))};
  if (r.hi < r.lo) throw DomainError("range '" + s + "' has hi < lo");
  return r;
}

double RegionMap::p_at(int i) const {
  if (resolution == 1 || p_range.hi == p_range.lo) return p_range.lo;
  return p_range.lo + (p_range.hi - p_range.lo) * (i + 0.5) / resolution;
}

double RegionMap::q_at(int j) const {
  if (resolution == 1 || q_range.hi == q_range.lo) return q_range.lo;
  return q_range.lo + (q_range.hi - q_range.lo) * (j + 0.5) / resolution;
}

RegionMap region_scan(int N, double alpha, const PotentialSpec& potential, Range pr, Range qr,
                      int resolution, double rho) {
  if (resolution < 2) throw DomainError("region_scan: resolution must be >= 2");
  riesz::RieszParams check(N, alpha);
  (void)check;
  validate(potential);
  RegionMap m{N, alpha, potential, rho, pr, qr, resolution, {}};
  m.codes.resize(std::size_t(resolution) * resolution);
  for (int j = 0; j < resolution; ++j)
    for (int i = 0; i < resolution; ++i)
      m.codes[std::size_t(j) * resolution + i] =
          verdict_code(classify(ProblemParams(N, alpha, m.p_at(i), m.q_at(j), potential, rho)));
  return m;
}

double Line::signed_distance(double p, double q) const {
  return (a * p + b * q - c) / std::hypot(a, b);
}

std::vector<Line> analytic_lines(int N_, double a, const PotentialSpec& potential) {
  const double N = N_;
  std::vector<Line> out;
  auto green = [&] {
    if (N_ <= 2) return;
    out.push_back({1, 0, a / (N - 2), "p = alpha/(N-2)"});
    out.push_back({1, 1, (N + a) / (N - 2), "p + q = (N+alpha)/(N-2)"});
    out.push_back({0, 1, a / (N - 2), "q = alpha/(N-2)"});
    if (a < N - 2) out.push_back({(N - a - 2) / N, 1, 1, "q = 1 - (N-alpha-2)p/N"});
  };
  std::visit(overloaded{
                 [&](const Zero&) { green(); },
                 [&](const Fast&) { green(); },
                 [&](const Hardy& h) {
                   if (N_ < 2) return;
                   const double k = (N - 2) / 2 + h.nu;
                   out.push_back({1, 0, a / k, "p = alpha/k"});
                   out.push_back({1, 1, 1 + (a + 2) / k, "p + q = 1 + (alpha+2)/k"});
                   out.push_back({0, 1, 1 + (a - (N - 2)) / k, "q = 1 + (alpha-(N-2))/k"});
                   if (a < N - 2) {
                     out.push_back({(N - a - 2) / N, 1, 1, "q = 1 - (N-alpha-2)p/N"});
                     if (h.nu < (N - 2) / 2)
                       out.push_back({0, 1, 1 - (N - a - 2) / ((N - 2) / 2 - h.nu),
                                      "q = 1 - (N-alpha-2)/((N-2)/2-nu)"});
                   }
                 },
                 [&](const Slow& s) {
                   out.push_back({0, 1, 1, "q = 1"});
                   out.push_back({1, 1, 1, "p + q = 1"});
                   out.push_back({(N - a - s.gamma) / N, 1, 1, "q = 1 - (N-alpha-gamma)p/N"});
                   out.push_back({-s.gamma / a, 1, 1, "q = 1 + gamma p/alpha"});
                 },
             },
             potential);
  return out;
}

namespace {

std::string cell_colour(const std::string& code) {
  static const std::map<std::string, std::string> palette = {
      {"NotExists", "#d9d9d9"},           {"Open", "#ffffff"},
      {"Exists/green", "#9ecae1"},        {"Exists/green-family", "#6baed6"},
      {"Exists/green-log", "#4292c6"},    {"Exists/sublinear", "#fdae6b"},
      {"Exists/exp", "#a1d99b"},          {"Exists/exp-psi", "#74c476"},
      {"Exists/exp-m", "#41ab5d"},        {"Exists/moderate", "#fdd0a2"},
      {"Exists/fast-log", "#f16913"},     {"Exists/fast-growth", "#bcbddc"},
      {"ThresholdDependent/homogeneous", "#fb6a4a"}};
  const auto it = palette.find(code);
  return it == palette.end() ? "#000000" : it->second;
}

}  // namespace

void emit_region_diagram(const RegionMap& m, const std::string& format, std::ostream& out) {
  if (m.codes.empty()) throw DomainError("emit_region_diagram: empty map");
  if (format == "csv") {
    out << "p,q,code\n";
    char buf[64];
    for (int j = 0; j < m.resolution; ++j)
      for (int i = 0; i < m.resolution; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", m.p_at(i), m.q_at(j));
        out << buf << m.at(i, j) << '\n';
      }
    return;
  }
  if (format != "svg") throw DomainError("emit_region_diagram: format must be svg or csv");

  const double W = 600, H = 600, pad = 50;
  const double cw = W / m.resolution, ch = H / m.resolution;
  const double p0 = m.p_range.lo, p1 = m.p_range.hi, q0 = m.q_range.lo, q1 = m.q_range.hi;
  auto X = [&](double p) { return pad + (p1 > p0 ? (p - p0) / (p1 - p0) : 0.5) * W; };
  auto Y = [&](double q) { return pad + H - (q1 > q0 ? (q - q0) / (q1 - q0) : 0.5) * H; };
  char buf[256];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%g\" "
                "height=\"%g\">\n",
                W + 2 * pad, H + 2 * pad);
  out << buf;
  for (int j = 0; j < m.resolution; ++j)
    for (int i = 0; i < m.resolution; ++i) {
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n",
                    pad + i * cw, pad + H - (j + 1) * ch, cw + 0.01, ch + 0.01,
                    cell_colour(m.at(i, j)).c_str());
      out << buf;
    }
  out << "<g stroke=\"#000000\" stroke-width=\"1.5\" fill=\"none\">\n";
  for (const Line& L : analytic_lines(m.N, m.alpha, m.potential)) {
    // Clip a·p + b·q = c to the plotting box.
    std::vector<std::pair<double, double>> pts;
    if (L.b != 0.0) {
      for (double p : {p0, p1}) {
        const double q = (L.c - L.a * p) / L.b;
        if (q >= q0 && q <= q1) pts.emplace_back(p, q);
      }
    }
    if (L.a != 0.0) {
      for (double q : {q0, q1}) {
        const double p = (L.c - L.b * q) / L.a;
        if (p >= p0 && p <= p1) pts.emplace_back(p, q);
      }
    }
    if (pts.size() < 2) continue;
    std::snprintf(buf, sizeof buf, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n",
                  X(pts[0].first), Y(pts[0].second), X(pts[1].first), Y(pts[1].second));
    out << buf;
  }
  out << "</g>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\">p</text>\n"
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\">q</text>\n",
                pad + W / 2, H + 1.7 * pad, pad / 3, pad + H / 2);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">p: %g..%g  q: %g..%g  N=%d "
                "alpha=%g %s</text>\n",
                pad, pad * 0.6, p0, p1, q0, q1, m.N, m.alpha, potential_name(m.potential).c_str());
  out << buf << "</svg>\n";
}

}  // namespace choquard::regimes
