#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "choquard/agmon.hpp"
#include "choquard/errors.hpp"
#include "choquard/forms.hpp"
#include "choquard/io.hpp"
#include "choquard/regimes.hpp"
#include "choquard/riesz.hpp"
#include "choquard/supersolutions.hpp"

using namespace choquard;
using io::json;

namespace {

// Flags shared by the problem-level subcommands.
struct ProblemFlags {
  int N = 3;
  double alpha = 2.0, p = 2.0, q = 1.0, rho = 1.0;
  std::string potential = "zero";
  double lambda = 1.0, gamma = 0.0, nu = 1.0;

  void add(CLI::App* app, bool with_pq = true) {
    app->add_option("--N", N, "dimension")->required()->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha, "Riesz order, 0 < alpha < N")->required();
    if (with_pq) {
      app->add_option("--p", p, "exponent inside the convolution")->required();
      app->add_option("--q", q, "exponent outside the convolution")->required();
    }
    app->add_option("--potential", potential, "zero | fast | hardy | slow")
        ->check(CLI::IsMember({"zero", "fast", "hardy", "slow"}));
    app->add_option("--lambda", lambda, "potential strength (fast, slow)");
    app->add_option("--gamma", gamma, "potential decay exponent (fast, slow)");
    app->add_option("--nu", nu, "Hardy parameter");
    app->add_option("--rho", rho, "radius of the excluded ball");
  }

  regimes::PotentialSpec spec() const {
    if (potential == "fast") return regimes::Fast{lambda, gamma};
    if (potential == "hardy") return regimes::Hardy{nu};
    if (potential == "slow") return regimes::Slow{lambda, gamma};
    return regimes::Zero{};
  }

  regimes::ProblemParams params() const { return {N, alpha, p, q, spec(), rho}; }
};

struct Output {
  std::string path;
  std::string format = "json";

  void add(CLI::App* app, std::vector<std::string> formats) {
    app->add_option("--output,-o", path, "output file (default: stdout)");
    format = formats.front();
    app->add_option("--format", format)->check(CLI::IsMember(formats));
  }

  void write(const std::string& s) const {
    if (path.empty()) {
      std::cout << s;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + path + "'");
    f << s;
  }
};

// Numeric flags must be finite decimals; CLI11 alone would accept "inf" and "nan".
void require_finite(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({}))
    for (CLI::Option* opt : sub->get_options()) {
      if (opt->get_type_name() != "FLOAT") continue;
      opt->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              std::size_t used = 0;
              const double x = std::stod(s, &used);
              if (used != s.size() || !std::isfinite(x)) return "expected a finite number, got '" + s + "'";
            } catch (const std::exception&) {
              return "expected a finite number, got '" + s + "'";
            }
            return {};
          },
          "FINITE"));
    }
}

// Lower-bound profile of a decay class on [rho, r_max].
RadialFunction decay_profile(const regimes::DecayRate& d, const regimes::ProblemParams& P, double r_max,
                             int per_decade) {
  const Eigen::ArrayXd g = log_grid(P.rho, r_max, per_decade);
  Eigen::ArrayXd v(g.size());
  Envelope env;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double r = g(i);
    v(i) = std::visit(
        [&](const auto& x) -> double {
          using T = std::decay_t<decltype(x)>;
          using namespace regimes;
          if constexpr (std::is_same_v<T, Power> || std::is_same_v<T, PowerFamily>) {
            env = Envelope::power(x.e);
            return std::pow(r, -x.e);
          } else if constexpr (std::is_same_v<T, PowerLog>) {
            env = Envelope::power_log(x.e, x.l);
            return std::pow(r, -x.e) * std::pow(std::log(std::exp(1.0) + r), x.l);
          } else if constexpr (std::is_same_v<T, ExpPsi>) {
            const agmon::LinearProblem pb(P.N, x.gamma, x.lambda, 0.0, 0.0, P.rho);
            env = Envelope::exponential(x.prefactor_power, x.lambda / (1.0 - x.gamma / 2.0), 1.0 - x.gamma / 2.0);
            return std::pow(r, -x.prefactor_power) * std::exp(-agmon::psi_integral(pb, P.rho, r));
          } else {
            env = Envelope::exponential(x.prefactor_power, x.rate, x.power);
            return std::pow(r, -x.prefactor_power) * std::exp(-x.rate * std::pow(r, x.power));
          }
        },
        d);
  }
  return RadialFunction(g, v, env);
}

std::string radial_output(const RadialFunction& f, const std::string& format, json meta) {
  if (format == "csv") {
    std::ostringstream s;
    io::write_csv(f, s);
    return s.str();
  }
  meta["sidecar"] = io::sidecar(f);
  return io::dump(meta);
}

json test_function_json(const forms::TestFunction& phi) {
  return {{"kind", forms::kind_name(phi)}, {"a", phi.a}, {"b", phi.b}, {"exponent", phi.exponent}};
}

struct TestFunctionFlags {
  std::string kind = "tapered";
  double a = 1.0, b = 1e4, exponent = 0.0;
  bool exponent_set = false;

  void add(CLI::App* app) {
    app->add_option("--phi", kind, "bump | tapered | truncated")
        ->check(CLI::IsMember({"bump", "tapered", "truncated"}));
    app->add_option("--a", a, "inner radius of the support");
    app->add_option("--b", b, "outer plateau radius (bump, tapered) or end of support (truncated)");
    app->add_option("--exponent", exponent, "power (default -(N+alpha)/2)");
  }

  forms::TestFunction make(int N, double alpha, double R) const {
    const double e = exponent_set ? exponent : -(N + alpha) / 2.0;
    forms::TestFunction phi;
    if (kind == "bump") phi = forms::TestFunction::bump(a, b);
    else if (kind == "truncated") phi = forms::TestFunction::truncated_power(e, a, b);
    else phi = forms::TestFunction::tapered_power(e, a, b);
    return phi.scaled(R);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive supersolutions of Choquard equations in exterior domains"};
  app.require_subcommand(1);

  ProblemFlags pf;
  // One output target per subcommand so that format defaults stay separate.
  Output o_classify, o_decay, o_regions, o_verify, o_minimal, o_sigma, o_rayleigh, o_gap, o_annulus,
      o_semigroup;

  auto* classify = app.add_subcommand("classify", "existence verdict, decay class and citations");
  auto* decay = app.add_subcommand("decay", "lower decay bound of positive supersolutions");
  auto* regions = app.add_subcommand("regions", "verdict map over a (p, q) box");
  auto* verify = app.add_subcommand("verify", "certify a construction by its residual");
  auto* minimal = app.add_subcommand("minimal", "minimal positive solution of the linear problem");
  auto* sigma = app.add_subcommand("sigma", "sigma_alpha(beta), sigma* and lambda*");
  auto* rayleigh = app.add_subcommand("rayleigh", "Riesz energy over weighted mass");
  auto* gap = app.add_subcommand("gap", "positivity gap for p + q = 1 and a slow potential");
  auto* annulus = app.add_subcommand("annulus", "annulus bound at scale R for a profile");
  auto* semigroup = app.add_subcommand("semigroup-check", "numerical I_alpha * s^-beta against the oracle");

  for (CLI::App* s : {classify, decay, verify, gap, annulus}) pf.add(s);
  classify->add_option("--output,-o", o_classify.path, "output file (default: stdout)");

  double r_max = 1e4;
  int per_decade = 64;
  o_decay.add(decay, {"json", "csv"});
  decay->add_option("--r-max", r_max, "end of the sampled profile (csv)");
  decay->add_option("--per-decade", per_decade)->check(CLI::Range(4, 4096));

  std::string p_range = "0..6", q_range = "-1..3";
  int resolution = 200;
  pf.add(regions, false);
  regions->add_option("--p", p_range, "lo..hi")->required();
  regions->add_option("--q", q_range, "lo..hi")->required();
  regions->add_option("--res", resolution)->check(CLI::Range(2, 4000));
  o_regions.add(regions, {"svg", "csv"});

  std::string family;
  double mu = 0.0, decades = 4.0, shift = 0.0, coupling = 0.1, beta = 1.0, coupling_sigma = 0.0;
  verify->add_option("--family", family, "construction family")->required();
  verify->add_option("--mu", mu, "fixed scale (default: search the ladder)");
  verify->add_option("--decades", decades, "length of the certified range")->check(CLI::Range(0.5, 12.0));
  verify->add_option("--per-decade", per_decade)->check(CLI::Range(4, 4096));
  verify->add_option("--shift", shift, "SlowPoly / SlowLog shift (default: automatic)");
  verify->add_option("--m", coupling, "PowerShift shift or ExpMinimal coupling");
  verify->add_option("--beta", beta, "GreenDecay log exponent");
  verify->add_option("--sigma", coupling_sigma, "ExpMinimal coupling decay");
  o_verify.add(verify, {"json", "csv"});

  int N = 3;
  double alpha = 2.0, gamma = 0.0, lambda = 1.0, rho = 1.0, beta_agmon = 0.0;
  minimal->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  minimal->add_option("--gamma", gamma)->required();
  minimal->add_option("--lambda", lambda)->required();
  minimal->add_option("--m", coupling, "coupling of the m|x|^-sigma term");
  minimal->add_option("--sigma", coupling_sigma, "decay of the coupling");
  minimal->add_option("--rho", rho);
  minimal->add_option("--r-max", r_max);
  minimal->add_option("--per-decade", per_decade)->check(CLI::Range(4, 4096));
  minimal->add_option("--beta-agmon", beta_agmon, "exponent of the tau correction (default (1-gamma/2)/2)");
  o_minimal.add(minimal, {"csv", "json"});

  std::optional<double> beta_opt;
  sigma->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  sigma->add_option("--alpha", alpha)->required();
  sigma->add_option("--beta", beta_opt, "alpha < beta < N (default: the minimiser (N+alpha)/2)");
  o_sigma.add(sigma, {"text", "json"});

  TestFunctionFlags tf;
  bool best = false;
  std::vector<double> scan_decades{6, 12, 18};
  rayleigh->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  rayleigh->add_option("--alpha", alpha)->required();
  tf.add(rayleigh);
  rayleigh->add_flag("--best", best, "scan TruncatedPower supports starting at 1");
  rayleigh->add_option("--decades", scan_decades, "support lengths for --best");
  rayleigh->add_option("--per-decade", per_decade)->check(CLI::Range(4, 4096));
  rayleigh->add_option("--output,-o", o_rayleigh.path);

  double R = 1.0;
  tf.add(gap);
  gap->add_option("--R", R, "scale of the test function");
  gap->add_option("--output,-o", o_gap.path);

  std::string profile;
  double power = 1.0;
  annulus->add_option("--R", R, "scale, R >= 2 rho")->required();
  annulus->add_option("--profile", profile, "CSV profile with header r,value");
  annulus->add_option("--power", power, "use u = r^-power when no profile is given (also the tail of a CSV profile)");
  annulus->add_option("--output,-o", o_annulus.path);

  std::string domain = "1e-3..1e5", window = "1..10";
  double sg_beta = 2.5;
  semigroup->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  semigroup->add_option("--alpha", alpha)->required();
  semigroup->add_option("--beta", sg_beta, "alpha < beta < N")->required();
  semigroup->add_option("--domain", domain, "sampled range lo..hi");
  semigroup->add_option("--window", window, "range compared with the oracle");
  semigroup->add_option("--per-decade", per_decade)->check(CLI::Range(4, 4096));
  o_semigroup.add(semigroup, {"json", "csv"});

  require_finite(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (classify->parsed()) {
      o_classify.write(io::dump(io::to_json(regimes::classify(pf.params()))));
    } else if (decay->parsed()) {
      const auto P = pf.params();
      const auto d = regimes::decay_rate(P);
      json meta = {{"schema", io::kSchema}, {"decay", io::to_json(d)}};
      if (o_decay.format == "json") o_decay.write(io::dump(meta));
      else o_decay.write(radial_output(decay_profile(d, P, r_max * P.rho, per_decade), "csv", meta));
    } else if (regions->parsed()) {
      const auto map = regimes::region_scan(pf.N, pf.alpha, pf.spec(), regimes::parse_range(p_range),
                                            regimes::parse_range(q_range), resolution, pf.rho);
      std::ostringstream s;
      regimes::emit_region_diagram(map, o_regions.format, s);
      o_regions.write(s.str());
    } else if (verify->parsed()) {
      const auto P = pf.params();
      supersolutions::CandidateOptions opts;
      opts.beta = beta;
      opts.m = coupling;
      opts.nu = shift;
      opts.sigma = coupling_sigma;
      auto c = supersolutions::make_candidate(supersolutions::parse_family(family), P, opts);
      supersolutions::ResidualReport rep;
      if (verify->count("--mu")) {
        if (!(mu > 0.0)) throw DomainError("--mu must be positive");
        c.mu = mu;
        rep = supersolutions::residual(c, P, decades, per_decade);
      } else {
        rep = supersolutions::pick_mu(c, P, decades, per_decade);
      }
      if (o_verify.format == "csv") {
        std::ostringstream s;
        io::write_csv(rep, s);
        o_verify.write(s.str());
      } else {
        json j = io::to_json(rep);
        j["family"] = supersolutions::family_name(c.family);
        o_verify.write(io::dump(j));
      }
      if (!rep.certified()) std::cerr << "not certified: " << rep.tail_note << '\n';
    } else if (minimal->parsed()) {
      const agmon::LinearProblem pb(N, gamma, lambda, minimal->count("--m") ? coupling : 0.0, coupling_sigma,
                                    rho, beta_agmon);
      const auto sol = agmon::minimal_solution(pb, r_max * rho, per_decade);
      json meta = {{"schema", io::kSchema},
                   {"N", N},
                   {"gamma", pb.gamma},
                   {"lambda", pb.lambda},
                   {"m", pb.m},
                   {"sigma", pb.sigma},
                   {"rho", pb.rho},
                   {"beta_agmon", sol.beta_agmon},
                   {"beta_agmon_default", sol.beta_default},
                   {"matching_radius", sol.matching_radius},
                   {"sandwich", agmon::sandwich_holds(pb, sol)}};
      o_minimal.write(radial_output(sol.profile, o_minimal.format, meta));
    } else if (sigma->parsed()) {
      const riesz::RieszParams p(N, alpha);
      const double b = beta_opt ? *beta_opt : (N + alpha) / 2.0;
      const double s = riesz::sigma<double>(p, b);
      if (o_sigma.format == "text") {
        o_sigma.write(json(s).dump() + "\n");
      } else {
        o_sigma.write(io::dump({{"schema", io::kSchema},
                            {"N", N},
                            {"alpha", alpha},
                            {"beta", b},
                            {"sigma", s},
                            {"sigma_star", riesz::sigma_star<double>(p)},
                            {"lambda_star", riesz::lambda_star<double>(p)}}));
      }
    } else if (rayleigh->parsed()) {
      const riesz::RieszParams p(N, alpha);
      tf.exponent_set = rayleigh->count("--exponent") > 0;
      forms::RayleighResult r;
      if (best) {
        const double e0 = -(N + alpha) / 2.0;
        std::vector<double> es{e0 - 0.05, e0, e0 + 0.05};
        if (tf.exponent_set) es = {tf.exponent};
        r = forms::best_truncated_power(p, es, scan_decades, per_decade);
      } else {
        r = forms::rayleigh_quotient(tf.make(N, alpha, 1.0), p, per_decade);
      }
      const double ss = riesz::sigma_star<double>(p);
      o_rayleigh.write(io::dump({{"schema", io::kSchema},
                          {"phi", test_function_json(r.phi)},
                          {"riesz_energy", r.riesz},
                          {"weighted_mass", r.mass},
                          {"ratio", r.ratio},
                          {"sigma_star", ss},
                          {"ratio_over_sigma_star", r.ratio / ss}}));
    } else if (gap->parsed()) {
      const auto P = pf.params();
      tf.exponent_set = gap->count("--exponent") > 0;
      const auto phi = tf.make(P.N, P.alpha, R);
      json j = io::to_json(forms::positivity_gap(phi, P));
      j["phi"] = test_function_json(phi);
      o_gap.write(io::dump(j));
    } else if (annulus->parsed()) {
      const auto P = pf.params();
      RadialFunction u;
      if (!profile.empty()) {
        std::ifstream f(profile);
        if (!f) throw DomainError("cannot open profile '" + profile + "'");
        u = io::read_csv(f, Envelope::power(power));
      } else {
        const Eigen::ArrayXd g = log_grid(P.rho, 4.0 * R, 64);
        u = RadialFunction(g, g.pow(-power), Envelope::power(power));
      }
      o_annulus.write(io::dump(io::to_json(forms::annulus_bound_check(u, P, R))));
    } else if (semigroup->parsed()) {
      const riesz::RieszParams p(N, alpha);
      const auto d = regimes::parse_range(domain), w = regimes::parse_range(window);
      if (!(w.lo >= d.lo && w.hi <= d.hi)) throw DomainError("--window must lie inside --domain");
      const Eigen::ArrayXd g = log_grid(d.lo, d.hi, per_decade);
      const RadialFunction f(g, g.pow(-sg_beta), Envelope::power(sg_beta), 0.0);
      const auto conv = riesz::radial_convolution(f, p);
      double worst = 0.0;
      std::ostringstream csv;
      csv << "r,computed,oracle\n";
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double oracle = riesz::semigroup_oracle<double>(p, sg_beta, g(i));
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", g(i), conv.potential.values(i), oracle);
        csv << buf;
        if (g(i) >= w.lo && g(i) <= w.hi)
          worst = std::max(worst, std::abs(conv.potential.values(i) / oracle - 1.0));
      }
      if (o_semigroup.format == "csv") o_semigroup.write(csv.str());
      else
        o_semigroup.write(io::dump({{"schema", io::kSchema},
                            {"N", N},
                            {"alpha", alpha},
                            {"beta", sg_beta},
                            {"sigma", riesz::sigma<double>(p, sg_beta)},
                            {"window", {w.lo, w.hi}},
                            {"max_relative_error", worst}}));
    }
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
