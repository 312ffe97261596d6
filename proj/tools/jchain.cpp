// jchain: build Jacobi chains, tabulate transition amplitudes, scan for perfect state
// transfer and run the cross-route verification suite.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jchain/chain.hpp"
#include "jchain/dynamics.hpp"
#include "jchain/error.hpp"
#include "jchain/format.hpp"
#include "jchain/jacobi_chain.hpp"
#include "jchain/polyfam.hpp"
#include "jchain/verify.hpp"

namespace {

using namespace jchain;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiscrepancy = 3;

// Sites listed by default for an infinite family when --r is not given.
constexpr int kInfiniteDefaultSites = 20;

struct FamilyArgs {
  std::string family;
  std::optional<int> N;
  std::optional<double> p, alpha, beta, gamma, delta, b, c;
  std::optional<int> kmax;
};

struct TimeArgs {
  std::vector<double> list;
  std::optional<double> t_min, t_max;
  std::optional<int> steps;
};

struct OutputArgs {
  std::string out;
  std::string format = "csv";
};

void add_family_options(CLI::App* cmd, FamilyArgs& a) {
  cmd->add_option("--family", a.family, "krawtchouk|hahn|dualhahn|racah|charlier|meixner")->required();
  cmd->add_option("--N", a.N, "chain length (finite families)");
  cmd->add_option("--p", a.p, "krawtchouk p");
  cmd->add_option("--alpha", a.alpha, "hahn alpha, charlier alpha");
  cmd->add_option("--beta", a.beta, "hahn beta, racah beta");
  cmd->add_option("--gamma", a.gamma, "dual hahn / racah gamma");
  cmd->add_option("--delta", a.delta, "dual hahn / racah delta");
  cmd->add_option("--b", a.b, "meixner b");
  cmd->add_option("--c", a.c, "meixner c");
  cmd->add_option("--kmax", a.kmax, "truncation for charlier/meixner (default: tail rule)");
}

void add_time_options(CLI::App* cmd, TimeArgs& a) {
  cmd->add_option("--t", a.list, "explicit times")->delimiter(',');
  cmd->add_option("--t-min", a.t_min, "grid start");
  cmd->add_option("--t-max", a.t_max, "grid end (inclusive)");
  cmd->add_option("--steps", a.steps, "number of grid intervals");
}

void add_output_options(CLI::App* cmd, OutputArgs& a) {
  cmd->add_option("--out", a.out, "output path (default stdout)");
  cmd->add_option("--format", a.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& family) {
  if (!v) throw Error(ErrorKind::InvalidSpec, family + " requires " + flag);
  return *v;
}

FamilySpec make_spec(const FamilyArgs& a) {
  const auto kind = parse_family_name(a.family);
  if (!kind) throw Error(ErrorKind::InvalidSpec, "unknown family '" + a.family + "'");
  const std::string& f = a.family;
  FamilySpec spec;
  switch (*kind) {
    case FamilyKind::Krawtchouk: spec = FamilySpec::krawtchouk(need(a.N, "--N", f), need(a.p, "--p", f)); break;
    case FamilyKind::Hahn:
      spec = FamilySpec::hahn(need(a.N, "--N", f), need(a.alpha, "--alpha", f), need(a.beta, "--beta", f));
      break;
    case FamilyKind::DualHahn:
      spec = FamilySpec::dual_hahn(need(a.N, "--N", f), need(a.gamma, "--gamma", f), need(a.delta, "--delta", f));
      break;
    case FamilyKind::Racah:
      spec = FamilySpec::racah(need(a.N, "--N", f), need(a.beta, "--beta", f), need(a.gamma, "--gamma", f),
                               need(a.delta, "--delta", f));
      break;
    case FamilyKind::Charlier: spec = FamilySpec::charlier(need(a.alpha, "--alpha", f), a.kmax); break;
    case FamilyKind::Meixner: spec = FamilySpec::meixner(need(a.b, "--b", f), need(a.c, "--c", f), a.kmax); break;
  }
  if (spec.is_finite() && a.kmax) throw Error(ErrorKind::InvalidSpec, "--kmax only applies to charlier and meixner");
  validate(spec);
  return spec;
}

std::vector<double> make_times(const TimeArgs& a) {
  const bool range = a.t_min || a.t_max || a.steps;
  if (!a.list.empty() && range) throw Error(ErrorKind::InvalidSpec, "give either --t or --t-min/--t-max/--steps");
  if (!a.list.empty()) return a.list;
  if (!range) throw Error(ErrorKind::InvalidSpec, "time grid is empty: give --t or --t-min/--t-max/--steps");
  if (!a.t_min || !a.t_max || !a.steps)
    throw Error(ErrorKind::InvalidSpec, "a time range needs --t-min, --t-max and --steps");
  if (*a.steps < 1) throw Error(ErrorKind::InvalidSpec, "time grid requires steps >= 1");
  if (*a.t_max < *a.t_min) throw Error(ErrorKind::InvalidSpec, "time grid requires t-max >= t-min");
  std::vector<double> t(*a.steps + 1);
  const double h = (*a.t_max - *a.t_min) / *a.steps;
  for (int k = 0; k < *a.steps; ++k) t[k] = *a.t_min + k * h;
  t[*a.steps] = *a.t_max;
  return t;
}

void emit(const OutputArgs& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidSpec, "cannot open output file " + o.out);
  f << text;
}

std::vector<Method> parse_methods(const std::string& m, const FamilySpec& spec) {
  if (m == "all") return available_methods(spec);
  if (m == "spectral") {
    if (!spec.is_finite()) throw Error(ErrorKind::InvalidSpec, "spectral method needs a finite family");
    return {Method::SpectralSum};
  }
  if (m == "closed") return {Method::ClosedForm};
  return {Method::Oracle};
}

int cmd_build(const FamilyArgs& fa, const OutputArgs& oa) {
  if (oa.format != "json") throw Error(ErrorKind::InvalidSpec, "build writes JSON only (use --format json)");
  emit(oa, chain_to_json(build_chain(make_spec(fa))) + "\n");
  return kExitOk;
}

int cmd_evolve(const FamilyArgs& fa, const TimeArgs& ta, const OutputArgs& oa, int s, std::vector<int> rs,
               const std::string& method, double tol) {
  const FamilySpec spec = make_spec(fa);
  const std::vector<double> times = make_times(ta);
  if (rs.empty()) {
    const int last = spec.is_finite() ? spec.N : kInfiniteDefaultSites;
    for (int r = 0; r <= last; ++r) rs.push_back(r);
  }
  std::vector<std::pair<int, int>> sites;
  for (int r : rs) sites.emplace_back(r, s);

  const std::vector<Method> methods = parse_methods(method, spec);
  std::vector<AmplitudeGrid> grids;
  for (Method m : methods) grids.push_back(compute_grid(spec, sites, times, m));

  std::ostringstream os;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (oa.format == "csv") os << "t,r,s,re_f,im_f,abs_f,method\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (const auto& g : grids) {
        const cplx f = g.at(i, k);
        const std::string name(method_name(g.method));
        if (oa.format == "csv") {
          os << format_double(times[k], 12) << ',' << sites[i].first << ',' << s << ',' << format_double(f.real(), 12)
             << ',' << format_double(f.imag(), 12) << ',' << format_double(std::abs(f), 12) << ',' << name << '\n';
        } else {
          rows.push_back({{"t", times[k]}, {"r", sites[i].first}, {"s", s}, {"re_f", f.real()},
                          {"im_f", f.imag()}, {"abs_f", std::abs(f)}, {"method", name}});
        }
      }
    }
  }
  if (oa.format == "json") os << rows.dump(2) << '\n';
  emit(oa, os.str());

  if (grids.size() > 1) {
    double worst = 0.0;
    for (std::size_t g = 1; g < grids.size(); ++g)
      for (std::size_t c = 0; c < grids[0].values.size(); ++c)
        worst = std::max(worst, std::abs(grids[g].values[c] - grids[0].values[c]));
    std::cerr << "max-discrepancy: " << format_double(worst, 6) << '\n';
    if (!(worst <= tol)) return kExitDiscrepancy;
  }
  return kExitOk;
}

int cmd_pst_scan(const FamilyArgs& fa, const TimeArgs& ta, const OutputArgs& oa, int s, std::optional<int> r,
                 double threshold) {
  const FamilySpec spec = make_spec(fa);
  const std::vector<double> times = make_times(ta);
  if (!r && !spec.is_finite()) throw Error(ErrorKind::InvalidSpec, "pst-scan on an infinite family requires --r");
  const int target = r ? *r : spec.N;
  const std::vector<PstEvent> events = detect_pst(spec, s, target, times, threshold);

  const std::string fam(family_name(spec.kind()));
  const std::string n_field = spec.is_finite() ? std::to_string(spec.N) : "";
  std::ostringstream os;
  if (oa.format == "csv") {
    os << "t_peak,fidelity,family,N,params\n";
    for (const auto& e : events)
      os << format_double(e.t, 12) << ',' << format_double(e.fidelity, 12) << ',' << fam << ',' << n_field << ','
         << describe_params(spec) << '\n';
  } else {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& e : events)
      rows.push_back({{"t_peak", e.t}, {"fidelity", e.fidelity}, {"family", fam},
                      {"N", spec.is_finite() ? nlohmann::ordered_json(spec.N) : nlohmann::ordered_json()},
                      {"params", describe_params(spec)}});
    os << rows.dump(2) << '\n';
  }
  emit(oa, os.str());
  return kExitOk;
}

int cmd_verify(const VerifyOptions& vo, const OutputArgs& oa) {
  const VerifyReport report = run_verify(vo);
  emit(oa, report_to_json(report) + "\n");
  if (!report.passed) {
    for (const auto& c : report.checks)
      if (!c.passed)
        std::cerr << "FAILED " << c.name << ": max error " << format_double(c.max_error, 6) << " > "
                  << format_double(c.tolerance, 6) << '\n';
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transition amplitudes of spin chains built from discrete orthogonal polynomials"};
  app.require_subcommand(1);

  FamilyArgs fa;
  TimeArgs ta;
  OutputArgs oa;
  int s = 0;
  std::vector<int> rs;
  std::optional<int> r_opt;
  std::string method = "closed";
  double tol = 1e-8;
  double threshold = 0.999;
  VerifyOptions vo;

  auto* build = app.add_subcommand("build", "write the Jacobi chain as JSON");
  add_family_options(build, fa);
  OutputArgs build_out{"", "json"};
  build->add_option("--out", build_out.out, "output path (default stdout)");
  build->add_option("--format", build_out.format, "json")->check(CLI::IsMember({"csv", "json"}));

  auto* evolve = app.add_subcommand("evolve", "tabulate f_{r,s}(t)");
  add_family_options(evolve, fa);
  add_time_options(evolve, ta);
  add_output_options(evolve, oa);
  evolve->add_option("--s", s, "sending site");
  evolve->add_option("--r", rs, "receiving sites (default: all)")->delimiter(',');
  evolve->add_option("--method", method, "spectral|closed|oracle|all")
      ->check(CLI::IsMember({"spectral", "closed", "oracle", "all"}));
  evolve->add_option("--tol", tol, "allowed discrepancy for --method all");

  auto* pst = app.add_subcommand("pst-scan", "find fidelity peaks of |f_{r,s}(t)|");
  add_family_options(pst, fa);
  add_time_options(pst, ta);
  add_output_options(pst, oa);
  pst->add_option("--s", s, "sending site");
  pst->add_option("--r", r_opt, "receiving site (default N)");
  pst->add_option("--threshold", threshold, "minimum fidelity to report");

  auto* verify = app.add_subcommand("verify", "run the cross-route invariant suite");
  OutputArgs verify_out{"", "json"};
  verify->add_option("--max-N", vo.max_N, "largest chain length drawn");
  verify->add_option("--seed", vo.seed, "random seed");
  verify->add_option("--perturb", vo.perturb, "offset added to J_0 of the oracle chain");
  verify->add_option("--samples", vo.samples, "random draws per family");
  verify->add_option("--out", verify_out.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*build) return cmd_build(fa, build_out);
    if (*evolve) return cmd_evolve(fa, ta, oa, s, rs, method, tol);
    if (*pst) return cmd_pst_scan(fa, ta, oa, s, r_opt, threshold);
    if (*verify) return cmd_verify(vo, verify_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool input = e.kind() == ErrorKind::InvalidSpec || e.kind() == ErrorKind::OutOfSupport;
    return input ? kExitInvalid : kExitVerifyFailed;
  }
  return kExitInvalid;
}
