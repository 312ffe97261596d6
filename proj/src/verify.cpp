#include "jchain/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <json.hpp>

#include "jchain/chain.hpp"
#include "jchain/error.hpp"
#include "jchain/dynamics.hpp"
#include "jchain/oracle.hpp"

namespace jchain {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

FamilySpec random_spec(FamilyKind kind, int N, Rng& rng) {
  switch (kind) {
    case FamilyKind::Krawtchouk: return FamilySpec::krawtchouk(N, uniform(rng, 0.05, 0.95));
    case FamilyKind::Hahn: {
      const double a = uniform(rng, -0.9, 4.0);
      return FamilySpec::hahn(N, a, uniform(rng, -0.9, 4.0));
    }
    case FamilyKind::DualHahn: {
      const double g = uniform(rng, -0.9, 4.0);
      return FamilySpec::dual_hahn(N, g, uniform(rng, -0.9, 4.0));
    }
    case FamilyKind::Racah: {
      const double g = uniform(rng, -0.9, 4.0);
      const double d = uniform(rng, -0.9, 4.0);
      return FamilySpec::racah(N, g + N + uniform(rng, 0.1, 5.0), g, d);
    }
    default: break;
  }
  throw Error(ErrorKind::InvalidSpec, "no random generator for infinite families");
}

constexpr FamilyKind kFinite[] = {FamilyKind::Krawtchouk, FamilyKind::Hahn, FamilyKind::DualHahn, FamilyKind::Racah};

struct Check {
  CheckResult r;
  Check(std::string name, double tol) {
    r.name = std::move(name);
    r.tolerance = tol;
  }
  void add(double err) {
    ++r.samples;
    if (!(err <= r.max_error)) r.max_error = std::isnan(err) ? INFINITY : err;
  }
  CheckResult done() {
    r.passed = r.max_error <= r.tolerance;
    return r;
  }
};

void triple_agreement(const VerifyOptions& opt, Rng& rng, std::vector<CheckResult>& out) {
  for (FamilyKind kind : kFinite) {
    Check closed_vs_spectral("triple_agreement." + std::string(family_name(kind)) + ".closed_vs_spectral", 1e-9);
    Check spectral_vs_oracle("triple_agreement." + std::string(family_name(kind)) + ".spectral_vs_oracle", 1e-9);
    for (int i = 0; i < opt.samples; ++i) {
      const int N = uniform_int(rng, 1, opt.max_N);
      const FamilySpec spec = random_spec(kind, N, rng);
      const int r = uniform_int(rng, 0, N);
      const int s = uniform_int(rng, 0, N);
      const double t = uniform(rng, 0.0, 4.0 * std::numbers::pi);

      JacobiChain chain = build_chain(spec);
      chain.J[0] += opt.perturb;
      const cplx oracle_f = oracle::amplitude(oracle::eig_tridiagonal(chain), r, s, t);
      const cplx spectral_f = amplitude_spectral(spectral_data(spec), r, s, t);
      const cplx closed_f = amplitude_closed(spec, r, s, t);
      closed_vs_spectral.add(std::abs(closed_f - spectral_f));
      spectral_vs_oracle.add(std::abs(spectral_f - oracle_f));
    }
    out.push_back(closed_vs_spectral.done());
    out.push_back(spectral_vs_oracle.done());
  }
}

std::vector<FamilySpec> property_specs(const VerifyOptions& opt, Rng& rng) {
  std::vector<FamilySpec> specs;
  for (FamilyKind kind : kFinite) {
    specs.push_back(random_spec(kind, opt.max_N, rng));
    for (int i = 0; i < 3; ++i) specs.push_back(random_spec(kind, uniform_int(rng, 1, opt.max_N), rng));
  }
  return specs;
}

void properties(const VerifyOptions& opt, Rng& rng, std::vector<CheckResult>& out) {
  Check unitarity("unitarity", 1e-9);
  Check t0("t0_delta", 1e-12);
  Check symmetry("rs_symmetry", 1e-12);
  Check sign_flip("sign_flip_covariance", 1e-12);

  for (const FamilySpec& spec : property_specs(opt, rng)) {
    const int n = spec.N + 1;
    const double t = uniform(rng, 0.1, 6.0);
    const SpectralData sd = spectral_data(spec);
    const JacobiChain chain = build_chain(spec);
    const oracle::DenseSpectrum plain = oracle::eig_tridiagonal(chain);
    const oracle::DenseSpectrum flipped = oracle::eig_tridiagonal(flip_sign(chain));

    std::vector<cplx> F(n * n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) F[r * n + s] = amplitude_closed(spec, r, s, t);

    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        cplx g = 0.0;
        for (int k = 0; k < n; ++k) g += std::conj(F[k * n + r]) * F[k * n + s];
        unitarity.add(std::abs(g - (r == s ? 1.0 : 0.0)));
        symmetry.add(std::abs(F[r * n + s] - F[s * n + r]));
        const double d = r == s ? 1.0 : 0.0;
        t0.add(std::abs(amplitude_spectral(sd, r, s, 0.0) - d));
        t0.add(std::abs(amplitude_closed(spec, r, s, 0.0) - d));
        t0.add(std::abs(oracle::amplitude(plain, r, s, 0.0) - d));
        const double parity = (r + s) % 2 ? -1.0 : 1.0;
        sign_flip.add(std::abs(oracle::amplitude(flipped, r, s, t) - parity * oracle::amplitude(plain, r, s, t)));
      }
    }
  }
  out.push_back(unitarity.done());
  out.push_back(t0.done());
  out.push_back(symmetry.done());
  out.push_back(sign_flip.done());
}

void periodicity(const VerifyOptions& opt, Rng& rng, std::vector<CheckResult>& out) {
  Check check("periodicity_2pi", 1e-10);
  std::vector<FamilySpec> specs;
  for (int i = 0; i < 3; ++i) {
    const int N = uniform_int(rng, 1, opt.max_N);
    specs.push_back(random_spec(FamilyKind::Krawtchouk, N, rng));
    specs.push_back(random_spec(FamilyKind::Hahn, N, rng));
    const double g = uniform(rng, -0.9, 0.9);
    specs.push_back(FamilySpec::dual_hahn(N, g, uniform_int(rng, 1, 3) - g));
  }
  for (const FamilySpec& spec : specs) {
    const SpectralData sd = spectral_data(spec);
    const double t = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    for (int r = 0; r <= spec.N; ++r)
      for (int s = 0; s <= spec.N; ++s)
        check.add(std::abs(amplitude_spectral(sd, r, s, t) - amplitude_spectral(sd, r, s, t + 2.0 * std::numbers::pi)));
  }
  out.push_back(check.done());
}

void affine(Rng& rng, std::vector<CheckResult>& out) {
  Check check("affine_covariance", 1e-11);
  for (int i = 0; i < 5; ++i) {
    const FamilySpec spec = random_spec(FamilyKind::Krawtchouk, uniform_int(rng, 1, 12), rng);
    double lambda = uniform(rng, -2.0, 2.0);
    if (std::fabs(lambda) < 0.1) lambda += lambda < 0 ? -0.5 : 0.5;
    const double mu = uniform(rng, -3.0, 3.0);
    const double t = uniform(rng, 0.0, 5.0);
    const JacobiChain chain = build_chain(spec);
    const auto base = oracle::eig_tridiagonal(chain);
    const auto moved = oracle::eig_tridiagonal(affine_transform(chain, lambda, mu));
    const cplx phase = std::exp(cplx(0.0, -t * mu));
    for (int r = 0; r <= spec.N; ++r)
      for (int s = 0; s <= spec.N; ++s)
        check.add(std::abs(oracle::amplitude(moved, r, s, t) - phase * oracle::amplitude(base, r, s, lambda * t)));
  }
  out.push_back(check.done());
}

void limits(std::vector<CheckResult>& out) {
  {
    Check check("charlier_limit_of_krawtchouk", 5e-3);
    const int N = 2000;
    for (double alpha : {0.5, 1.0, 2.0}) {
      const FamilySpec kraw = FamilySpec::krawtchouk(N, alpha / N);
      for (int r = 0; r <= 4; ++r)
        for (int s = 0; s <= 4; ++s)
          check.add(std::abs(amplitude_krawtchouk(kraw, r, s, 1.0) - amplitude_charlier(alpha, r, s, 1.0)));
    }
    out.push_back(check.done());
  }
  {
    Check check("racah_to_dualhahn_chain", 1e-3);
    for (int N : {3, 8}) {
      for (auto [g, d] : {std::pair{0.5, 0.5}, std::pair{1.3, 0.2}}) {
        const JacobiChain racah = build_chain(FamilySpec::racah(N, 1e6, g, d));
        const JacobiChain dual = build_chain(FamilySpec::dual_hahn(N, g, d));
        for (std::size_t k = 0; k < racah.h.size(); ++k)
          check.add(std::fabs(racah.h[k] - dual.h[k]) / std::max(1.0, std::fabs(dual.h[k])));
        for (std::size_t k = 0; k < racah.J.size(); ++k)
          check.add(std::fabs(racah.J[k] - dual.J[k]) / std::max(1.0, std::fabs(dual.J[k])));
      }
    }
    out.push_back(check.done());
  }
  {
    Check check("infinite_closed_vs_truncated_oracle", 1e-8);
    std::vector<std::pair<int, int>> sites;
    for (int r = 0; r <= 5; ++r)
      for (int s = 0; s <= 5; ++s) sites.emplace_back(r, s);
    const std::vector<double> times{0.5, std::numbers::pi};
    for (const FamilySpec& spec : {FamilySpec::charlier(0.5), FamilySpec::charlier(1.0), FamilySpec::charlier(2.0),
                                   FamilySpec::meixner(1.0, 0.5), FamilySpec::meixner(2.5, 0.3)}) {
      const AmplitudeGrid oracle_grid = compute_grid(spec, sites, times, Method::Oracle, 1);
      const AmplitudeGrid closed_grid = compute_grid(spec, sites, times, Method::ClosedForm, 1);
      for (std::size_t i = 0; i < oracle_grid.values.size(); ++i)
        check.add(std::abs(oracle_grid.values[i] - closed_grid.values[i]));
    }
    out.push_back(check.done());
  }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.max_N < 1) throw Error(ErrorKind::InvalidSpec, "verify requires max-N >= 1");
  if (options.samples < 1) throw Error(ErrorKind::InvalidSpec, "verify requires at least one sample");
  VerifyReport report;
  report.options = options;
  Rng rng(options.seed);
  triple_agreement(options, rng, report.checks);
  properties(options, rng, report.checks);
  periodicity(options, rng, report.checks);
  affine(rng, report.checks);
  limits(report.checks);
  report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.passed; });
  return report;
}

std::string report_to_json(const VerifyReport& report, int indent) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed;
  j["options"] = {{"max_N", report.options.max_N},
                  {"seed", report.options.seed},
                  {"perturb", report.options.perturb},
                  {"samples", report.options.samples}};
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"max_error", c.max_error},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples}});
  }
  return j.dump(indent);
}

}  // namespace jchain
