#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "jchain/chain.hpp"
#include "jchain/dynamics.hpp"
#include "jchain/error.hpp"
#include "jchain/hypergeom.hpp"
#include "jchain/oracle.hpp"
#include "jchain/polyfam.hpp"

using namespace jchain;
using std::numbers::pi;

namespace {

double lpoch(double a, int n) { return std::lgamma(a + n) - std::lgamma(a); }

std::array<cplx, 4> expm_taylor(const std::array<cplx, 4>& X) {
  std::array<cplx, 4> sum{1.0, 0.0, 0.0, 1.0}, term{1.0, 0.0, 0.0, 1.0};
  for (int k = 1; k < 60; ++k) {
    const std::array<cplx, 4> next{term[0] * X[0] + term[1] * X[2], term[0] * X[1] + term[1] * X[3],
                                   term[2] * X[0] + term[3] * X[2], term[2] * X[1] + term[3] * X[3]};
    for (int i = 0; i < 4; ++i) {
      term[i] = next[i] / double(k);
      sum[i] += term[i];
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("reference amplitudes from a high-precision matrix exponential") {
  struct Case {
    FamilySpec spec;
    int r, s;
    double t;
    cplx f;
  };
  const Case cases[] = {
      {FamilySpec::krawtchouk(6, 0.3), 2, 5, 0.77, {-0.12379347998184619, 0.15596571666969464}},
      {FamilySpec::hahn(5, 0.7, 1.9), 2, 4, 1.3, {0.47668899414784555, -0.1688716587529123}},
      {FamilySpec::hahn(7, -0.5, 2.5), 6, 3, 4.0, {-0.015956595984539063, 0.13991773666809911}},
      {FamilySpec::dual_hahn(4, 0.3, 1.1), 1, 3, 2.1, {0.23919078469504076, 0.34113703510856498}},
      {FamilySpec::racah(4, 6.5, 0.4, 0.8), 4, 0, 0.9, {0.42389952946571699, -0.055584004443813014}},
      {FamilySpec::racah(5, 7.25, 0.1, 1.6), 1, 3, 2.4, {0.25431388794370558, 0.37254584048875252}},
  };
  for (const auto& c : cases) {
    CHECK(std::abs(amplitude_closed(c.spec, c.r, c.s, c.t) - c.f) < 1e-12);
    CHECK(std::abs(amplitude_spectral(c.spec, c.r, c.s, c.t) - c.f) < 1e-12);
    CHECK(std::abs(amplitude_oracle(c.spec, c.r, c.s, c.t) - c.f) < 1e-12);
  }
  CHECK(std::abs(amplitude_charlier(1.0, 2, 3, 0.6) - cplx(0.50791164525471958, -0.27342850172950013)) < 1e-13);
  CHECK(std::abs(amplitude_meixner(1.5, 0.4, 1, 2, 1.1) - cplx(-0.012850230257996249, -0.034485162062227273)) <
        1e-13);
}

TEST_CASE("t = 0 and t = 2pi give the identity") {
  for (const FamilySpec& s : {FamilySpec::krawtchouk(5, 0.2), FamilySpec::hahn(5, 0.3, 1.2)}) {
    for (int r = 0; r <= 5; ++r) {
      for (int q = 0; q <= 5; ++q) {
        const double d = r == q ? 1.0 : 0.0;
        CHECK(std::abs(amplitude_spectral(s, r, q, 0.0) - d) < 1e-12);
        CHECK(std::abs(amplitude_closed(s, r, q, 0.0) - d) < 1e-12);
        CHECK(std::abs(amplitude_spectral(s, r, q, 2 * pi) - d) < 1e-12);
        CHECK(std::abs(amplitude_closed(s, r, q, 2 * pi) - d) < 1e-12);
      }
    }
  }
  CHECK(std::abs(amplitude_charlier(0.8, 3, 3, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(amplitude_meixner(0.8, 0.2, 2, 3, 4 * pi)) < 1e-12);
}

TEST_CASE("krawtchouk closed form") {
  const int N = 7;
  const FamilySpec half = FamilySpec::krawtchouk(N, 0.5);
  for (int r = 0; r <= N; ++r) {
    CHECK(std::abs(amplitude_krawtchouk(half, r, 0, pi) - (r == N ? 1.0 : 0.0)) < 1e-12);
    for (int s = 0; s <= N; ++s) CHECK(std::abs(amplitude_krawtchouk(half, r, s, pi)) == doctest::Approx(r + s == N ? 1.0 : 0.0).epsilon(1e-12));
    for (double t : {0.4, 1.9, 3.3}) {
      const double expect = std::sqrt(std::exp(log_binomial(N, r).logmag)) * std::pow(std::fabs(std::sin(t / 2)), r) *
                            std::pow(std::fabs(std::cos(t / 2)), N - r);
      CHECK(std::abs(amplitude_krawtchouk(half, r, 0, t)) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("hahn closed form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const int N = 1 + static_cast<int>(rng() % 8);
    const double a = -0.9 + 4 * u(rng), b = -0.9 + 4 * u(rng);
    const int r = static_cast<int>(rng() % (N + 1));
    const double t = 0.1 + 6 * u(rng);
    const FamilySpec s = FamilySpec::hahn(N, a, b);
    // f_{r,0} from the 2F1 reduction
    const cplx z = std::exp(cplx(0.0, -t));
    const double lpre = 0.5 * (log_binomial(N, r).logmag + std::log(2 * r + a + b + 1) + lpoch(a + 1, r) -
                               lpoch(b + 1, r) - lpoch(a + b + 2, N) - lpoch(r + a + b + 1, N + 1)) +
                        lpoch(b + 1, N);
    const cplx expect = std::exp(lpre) * std::pow(1.0 - z, r) * eval_phq({double(r - N), r + a + 1}, {-N - b}, z);
    CHECK(std::abs(amplitude_hahn(s, r, 0, t) - expect) < 1e-11);

    const double mod = std::sqrt(std::exp(lpoch(a + 1, N) + lpoch(b + 1, N) - lpoch(a + b + 2, N) -
                                          lpoch(N + a + b + 1, N))) *
                       std::pow(2.0 * std::fabs(std::sin(t / 2)), N);
    CHECK(std::abs(amplitude_hahn(s, N, 0, t)) == doctest::Approx(mod).epsilon(1e-11));
  }
}

TEST_CASE("hahn falls back to the direct sum on a well-poised pole") {
  for (auto [a, b] : {std::pair{-0.5, -0.5}, std::pair{-0.3, -0.7}}) {
    const FamilySpec s = FamilySpec::hahn(6, a, b);
    for (int r = 0; r <= 6; ++r)
      for (int q = 0; q <= 6; ++q)
        CHECK(std::abs(amplitude_hahn(s, r, q, 1.7) - amplitude_spectral(s, r, q, 1.7)) < 1e-11);
  }
  const FamilySpec s = FamilySpec::hahn(4, 0.6, 1.1);
  const SignedLog norm = (norm_d(s, 1) * norm_d(s, 3)).inverse().pow(0.5);
  CHECK(std::abs(norm.to_double() * hahn_direct_sum(s, 1, 3, 0.8) - amplitude_hahn(s, 1, 3, 0.8)) < 1e-12);
}

TEST_CASE("charlier closed form") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    double total = 0.0;
    for (int r = 0; r < 80; ++r) {
      const cplx f = amplitude_charlier(alpha, r, 0, pi);
      if (r <= 20) {
        const double expect = std::exp(-2 * alpha + 0.5 * (r * std::log(4 * alpha) - std::lgamma(r + 1.0)));
        CHECK(std::fabs(std::abs(f) - expect) < 1e-12);
      }
      total += std::norm(f);
    }
    CHECK(std::fabs(total - 1.0) < 1e-10);
    const FamilySpec kraw = FamilySpec::krawtchouk(2000, alpha / 2000);
    for (int r = 0; r <= 4; ++r)
      for (int s = 0; s <= 4; ++s)
        CHECK(std::abs(amplitude_krawtchouk(kraw, r, s, 1.0) - amplitude_charlier(alpha, r, s, 1.0)) < 5e-3);
  }
}

TEST_CASE("meixner closed form") {
  double total = 0.0;
  for (int r = 0; r < 400; ++r) {
    const cplx f = amplitude_meixner(1.0, 0.5, r, 0, pi);
    if (r <= 15) CHECK(std::abs(f - std::pow(std::sqrt(8.0) / 3.0, r) / 3.0) < 1e-12);
    total += std::norm(f);
  }
  CHECK(std::fabs(total - 1.0) < 1e-10);

  const FamilySpec spec = FamilySpec::meixner(1.0, 0.5);
  std::vector<std::pair<int, int>> sites;
  for (int r = 0; r <= 5; ++r)
    for (int s = 0; s <= 5; ++s) sites.emplace_back(r, s);
  const auto oracle_grid = compute_grid(spec, sites, {0.5, pi}, Method::Oracle);
  const auto closed_grid = compute_grid(spec, sites, {0.5, pi}, Method::ClosedForm);
  for (std::size_t i = 0; i < oracle_grid.values.size(); ++i)
    CHECK(std::abs(oracle_grid.values[i] - closed_grid.values[i]) < 1e-8);
}

TEST_CASE("dual hahn closed form") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const int N = 1 + static_cast<int>(rng() % 9);
    const double g = -0.9 + 4 * u(rng), d = -0.9 + 4 * u(rng);
    const double t = 6 * u(rng);
    const FamilySpec s = FamilySpec::dual_hahn(N, g, d);
    cplx sum = 0.0;
    for (int k = 0; k <= N; ++k) {
      const double c = std::exp(log_pochhammer(-N, k).logmag - std::lgamma(k + 1.0) - lpoch(g + d + k + 1, N + 1)) *
                       log_pochhammer(-N, k).sign * (g + d + 2 * k + 1);
      sum += c * std::exp(cplx(0.0, -t * k * (k + g + d + 1)));
    }
    sum *= std::exp(0.5 * (lpoch(g + 1, N) + lpoch(d + 1, N)));
    CHECK(std::abs(amplitude_dualhahn(s, N, 0, t) - sum) < 1e-11);
  }
  // gamma + delta odd
  for (auto [g, d, N] : {std::tuple{0.5, 0.5, 6}, std::tuple{0.2, 2.8, 5}, std::tuple{2.0, 3.0, 4}}) {
    const double expect = std::exp(0.5 * (lpoch(g + 1, N) + lpoch(d + 1, N)) - lpoch((g + d) / 2 + 1, N));
    CHECK(std::abs(amplitude_dualhahn(FamilySpec::dual_hahn(N, g, d), N, 0, pi) - expect) < 1e-11);
  }
  CHECK(std::abs(amplitude_dualhahn(FamilySpec::dual_hahn(7, 0.5, 0.5), 7, 0, pi) - 1.0) < 1e-12);
}

TEST_CASE("dual hahn second branch") {
  for (int N : {3, 4}) {
    const FamilySpec s = FamilySpec::dual_hahn(N, -N - 1.5, -N - 2.25);
    for (int r = 0; r <= N; ++r)
      for (int q = 0; q <= N; ++q) {
        CHECK(std::abs(amplitude_dualhahn(s, r, q, 0.9) - amplitude_spectral(s, r, q, 0.9)) < 1e-11);
        CHECK(std::abs(amplitude_spectral(s, r, q, 0.9) - amplitude_oracle(s, r, q, 0.9)) < 1e-11);
      }
  }
}

TEST_CASE("racah closed form") {
  // t = pi with gamma + delta odd
  for (auto [b, g, d, N] : {std::tuple{12.5, 0.5, 0.5, 5}, std::tuple{9.0, 1.25, 1.75, 4}}) {
    const double expect = std::sqrt(pochhammer(g + 1 - b, N) * pochhammer(d + 1 + b, N) /
                                    (pochhammer(b, N) * pochhammer(-b, N))) *
                          std::exp(0.5 * (lpoch(g + 1, N) + lpoch(d + 1, N)) - lpoch((g + d) / 2 + 1, N));
    CHECK(std::abs(amplitude_racah(FamilySpec::racah(N, b, g, d), N, 0, pi) - expect) < 1e-11);
  }
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const int N = 1 + static_cast<int>(rng() % 8);
    const double g = -0.9 + 4 * u(rng);
    const FamilySpec s = FamilySpec::racah(N, g + N + 0.1 + 6 * u(rng), g, -0.9 + 4 * u(rng));
    const double t = 6 * u(rng);
    CHECK(std::abs(amplitude_racah(s, N, 0, t) - amplitude_spectral(s, N, 0, t)) < 1e-9);
    CHECK(std::abs(amplitude_racah(s, 0, N, t) - amplitude_spectral(s, 0, N, t)) < 1e-9);
  }
  // large beta approaches the dual Hahn chain
  const cplx racah = amplitude_racah(FamilySpec::racah(5, 1e8, 0.5, 1.5), 5, 0, 1.3);
  const cplx dual = amplitude_dualhahn(FamilySpec::dual_hahn(5, 0.5, 1.5), 5, 0, 1.3);
  CHECK(std::abs(racah - dual) < 1e-6);
}

TEST_CASE("method dispatch and errors") {
  const FamilySpec k = FamilySpec::krawtchouk(4, 0.4);
  CHECK(available_methods(k).size() == 3);
  CHECK(available_methods(FamilySpec::charlier(1.0)).size() == 2);
  CHECK(method_name(Method::ClosedForm) == "closed");
  CHECK(amplitude(k, 1, 2, 0.3, Method::Oracle) == amplitude_oracle(k, 1, 2, 0.3));
  CHECK_THROWS_AS(amplitude_spectral(FamilySpec::charlier(1.0), 0, 0, 1.0), Error);
  try {
    amplitude_closed(k, 5, 0, 1.0);
    FAIL("expected OutOfSupport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfSupport);
  }
  CHECK_THROWS_AS(amplitude_charlier(-1.0, 0, 0, 1.0), Error);
  CHECK_THROWS_AS(amplitude_hahn(k, 0, 0, 1.0), Error);
}

TEST_CASE("grid") {
  const FamilySpec s = FamilySpec::hahn(10, 0.4, 0.9);
  std::vector<std::pair<int, int>> sites;
  for (int r = 0; r <= 10; ++r) sites.emplace_back(r, 3);
  std::vector<double> times;
  for (int k = 0; k < 25; ++k) times.push_back(0.3 * k);
  for (Method m : {Method::SpectralSum, Method::ClosedForm, Method::Oracle}) {
    const auto one = compute_grid(s, sites, times, m, 1);
    const auto many = compute_grid(s, sites, times, m, 4);
    CHECK(one.values == many.values);
    for (std::size_t k = 0; k < times.size(); ++k) {
      double total = 0.0;
      for (std::size_t i = 0; i < sites.size(); ++i) total += std::norm(one.at(i, k));
      CHECK(std::fabs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("perfect state transfer detection") {
  std::vector<double> grid;
  for (int k = 0; k <= 400; ++k) grid.push_back(4 * pi * k / 400);

  const auto kraw = detect_pst(FamilySpec::krawtchouk(6, 0.5), 0, 6, grid, 0.999);
  REQUIRE(kraw.size() == 2);
  CHECK(kraw[0].t == doctest::Approx(pi).epsilon(1e-9));
  CHECK(kraw[0].fidelity > 1 - 1e-12);

  const auto dual = detect_pst(FamilySpec::dual_hahn(5, 0.75, 0.75), 0, 5, grid, 0.999);
  REQUIRE_FALSE(dual.empty());
  CHECK(dual[0].t == doctest::Approx(2 * pi).epsilon(1e-9));
  CHECK(dual[0].fidelity > 1 - 1e-9);

  CHECK(detect_pst(FamilySpec::hahn(6, 1.0, 1.0), 0, 6, grid, 0.999).empty());
  CHECK(detect_pst(FamilySpec::krawtchouk(6, 0.3), 0, 6, grid, 0.999).empty());
  CHECK_THROWS_AS(detect_pst(FamilySpec::krawtchouk(6, 0.5), 0, 6, std::vector<double>{}, 0.9), Error);
  CHECK_THROWS_AS(detect_pst(FamilySpec::krawtchouk(6, 0.5), 0, 6, grid, 1.5), Error);
}

TEST_CASE("su(2) factorisation") {
  const auto id = bch_su2_coefficients(0.3, 0.0);
  CHECK(std::abs(id.xi) == 0.0);
  CHECK(std::abs(id.eta) == 0.0);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double p = 0.01 + 0.98 * u(rng), t = 6 * u(rng);
    const auto [xi, eta] = bch_su2_coefficients(p, t);
    // -it(2p-1) L0 + it sqrt(p(1-p)) (L+ + L-) with L0 = diag(1/2, -1/2), L+ upper, L- lower
    const cplx a = cplx(0.0, -t * (2 * p - 1)), b = cplx(0.0, t * std::sqrt(p * (1 - p)));
    const auto direct = expm_taylor({0.5 * a, b, b, -0.5 * a});
    const auto product = su2_factorized_2x2(xi, eta, xi);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(direct[k] - product[k]) < 1e-12);
  }
  for (int N = 1; N <= 6; ++N) {
    const FamilySpec s = FamilySpec::krawtchouk(N, 0.35);
    for (int r = 0; r <= N; ++r)
      for (int q = 0; q <= N; ++q)
        CHECK(std::abs(amplitude_krawtchouk_su2(s, r, q, 1.3) - amplitude_krawtchouk(s, r, q, 1.3)) < 1e-12);
  }
}
