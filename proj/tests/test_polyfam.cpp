#include <doctest.h>

#include <cmath>
#include <random>

#include "jchain/error.hpp"
#include "jchain/family.hpp"
#include "jchain/polyfam.hpp"

using namespace jchain;

namespace {

std::vector<FamilySpec> sample_specs(int count, int max_N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FamilySpec> out;
  for (int i = 0; i < count; ++i) {
    const int N = 1 + static_cast<int>(rng() % max_N);
    switch (i % 4) {
      case 0: out.push_back(FamilySpec::krawtchouk(N, 0.05 + 0.9 * u(rng))); break;
      case 1: out.push_back(FamilySpec::hahn(N, -0.9 + 4 * u(rng), -0.9 + 4 * u(rng))); break;
      case 2: out.push_back(FamilySpec::dual_hahn(N, -0.9 + 4 * u(rng), -0.9 + 4 * u(rng))); break;
      default: {
        const double g = -0.9 + 4 * u(rng);
        out.push_back(FamilySpec::racah(N, g + N + 0.2 + 4 * u(rng), g, -0.9 + 4 * u(rng)));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validation names the violated constraint") {
  auto message = [](const FamilySpec& s) {
    try {
      validate(s);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSpec);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(FamilySpec::krawtchouk(2, 1.5)).find("0<p<1") != std::string::npos);
  CHECK(message(FamilySpec::krawtchouk(0, 0.5)).find("N >= 1") != std::string::npos);
  CHECK(message(FamilySpec::hahn(3, -1.5, 0.0)).find("alpha>-1") != std::string::npos);
  CHECK(message(FamilySpec::dual_hahn(3, -2.0, 0.5)).find("gamma>-1") != std::string::npos);
  CHECK(message(FamilySpec::racah(3, 2.0, 0.5, 0.5)).find("beta>gamma+N") != std::string::npos);
  CHECK(message(FamilySpec::charlier(0.0)).find("alpha>0") != std::string::npos);
  CHECK(message(FamilySpec::meixner(1.0, 1.0)).find("0<c<1") != std::string::npos);
  CHECK(message(FamilySpec::dual_hahn(3, -4.5, -5.0)).empty());
  CHECK(message(FamilySpec::hahn(3, -0.5, 2.0)).empty());
}

TEST_CASE("family names round-trip") {
  for (FamilyKind k : {FamilyKind::Krawtchouk, FamilyKind::Hahn, FamilyKind::DualHahn, FamilyKind::Racah,
                       FamilyKind::Charlier, FamilyKind::Meixner})
    CHECK(parse_family_name(family_name(k)).value() == k);
  CHECK_FALSE(parse_family_name("jacobi").has_value());
  CHECK(describe_params(FamilySpec::krawtchouk(4, 0.5)) == "p=0.5");
  CHECK(describe_params(FamilySpec::dual_hahn(4, 0.5, 0.5)) == "gamma=0.5;delta=0.5");
}

TEST_CASE("weights") {
  CHECK(weight(FamilySpec::krawtchouk(2, 0.5), 1).to_double() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(weight(FamilySpec::hahn(2, 0.0, 0.0), 0).to_double() == doctest::Approx(1.0).epsilon(1e-15));
  for (double p : {0.1, 0.5, 0.77}) {
    const FamilySpec s = FamilySpec::krawtchouk(9, p);
    double total = 0.0;
    for (int x = 0; x <= 9; ++x) total += weight(s, x).to_double();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(weight(FamilySpec::krawtchouk(2, 0.5), 3), Error);
}

TEST_CASE("squared norms") {
  CHECK(norm_d(FamilySpec::krawtchouk(2, 0.5), 1).to_double() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_d(FamilySpec::charlier(1.0), 0).to_double() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm_d(FamilySpec::dual_hahn(1, 0.5, 0.5), 0).to_double() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("polynomial values") {
  for (const FamilySpec& s : sample_specs(8, 10, 3)) {
    for (int x = 0; x <= s.N; ++x) CHECK(poly_eval(s, 0, x) == 1.0);
    for (int n = 0; n <= s.N; ++n) CHECK(poly_eval(s, n, 0) == doctest::Approx(1.0).epsilon(1e-13));
  }
  const FamilySpec k = FamilySpec::krawtchouk(2, 0.5);
  CHECK(std::fabs(poly_eval(k, 1, 1)) < 1e-15);
  for (int x = 0; x <= 2; ++x) CHECK(poly_eval_recurrence(k, 1, x) == doctest::Approx(1.0 - x).epsilon(1e-15));

  const double g = 0.7, d = 1.3;
  const FamilySpec dh = FamilySpec::dual_hahn(5, g, d);
  for (int x = 0; x <= 5; ++x) {
    const double lam = x * (x + g + d + 1.0);
    CHECK(poly_eval_recurrence(dh, 1, x) == doctest::Approx(1.0 - lam / ((g + 1.0) * 5)).epsilon(1e-14));
    CHECK(poly_eval(dh, 1, x) == doctest::Approx(1.0 - lam / ((g + 1.0) * 5)).epsilon(1e-14));
  }
}

TEST_CASE("recurrence and hypergeometric values agree") {
  double worst = 0.0;
  for (const FamilySpec& s : sample_specs(50, 20, 11)) {
    for (int n = 0; n <= s.N; ++n) {
      for (int x = 0; x <= s.N; ++x) {
        const double a = poly_eval(s, n, x);
        const double b = poly_eval_recurrence(s, n, x);
        double scale = 0.0;
        for (int y = 0; y <= s.N; ++y) scale = std::max(scale, std::fabs(poly_eval_recurrence(s, n, y)));
        worst = std::max(worst, std::fabs(a - b) / scale);
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("orthonormal values") {
  const FamilySpec k1 = FamilySpec::krawtchouk(1, 0.5);
  const double h = std::sqrt(0.5);
  CHECK(orthonormal_value(k1, 0, 0) == doctest::Approx(h).epsilon(1e-15));
  CHECK(orthonormal_value(k1, 0, 1) == doctest::Approx(h).epsilon(1e-15));
  CHECK(orthonormal_value(k1, 1, 0) == doctest::Approx(h).epsilon(1e-15));
  CHECK(orthonormal_value(k1, 1, 1) == doctest::Approx(-h).epsilon(1e-15));

  for (const FamilySpec& s : sample_specs(12, 12, 5)) {
    double worst_rows = 0.0, worst_cols = 0.0;
    for (int a = 0; a <= s.N; ++a) {
      for (int b = 0; b <= s.N; ++b) {
        double rows = 0.0, cols = 0.0;
        for (int k = 0; k <= s.N; ++k) {
          rows += orthonormal_value(s, a, k) * orthonormal_value(s, b, k);
          cols += orthonormal_value(s, k, a) * orthonormal_value(s, k, b);
        }
        worst_rows = std::max(worst_rows, std::fabs(rows - (a == b)));
        worst_cols = std::max(worst_cols, std::fabs(cols - (a == b)));
      }
    }
    CHECK(worst_rows < 1e-10);
    CHECK(worst_cols < 1e-10);
  }
}

TEST_CASE("weight table is positive on the second dual Hahn branch") {
  for (int N : {3, 4}) {
    const WeightTable t = make_weight_table(FamilySpec::dual_hahn(N, -N - 1.5, -N - 2.5));
    for (const auto& w : t.w) CHECK(w.sign == 1);
    for (const auto& d : t.d) CHECK(d.sign == 1);
  }
}

TEST_CASE("truncation") {
  const int kc = default_truncation(FamilySpec::charlier(2.0));
  CHECK(kc > 30);
  CHECK(kc < 60);
  CHECK(resolve_truncation(FamilySpec::charlier(2.0), 5).k_max.value() == kc + 5);
  CHECK(resolve_truncation(FamilySpec::charlier(2.0, 17)).k_max.value() == 17);
  CHECK(resolve_truncation(FamilySpec::krawtchouk(3, 0.4)).k_max == std::nullopt);
  // The envelope rule is stricter than the tail of the family's own weight.
  CHECK(default_truncation(FamilySpec::meixner(1.0, 0.5)) > weight_tail_index(FamilySpec::meixner(1.0, 0.5)));
  CHECK_THROWS_AS(default_truncation(FamilySpec::krawtchouk(3, 0.4)), Error);
}
