#include "jchain/polyfam.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "jchain/error.hpp"
#include "jchain/hypergeom.hpp"

namespace jchain {

namespace {

void check_support(const FamilySpec& spec, int v, const char* what) {
  if (v < 0) throw Error(ErrorKind::OutOfSupport, std::string(what) + " must be non-negative");
  if (spec.is_finite() && v > spec.N)
    throw Error(ErrorKind::OutOfSupport, std::string(what) + "=" + std::to_string(v) +
                                             " exceeds N=" + std::to_string(spec.N));
}

double racah_alpha(const FamilySpec& spec) { return -spec.N - 1.0; }

SignedLog slog(double x) { return SignedLog::from_double(x); }

SignedLog lfact(int k) { return {1, log_factorial(k)}; }

// Smallest K with sum_{x>K} exp(logq(x)) < tail, for a normalised unimodal measure.
int tail_index(const std::function<double(int)>& logq, double mode, double tail) {
  std::vector<double> q;
  for (int x = 0;; ++x) {
    const double v = std::exp(logq(x));
    q.push_back(v);
    if (x > mode && v < 1e-40) break;
    if (x > 1000000) throw Error(ErrorKind::InvalidSpec, "truncation tail does not decay");
  }
  double suffix = 0.0;
  int k = static_cast<int>(q.size()) - 1;
  // suffix holds sum_{x>k} q(x)
  while (k > 0) {
    const double next = suffix + q[k];
    if (next >= tail) break;
    suffix = next;
    --k;
  }
  return std::max(k, 1);
}

}  // namespace

double lattice(const FamilySpec& spec, int x) {
  switch (spec.kind()) {
    case FamilyKind::DualHahn: {
      const auto [g, d] = spec.as<DualHahnParams>();
      return x * (x + g + d + 1.0);
    }
    case FamilyKind::Racah: {
      const auto& p = spec.as<RacahParams>();
      return x * (x + p.gamma + p.delta + 1.0);
    }
    default: return x;
  }
}

namespace {

template <class R>
std::pair<R, R> coeffs_in(const FamilySpec& spec, int n) {
  const R N = spec.N;
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: {
      const R p = spec.as<KrawtchoukParams>().p;
      return {p * (N - n), n * (1.0 - p)};
    }
    case FamilyKind::Hahn: {
      const R a = spec.as<HahnParams>().alpha, b = spec.as<HahnParams>().beta;
      const R s = a + b;
      R A;
      R C = 0.0;
      if (n == 0) {
        A = (a + 1.0) * N / (s + 2.0);  // (s+1) cancels
      } else {
        A = (n + s + 1.0) * (n + a + 1.0) * (N - n) / ((2.0 * n + s + 1.0) * (2.0 * n + s + 2.0));
        C = n * (n + s + N + 1.0) * (n + b) / ((2.0 * n + s) * (2.0 * n + s + 1.0));
      }
      return {A, C};
    }
    case FamilyKind::DualHahn: {
      const R g = spec.as<DualHahnParams>().gamma, d = spec.as<DualHahnParams>().delta;
      return {(n + g + 1.0) * (N - n), n * (d + N + 1.0 - n)};
    }
    case FamilyKind::Racah: {
      const auto& p = spec.as<RacahParams>();
      const R al = racah_alpha(spec);
      const R be = p.beta, g = p.gamma, d = p.delta;
      R A;
      R C = 0.0;
      if (n == 0) {
        A = (al + 1.0) * (be + d + 1.0) * (g + 1.0) / (al + be + 2.0);
      } else {
        A = (n + al + 1.0) * (n + al + be + 1.0) * (n + be + d + 1.0) * (n + g + 1.0) /
            ((2.0 * n + al + be + 1.0) * (2.0 * n + al + be + 2.0));
        C = n * (n + al + be - g) * (n + al - d) * (n + be) / ((2.0 * n + al + be) * (2.0 * n + al + be + 1.0));
      }
      // The standard Racah recurrence is lambda R_n = A R_{n+1} - (A+C) R_n + C R_{n-1} with A, C <= 0.
      return {-A, -C};
    }
    case FamilyKind::Charlier: {
      const R a = spec.as<CharlierParams>().alpha;
      return {a, static_cast<R>(n)};
    }
    case FamilyKind::Meixner: {
      const R b = spec.as<MeixnerParams>().b, c = spec.as<MeixnerParams>().c;
      return {c * (n + b) / (1.0 - c), n / (1.0 - c)};
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

}  // namespace

RecurrenceCoeffs recurrence_coeffs(const FamilySpec& spec, int n) {
  validate(spec);
  if (n < 0) throw Error(ErrorKind::OutOfSupport, "degree must be non-negative");
  const auto [A, C] = coeffs_in<double>(spec, n);
  return {A, C};
}

SignedLog weight(const FamilySpec& spec, int x) {
  validate(spec);
  check_support(spec, x, "x");
  const int N = spec.N;
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: {
      const double p = spec.as<KrawtchoukParams>().p;
      SignedLog w = log_binomial(N, x);
      w.logmag += x * std::log(p) + (N - x) * std::log1p(-p);
      return w;
    }
    case FamilyKind::Hahn: {
      const auto [a, b] = spec.as<HahnParams>();
      return log_binomial_real(a + x, x) * log_binomial_real(N + b - x, N - x);
    }
    case FamilyKind::DualHahn: {
      const auto [g, d] = spec.as<DualHahnParams>();
      // (2x+g+d+1)/(x+g+d+1)_{N+1}, written to stay finite at x = 0 when g+d+1 = 0.
      SignedLog ratio = x == 0 ? log_pochhammer(g + d + 2.0, N).inverse()
                               : slog(2.0 * x + g + d + 1.0) / log_pochhammer(x + g + d + 1.0, N + 1);
      SignedLog w = ratio * log_pochhammer(g + 1.0, x) * log_pochhammer(-N, x) * lfact(N);
      w /= log_pochhammer(d + 1.0, x) * lfact(x);
      if (x % 2 == 1) w.sign = -w.sign;
      return w;
    }
    case FamilyKind::Racah: {
      const auto& p = spec.as<RacahParams>();
      const double al = racah_alpha(spec);
      const double be = p.beta, g = p.gamma, d = p.delta;
      // (g+d+1)_x ((g+d+3)/2)_x / ((g+d+1)/2)_x = (2x+g+d+1) (g+d+2)_{x-1}
      SignedLog wp = x == 0 ? SignedLog::one()
                            : slog(2.0 * x + g + d + 1.0) * log_pochhammer(g + d + 2.0, x - 1);
      SignedLog w = log_pochhammer(al + 1.0, x) * log_pochhammer(be + d + 1.0, x) *
                    log_pochhammer(g + 1.0, x) * wp;
      w /= log_pochhammer(-al + g + d + 1.0, x) * log_pochhammer(-be + g + 1.0, x) *
           log_pochhammer(d + 1.0, x) * lfact(x);
      return w;
    }
    case FamilyKind::Charlier: {
      const double a = spec.as<CharlierParams>().alpha;
      return {1, x * std::log(a) - a - log_factorial(x)};
    }
    case FamilyKind::Meixner: {
      const auto [b, c] = spec.as<MeixnerParams>();
      SignedLog w = log_pochhammer(b, x);
      w.logmag += x * std::log(c) - log_factorial(x);
      return w;
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

SignedLog norm_d(const FamilySpec& spec, int n) {
  validate(spec);
  check_support(spec, n, "n");
  const int N = spec.N;
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: {
      const double p = spec.as<KrawtchoukParams>().p;
      SignedLog d = log_binomial(N, n).inverse();
      d.logmag += n * (std::log1p(-p) - std::log(p));
      return d;
    }
    case FamilyKind::Hahn: {
      const auto [a, b] = spec.as<HahnParams>();
      const double s = a + b;
      SignedLog d = lfact(n) * lfact(N - n) / (lfact(N) * lfact(N));
      // (n+s+1)_{N+1}/(2n+s+1) reduces to (s+2)_N at n = 0.
      if (n == 0) {
        d *= log_pochhammer(s + 2.0, N);
      } else {
        d *= log_pochhammer(n + s + 1.0, N + 1) / slog(2.0 * n + s + 1.0);
      }
      d *= log_pochhammer(b + 1.0, n) / log_pochhammer(a + 1.0, n);
      return d;
    }
    case FamilyKind::DualHahn: {
      const auto [g, d] = spec.as<DualHahnParams>();
      return (log_binomial_real(g + n, n) * log_binomial_real(d + N - n, N - n)).inverse();
    }
    case FamilyKind::Racah: {
      const auto& p = spec.as<RacahParams>();
      const double al = racah_alpha(spec);
      const double be = p.beta, g = p.gamma, d = p.delta;
      SignedLog m = log_pochhammer(-be, N) * log_pochhammer(g + d + 2.0, N) /
                    (log_pochhammer(-be + g + 1.0, N) * log_pochhammer(d + 1.0, N));
      SignedLog h = m * log_pochhammer(n + al + be + 1.0, n) * log_pochhammer(al + be - g + 1.0, n) *
                    log_pochhammer(al - d + 1.0, n) * log_pochhammer(be + 1.0, n) * lfact(n);
      h /= log_pochhammer(al + be + 2.0, 2 * n) * log_pochhammer(al + 1.0, n) *
           log_pochhammer(be + d + 1.0, n) * log_pochhammer(g + 1.0, n);
      return h;
    }
    case FamilyKind::Charlier: {
      const double a = spec.as<CharlierParams>().alpha;
      return {1, log_factorial(n) - n * std::log(a)};
    }
    case FamilyKind::Meixner: {
      const auto [b, c] = spec.as<MeixnerParams>();
      SignedLog d = log_pochhammer(b, n).inverse();
      d.logmag += log_factorial(n) - n * std::log(c) - b * std::log1p(-c);
      return d;
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

double poly_eval(const FamilySpec& spec, int n, int x) {
  validate(spec);
  check_support(spec, n, "n");
  check_support(spec, x, "x");
  const double N = spec.N;
  const double dn = n, dx = x;
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: {
      const double p = spec.as<KrawtchoukParams>().p;
      return eval_phq({-dx, -dn}, {-N}, 1.0 / p).real();
    }
    case FamilyKind::Hahn: {
      const auto [a, b] = spec.as<HahnParams>();
      return eval_phq({-dn, dn + a + b + 1.0, -dx}, {a + 1.0, -N}, 1.0).real();
    }
    case FamilyKind::DualHahn: {
      const auto [g, d] = spec.as<DualHahnParams>();
      return eval_phq({-dn, -dx, dx + g + d + 1.0}, {g + 1.0, -N}, 1.0).real();
    }
    case FamilyKind::Racah: {
      const auto& p = spec.as<RacahParams>();
      const double al = racah_alpha(spec);
      return eval_phq({-dn, dn + al + p.beta + 1.0, -dx, dx + p.gamma + p.delta + 1.0},
                      {al + 1.0, p.beta + p.delta + 1.0, p.gamma + 1.0}, 1.0)
          .real();
    }
    case FamilyKind::Charlier: {
      const double a = spec.as<CharlierParams>().alpha;
      return eval_phq({-dn, -dx}, {}, -1.0 / a).real();
    }
    case FamilyKind::Meixner: {
      const auto [b, c] = spec.as<MeixnerParams>();
      return eval_phq({-dn, -dx}, {b}, 1.0 - 1.0 / c).real();
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

double poly_eval_recurrence(const FamilySpec& spec, int n, int x) {
  validate(spec);
  check_support(spec, n, "n");
  check_support(spec, x, "x");
  // Upward recurrence is ill-conditioned where P_n(x) is small; run it in binary128.
  using Q = __float128;
  Q sigma = x;
  if (spec.kind() == FamilyKind::DualHahn) {
    const auto [g, d] = spec.as<DualHahnParams>();
    sigma *= sigma + Q(g) + Q(d) + 1;
  } else if (spec.kind() == FamilyKind::Racah) {
    const auto& p = spec.as<RacahParams>();
    sigma *= sigma + Q(p.gamma) + Q(p.delta) + 1;
  }
  Q prev = 0;
  Q cur = 1;
  for (int k = 0; k < n; ++k) {
    const auto [A, C] = coeffs_in<Q>(spec, k);
    const Q next = ((A + C - sigma) * cur - C * prev) / A;
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

double orthonormal_value(const FamilySpec& spec, int n, int x) {
  const double pn = poly_eval(spec, n, x);
  if (pn == 0.0) return 0.0;
  const SignedLog ratio = weight(spec, x) / norm_d(spec, n);
  if (ratio.sign <= 0) throw Error(ErrorKind::InvalidSpec, "weight and norm have inconsistent signs");
  return std::exp(0.5 * ratio.logmag) * pn;
}

WeightTable make_weight_table(const FamilySpec& spec) {
  validate(spec);
  const int order = spec.order();
  WeightTable t{spec, {}, {}};
  t.w.reserve(order + 1);
  t.d.reserve(order + 1);
  for (int x = 0; x <= order; ++x) t.w.push_back(weight(spec, x));
  for (int n = 0; n <= order; ++n) t.d.push_back(norm_d(spec, n));
  if (!t.w.empty() && t.w.front().sign < 0) {
    for (auto& v : t.w) v.sign = -v.sign;
    for (auto& v : t.d) v.sign = -v.sign;
  }
  return t;
}

int default_truncation(const FamilySpec& spec) {
  validate(spec);
  if (spec.kind() == FamilyKind::Charlier) {
    const double mean = 4.0 * spec.as<CharlierParams>().alpha;
    return tail_index([&](int x) { return -mean + x * std::log(mean) - log_factorial(x); }, mean,
                      kTruncationTail);
  }
  if (spec.kind() == FamilyKind::Meixner) {
    const auto [b, c] = spec.as<MeixnerParams>();
    const double ce = 4.0 * c / ((1.0 + c) * (1.0 + c));
    const double mode = b * ce / (1.0 - ce);
    return tail_index(
        [&](int x) {
          return b * std::log1p(-ce) + std::lgamma(b + x) - std::lgamma(b) + x * std::log(ce) - log_factorial(x);
        },
        mode, kTruncationTail);
  }
  throw Error(ErrorKind::InvalidSpec, "truncation applies to charlier and meixner only");
}

FamilySpec resolve_truncation(const FamilySpec& spec, int margin) {
  FamilySpec out = spec;
  if (!out.is_finite() && !out.k_max) out.k_max = default_truncation(spec) + margin;
  return out;
}

int weight_tail_index(const FamilySpec& spec, double tail) {
  validate(spec);
  if (spec.kind() == FamilyKind::Charlier) {
    const double a = spec.as<CharlierParams>().alpha;
    return tail_index([&](int x) { return -a + x * std::log(a) - log_factorial(x); }, a, tail);
  }
  if (spec.kind() == FamilyKind::Meixner) {
    const auto [b, c] = spec.as<MeixnerParams>();
    return tail_index(
        [&](int x) {
          return b * std::log1p(-c) + std::lgamma(b + x) - std::lgamma(b) + x * std::log(c) - log_factorial(x);
        },
        b * c / (1.0 - c), tail);
  }
  throw Error(ErrorKind::InvalidSpec, "weight tail applies to charlier and meixner only");
}

}  // namespace jchain
