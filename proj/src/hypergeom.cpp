#include "jchain/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jchain/error.hpp"

namespace jchain {

std::optional<int> nonpositive_integer(double a) {
  const double r = std::round(a);
  if (r <= 0.0 && std::fabs(a - r) <= kIntegerTol) return static_cast<int>(-r);
  return std::nullopt;
}

std::optional<int> nonpositive_integer(cplx a) {
  if (std::fabs(a.imag()) > kIntegerTol) return std::nullopt;
  return nonpositive_integer(a.real());
}

cplx pochhammer(cplx a, int n) {
  cplx p = 1.0;
  for (int k = 0; k < n; ++k) p *= a + static_cast<double>(k);
  return p;
}

double pochhammer(double a, int n) {
  double p = 1.0;
  for (int k = 0; k < n; ++k) p *= a + k;
  return p;
}

SignedLog log_pochhammer(double a, int n) {
  SignedLog acc = SignedLog::one();
  for (int k = 0; k < n; ++k) {
    const double f = a + k;
    if (f == 0.0) return SignedLog::zero();
    acc *= SignedLog::from_double(f);
  }
  return acc;
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

SignedLog log_binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return SignedLog::zero();
  return {1, log_factorial(n) - log_factorial(k) - log_factorial(n - k)};
}

SignedLog log_binomial_real(double a, int k) {
  if (k < 0) return SignedLog::zero();
  SignedLog num = log_pochhammer(a - k + 1.0, k);
  num.logmag -= log_factorial(k);
  return num;
}

std::optional<int> termination_index(const HypSeriesSpec& spec) {
  std::optional<int> t;
  for (const auto& a : spec.numerator_params) {
    if (auto m = nonpositive_integer(a)) t = t ? std::min(*t, *m) : *m;
  }
  return t;
}

namespace {

[[noreturn]] void denominator_pole(cplx b, int k, int t) {
  std::ostringstream msg;
  msg << "denominator parameter " << b << " vanishes at index " << k << " before termination at " << t;
  throw Error(ErrorKind::DenominatorPole, msg.str());
}

bool all_real(const HypSeriesSpec& spec) {
  auto real = [](const cplx& v) { return v.imag() == 0.0; };
  return real(spec.argument) && std::all_of(spec.numerator_params.begin(), spec.numerator_params.end(), real) &&
         std::all_of(spec.denominator_params.begin(), spec.denominator_params.end(), real);
}

// Terminating sums of orthogonal-polynomial type cancel heavily, so real series are summed
// in binary128 and complex ones in extended precision.
template <class T>
struct scalar_of {
  using type = T;
};
template <class T>
struct scalar_of<std::complex<T>> {
  using type = T;
};

template <class T>
T sum_series(const HypSeriesSpec& spec, int t) {
  using R = typename scalar_of<T>::type;
  auto lift = [](const cplx& v) {
    if constexpr (std::is_same_v<T, R>)
      return static_cast<R>(v.real());
    else
      return T(static_cast<R>(v.real()), static_cast<R>(v.imag()));
  };
  const T z = lift(spec.argument);
  T term = R(1);
  T sum = R(1);
  for (int k = 0; k < t; ++k) {
    T num = z;
    T den = static_cast<R>(k + 1);
    for (const auto& a : spec.numerator_params) num *= lift(a) + static_cast<R>(k);
    for (const auto& b : spec.denominator_params) {
      if (std::abs(b + static_cast<double>(k)) <= kIntegerTol) denominator_pole(b, k, t);
      den *= lift(b) + static_cast<R>(k);
    }
    term = term * num / den;
    sum += term;
  }
  return sum;
}

}  // namespace

cplx eval_phq(const HypSeriesSpec& spec) {
  const auto t = termination_index(spec);
  if (!t) throw Error(ErrorKind::NonTerminating, "no numerator parameter is a non-positive integer");
  if (all_real(spec)) return static_cast<double>(sum_series<__float128>(spec, *t));
  const auto v = sum_series<std::complex<long double>>(spec, *t);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

cplx eval_phq(std::vector<cplx> num, std::vector<cplx> den, cplx z) {
  return eval_phq(HypSeriesSpec{std::move(num), std::move(den), z});
}

EulerTransform euler_2f1_transform(cplx a, cplx b, cplx c, cplx z) {
  if (z == cplx(1.0)) throw Error(ErrorKind::InvalidSpec, "Euler transformation needs z != 1");
  const cplx e = c - a - b;
  cplx pre = 1.0;
  if (e != cplx(0.0)) pre = std::pow(1.0 - z, e);
  return {c - a, c - b, c, z, pre};
}

}  // namespace jchain
