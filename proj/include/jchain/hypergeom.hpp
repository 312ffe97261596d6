#pragma once

// Pochhammer symbols, binomials and terminating generalized hypergeometric series.

#include <complex>
#include <optional>
#include <vector>

#include "jchain/signed_log.hpp"

namespace jchain {

using cplx = std::complex<double>;

/// Tolerance on |a - round(a)| used to recognise integer-valued parameters.
inline constexpr double kIntegerTol = 1e-9;

/// Returns -a when `a` is a non-positive integer within kIntegerTol.
std::optional<int> nonpositive_integer(double a);
std::optional<int> nonpositive_integer(cplx a);

/// Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
cplx pochhammer(cplx a, int n);
double pochhammer(double a, int n);

/// (a)_n in the log domain. Zero factors give sign 0.
SignedLog log_pochhammer(double a, int n);

/// ln C(n, k) for integer arguments; sign 0 outside 0 <= k <= n.
SignedLog log_binomial(int n, int k);

/// C(a, k) = (a - k + 1)_k / k! for real upper argument.
SignedLog log_binomial_real(double a, int k);

/// ln k!
double log_factorial(int k);

struct HypSeriesSpec {
  std::vector<cplx> numerator_params;
  std::vector<cplx> denominator_params;
  cplx argument;
};

/// Terminating pFq by the running term-ratio recurrence.
/// Throws Error{NonTerminating} when no numerator parameter is a non-positive integer,
/// Error{DenominatorPole} when a denominator Pochhammer vanishes before termination.
cplx eval_phq(const HypSeriesSpec& spec);

/// Convenience overload.
cplx eval_phq(std::vector<cplx> num, std::vector<cplx> den, cplx z);

/// Termination index T = min(-a) over non-positive-integer numerator parameters.
std::optional<int> termination_index(const HypSeriesSpec& spec);

struct EulerTransform {
  cplx a, b, c, z;
  cplx prefactor;
};

/// 2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a,c-b;c;z). Requires z != 1.
EulerTransform euler_2f1_transform(cplx a, cplx b, cplx c, cplx z);

}  // namespace jchain
