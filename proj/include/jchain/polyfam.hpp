#pragma once

// Discrete orthogonal polynomial families: weights, squared norms, three-term recurrences
// and point values.

#include <vector>

#include "jchain/family.hpp"
#include "jchain/signed_log.hpp"

namespace jchain {

/// Recurrence in Jacobi form with A_n, C_n >= 0:
///   sigma(x) P_n(x) = -A_n P_{n+1}(x) + (A_n + C_n) P_n(x) - C_n P_{n-1}(x)
/// where sigma(x) is `lattice(spec, x)`. The Jacobi matrix then has h_n = A_n + C_n and
/// couplings sqrt(A_n C_{n+1}).
struct RecurrenceCoeffs {
  double A;
  double C;
};

RecurrenceCoeffs recurrence_coeffs(const FamilySpec& spec, int n);

/// x for the linear-lattice families, x(x+gamma+delta+1) for dual Hahn and Racah.
double lattice(const FamilySpec& spec, int x);

SignedLog weight(const FamilySpec& spec, int x);
SignedLog norm_d(const FamilySpec& spec, int n);

/// Non-normalised polynomial value from its hypergeometric definition.
double poly_eval(const FamilySpec& spec, int n, int x);

/// Same value by upward three-term recurrence from P_0 = 1.
double poly_eval_recurrence(const FamilySpec& spec, int n, int x);

/// sqrt(w(x)/d_n) P_n(x).
double orthonormal_value(const FamilySpec& spec, int n, int x);

struct WeightTable {
  FamilySpec family;
  std::vector<SignedLog> w;  ///< x = 0..order
  std::vector<SignedLog> d;  ///< n = 0..order
};

/// Weights and norms over the whole support. For the dual Hahn branch gamma,delta < -N with
/// odd N every w and d is negative; both are negated so the table is positive.
WeightTable make_weight_table(const FamilySpec& spec);

/// Tail threshold used to truncate the Charlier and Meixner chains.
inline constexpr double kTruncationTail = 1e-16;

/// Smallest K whose site-occupation tail beyond K is below kTruncationTail for every time,
/// starting from site 0. The envelope is the occupation at t = pi: Poisson(4 alpha) for
/// Charlier and the Meixner measure with c' = 4c/(1+c)^2.
int default_truncation(const FamilySpec& spec);

/// Copy of `spec` with k_max set to default_truncation + margin when it was unset.
FamilySpec resolve_truncation(const FamilySpec& spec, int margin = 0);

/// Smallest K with the tail of the family's own normalised weight below `tail`.
int weight_tail_index(const FamilySpec& spec, double tail = kTruncationTail);

}  // namespace jchain
