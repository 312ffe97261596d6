#pragma once

// Transition amplitudes f_{r,s}(t) = (r| exp(-i t M) |s) for the MinusJ Jacobi matrix of a
// family, by spectral sum, by closed form, and by the numerical oracle.

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "jchain/chain.hpp"
#include "jchain/family.hpp"

namespace jchain {

using cplx = std::complex<double>;

enum class Method { SpectralSum, ClosedForm, Oracle };

std::string_view method_name(Method m);

/// z = exp(-i t) within this distance of 1 is treated as t in 2 pi Z by the closed forms.
inline constexpr double kUnitZTol = 1e-12;

cplx amplitude_spectral(const SpectralData& sd, int r, int s, double t);
cplx amplitude_spectral(const FamilySpec& spec, int r, int s, double t);

cplx amplitude_krawtchouk(const FamilySpec& spec, int r, int s, double t);
cplx amplitude_hahn(const FamilySpec& spec, int r, int s, double t);
cplx amplitude_charlier(double alpha, int r, int s, double t);
cplx amplitude_meixner(double b, double c, int r, int s, double t);
cplx amplitude_dualhahn(const FamilySpec& spec, int r, int s, double t);
/// Closed sum for (N,0) and (0,N); spectral sum otherwise.
cplx amplitude_racah(const FamilySpec& spec, int r, int s, double t);

/// Hahn S(r,s) directly from sum_k w(k) Q_r(k) Q_s(k) z^k.
cplx hahn_direct_sum(const FamilySpec& spec, int r, int s, double t);

/// Dispatch to the family's closed form.
cplx amplitude_closed(const FamilySpec& spec, int r, int s, double t);

/// Oracle route: eigensolver on build_chain(spec); Charlier/Meixner use the truncated chain.
cplx amplitude_oracle(const FamilySpec& spec, int r, int s, double t);

cplx amplitude(const FamilySpec& spec, int r, int s, double t, Method method);

/// Methods that apply to the family (spectral needs a finite family).
std::vector<Method> available_methods(const FamilySpec& spec);

struct AmplitudeGrid {
  FamilySpec family;
  std::vector<std::pair<int, int>> sites;  ///< (r, s)
  std::vector<double> times;
  std::vector<cplx> values;  ///< values[i * times.size() + k] for sites[i], times[k]
  Method method = Method::SpectralSum;

  cplx at(std::size_t site_index, std::size_t time_index) const {
    return values[site_index * times.size() + time_index];
  }
};

/// Evaluates every (site pair, time) cell. Cells are independent, so the result does not
/// depend on `threads` (0 = use `thread_cap()`).
AmplitudeGrid compute_grid(const FamilySpec& spec, std::vector<std::pair<int, int>> sites,
                           std::vector<double> times, Method method, unsigned threads = 0);

/// Parallelism cap from JACOBI_CHAIN_THREADS (0 or unset = hardware concurrency).
unsigned thread_cap();

struct PstEvent {
  double t;
  double fidelity;
};

/// Local maxima of |f_{r,s}| over the grid, refined by golden-section search to 1e-10 in t,
/// reported when the refined value reaches `threshold`.
std::vector<PstEvent> detect_pst(const FamilySpec& spec, int s, int r, std::span<const double> t_grid,
                                 double threshold);

struct Su2Coefficients {
  cplx xi;
  cplx eta;  ///< zeta equals xi
};

/// exp(-it(2p-1)L0 + it sqrt(p(1-p))(L+ + L-)) = exp(xi L-) exp(eta L0) exp(xi L+).
Su2Coefficients bch_su2_coefficients(double p, double t);

/// exp(xi L-) exp(eta L0) exp(zeta L+) in the 2-dimensional representation, row-major.
std::array<cplx, 4> su2_factorized_2x2(cplx xi, cplx eta, cplx zeta);

/// Krawtchouk amplitude assembled from the su(2) factorisation matrix element.
cplx amplitude_krawtchouk_su2(const FamilySpec& spec, int r, int s, double t);

}  // namespace jchain
