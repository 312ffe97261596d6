#include "jchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jchain/error.hpp"
#include "jchain/polyfam.hpp"

namespace jchain {

JacobiChain build_chain(const FamilySpec& spec) {
  validate(spec);
  const FamilySpec fam = resolve_truncation(spec);
  const int order = fam.order();

  JacobiChain c;
  c.sign = SignConvention::MinusJ;
  c.family = fam;
  c.h.resize(order + 1);
  c.J.resize(order);
  RecurrenceCoeffs cur = recurrence_coeffs(fam, 0);
  for (int n = 0; n <= order; ++n) {
    c.h[n] = cur.A + cur.C;
    if (n < order) {
      const RecurrenceCoeffs next = recurrence_coeffs(fam, n + 1);
      const double prod = cur.A * next.C;
      if (!(prod > 0.0)) throw Error(ErrorKind::InvalidSpec, "recurrence gives a non-positive coupling");
      c.J[n] = std::sqrt(prod);
      cur = next;
    }
  }
  return c;
}

double analytic_eigenvalue(const FamilySpec& spec, int x) { return lattice(spec, x); }

namespace {

// Null vector of the tridiagonal (chain - lambda) for an exact eigenvalue lambda. The forward
// and backward pivot sequences meet at the index with the smallest twist, so each half of the
// vector is produced in the direction where the recurrence is stable.
std::vector<double> null_vector(const JacobiChain& c, double lambda) {
  const std::size_t n = c.size();
  std::vector<double> v(n, 0.0);
  if (n == 1) {
    v[0] = 1.0;
    return v;
  }
  double scale = 0.0;
  for (double x : c.h) scale = std::max(scale, std::fabs(x - lambda));
  for (double x : c.J) scale = std::max(scale, std::fabs(x));
  const double floor = scale * 1e-300 + std::numeric_limits<double>::min();
  auto guard = [floor](double d) { return std::fabs(d) < floor ? (d < 0 ? -floor : floor) : d; };

  std::vector<double> fwd(n), bwd(n);
  fwd[0] = guard(c.h[0] - lambda);
  for (std::size_t i = 1; i < n; ++i) fwd[i] = guard(c.h[i] - lambda - c.J[i - 1] * c.J[i - 1] / fwd[i - 1]);
  bwd[n - 1] = guard(c.h[n - 1] - lambda);
  for (std::size_t i = n - 1; i-- > 0;) bwd[i] = guard(c.h[i] - lambda - c.J[i] * c.J[i] / bwd[i + 1]);

  std::size_t k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double twist = std::fabs(fwd[i] + bwd[i] - (c.h[i] - lambda));
    if (twist < best) {
      best = twist;
      k = i;
    }
  }
  v[k] = 1.0;
  for (std::size_t i = k; i-- > 0;) v[i] = -c.offdiag(i) / fwd[i] * v[i + 1];
  for (std::size_t i = k + 1; i < n; ++i) v[i] = -c.offdiag(i - 1) / bwd[i] * v[i - 1];

  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  // P_0 = 1 and w > 0 fix the sign of the first component.
  const double sign = v[0] < 0.0 ? -1.0 : 1.0;
  for (double& x : v) x *= sign / norm;
  return v;
}

}  // namespace

SpectralData spectral_data(const FamilySpec& spec) {
  validate(spec);
  if (!spec.is_finite())
    throw Error(ErrorKind::InvalidSpec, "analytic spectral data needs a finite family");
  const int N = spec.N;
  const std::size_t n = N + 1;
  const JacobiChain chain = build_chain(spec);

  std::vector<double> eig(n);
  for (int x = 0; x <= N; ++x) eig[x] = analytic_eigenvalue(spec, x);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return eig[a] < eig[b]; });

  SpectralData sd;
  sd.n = n;
  sd.source = SpectralSource::AnalyticPolynomial;
  sd.eigenvalues.resize(n);
  sd.U.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    sd.eigenvalues[j] = eig[order[j]];
    const std::vector<double> col = null_vector(chain, sd.eigenvalues[j]);
    for (std::size_t site = 0; site < n; ++site) sd.U[site * n + j] = col[site];
  }
  return sd;
}

double orthogonality_defect(const SpectralData& sd) {
  double worst = 0.0;
  for (std::size_t a = 0; a < sd.n; ++a) {
    for (std::size_t b = 0; b < sd.n; ++b) {
      double acc = 0.0;
      for (std::size_t j = 0; j < sd.n; ++j) acc += sd.u(a, j) * sd.u(b, j);
      worst = std::max(worst, std::fabs(acc - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double reconstruction_defect(const SpectralData& sd, const JacobiChain& chain) {
  const auto m = chain.dense();
  double worst = 0.0;
  for (std::size_t a = 0; a < sd.n; ++a) {
    for (std::size_t b = 0; b < sd.n; ++b) {
      double acc = 0.0;
      for (std::size_t j = 0; j < sd.n; ++j) acc += sd.u(a, j) * sd.eigenvalues[j] * sd.u(b, j);
      worst = std::max(worst, std::fabs(acc - m[a * sd.n + b]));
    }
  }
  return worst;
}

}  // namespace jchain
