#include "jchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jchain/error.hpp"

namespace jchain::oracle {

DenseSpectrum eig_tridiagonal(const JacobiChain& chain) {
  const std::size_t n = chain.size();
  if (n == 0) throw Error(ErrorKind::InvalidSpec, "empty chain");

  std::vector<double> d(chain.h);
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = chain.offdiag(i);
  // v is column-major
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  constexpr int kMaxSweeps = 30;
  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    std::size_t m = l;
    while (m < n && std::fabs(e[m]) > eps * tst1) ++m;
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxSweeps)
          throw Error(ErrorKind::ConvergenceFailure, "QL iteration did not converge");

        // Wilkinson shift from the leading 2x2 block.
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double hh = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= hh;
        f += hh;

        // Implicit QL sweep.
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          hh = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = hh + s * (c * g + s * d[ii]);
          double* col_i = &v[ii * n];
          double* col_i1 = &v[(ii + 1) * n];
          for (std::size_t k = 0; k < n; ++k) {
            hh = col_i1[k];
            col_i1[k] = s * col_i[k] + c * hh;
            col_i[k] = c * col_i[k] - s * hh;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d[a] < d[b]; });

  DenseSpectrum out;
  out.n = n;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = d[order[j]];
    const double* src = &v[order[j] * n];
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::fabs(src[k]) > 1e-12) {
        sign = src[k] > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors[j * n + k] = sign * src[k];
  }
  return out;
}

std::vector<cplx> evolve_oracle(const DenseSpectrum& spectrum, std::size_t s, double t) {
  const std::size_t n = spectrum.n;
  if (s >= n) throw Error(ErrorKind::OutOfSupport, "site index outside the chain");
  std::vector<cplx> coeff(n);
  for (std::size_t j = 0; j < n; ++j)
    coeff[j] = spectrum.vec(s, j) * std::exp(cplx(0.0, -t * spectrum.eigenvalues[j]));
  std::vector<cplx> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) out[r] += spectrum.vec(r, j) * coeff[j];
  }
  return out;
}

std::vector<cplx> evolve_oracle(const JacobiChain& chain, std::size_t s, double t) {
  return evolve_oracle(eig_tridiagonal(chain), s, t);
}

cplx amplitude(const DenseSpectrum& spectrum, std::size_t r, std::size_t s, double t) {
  if (r >= spectrum.n || s >= spectrum.n) throw Error(ErrorKind::OutOfSupport, "site index outside the chain");
  cplx acc = 0.0;
  for (std::size_t j = 0; j < spectrum.n; ++j)
    acc += spectrum.vec(r, j) * spectrum.vec(s, j) * std::exp(cplx(0.0, -t * spectrum.eigenvalues[j]));
  return acc;
}

JacobiChain truncated_chain(const FamilySpec& spec, int k_max) {
  validate(spec);
  if (k_max < 1) throw Error(ErrorKind::InvalidSpec, "truncation k_max must be >= 1");
  JacobiChain c;
  c.sign = SignConvention::MinusJ;
  c.h.resize(k_max + 1);
  c.J.resize(k_max);
  if (spec.kind() == FamilyKind::Charlier) {
    const double a = spec.as<CharlierParams>().alpha;
    for (int k = 0; k <= k_max; ++k) c.h[k] = a + k;
    for (int k = 0; k < k_max; ++k) c.J[k] = std::sqrt(a * (k + 1));
  } else if (spec.kind() == FamilyKind::Meixner) {
    const auto [b, cc] = spec.as<MeixnerParams>();
    for (int k = 0; k <= k_max; ++k) c.h[k] = (k + cc * (k + b)) / (1.0 - cc);
    for (int k = 0; k < k_max; ++k) c.J[k] = std::sqrt(cc * (k + 1) * (k + b)) / (1.0 - cc);
  } else {
    throw Error(ErrorKind::InvalidSpec, "truncation applies to charlier and meixner only");
  }
  FamilySpec fam = spec;
  fam.k_max = k_max;
  c.family = fam;
  return c;
}

std::vector<cplx> truncation_sweep(const FamilySpec& spec, std::size_t r, std::size_t s, double t,
                                   std::span<const int> k_list) {
  std::vector<cplx> out;
  out.reserve(k_list.size());
  for (int k : k_list) {
    const auto spectrum = eig_tridiagonal(truncated_chain(spec, k));
    out.push_back(amplitude(spectrum, r, s, t));
  }
  return out;
}

}  // namespace jchain::oracle
