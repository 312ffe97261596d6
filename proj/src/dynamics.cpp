#include "jchain/dynamics.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <thread>

#include "jchain/error.hpp"
#include "jchain/hypergeom.hpp"
#include "jchain/oracle.hpp"
#include "jchain/polyfam.hpp"

namespace jchain {

namespace {

const cplx I{0.0, 1.0};

cplx ipow(cplx base, int e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  cplx acc = 1.0;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

cplx unit_z(double t) { return std::exp(-I * t); }

bool z_is_one(cplx z) { return std::abs(1.0 - z) < kUnitZTol; }

double delta(int r, int s) { return r == s ? 1.0 : 0.0; }

void check_sites(const FamilySpec& spec, int r, int s) {
  const int order = spec.order();
  if (r < 0 || s < 0 || r > order || s > order)
    throw Error(ErrorKind::OutOfSupport, "site index outside 0.." + std::to_string(order));
}

template <class P>
const P& params_of(const FamilySpec& spec, FamilyKind kind, const char* name) {
  validate(spec);
  if (spec.kind() != kind) throw Error(ErrorKind::InvalidSpec, std::string(name) + " needs a " + name + " spec");
  return spec.as<P>();
}

// Hahn and dual Hahn closed sums cancel by many digits at N ~ 30, so they run in binary128.
using real = __float128;

struct cplxl {
  real re = 0, im = 0;
  cplxl() = default;
  cplxl(real r, real i = 0) : re(r), im(i) {}
  cplxl& operator+=(const cplxl& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend cplxl operator*(const cplxl& a, const cplxl& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  cplxl& operator*=(const cplxl& o) { return *this = *this * o; }
  friend cplxl operator-(const cplxl& a) { return {-a.re, -a.im}; }
  friend cplxl operator-(real a, const cplxl& b) { return {a - b.re, -b.im}; }
  cplx to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

// exp(-i theta)
cplxl unit_phase(real theta) {
  real s, c;
  sincosq(theta, &s, &c);
  return {c, -s};
}

real poch(real a, int n) {
  real acc = 1;
  for (int k = 0; k < n; ++k) acc *= a + k;
  return acc;
}

real factorial(int n) { return poch(1, n); }

// top! / bottom!, zero when bottom is negative.
real falling_ratio(int top, int bottom) {
  if (bottom < 0) return 0;
  real acc = 1;
  for (int k = bottom + 1; k <= top; ++k) acc *= k;
  return acc;
}

cplxl ipowl(cplxl base, int e) {
  cplxl acc = 1.0;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::SpectralSum: return "spectral";
    case Method::ClosedForm: return "closed";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

cplx amplitude_spectral(const SpectralData& sd, int r, int s, double t) {
  if (r < 0 || s < 0 || static_cast<std::size_t>(r) >= sd.n || static_cast<std::size_t>(s) >= sd.n)
    throw Error(ErrorKind::OutOfSupport, "site index outside the chain");
  cplx acc = 0.0;
  for (std::size_t j = 0; j < sd.n; ++j)
    acc += sd.u(r, j) * sd.u(s, j) * std::exp(-I * (t * sd.eigenvalues[j]));
  return acc;
}

cplx amplitude_spectral(const FamilySpec& spec, int r, int s, double t) {
  validate(spec);
  if (!spec.is_finite()) throw Error(ErrorKind::InvalidSpec, "spectral route needs a finite family");
  check_sites(spec, r, s);
  return amplitude_spectral(spectral_data(spec), r, s, t);
}

cplx amplitude_krawtchouk(const FamilySpec& spec, int r, int s, double t) {
  const double p = params_of<KrawtchoukParams>(spec, FamilyKind::Krawtchouk, "krawtchouk").p;
  check_sites(spec, r, s);
  const cplx z = unit_z(t);
  if (z_is_one(z)) return delta(r, s);

  const int N = spec.N;
  const double q = 1.0 - p;
  const double pq = p * q;
  const cplx x = -z / (pq * (1.0 - z) * (1.0 - z));
  double logpre = 0.5 * (log_binomial(N, r).logmag + log_binomial(N, s).logmag) + 0.5 * (r + s) * std::log(pq);

  cplx val;
  if (r + s <= N) {
    val = ipow(1.0 - z, r + s) * ipow(q + p * z, N - r - s) * eval_phq({-double(r), -double(s)}, {-double(N)}, x);
  } else {
    // Euler-transformed form; (1-x) = (q+pz)(p+qz)/(pq(1-z)^2) keeps every power non-negative.
    logpre += (N - r - s) * std::log(pq);
    val = ipow(1.0 - z, 2 * N - r - s) * ipow(p + q * z, r + s - N) *
          eval_phq({double(r - N), double(s - N)}, {-double(N)}, x);
  }
  return std::exp(logpre) * val;
}

cplx hahn_direct_sum(const FamilySpec& spec, int r, int s, double t) {
  params_of<HahnParams>(spec, FamilyKind::Hahn, "hahn");
  check_sites(spec, r, s);
  const WeightTable table = make_weight_table(spec);
  cplx acc = 0.0;
  for (int k = 0; k <= spec.N; ++k) {
    const double wq = table.w[k].to_double() * poly_eval(spec, r, k) * poly_eval(spec, s, k);
    acc += wq * std::exp(-I * (t * k));
  }
  return acc;
}

cplx amplitude_hahn(const FamilySpec& spec, int r, int s, double t) {
  const auto [a, b] = params_of<HahnParams>(spec, FamilyKind::Hahn, "hahn");
  check_sites(spec, r, s);
  const cplx z = unit_z(t);
  if (z_is_one(z)) return delta(r, s);

  const int N = spec.N;
  const double c = N + 1.0 + a + b;
  const SignedLog inv_norm = (norm_d(spec, r) * norm_d(spec, s)).inverse().pow(0.5);

  bool well_poised_pole = false;
  for (int m = 0; m <= N; ++m) well_poised_pole |= nonpositive_integer((c - m) / 2.0).has_value();
  if (well_poised_pole) return inv_norm.to_double() * hahn_direct_sum(spec, r, s, t);

  // S(r,s) = (b+1)_N/N! sum_m (-z)^m (1-z)^{N-m} pre_m 8F7_m(-1). The factor pairs
  // (r-N)_m/(N+1-r-m)_j and (s-N)_m/(N+1-s-m)_j are combined into finite ratios so
  // that terms with m > N-r (0 times a pole) keep their limiting value.
  const cplxl zl = unit_phase(t);
  const real al = a, bl = b, cl = c;
  cplxl total = 0.0;
  for (int m = 0; m <= N; ++m) {
    const real cm = cl - m;
    const real pre = poch(-r - cl, m) * poch(-s - cl, m) /
                     (factorial(m) * poch(-N - bl, m) * poch(-cl, m) * poch(-real(N), m));
    real inner = 0.0;
    real term = 1.0;
    const int jmax = std::min({m, r, s});
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) {
        const real k = j - 1;
        term *= (cm + k) * (1.0 + cm / 2.0 + k) * (N + bl + 1.0 - m + k) * (-m + k) * (-r + k) * (-s + k) *
                (cl + r - N + k) * (cl + s - N + k);
        term /= (cm / 2.0 + k) * (al + 1.0 + k) * (cl + 1.0 + k) * (cl + 1.0 + r - m + k) *
                (cl + 1.0 + s - m + k) * j;
        term = -term;
      }
      inner += term * falling_ratio(N - r, N - r - m + j) * falling_ratio(N - s, N - s - m + j);
    }
    total += ipowl(-zl, m) * ipowl(1.0 - zl, N - m) * (pre * inner);
  }
  const SignedLog lead = log_pochhammer(b + 1.0, N) / SignedLog{1, log_factorial(N)};
  return (lead * inv_norm).to_double() * total.to_double();
}

cplx amplitude_charlier(double alpha, int r, int s, double t) {
  validate(FamilySpec::charlier(alpha));
  if (r < 0 || s < 0) throw Error(ErrorKind::OutOfSupport, "site index must be non-negative");
  const cplx z = unit_z(t);
  if (z_is_one(z)) return delta(r, s);
  const double logpre = 0.5 * ((r + s) * std::log(alpha) - log_factorial(r) - log_factorial(s));
  const cplx arg = z / (alpha * (1.0 - z) * (1.0 - z));
  return std::exp(logpre) * ipow(1.0 - z, r + s) * std::exp(-alpha + alpha * z) *
         eval_phq({-double(r), -double(s)}, {}, arg);
}

cplx amplitude_meixner(double b, double c, int r, int s, double t) {
  validate(FamilySpec::meixner(b, c));
  if (r < 0 || s < 0) throw Error(ErrorKind::OutOfSupport, "site index must be non-negative");
  const cplx z = unit_z(t);
  if (z_is_one(z)) return delta(r, s);
  const double logpre = b * std::log1p(-c) +
                        0.5 * (log_pochhammer(b, r).logmag + log_pochhammer(b, s).logmag - log_factorial(r) -
                               log_factorial(s)) +
                        0.5 * (r + s) * std::log(c);
  const cplx arg = (1.0 - c) * (1.0 - c) / c * z / ((1.0 - z) * (1.0 - z));
  return std::exp(logpre) * ipow(1.0 - z, r + s) / std::pow(1.0 - c * z, b + r + s) *
         eval_phq({-double(r), -double(s)}, {b}, arg);
}

cplx amplitude_dualhahn(const FamilySpec& spec, int r, int s, double t) {
  const auto [g, d] = params_of<DualHahnParams>(spec, FamilyKind::DualHahn, "dualhahn");
  check_sites(spec, r, s);
  const int N = spec.N;
  const real gl = g, dl = d, gdl = gl + dl;
  std::vector<cplxl> phase(N + 1);
  for (int k = 0; k <= N; ++k) phase[k] = unit_phase(real(t) * k * (k + gdl + 1));

  cplxl total = 0.0;
  for (int m = 0; m <= N; ++m) {
    // 4F3(-m,-r,-s,-d-m; g+1, N+1-r-m, N+1-s-m; 1) times (r-N)_m (s-N)_m, regularised.
    real f43 = 0.0;
    real term = 1.0;
    const int jmax = std::min({m, r, s});
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) {
        const real k = j - 1;
        term *= (-m + k) * (-r + k) * (-s + k) * (-dl - m + k) / ((gl + 1.0 + k) * j);
      }
      f43 += term * falling_ratio(N - r, N - r - m + j) * falling_ratio(N - s, N - s - m + j);
    }
    if (f43 == 0.0) continue;

    cplxl inner = 0.0;
    for (int k = m; k <= N; ++k) {
      // (gd+k+1)_m / (gd+k+1)_{N+1} = 1 / (gd+k+1+m)_{N+1-m}
      const real coef = poch(-real(N), k) * (gdl + 2.0 * k + 1.0) / (factorial(k - m) * poch(gdl + k + 1.0 + m, N + 1 - m));
      inner += coef * phase[k];
    }
    const real outer = f43 / poch(dl + 1.0, m) * ((m % 2) ? -1.0 : 1.0) * falling_ratio(N - m, 0) *
                       (falling_ratio(N - m, 0) / falling_ratio(N, 0)) / factorial(m);
    total += outer * inner;
  }
  const cplx totald = total.to_double();
  const SignedLog dr = norm_d(spec, r);
  const SignedLog inv = (dr * norm_d(spec, s)).inverse();
  if (inv.sign <= 0) throw Error(ErrorKind::InvalidSpec, "dual Hahn norms have inconsistent signs");
  // On the gamma, delta < -N branch the sum carries sign(d), and A_n < 0 makes the polynomial
  // basis differ from the chain eigenvectors by (-1)^n.
  double sign = dr.sign;
  if (g + 1.0 < 0.0 && (r + s) % 2) sign = -sign;
  return sign * std::exp(0.5 * inv.logmag) * totald;
}

cplx amplitude_racah(const FamilySpec& spec, int r, int s, double t) {
  const auto& p = params_of<RacahParams>(spec, FamilyKind::Racah, "racah");
  check_sites(spec, r, s);
  const int N = spec.N;
  if (!((r == N && s == 0) || (r == 0 && s == N))) return amplitude_spectral(spec, r, s, t);

  const double gd = p.gamma + p.delta;
  cplx acc = 0.0;
  double coef = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) {
      // (-N, gd+1, (gd+1)/2+1)_k / (k! (gd+N+2, (gd+1)/2)_k), with the well-poised pair
      // folded into (gd+1+2k)(gd+2)_{k-1} to stay finite at gd = -1.
      const double kk = k - 1;
      coef *= (-N + kk) / ((gd + N + 2.0 + kk) * k);
      coef *= k == 1 ? 1.0 : (gd + 1.0 + kk);
    }
    const double wp = (k == 0) ? 1.0 : (gd + 1.0 + 2.0 * k);
    acc += coef * wp * std::exp(-I * (t * k * (k + gd + 1.0)));
  }
  const SignedLog inv = (norm_d(spec, N) * norm_d(spec, 0)).inverse();
  if (inv.sign <= 0) throw Error(ErrorKind::InvalidSpec, "racah norms have inconsistent signs");
  return std::exp(0.5 * inv.logmag) * acc;
}

cplx amplitude_closed(const FamilySpec& spec, int r, int s, double t) {
  switch (spec.kind()) {
    case FamilyKind::Krawtchouk: return amplitude_krawtchouk(spec, r, s, t);
    case FamilyKind::Hahn: return amplitude_hahn(spec, r, s, t);
    case FamilyKind::DualHahn: return amplitude_dualhahn(spec, r, s, t);
    case FamilyKind::Racah: return amplitude_racah(spec, r, s, t);
    case FamilyKind::Charlier: return amplitude_charlier(spec.as<CharlierParams>().alpha, r, s, t);
    case FamilyKind::Meixner: {
      const auto [b, c] = spec.as<MeixnerParams>();
      return amplitude_meixner(b, c, r, s, t);
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family");
}

cplx amplitude_oracle(const FamilySpec& spec, int r, int s, double t) {
  validate(spec);
  const FamilySpec fam = resolve_truncation(spec, std::max(r, s));
  check_sites(fam, r, s);
  const JacobiChain chain = fam.is_finite() ? build_chain(fam) : oracle::truncated_chain(fam, *fam.k_max);
  return oracle::amplitude(oracle::eig_tridiagonal(chain), r, s, t);
}

cplx amplitude(const FamilySpec& spec, int r, int s, double t, Method method) {
  switch (method) {
    case Method::SpectralSum: return amplitude_spectral(spec, r, s, t);
    case Method::ClosedForm: return amplitude_closed(spec, r, s, t);
    case Method::Oracle: return amplitude_oracle(spec, r, s, t);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown method");
}

std::vector<Method> available_methods(const FamilySpec& spec) {
  if (spec.is_finite()) return {Method::SpectralSum, Method::ClosedForm, Method::Oracle};
  return {Method::ClosedForm, Method::Oracle};
}

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("JACOBI_CHAIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

AmplitudeGrid compute_grid(const FamilySpec& spec, std::vector<std::pair<int, int>> sites,
                           std::vector<double> times, Method method, unsigned threads) {
  validate(spec);
  int max_site = 0;
  for (auto [r, s] : sites) max_site = std::max({max_site, r, s});

  AmplitudeGrid grid;
  grid.family = resolve_truncation(spec, max_site);
  grid.sites = std::move(sites);
  grid.times = std::move(times);
  grid.method = method;
  for (auto [r, s] : grid.sites) check_sites(grid.family, r, s);

  std::function<cplx(int, int, double)> eval;
  if (method == Method::SpectralSum) {
    if (!spec.is_finite()) throw Error(ErrorKind::InvalidSpec, "spectral route needs a finite family");
    auto sd = std::make_shared<SpectralData>(spectral_data(grid.family));
    eval = [sd](int r, int s, double t) { return amplitude_spectral(*sd, r, s, t); };
  } else if (method == Method::Oracle) {
    const auto& fam = grid.family;
    const JacobiChain chain = fam.is_finite() ? build_chain(fam) : oracle::truncated_chain(fam, *fam.k_max);
    auto spectrum = std::make_shared<oracle::DenseSpectrum>(oracle::eig_tridiagonal(chain));
    eval = [spectrum](int r, int s, double t) { return oracle::amplitude(*spectrum, r, s, t); };
  } else {
    FamilySpec fam = grid.family;
    eval = [fam](int r, int s, double t) { return amplitude_closed(fam, r, s, t); };
  }

  const std::size_t nt = grid.times.size();
  const std::size_t cells = grid.sites.size() * nt;
  grid.values.assign(cells, cplx{});
  const unsigned workers = std::max(1u, std::min<unsigned>(threads ? threads : thread_cap(),
                                                            static_cast<unsigned>(std::max<std::size_t>(cells, 1))));
  auto work = [&](unsigned w) {
    for (std::size_t cell = w; cell < cells; cell += workers) {
      const auto [r, s] = grid.sites[cell / nt];
      grid.values[cell] = eval(r, s, grid.times[cell % nt]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return grid;
}

std::vector<PstEvent> detect_pst(const FamilySpec& spec, int s, int r, std::span<const double> t_grid,
                                 double threshold) {
  validate(spec);
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error(ErrorKind::InvalidSpec, "threshold must lie in (0, 1]");
  if (t_grid.empty()) throw Error(ErrorKind::InvalidSpec, "time grid is empty");

  std::function<double(double)> fidelity;
  if (spec.is_finite()) {
    check_sites(spec, r, s);
    auto sd = std::make_shared<SpectralData>(spectral_data(spec));
    fidelity = [sd, r, s](double t) { return std::abs(amplitude_spectral(*sd, r, s, t)); };
  } else {
    FamilySpec fam = spec;
    fidelity = [fam, r, s](double t) { return std::abs(amplitude_closed(fam, r, s, t)); };
  }

  const std::size_t n = t_grid.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fidelity(t_grid[i]);

  std::vector<PstEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || v[i] >= v[i - 1];
    const bool right_ok = i + 1 == n || v[i] > v[i + 1];
    if (!(left_ok && right_ok)) continue;

    double lo = t_grid[i == 0 ? 0 : i - 1];
    double hi = t_grid[i + 1 == n ? i : i + 1];
    double best_t = t_grid[i];
    double best_f = v[i];
    if (hi > lo) {
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - inv_phi * (hi - lo);
      double x2 = lo + inv_phi * (hi - lo);
      double f1 = fidelity(x1);
      double f2 = fidelity(x2);
      while (hi - lo > 1e-10) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          f2 = fidelity(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          f1 = fidelity(x1);
        }
      }
      for (auto [tt, ff] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (ff > best_f) {
          best_f = ff;
          best_t = tt;
        }
      }
    }
    if (best_f < threshold) continue;
    if (!events.empty() && std::fabs(events.back().t - best_t) < 1e-6) {
      if (best_f > events.back().fidelity) events.back() = {best_t, best_f};
      continue;
    }
    events.push_back({best_t, best_f});
  }
  return events;
}

Su2Coefficients bch_su2_coefficients(double p, double t) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidSpec, "su(2) coefficients require 0<p<1");
  const double half = t / 2.0;
  const cplx den = std::cos(half) - I * (2.0 * p - 1.0) * std::sin(half);
  const cplx xi = 2.0 * I * std::sqrt(p * (1.0 - p)) * std::sin(half) / den;
  return {xi, 2.0 * std::log(den)};
}

std::array<cplx, 4> su2_factorized_2x2(cplx xi, cplx eta, cplx zeta) {
  using M2 = std::array<cplx, 4>;
  auto mul = [](const M2& x, const M2& y) {
    return M2{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
              x[2] * y[1] + x[3] * y[3]};
  };
  const M2 lower{1.0, 0.0, xi, 1.0};
  const M2 cartan{std::exp(eta / 2.0), 0.0, 0.0, std::exp(-eta / 2.0)};
  const M2 upper{1.0, zeta, 0.0, 1.0};
  return mul(mul(lower, cartan), upper);
}

cplx amplitude_krawtchouk_su2(const FamilySpec& spec, int r, int s, double t) {
  const double p = params_of<KrawtchoukParams>(spec, FamilyKind::Krawtchouk, "krawtchouk").p;
  check_sites(spec, r, s);
  const int N = spec.N;
  const double half = t / 2.0;
  const cplx e_half = std::cos(half) - I * (2.0 * p - 1.0) * std::sin(half);  // exp(eta/2)
  const cplx xi = 2.0 * I * std::sqrt(p * (1.0 - p)) * std::sin(half) / e_half;

  // (r| exp(xi L-) exp(eta L0) exp(xi L+) |s): j lowerings on the left, k = s-r+j raisings on the right.
  cplx acc = 0.0;
  for (int j = std::max(0, r - s); j <= r; ++j) {
    const int k = s - r + j;
    if (k < 0 || k > s) continue;
    const double logc = 0.5 * (log_binomial(r, j).logmag + log_binomial(N - r + j, j).logmag +
                               log_binomial(s, k).logmag + log_binomial(N - s + k, k).logmag);
    acc += std::exp(logc) * ipow(xi, j + k) * ipow(e_half, N - 2 * s + 2 * k);
  }
  return std::exp(-I * (t * N / 2.0)) * acc;
}

}  // namespace jchain
