#pragma once

// Theory-free reference route: dense tridiagonal eigensolver and exact spectral propagation.
// Deliberately independent of the polynomial and hypergeometric code.

#include <complex>
#include <span>
#include <vector>

#include "jchain/family.hpp"
#include "jchain/jacobi_chain.hpp"

namespace jchain::oracle {

using cplx = std::complex<double>;

struct DenseSpectrum {
  std::vector<double> eigenvalues;  ///< ascending
  std::vector<double> eigenvectors; ///< column-major n x n; column j belongs to eigenvalues[j]
  std::size_t n = 0;

  double vec(std::size_t row, std::size_t col) const { return eigenvectors[col * n + row]; }
};

/// Implicit-shift QL on the symmetric tridiagonal matrix. Eigenvectors are normalised with
/// their first nonzero component positive. Throws Error{ConvergenceFailure} after 30
/// sweeps on one eigenvalue.
DenseSpectrum eig_tridiagonal(const JacobiChain& chain);

/// Column s of exp(-i t M).
std::vector<cplx> evolve_oracle(const DenseSpectrum& spectrum, std::size_t s, double t);
std::vector<cplx> evolve_oracle(const JacobiChain& chain, std::size_t s, double t);

/// (r| exp(-i t M) |s).
cplx amplitude(const DenseSpectrum& spectrum, std::size_t r, std::size_t s, double t);

/// Charlier/Meixner chain truncated to sites 0..k_max, MinusJ convention, built directly
/// from the infinite-chain Hamiltonians.
JacobiChain truncated_chain(const FamilySpec& spec, int k_max);

/// f_{r,s}(t) on truncated chains of each size in k_list.
std::vector<cplx> truncation_sweep(const FamilySpec& spec, std::size_t r, std::size_t s, double t,
                                   std::span<const int> k_list);

}  // namespace jchain::oracle
