#pragma once

#include <vector>

#include "jchain/family.hpp"
#include "jchain/jacobi_chain.hpp"

namespace jchain {

/// Jacobi matrix of the family in the MinusJ convention: h_n = A_n + C_n and
/// J_n = sqrt(A_n C_{n+1}) from the family's recurrence. Charlier and Meixner are truncated
/// to their resolved k_max.
JacobiChain build_chain(const FamilySpec& spec);

enum class SpectralSource { AnalyticPolynomial, NumericalSolver };

/// M = U D U^T with U[site][j] and eigenvalues ascending.
struct SpectralData {
  std::vector<double> eigenvalues;
  std::vector<double> U;  ///< row-major (N+1) x (N+1)
  std::size_t n = 0;
  SpectralSource source = SpectralSource::AnalyticPolynomial;

  double u(std::size_t site, std::size_t j) const { return U[site * n + j]; }
};

/// Analytic eigenvalue attached to support point x: x, or x(x+gamma+delta+1).
double analytic_eigenvalue(const FamilySpec& spec, int x);

/// Eigen-decomposition from the analytic spectrum: each column is the orthonormal polynomial
/// vector at an exact eigenvalue, generated by a two-sided three-term recurrence. Finite
/// families only.
SpectralData spectral_data(const FamilySpec& spec);

/// Max-abs entry of U U^T - I.
double orthogonality_defect(const SpectralData& sd);

/// Max-abs entry of U D U^T - M.
double reconstruction_defect(const SpectralData& sd, const JacobiChain& chain);

}  // namespace jchain
