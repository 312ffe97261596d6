#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jchain/family.hpp"

namespace jchain {

/// PlusJ: off-diagonals +J (physical XY Hamiltonian). MinusJ: off-diagonals -J (the
/// polynomial Jacobi matrices).
enum class SignConvention { PlusJ, MinusJ };

/// Single-excitation Hamiltonian: real symmetric tridiagonal with diagonal h[0..N] and
/// couplings J[0..N-1] > 0; the sign of the off-diagonal entries is carried by `sign`.
struct JacobiChain {
  std::vector<double> h;
  std::vector<double> J;
  SignConvention sign = SignConvention::MinusJ;
  /// Family the chain was built from; cleared by transforms that change the matrix.
  std::optional<FamilySpec> family;

  std::size_t size() const { return h.size(); }
  double diag(std::size_t k) const { return h[k]; }
  /// Matrix entry M[k][k+1].
  double offdiag(std::size_t k) const { return sign == SignConvention::MinusJ ? -J[k] : J[k]; }

  /// Dense row-major matrix.
  std::vector<double> dense() const;
};

/// M'_{jk} = (-1)^{j+k} M_{jk}: toggles the sign convention.
JacobiChain flip_sign(const JacobiChain& chain);

/// M' = lambda M + mu I. A negative lambda is absorbed by toggling the sign convention so
/// that the stored couplings stay positive. Throws Error{ZeroScale} for lambda == 0.
JacobiChain affine_transform(const JacobiChain& chain, double lambda, double mu);

/// h_n = h_{N-n} and J_n = J_{N-1-n} within tol relative to the largest entry.
bool is_mirror_periodic(const JacobiChain& chain, double tol = 1e-12);

/// JSON object {"kind","N","params","h","J","sign"}; doubles printed round-trip exact.
std::string chain_to_json(const JacobiChain& chain, int indent = 2);
JacobiChain chain_from_json(const std::string& text);

}  // namespace jchain
