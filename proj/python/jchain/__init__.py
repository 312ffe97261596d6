"""Perfect-state-transfer amplitudes on Jacobi chains built from classical orthogonal polynomials."""

try:
    from ._jchain import *  # noqa: F401,F403
    from ._jchain import JChainError
except ImportError:
    from _jchain import *  # noqa: F401,F403
    from _jchain import JChainError

__all__ = [
    "JChainError",
    "FamilySpec",
    "JacobiChain",
    "family",
    "build_chain",
    "chain_from_json",
    "flip_sign",
    "affine_transform",
    "is_mirror_periodic",
    "poly_eval",
    "poly_eval_recurrence",
    "orthonormal_value",
    "amplitude",
    "amplitude_grid",
    "detect_pst",
    "verify",
]
