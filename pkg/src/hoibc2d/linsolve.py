"""Dense complex LU with pivoting, reusable multi-RHS solves, and a
1-norm reciprocal-condition estimate.

The block systems assembled upstream stay below a few thousand unknowns,
so a single dense factorization is the whole strategy.  The factorization
object is immutable and may be shared across threads; each solve runs
independent substitution passes.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack
from scipy.linalg import lu_factor as _sp_lu_factor
from scipy.linalg import lu_solve as _sp_lu_solve

from .errors import SingularMatrixError, UsageError

log = logging.getLogger(__name__)

RCOND_WARN = 1e-12


@dataclass(frozen=True)
class Factorization:
    lu: np.ndarray
    piv: np.ndarray
    n: int
    rcond_estimate: float


def lu_factor(matrix) -> Factorization:
    """Partial-pivoted LU of a square complex matrix with rcond attached.

    Exact singularity (a zero pivot) raises with the offending column; a
    merely terrible condition number only warns, because near-resonance
    systems are legitimately ill-conditioned and the caller sees rcond.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"matrix must be square, got shape {a.shape}")
    if a.size == 0:
        raise UsageError("empty matrix")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise UsageError("matrix has non-finite entries")
    anorm = float(np.linalg.norm(a, 1))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy warns on exact singularity
        try:
            lu, piv = _sp_lu_factor(a, check_finite=False)
        except Exception as exc:  # LinAlgError on hard zero-pivot failures
            raise SingularMatrixError(
                f"LU factorization failed: {exc}", column=None
            ) from exc
    diag = np.abs(np.diagonal(lu))
    if np.any(diag == 0.0):
        col = int(np.argmin(diag != 0.0))
        raise SingularMatrixError(
            f"matrix is exactly singular (zero pivot in column {col})",
            column=col,
        )
    if anorm == 0.0:
        rcond = 0.0
    else:
        rcond, info = lapack.zgecon(lu, anorm, norm="1")
        if info != 0:
            raise SingularMatrixError(f"condition estimate failed (info={info})",
                                      column=None)
        rcond = float(rcond)
    if rcond < RCOND_WARN:
        log.warning("ill-conditioned system: rcond estimate %.3e", rcond)
    return Factorization(lu=lu, piv=piv, n=a.shape[0], rcond_estimate=rcond)


def solve(f: Factorization, rhs) -> np.ndarray:
    """Solve A x = rhs reusing the factorization; rhs is (n,) or (n, k)."""
    b = np.asarray(rhs, dtype=complex)
    if b.ndim not in (1, 2) or b.shape[0] != f.n:
        raise UsageError(
            f"rhs shape {b.shape} incompatible with system of size {f.n}"
        )
    return _sp_lu_solve((f.lu, f.piv), b, check_finite=False)


def solve_dense(matrix, rhs) -> np.ndarray:
    """One-shot factor-and-solve convenience wrapper."""
    return solve(lu_factor(matrix), rhs)
