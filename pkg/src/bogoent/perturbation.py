"""Perturbative entanglement machinery for weakly transformed two-mode states.

Covers the degenerate correction to the smallest partial-transpose
symplectic eigenvalue of a pure product state, the closed-form leading
negativity with symmetric initial single-mode squeezing, the two-mode
truncation of a coefficient transform, and the mixedness/validity
diagnostics built from truncated coefficient sums.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .bogo import BogoCoeffs, _blocks_to_matrix, from_symplectic
from .errors import DegeneracyError, NonConvergenceError, NumericalError
from .gaussian import GaussianState, SymplecticMatrix, symplectic_eigenvalues, symplectic_form

DEGENERACY_TOL = 1e-6


@dataclass(frozen=True)
class PerturbedTwoModeState:
    """Pure, uncorrelated two-mode base state plus a small symmetric correction."""

    base: GaussianState
    correction: np.ndarray

    def __post_init__(self) -> None:
        if self.base.n_modes != 2:
            raise ValueError("base state must have exactly two modes")
        nu = symplectic_eigenvalues(self.base.cov)
        if np.abs(nu - 1.0).max() > 1e-9:
            raise ValueError(
                f"base must be pure (symplectic eigenvalues 1), got {nu}"
            )
        corr = np.asarray(self.correction, dtype=float)
        if corr.shape != (4, 4):
            raise ValueError("correction must be a 4x4 matrix")
        if np.abs(corr - corr.T).max() > 1e-12 * max(1.0, np.abs(corr).max()):
            raise ValueError("correction must be symmetric")
        corr = 0.5 * (corr + corr.T)
        corr.setflags(write=False)
        object.__setattr__(self, "correction", corr)


@dataclass(frozen=True)
class LinearCoefficientData:
    """Inputs of the leading-order negativity formula.

    ``alpha1`` and ``beta1`` are the linear coefficient values for the mode
    pair, including the expansion-parameter factor; ``g_k`` and ``g_kp`` are
    the free-evolution phases of the two modes; ``s`` is the symmetric
    single-mode squeezing of the initial state.
    """

    g_k: complex
    g_kp: complex
    alpha1: complex
    beta1: complex
    s: float

    def __post_init__(self) -> None:
        for g in (self.g_k, self.g_kp):
            if abs(abs(g) - 1.0) > 1e-12:
                raise ValueError("phases must have unit modulus within 1e-12")


def _transpose_signs(state: GaussianState, transposed_mode: int | None) -> np.ndarray:
    if transposed_mode is None:
        transposed_mode = state.modes[1]
    i = state.mode_index(transposed_mode)
    t = np.ones(4)
    t[2 * i + 1] = -1.0
    return t


def degenerate_nu_spectrum(
    p: PerturbedTwoModeState, transposed_mode: int | None = None
) -> np.ndarray:
    """First-order corrections to the degenerate unit PT eigenvalue pair.

    Both partial-transpose symplectic eigenvalues of the pure base equal 1,
    so i Omega sigma_hat has a twofold eigenvalue +1 and the correction
    requires diagonalising the projected perturbation. The projection uses
    biorthogonal left/right eigenvectors; since sigma_hat is positive
    definite, i Omega sigma_hat is similar to the Hermitian matrix
    sqrt(sigma_hat) (i Omega) sqrt(sigma_hat), whose orthonormal eigenbasis
    yields an exactly biorthonormal pair (L R = 1) even in the degenerate
    subspace.

    Returns the two eigenvalues of the projected 2x2 matrix, ordered by
    decreasing modulus. They are real for any perturbation that keeps the
    covariance matrix positive definite.
    """
    t = _transpose_signs(p.base, transposed_mode)
    sb = p.base.cov * np.outer(t, t)
    sc = p.correction * np.outer(t, t)

    w, u = np.linalg.eigh(sb)
    if w.min() <= 0.0:
        raise NumericalError("base covariance is not positive definite")
    sqrt_sb = (u * np.sqrt(w)) @ u.T
    isqrt_sb = (u / np.sqrt(w)) @ u.T

    omega = symplectic_form(2)
    herm = 1j * sqrt_sb @ omega @ sqrt_sb
    lam_k, v = np.linalg.eigh(herm)
    sel = np.where(np.abs(lam_k - 1.0) <= DEGENERACY_TOL)[0]
    if sel.size != 2:
        raise DegeneracyError(
            f"expected a twofold eigenvalue +1, found {lam_k} "
            f"(degeneracy tolerance {DEGENERACY_TOL})"
        )
    right = isqrt_sb @ v[:, sel]
    left = v[:, sel].conj().T @ sqrt_sb
    gamma = left @ (1j * omega @ sc) @ right

    lam = np.linalg.eigvals(gamma)
    scale = max(1.0, np.abs(lam).max())
    if np.abs(lam.imag).max() > 1e-9 * scale:
        raise NumericalError(
            f"projected corrections are not real: {lam} "
            "(perturbed covariance is too far from positive definite)"
        )
    order = np.argsort(-np.abs(lam.real))
    return lam.real[order]


def degenerate_nu_correction(
    p: PerturbedTwoModeState, transposed_mode: int | None = None
) -> float:
    """Largest-modulus projected correction; nu_minus = 1 - |value| on the
    entanglement branch (symmetric +/- splitting of the unit pair)."""
    return float(degenerate_nu_spectrum(p, transposed_mode)[0])


def nu_minus_roots(
    p: PerturbedTwoModeState, transposed_mode: int | None = None
) -> tuple[float, float]:
    """Both perturbed PT symplectic eigenvalues (1 + correction), ascending.

    For corrections generated by symplectic evolution the pair splits
    symmetrically and the lower root equals 1 - |nu_c|; for generic
    corrections the two roots carry independent shifts.
    """
    lam = degenerate_nu_spectrum(p, transposed_mode)
    roots = np.sort(np.abs(1.0 + lam))
    return float(roots[0]), float(roots[1])


def leading_negativity(d: LinearCoefficientData) -> float:
    """Leading-order negativity for symmetric initial single-mode squeezing.

    N = sqrt( Re(g* b)^2 + (Im(g* b) cosh s - Im(g* a) sinh s)^2 )

    with g the phase of mode k and a, b the linear coefficients of the
    pair. At s = 0 this reduces to |b|.
    """
    gb = np.conj(d.g_k) * d.beta1
    ga = np.conj(d.g_k) * d.alpha1
    term = gb.imag * np.cosh(d.s) - ga.imag * np.sinh(d.s)
    return float(np.hypot(gb.real, term))


def enhancement_monotonicity_check(d: LinearCoefficientData, s_grid) -> bool:
    """Whether squeezing enhances the leading negativity over the grid.

    When the phased linear coefficients satisfy Im(g* a) Im(g* b) <= 0 the
    enhancement N(s) >= N(0) is guaranteed for s >= 0 and is asserted;
    otherwise the grid comparison itself is the result.
    """
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.ndim != 1 or s_grid.size == 0 or np.any(s_grid < 0):
        raise ValueError("s_grid must be a nonempty sequence of s >= 0")
    n0 = leading_negativity(replace(d, s=0.0))
    vals = np.array([leading_negativity(replace(d, s=float(s))) for s in s_grid])
    mono = bool(np.all(vals >= n0 - 1e-12 * max(1.0, n0)))
    ga = np.conj(d.g_k) * d.alpha1
    gb = np.conj(d.g_k) * d.beta1
    if ga.imag * gb.imag <= 0.0 and not mono:
        raise NumericalError("guaranteed enhancement violated; inputs corrupted")
    return mono


def two_mode_truncation(c: BogoCoeffs, k: int, kp: int) -> BogoCoeffs:
    """Restrict a transform to the pair (k, k') and re-unitarize.

    Keeps the 2x2 coefficient blocks of the chosen pair, lifts them to a
    4x4 phase-space candidate and projects it onto the symplectic group by
    Newton iteration on the defect E = S Omega S^T - Omega:

        S <- (1 + E Omega / 2) S

    which removes E to first order and converges quadratically. The linear
    coefficient entries move only at the order of the truncation leakage
    (O(h^2)), so the pair's linear entries are preserved. Requires k + k'
    odd: for even sums the pair has no linear coupling and the truncated
    transform is not a consistent unitary at linear order.
    """
    if not c.is_exact:
        raise ValueError("two-mode truncation needs exact coefficients")
    if (k + kp) % 2 == 0:
        raise ValueError(f"modes must have opposite parity, got ({k}, {kp})")
    idx = [c.mode_index(k), c.mode_index(kp)]
    sub = np.ix_(idx, idx)
    s = _blocks_to_matrix(c.alpha[sub], c.beta[sub])
    omega = symplectic_form(2)
    for _ in range(50):
        defect = s @ omega @ s.T - omega
        if np.abs(defect).max() <= 1e-12:
            break
        s = s + 0.5 * defect @ omega @ s
    else:
        raise NonConvergenceError(
            "symplectic projection did not reach 1e-12 in 50 iterations"
        )
    proj = SymplecticMatrix(s, tol=1e-11)
    return from_symplectic(proj, modes=(k, kp), h=c.h)


def squeezing_parameter(state: GaussianState, sym_tol: float = 1e-6) -> float:
    """|r| = arsinh(sqrt(-det C_off)) / 2 for a symmetric pure two-mode state.

    ``C_off`` is the off-diagonal 2x2 block of the covariance matrix. The
    state must be symmetric: the determinants of the two single-mode blocks
    must agree within ``sym_tol``. Small positive det C_off (within 1e-12)
    is clamped to zero.
    """
    if state.n_modes != 2:
        raise ValueError("squeezing parameter is defined for two-mode states")
    cov = state.cov
    det_k = np.linalg.det(cov[0:2, 0:2])
    det_kp = np.linalg.det(cov[2:4, 2:4])
    if abs(det_k - det_kp) > sym_tol * max(1.0, abs(det_k)):
        raise ValueError(
            f"state is not symmetric: det C_kk = {det_k:.12g}, "
            f"det C_k'k' = {det_kp:.12g}"
        )
    minus_det = -np.linalg.det(cov[0:2, 2:4])
    if minus_det < -1e-12:
        raise ValueError(
            f"-det C_off = {minus_det:.3e} < -1e-12; state is not locally "
            "equivalent to a two-mode squeezed state"
        )
    return float(0.5 * np.arcsinh(np.sqrt(max(minus_det, 0.0))))


class TruncatedSum(NamedTuple):
    """A truncated mode sum with an integral-bound estimate of its tail."""

    value: float
    tail_estimate: float


def _column_sums(c1: BogoCoeffs, k: int, kp: int, n_max: int, h: float):
    """Shared truncated sums over modes n <= n_max of the linear coefficients.

    Returns (f_alpha, f_beta, cross, tails) where f_alpha[0] is
    f^a_{k not k'} = 0.5 sum_{n != k'} |a_nk|^2 and similar, all scaled so
    the coefficient matrices of ``c1`` are multiplied by ``h``.
    """
    if c1.order != 1:
        raise ValueError("linear-order coefficients required")
    if n_max < max(k, kp) + 1:
        raise ValueError(f"n_max must be at least max(k, k') + 1 = {max(k, kp) + 1}")
    labels = list(range(1, n_max + 1))
    missing = [n for n in labels if n not in c1.modes]
    if missing:
        raise ValueError(f"coefficients do not cover modes {missing}")
    rows = np.array([c1.mode_index(n) for n in labels])
    ik, ikp = c1.mode_index(k), c1.mode_index(kp)
    a = h * c1.alpha[rows][:, [ik, ikp]]  # columns: k, k'
    b = h * c1.beta[rows][:, [ik, ikp]]
    ns = np.arange(1, n_max + 1)

    def half_sum(col: np.ndarray, exclude: int) -> float:
        mask = ns != exclude
        return 0.5 * float(np.sum(np.abs(col[mask]) ** 2))

    f_alpha = (half_sum(a[:, 0], kp), half_sum(a[:, 1], k))
    f_beta = (half_sum(b[:, 0], kp), half_sum(b[:, 1], k))
    cross_mask = (ns != k) & (ns != kp)
    cross = float(np.sum(
        (a[cross_mask, 0] * np.conj(b[cross_mask, 0])
         + a[cross_mask, 1] * np.conj(b[cross_mask, 1])).real
    ))

    # Summands decay like n^-5 (|a_nk| ~ n^-5/2), so the tail beyond n_max is
    # bounded by C / (4 n_max^4) with C fitted to the last computed rows.
    last = slice(max(0, n_max - 3), n_max)

    def tail(col: np.ndarray) -> float:
        summand = 0.5 * np.abs(col[last]) ** 2
        c_fit = float(np.max(summand * ns[last] ** 5, initial=0.0))
        return c_fit / (4.0 * n_max**4)

    def tail_cross() -> float:
        summand = np.abs(a[last, 0] * b[last, 0]) + np.abs(a[last, 1] * b[last, 1])
        c_fit = float(np.max(summand * ns[last] ** 5, initial=0.0))
        return c_fit / (4.0 * n_max**4)

    tails = {
        "alpha": (tail(a[:, 0]), tail(a[:, 1])),
        "beta": (tail(b[:, 0]), tail(b[:, 1])),
        "cross": tail_cross(),
    }
    return f_alpha, f_beta, cross, tails


def mixedness_determinant(
    c1: BogoCoeffs, k: int, kp: int, s: float, n_max: int, h: float = 1.0
) -> TruncatedSum:
    """Closed-form determinant of the transformed two-mode state.

    det = 1 + 4 (f^b_k + f^b_k')(cosh s + 1) + 4 (f^a_k + f^a_k')(cosh s - 1)
            - 4 sinh s sum_{n != k,k'} Re(a_nk conj(b_nk) + a_nk' conj(b_nk'))

    for the symmetrically squeezed initial state, with the half-sums
    f^a_{k not k'} = 0.5 sum_{n != k'} |a_nk|^2 truncated at ``n_max``. The
    coefficient matrices of ``c1`` are per unit h; pass the physical ``h``
    to set the absolute scale. The n^-5 tail of the sums is reported
    separately, never added to the value.
    """
    f_alpha, f_beta, cross, tails = _column_sums(c1, k, kp, n_max, h)
    ch, sh = np.cosh(s), np.sinh(s)
    det = (1.0
           + 4.0 * (f_beta[0] + f_beta[1]) * (ch + 1.0)
           + 4.0 * (f_alpha[0] + f_alpha[1]) * (ch - 1.0)
           - 4.0 * sh * cross)
    tail = (4.0 * sum(tails["beta"]) * (ch + 1.0)
            + 4.0 * sum(tails["alpha"]) * abs(ch - 1.0)
            + 4.0 * abs(sh) * tails["cross"])
    return TruncatedSum(float(det), float(tail))


def validity_F(
    c1: BogoCoeffs, k: int, kp: int, n_max: int, h: float = 1.0
) -> TruncatedSum:
    """Perturbative validity measure F = f^a_{k not k'} + f^a_{k' not k}.

    The squeezed result holds while F (cosh s - 1) stays small. With the
    default ``h`` = 1 and per-unit-h coefficient matrices this returns the
    h-normalized value F / h^2.
    """
    f_alpha, _, _, tails = _column_sums(c1, k, kp, n_max, h)
    return TruncatedSum(float(f_alpha[0] + f_alpha[1]), float(sum(tails["alpha"])))
