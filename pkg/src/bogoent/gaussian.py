"""Phase-space representation of Gaussian states and symplectic operations.

Conventions: quadratures per mode are X_(2n-1) = (a + a^dag)/sqrt(2) and
X_(2n) = -i(a - a^dag)/sqrt(2), so the vacuum covariance matrix is the
identity and the symplectic form is block diagonal with 2x2 blocks
[[0, 1], [-1, 0]].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

SYMMETRY_TOL = 1e-12
PAIRING_TOL = 1e-9
PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Symplectic form Omega for ``n_modes`` modes in mode-major ordering."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _read_only(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state of an ordered set of modes.

    ``cov`` is the real symmetric 2N x 2N covariance matrix in vacuum-unit
    normalization (vacuum = identity); mode ``modes[i]`` occupies rows and
    columns (2i, 2i+1). First moments are carried along but never enter
    entanglement quantities.
    """

    modes: tuple[int, ...]
    cov: np.ndarray
    first_moments: np.ndarray | None = None
    check_physical: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        n = len(self.modes)
        if n < 1:
            raise ValueError("state needs at least one mode")
        if len(set(self.modes)) != n:
            raise ValueError("mode labels must be unique")
        if any(int(m) != m or m < 1 for m in self.modes):
            raise ValueError("mode labels must be positive integers")
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (2 * n, 2 * n):
            raise ValueError(f"covariance must be {2 * n}x{2 * n}, got {cov.shape}")
        scale = max(1.0, np.abs(cov).max())
        asym = np.abs(cov - cov.T).max()
        if asym > SYMMETRY_TOL * scale:
            raise ValueError(f"covariance not symmetric: |cov - cov.T| = {asym:.3e}")
        object.__setattr__(self, "cov", _read_only(0.5 * (cov + cov.T)))
        fm = self.first_moments
        fm = np.zeros(2 * n) if fm is None else np.asarray(fm, dtype=float)
        if fm.shape != (2 * n,):
            raise ValueError("first moments must have length 2N")
        object.__setattr__(self, "first_moments", _read_only(fm))
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        if self.check_physical:
            nu = symplectic_eigenvalues(self.cov)
            if nu.min() < 1.0 - PHYSICALITY_TOL:
                raise ValueError(
                    f"unphysical covariance: smallest symplectic eigenvalue {nu.min():.12f}"
                )

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def mode_index(self, label: int) -> int:
        try:
            return self.modes.index(label)
        except ValueError:
            raise KeyError(f"mode {label} not in state (modes {self.modes})") from None


@dataclass(frozen=True)
class SymplecticMatrix:
    """Real 2N x 2N matrix preserving the symplectic form.

    ``tol`` declares the residual class of |S Omega S^T - Omega|_max allowed
    at construction: 1e-12 for exact generators, O(h^2) for matrices
    assembled from truncated perturbative coefficients.
    """

    mat: np.ndarray
    tol: float = 1e-12

    def __post_init__(self) -> None:
        mat = np.asarray(self.mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
            raise ValueError(f"matrix must be square of even size, got {mat.shape}")
        res = symplectic_residual(mat)
        if res > self.tol:
            raise ValueError(
                f"matrix is not symplectic within declared tolerance: "
                f"residual {res:.3e} > {self.tol:.3e}"
            )
        object.__setattr__(self, "mat", _read_only(mat))

    @property
    def n_modes(self) -> int:
        return self.mat.shape[0] // 2


@dataclass(frozen=True)
class EntanglementReport:
    """Two-mode entanglement summary derived from the PT symplectic spectrum."""

    nu_minus: float
    negativity: float
    log_negativity: float
    det_cov: float


def symplectic_residual(mat: np.ndarray) -> float:
    """Max-norm deviation of S Omega S^T from Omega."""
    mat = np.asarray(mat, dtype=float)
    omega = symplectic_form(mat.shape[0] // 2)
    return float(np.abs(mat @ omega @ mat.T - omega).max())


def vacuum_state(n_modes: int) -> GaussianState:
    """Vacuum of ``n_modes`` modes: identity covariance, zero means."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return GaussianState(tuple(range(1, n_modes + 1)), np.eye(2 * n_modes))


def single_mode_squeezed_state(squeezings) -> GaussianState:
    """Product of single-mode squeezed states with blocks diag(e^s, e^-s)."""
    s = np.asarray(squeezings, dtype=float)
    if s.ndim != 1 or s.size < 1:
        raise ValueError("squeezings must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(s)):
        raise ValueError("squeezing parameters must be finite")
    diag = np.empty(2 * s.size)
    diag[0::2] = np.exp(s)
    diag[1::2] = np.exp(-s)
    return GaussianState(tuple(range(1, s.size + 1)), np.diag(diag))


def local_rotation(phases) -> SymplecticMatrix:
    """Block-diagonal rotation with blocks [[Re G, Im G], [-Im G, Re G]].

    Each phase G must have unit modulus; these are the phase-space images of
    mode phases G = e^{-i theta} acquired under free evolution.
    """
    g = np.asarray(phases, dtype=complex)
    if g.ndim != 1 or g.size < 1:
        raise ValueError("phases must be a nonempty 1-d sequence")
    if np.abs(np.abs(g) - 1.0).max() > 1e-12:
        raise ValueError("phases must have unit modulus within 1e-12")
    mat = np.zeros((2 * g.size, 2 * g.size))
    for i, gi in enumerate(g):
        mat[2 * i, 2 * i] = gi.real
        mat[2 * i, 2 * i + 1] = gi.imag
        mat[2 * i + 1, 2 * i] = -gi.imag
        mat[2 * i + 1, 2 * i + 1] = gi.real
    return SymplecticMatrix(mat)


def apply_symplectic(s: SymplecticMatrix, state: GaussianState) -> GaussianState:
    """Transform a state: cov -> S cov S^T, first moments -> S x.

    The output is symmetrized to remove floating-point asymmetry. Physicality
    is not revalidated: it holds up to the residual class of ``s``, which for
    truncated perturbative transforms exceeds the strict vacuum bound.
    """
    if s.mat.shape[0] != state.cov.shape[0]:
        raise ValueError(
            f"dimension mismatch: S is {s.mat.shape}, state has {state.cov.shape}"
        )
    cov = s.mat @ state.cov @ s.mat.T
    cov = 0.5 * (cov + cov.T)
    fm = s.mat @ state.first_moments
    return GaussianState(state.modes, cov, fm, check_physical=False)


def partial_trace(state: GaussianState, keep) -> GaussianState:
    """Reduce to the modes in ``keep`` by deleting all other rows/columns."""
    keep = set(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    unknown = keep - set(state.modes)
    if unknown:
        raise KeyError(f"unknown mode labels: {sorted(unknown)}")
    kept = [m for m in state.modes if m in keep]
    idx = np.concatenate([[2 * state.mode_index(m), 2 * state.mode_index(m) + 1] for m in kept])
    return GaussianState(
        tuple(kept),
        state.cov[np.ix_(idx, idx)],
        state.first_moments[idx],
        check_physical=False,
    )


def partial_transpose(state: GaussianState, transposed_mode: int | None = None) -> np.ndarray:
    """Momentum-sign flip T cov T on one mode of a two-mode state.

    By default the second listed mode is transposed, giving
    T = diag(1, 1, 1, -1). Returns a plain matrix: the result is in general
    not a physical covariance matrix.
    """
    if state.n_modes != 2:
        raise ValueError("partial transposition requires exactly two modes")
    if transposed_mode is None:
        transposed_mode = state.modes[1]
    i = state.mode_index(transposed_mode)
    t = np.ones(4)
    t[2 * i + 1] = -1.0
    return state.cov * np.outer(t, t)


def symplectic_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a symmetric matrix, ascending.

    Computed as the moduli of the eigenvalues of i Omega m, which occur in
    +/- pairs; the N paired values are returned. Raises if the spectrum has
    imaginary parts or fails to pair within tolerance, which signals a
    corrupted (non-symmetric or wildly unphysical) input.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError(f"need a square matrix of even size, got {m.shape}")
    scale = max(1.0, np.abs(m).max())
    if np.abs(m - m.T).max() > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    n = m.shape[0] // 2
    lam = np.linalg.eigvals(1j * symplectic_form(n) @ m)
    if np.abs(lam.imag).max() > PAIRING_TOL * scale:
        raise NumericalError(
            f"spectrum of i Omega m has imaginary parts up to {np.abs(lam.imag).max():.3e}"
        )
    re = np.sort(lam.real)
    sums = re[:n] + re[::-1][:n]
    if np.abs(sums).max() > PAIRING_TOL * scale:
        raise NumericalError(
            f"eigenvalues fail to pair as +/-: worst mismatch {np.abs(sums).max():.3e}"
        )
    return re[n:]


def negativity(state: GaussianState) -> EntanglementReport:
    """Negativity of a two-mode state from the PT symplectic spectrum.

    N = max(0, (1 - nu_minus) / (2 nu_minus)) with nu_minus the smallest
    symplectic eigenvalue of the partially transposed covariance matrix;
    the state is entangled iff nu_minus < 1.
    """
    nu = symplectic_eigenvalues(partial_transpose(state))
    nu_minus = float(nu[0])
    neg = max(0.0, (1.0 - nu_minus) / (2.0 * nu_minus))
    log_neg = max(0.0, -np.log(nu_minus))
    return EntanglementReport(
        nu_minus=nu_minus,
        negativity=neg,
        log_negativity=float(log_neg),
        det_cov=float(np.linalg.det(state.cov)),
    )
