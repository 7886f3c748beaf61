"""Containers and algebra for Bogoliubov coefficient matrices.

A transformation between mode sets, a~_m = sum_n (conj(alpha_mn) a_n -
conj(beta_mn) a_n^dag), is stored as the pair of complex matrices
(alpha, beta). Exact coefficients satisfy the Bogoliubov identities

    alpha alpha^dag - beta beta^dag = 1,     alpha beta^T symmetric,

up to a residual class declared by the provider (truncating an infinite
mode set leaks unitarity at O(h^2) for perturbative transforms). Series
containers hold Maclaurin coefficient matrices: the order-k entry is the
k-th derivative term per unit h^k, independent of any physical h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConfigError, NonConvergenceError
from .gaussian import SymplecticMatrix, symplectic_form

EXACT_IDENTITY_TOL = 1e-10


def _read_only_complex(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BogoCoeffs:
    """Complex alpha and beta matrices over an ordered, truncated mode set.

    ``order`` is None for exact coefficients (evaluated at the physical
    parameter ``h``) or the integer k for the k-th Maclaurin coefficient in
    the expansion parameter. ``identity_tol`` declares the provider's
    residual class for the Bogoliubov identities of exact coefficients.
    """

    modes: tuple[int, ...]
    alpha: np.ndarray
    beta: np.ndarray
    order: int | None = None
    h: float | None = None
    identity_tol: float = field(default=EXACT_IDENTITY_TOL, repr=False)

    def __post_init__(self) -> None:
        modes = tuple(int(m) for m in self.modes)
        if len(modes) < 1 or len(set(modes)) != len(modes):
            raise ValueError("modes must be nonempty unique labels")
        alpha = np.asarray(self.alpha, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex)
        n = len(modes)
        if alpha.shape != (n, n):
            raise ValueError(f"alpha must be {n}x{n}, got {alpha.shape}")
        if beta.shape != (n, n):
            raise ValueError(f"beta must be {n}x{n}, got {beta.shape}")
        if self.order is None:
            if self.h is None:
                raise ValueError("exact coefficients must carry their h value")
        elif self.h is not None:
            raise ValueError("series coefficients are h-independent; h must be None")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "alpha", _read_only_complex(alpha))
        object.__setattr__(self, "beta", _read_only_complex(beta))

    @property
    def is_exact(self) -> bool:
        return self.order is None

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def mode_index(self, label: int) -> int:
        try:
            return self.modes.index(label)
        except ValueError:
            raise KeyError(f"mode {label} not among {self.modes}") from None


@dataclass(frozen=True)
class PhaseVector:
    """Unit-modulus phase G_m per mode, e.g. from free time evolution."""

    phases: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.phases, dtype=complex)
        if g.ndim != 1 or g.size < 1:
            raise ValueError("phases must be a nonempty 1-d sequence")
        if np.abs(np.abs(g) - 1.0).max() > 1e-12:
            raise ValueError("phases must have unit modulus within 1e-12")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "phases", g)


class IdentityReport(NamedTuple):
    """Residuals of the two Bogoliubov identities and a verdict against tol."""

    normalization_residual: float
    symmetry_residual: float
    tol: float
    passed: bool


def verify_identities(c: BogoCoeffs, tol: float | None = None) -> IdentityReport:
    """Max-norm residuals of alpha alpha^dag - beta beta^dag - 1 and
    alpha beta^T - (alpha beta^T)^T.

    Diagnostic only: never raises. ``tol`` defaults to the residual class
    declared by the provider of ``c``.
    """
    if not c.is_exact:
        raise ValueError("identities apply to exact coefficients only")
    if tol is None:
        tol = c.identity_tol
    a, b = c.alpha, c.beta
    norm_res = float(np.abs(a @ a.conj().T - b @ b.conj().T - np.eye(c.n_modes)).max())
    ab = a @ b.T
    sym_res = float(np.abs(ab - ab.T).max())
    return IdentityReport(norm_res, sym_res, float(tol), norm_res <= tol and sym_res <= tol)


def _blocks_to_matrix(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    n = alpha.shape[0]
    mat = np.empty((2 * n, 2 * n))
    mat[0::2, 0::2] = (alpha - beta).real
    mat[0::2, 1::2] = (alpha + beta).imag
    mat[1::2, 0::2] = -(alpha - beta).imag
    mat[1::2, 1::2] = (alpha + beta).real
    return mat


def to_symplectic(c: BogoCoeffs, tol: float | None = None) -> SymplecticMatrix:
    """Lift exact coefficients to their phase-space (symplectic) matrix.

    The 2x2 block for mode pair (m, n) is
    [[Re(a - b), Im(a + b)], [-Im(a - b), Re(a + b)]] with a = alpha_mn,
    b = beta_mn. The symplectic residual inherits the identity residual
    class of ``c`` (scaled by a small structural factor).
    """
    if not c.is_exact:
        raise ValueError("only exact coefficients lift to a symplectic matrix")
    if tol is None:
        tol = max(1e-12, 4.0 * c.identity_tol)
    return SymplecticMatrix(_blocks_to_matrix(c.alpha, c.beta), tol=tol)


def from_symplectic(s: SymplecticMatrix, modes=None, h: float = 0.0,
                    identity_tol: float = EXACT_IDENTITY_TOL) -> BogoCoeffs:
    """Invert the block map: recover (alpha, beta) from a symplectic matrix."""
    mat = s.mat
    a00 = mat[0::2, 0::2]
    a01 = mat[0::2, 1::2]
    a10 = mat[1::2, 0::2]
    a11 = mat[1::2, 1::2]
    alpha = 0.5 * (a11 + a00) + 0.5j * (a01 - a10)
    beta = 0.5 * (a11 - a00) + 0.5j * (a01 + a10)
    if modes is None:
        modes = tuple(range(1, s.n_modes + 1))
    return BogoCoeffs(tuple(modes), alpha, beta, h=h, identity_tol=identity_tol)


def phase_transform(p: PhaseVector, modes=None) -> BogoCoeffs:
    """Diagonal transformation alpha = diag(G_m), beta = 0 (free evolution)."""
    g = p.phases
    if modes is None:
        modes = tuple(range(1, g.size + 1))
    return BogoCoeffs(tuple(modes), np.diag(g), np.zeros((g.size, g.size)), h=0.0)


def compose(outer: SymplecticMatrix, inner: SymplecticMatrix) -> SymplecticMatrix:
    """Matrix product: apply ``inner`` first, then ``outer``."""
    if outer.mat.shape != inner.mat.shape:
        raise ValueError(
            f"dimension mismatch: {outer.mat.shape} vs {inner.mat.shape}"
        )
    tol = max(1e-12, 4.0 * (outer.tol + inner.tol))
    return SymplecticMatrix(outer.mat @ inner.mat, tol=tol)


def symplectic_inverse(s: SymplecticMatrix) -> SymplecticMatrix:
    """Inverse via S^-1 = Omega S^T Omega^T; exact for exact symplectics."""
    omega = symplectic_form(s.n_modes)
    return SymplecticMatrix(omega @ s.mat.T @ omega.T, tol=max(1e-12, 4.0 * s.tol))


class SeriesTerm(NamedTuple):
    """One Maclaurin coefficient with its extrapolation error estimate."""

    coeffs: BogoCoeffs
    error_estimate: float


def series_eval(
    provider: Callable[[float], BogoCoeffs],
    orders,
    h_probe: float = 1e-3,
    rel_tol: float = 1e-6,
) -> list[SeriesTerm]:
    """Estimate Maclaurin coefficients of an exact-coefficient provider.

    Order 0 is the evaluation at h = 0. Order 1 is a central finite
    difference at step ``h_probe`` improved by one Richardson extrapolation
    level (steps h and h/2); the returned error estimate is the difference
    between the extrapolated and finest-step values. Raises when the
    extrapolation disagrees with the finest step by more than ``rel_tol``
    of the largest coefficient entry.
    """
    orders = sorted(set(int(k) for k in orders))
    if any(k not in (0, 1) for k in orders):
        raise ValueError("only series orders 0 and 1 are supported")
    if h_probe <= 0:
        raise ValueError("h_probe must be positive")

    out: list[SeriesTerm] = []
    for k in orders:
        if k == 0:
            c0 = provider(0.0)
            out.append(SeriesTerm(
                BogoCoeffs(c0.modes, c0.alpha, c0.beta, order=0), 0.0))
            continue

        def central(step: float) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
            cp, cm = provider(step), provider(-step)
            if cp.modes != cm.modes:
                raise ValueError("provider returned inconsistent mode sets")
            da = (cp.alpha - cm.alpha) / (2.0 * step)
            db = (cp.beta - cm.beta) / (2.0 * step)
            return da, db, cp.modes

        da1, db1, modes = central(h_probe)
        da2, db2, modes2 = central(0.5 * h_probe)
        if modes != modes2:
            raise ValueError("provider returned inconsistent mode sets")
        alpha1 = (4.0 * da2 - da1) / 3.0
        beta1 = (4.0 * db2 - db1) / 3.0
        err = max(np.abs(alpha1 - da2).max(), np.abs(beta1 - db2).max())
        scale = max(np.abs(alpha1).max(), np.abs(beta1).max())
        if scale > 1e-12 and err > rel_tol * scale:
            raise NonConvergenceError(
                f"finite-difference extrapolation not converged: "
                f"error {err:.3e} vs scale {scale:.3e}"
            )
        out.append(SeriesTerm(
            BogoCoeffs(modes, alpha1, beta1, order=1), float(err)))
    return out


# --- coefficient file format -------------------------------------------------
#
# Plain-text container, one value pair per matrix entry:
#
#   # bogocoeffs v1
#   modes: 1 2 ... M
#   order: exact | <k>
#   h: <float>              (exact only)
#   alpha:
#   <re> <im>  M pairs per row, M rows
#   beta:
#   ...
#
# Floats are written as %.16e, which round-trips IEEE doubles losslessly.

_FORMAT_TAG = "# bogocoeffs v1"


def write_coeffs(c: BogoCoeffs, path) -> None:
    """Write coefficients to ``path`` in the plain-text container format."""
    lines = [_FORMAT_TAG]
    lines.append("modes: " + " ".join(str(m) for m in c.modes))
    lines.append("order: " + ("exact" if c.is_exact else str(c.order)))
    if c.is_exact:
        lines.append(f"h: {c.h:.16e}")
    for name, mat in (("alpha", c.alpha), ("beta", c.beta)):
        lines.append(f"{name}:")
        for row in mat:
            lines.append(" ".join(f"{z.real:.16e} {z.imag:.16e}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_matrix(lines: list[str], start: int, n: int, name: str) -> tuple[np.ndarray, int]:
    if start >= len(lines) or lines[start].strip() != f"{name}:":
        raise ConfigError(f"coefficient file: expected '{name}:' section")
    mat = np.empty((n, n), dtype=complex)
    for i in range(n):
        pos = start + 1 + i
        if pos >= len(lines):
            raise ConfigError(f"coefficient file: truncated {name} matrix")
        parts = lines[pos].split()
        if len(parts) != 2 * n:
            raise ConfigError(
                f"coefficient file: {name} row {i} has {len(parts)} values, "
                f"expected {2 * n} (matrix must be square)"
            )
        try:
            vals = [float(x) for x in parts]
        except ValueError as exc:
            raise ConfigError(f"coefficient file: bad float in {name} row {i}") from exc
        mat[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return mat, start + 1 + n


def read_coeffs(path) -> BogoCoeffs:
    """Read a coefficient file written by :func:`write_coeffs`."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read coefficient file {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != _FORMAT_TAG:
        raise ConfigError(f"not a coefficient file (missing '{_FORMAT_TAG}' header)")
    header: dict[str, str] = {}
    pos = 1
    while pos < len(lines) and ":" in lines[pos] and not lines[pos].strip().endswith(":"):
        key, _, val = lines[pos].partition(":")
        header[key.strip()] = val.strip()
        pos += 1
    for key in ("modes", "order"):
        if key not in header:
            raise ConfigError(f"coefficient file: missing '{key}' header")
    try:
        modes = tuple(int(x) for x in header["modes"].split())
    except ValueError as exc:
        raise ConfigError("coefficient file: bad mode labels") from exc
    if not modes:
        raise ConfigError("coefficient file: empty mode list")
    order: int | None
    h: float | None
    if header["order"] == "exact":
        order = None
        if "h" not in header:
            raise ConfigError("coefficient file: exact coefficients need an 'h' header")
        h = float(header["h"])
    else:
        try:
            order = int(header["order"])
        except ValueError as exc:
            raise ConfigError("coefficient file: bad order tag") from exc
        h = None
    n = len(modes)
    alpha, pos = _parse_matrix(lines, pos, n, "alpha")
    beta, pos = _parse_matrix(lines, pos, n, "beta")
    if pos != len(lines):
        raise ConfigError("coefficient file: trailing content after beta matrix")
    try:
        return BogoCoeffs(modes, alpha, beta, order=order, h=h)
    except ValueError as exc:
        raise ConfigError(f"coefficient file: {exc}") from exc
