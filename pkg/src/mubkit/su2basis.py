"""Polar decomposition of su(2) from a unitary shift ``v_ra`` and a Hermitian ``h``.

Matrices act on the standard basis ``|j, m>`` with row/column index
``n = j + m``, so ``n = 0`` is ``m = -j``.  Float mode accepts real ``r`` and
``a``; exact mode (``exact=True``) needs ``r = 0`` and an integer ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .phasering import ExactArray
from .report import Report

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class SpinLabel:
    """Irrep label stored as ``two_j = 2j``; the dimension is ``2j + 1``."""

    two_j: int

    def __post_init__(self) -> None:
        if int(self.two_j) != self.two_j or self.two_j < 0:
            raise ValueError(f"2j must be a nonnegative integer, got {self.two_j!r}")

    @classmethod
    def from_j(cls, j: float | Fraction | str) -> "SpinLabel":
        two_j = Fraction(j) * 2
        if two_j.denominator != 1:
            raise ValueError(f"j={j} is not a half-integer")
        return cls(int(two_j))

    @classmethod
    def from_dimension(cls, d: int) -> "SpinLabel":
        return cls(d - 1)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def d(self) -> int:
        return self.two_j + 1

    @property
    def m_values(self) -> np.ndarray:
        """``m`` for each index ``n`` (ascending, ``m = n - j``)."""
        return np.arange(self.d) - self.j


@dataclass(frozen=True)
class RaParameters:
    r: float = 0.0
    a: float = 0.0

    @property
    def exact_ok(self) -> bool:
        return self.r == 0 and float(self.a).is_integer()

    def require_exact(self) -> int:
        if not self.exact_ok:
            raise ValueError(f"exact mode needs r = 0 and integer a (got r={self.r}, a={self.a})")
        return int(self.a)


def _q_power(d: int, x) -> np.ndarray:
    return np.exp(2j * np.pi * np.asarray(x, dtype=float) / d)


def build_v(j: SpinLabel, p: RaParameters, exact: bool = False) -> np.ndarray | ExactArray:
    """Matrix of ``v_ra``: ``|j,m> -> q**((j-m)a) |j,m+1>`` and ``|j,j> -> e^{2 pi i j r} |j,-j>``."""
    d = j.d
    n = np.arange(d - 1)
    if exact:
        a = p.require_exact()
        exps = np.zeros((d, d), dtype=np.int64)
        mask = np.zeros((d, d), dtype=np.int64)
        # (j - m) = d - 1 - n; omega exponent is twice the q exponent
        exps[n + 1, n] = 2 * (d - 1 - n) * a
        mask[n + 1, n] = 1
        mask[0, d - 1] = 1
        return ExactArray.from_exponents(max(d, 1), exps, mask=mask)
    v = np.zeros((d, d), dtype=complex)
    v[n + 1, n] = _q_power(d, (d - 1 - n) * p.a)
    v[0, d - 1] = np.exp(2j * np.pi * j.j * p.r)
    return v


def build_h(j: SpinLabel) -> np.ndarray:
    """Diagonal ``sqrt((j+m)(j-m+1))``; always float since the entries are surds."""
    m = j.m_values
    return np.diag(np.sqrt((j.j + m) * (j.j - m + 1))).astype(complex)


def polar_generators(j: SpinLabel, p: RaParameters) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(J+, J-, Jz) = (H V, V^dag H, (H^2 - V^dag H^2 V) / 2)``."""
    v = build_v(j, p)
    h = build_h(j)
    vh = v.conj().T
    jp = h @ v
    jm = vh @ h
    jz = 0.5 * (h @ h - vh @ h @ h @ v)
    return jp, jm, jz


def check_su2_commutators(jp: np.ndarray, jm: np.ndarray, jz: np.ndarray, tol: float = DEFAULT_TOL) -> Report:
    """Residuals of the su(2) relations and of both Casimir forms against ``j(j+1) I``."""
    if not (jp.shape == jm.shape == jz.shape) or jp.shape[0] != jp.shape[1]:
        raise ValueError("generator shapes differ")
    d = jp.shape[0]
    j = (d - 1) / 2
    eye = np.eye(d)
    rel = {
        "[Jz,J+] = +J+": jz @ jp - jp @ jz - jp,
        "[Jz,J-] = -J-": jz @ jm - jm @ jz + jm,
        "[J+,J-] = 2Jz": jp @ jm - jm @ jp - 2 * jz,
        "J+J- + Jz(Jz-1) = j(j+1)": jp @ jm + jz @ (jz - eye) - j * (j + 1) * eye,
        "J-J+ + Jz(Jz+1) = j(j+1)": jm @ jp + jz @ (jz + eye) - j * (j + 1) * eye,
    }
    report = Report("su(2) commutators", "float")
    for name, m in rel.items():
        res = float(np.abs(m).max())
        report.add(name, res < tol, max_residual=res)
    return report


def _check_alpha(j: SpinLabel, alpha: int) -> int:
    if int(alpha) != alpha or not 0 <= alpha <= j.two_j:
        raise ValueError(f"alpha={alpha!r} outside 0..{j.two_j}")
    return int(alpha)


def eigenvector(j: SpinLabel, p: RaParameters, alpha: int, exact: bool = False) -> np.ndarray | ExactArray:
    """``|j alpha; r a>``, components indexed by ``n = j + m``."""
    alpha = _check_alpha(j, alpha)
    d = j.d
    n = np.arange(d)
    if exact:
        a = p.require_exact()
        # q-exponent n(d-n)a/2 + n alpha, doubled
        return ExactArray.from_exponents(d, n * (d - n) * a + 2 * n * alpha, scale=1)
    m = n - j.j
    expo = n * (d - n) * p.a / 2 - j.j * m * p.r + n * alpha
    return _q_power(d, expo) / math.sqrt(d)


def eigenvalue(j: SpinLabel, p: RaParameters, alpha: int) -> complex:
    """``q**(j(a+r) - alpha)``."""
    return complex(_q_power(j.d, j.j * (p.a + p.r) - alpha))


def check_eigen_relation(j: SpinLabel, p: RaParameters, alpha: int, tol: float = 1e-12, exact: bool = False) -> Report:
    """``V |j alpha; ra> = q**(j(a+r)-alpha) |j alpha; ra>`` and a nondegenerate spectrum."""
    alpha = _check_alpha(j, alpha)
    report = Report(f"eigen relation j={j.j} alpha={alpha}", "exact" if exact else "float")
    v = build_v(j, p)
    psi = eigenvector(j, p, alpha)
    lam = eigenvalue(j, p, alpha)
    res = float(np.abs(v @ psi - lam * psi).max())
    report.add("V psi = lambda psi", res < tol, max_residual=res, details={"eigenvalue": [lam.real, lam.imag]})
    if exact:
        ve = build_v(j, p, exact=True)
        pe = eigenvector(j, p, alpha, exact=True)
        d = j.d
        # eigenvalue omega exponent (d-1)a - 2 alpha
        lam_e = ExactArray.from_exponents(d, np.full(d, (d - 1) * p.require_exact() - 2 * alpha))
        report.add("V psi = lambda psi (exact)", (ve @ pe).equals(lam_e.mul_elementwise(pe)))
    spectrum = np.array([eigenvalue(j, p, b) for b in range(j.d)])
    gaps = np.abs(spectrum[:, None] - spectrum[None, :]) + np.eye(j.d) * 10
    min_gap = float(gaps.min()) if j.d > 1 else math.inf
    report.add("nondegenerate spectrum", min_gap > tol, details={"min_gap": min_gap})
    return report


def eigenbasis(j: SpinLabel, p: RaParameters, exact: bool = False) -> np.ndarray | ExactArray:
    """All eigenvectors stacked as rows ``alpha``."""
    if exact:
        d = j.d
        n = np.arange(d)
        a = p.require_exact()
        alpha = np.arange(d)[:, None]
        return ExactArray.from_exponents(d, n * (d - n) * a + 2 * n * alpha, scale=1)
    return np.array([eigenvector(j, p, b) for b in range(j.d)])


def check_orthonormality(j: SpinLabel, p: RaParameters, tol: float = DEFAULT_TOL, exact: bool = False) -> Report:
    report = Report(f"orthonormality j={j.j}", "exact" if exact else "float")
    if exact:
        b = eigenbasis(j, p, exact=True)
        report.add("Gram = I (exact)", (b.conj() @ b.T).is_scalar_identity(1))
    else:
        b = eigenbasis(j, p)
        gram = b.conj() @ b.T
        res = float(np.abs(gram - np.eye(j.d)).max())
        report.add("Gram = I", res < tol, max_residual=res)
    return report


def reverse_layout(m: np.ndarray | ExactArray) -> np.ndarray | ExactArray:
    """Re-express a matrix on the basis ordered ``n = d-1, ..., 0`` (``m = j`` first).

    This is the layout in which the shift matrix is usually printed, with
    the phases on the superdiagonal and a 1 in the bottom-left corner.
    """
    if isinstance(m, ExactArray):
        return ExactArray(m.d, m.coeffs[::-1, ::-1], m.scale)
    return np.asarray(m)[::-1, ::-1]
