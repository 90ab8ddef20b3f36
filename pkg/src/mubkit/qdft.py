"""Quadratic discrete Fourier transforms and generalized quadratic Gauss sums.

``H_0a[n, alpha] = q**(n(d-n)a/2 + n alpha) / sqrt(d)``.  In omega exponents
(``omega**2 = q``) the phase is ``n(d-n)a + 2 n alpha``, an integer for every
``d``; the exact matrix therefore lives in ``Z[C_2d]`` with scale 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .phasering import ExactAmplitude, ExactArray, GroupRingElement, omega_powers, omega_value
from .report import Report
from .su2basis import RaParameters, SpinLabel, build_v

FLOAT_TOL = 1e-12


class InvalidGaussParams(ValueError):
    """Parameters outside the domain of the generalized quadratic Gauss sum."""


def _check_d(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"invalid dimension d={d!r}")
    return int(d)


def hadamard_exponents(d: int, a: int) -> np.ndarray:
    """Omega exponents of ``H_0a``, indexed ``[n, alpha]``, reduced mod ``2d``."""
    d = _check_d(d)
    n = np.arange(d)[:, None]
    alpha = np.arange(d)[None, :]
    return (n * (d - n) * (a % d) + 2 * n * alpha) % (2 * d)


def hadamard(d: int, a: int, exact: bool = False) -> np.ndarray | ExactArray:
    """The quadratic Fourier matrix ``H_0a``; columns are the vectors ``|a alpha>``."""
    exps = hadamard_exponents(d, a)
    if exact:
        return ExactArray.from_exponents(d, exps, scale=1)
    return omega_powers(d)[exps] / math.sqrt(d)


def forward(x, d: int, a: int) -> np.ndarray:
    """``y(alpha) = sum_n H[n, alpha] x(n)``."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (d,):
        raise ValueError(f"expected a length-{d} vector, got shape {x.shape}")
    return hadamard(d, a).T @ x


def inverse(y, d: int, a: int) -> np.ndarray:
    """``x(n) = sum_alpha conj(H[n, alpha]) y(alpha)``."""
    y = np.asarray(y, dtype=complex)
    if y.shape != (d,):
        raise ValueError(f"expected a length-{d} vector, got shape {y.shape}")
    return hadamard(d, a).conj() @ y


def check_parseval(x, xp, d: int, a: int | None = None, tol: float = FLOAT_TOL) -> Report:
    """Inner products are conserved by ``H_0a`` and the common value does not depend on ``a``.

    With ``a=None`` every ``a`` in ``0..d-1`` is checked.
    """
    x = np.asarray(x, dtype=complex)
    xp = np.asarray(xp, dtype=complex)
    report = Report(f"Parseval d={d}", "float")
    base = np.vdot(x, xp)
    values = []
    for aa in ([a] if a is not None else range(d)):
        val = np.vdot(forward(x, d, aa), forward(xp, d, aa))
        values.append(val)
        res = abs(val - base)
        report.add(f"a={aa}", res < tol, max_residual=float(res))
    spread = float(max(abs(v - values[0]) for v in values))
    report.add("a-independent", spread < tol, max_residual=spread,
               details={"common_value": [base.real, base.imag]})
    return report


def v0a(d: int, a: int, exact: bool = False) -> np.ndarray | ExactArray:
    """``v_0a`` on the ``n``-ordered standard basis."""
    return build_v(SpinLabel.from_dimension(d), RaParameters(0, a), exact=exact)


def check_diagonalization(d: int, a: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """``H^dag V_0a H`` is diagonal with eigenvalues ``q**((d-1)a/2) * {q, ..., q**d}``.

    The diagonal is compared as a multiset: its natural order follows
    ``alpha`` (eigenvalue ``q**(ja - alpha)``), not ``q**1 .. q**d``.
    """
    d = _check_d(d)
    a %= d
    report = Report(f"diagonalization d={d} a={a}", "exact" if exact else "float")
    # expected omega exponents (d-1)a + 2k, k = 1..d
    expected = [((d - 1) * a + 2 * k) % (2 * d) for k in range(1, d + 1)]
    if exact:
        h = hadamard(d, a, exact=True)
        m = h.dagger() @ v0a(d, a, exact=True) @ h
        zero = m.zero_mask()
        off = ~np.eye(d, dtype=bool)
        report.add("off-diagonal vanishes", bool(zero[off].all()))
        # entries carry 1/d; compare d * omega^k
        red = m.reduced()
        diag = Counter(tuple(red[i, i]) for i in range(d))
        want = Counter(tuple(ExactArray.from_exponents(d, np.array([k])).times_int(d).reduced()[0])
                       for k in expected)
        report.add("eigenvalue multiset", diag == want)
    else:
        h = hadamard(d, a)
        m = h.conj().T @ v0a(d, a) @ h
        off = float(np.abs(m - np.diag(np.diag(m))).max())
        report.add("off-diagonal vanishes", off < tol, max_residual=off)
        got = np.diag(m)
        want = np.array([omega_value(d, k) for k in expected])
        # greedy matching; eigenvalues are separated by at least |1 - q|
        dist = np.abs(got[:, None] - want[None, :])
        res = float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))
        report.add("eigenvalue multiset", res < tol, max_residual=res)
    return report


@dataclass(frozen=True)
class GaussSumParams:
    u: int
    v: int
    w: int

    def violations(self) -> list[str]:
        out = []
        if self.u * self.w == 0:
            out.append("uw != 0")
        elif math.gcd(self.u, self.w) != 1:
            out.append("gcd(u, w) = 1")
        if (self.u * self.w + self.v) % 2:
            out.append("uw + v is even")
        return out

    def validate(self) -> "GaussSumParams":
        bad = self.violations()
        if bad:
            raise InvalidGaussParams(f"S({self.u}, {self.v}, {self.w}) violates: " + "; ".join(bad))
        return self


def _gauss_exponents(u: int, v: int, w: int) -> np.ndarray:
    n = np.arange(abs(w))
    e = u * n * n + v * n
    # exp(i pi e / w) = omega_|w| ** (sign(w) e)
    return (e if w > 0 else -e) % (2 * abs(w))


def gauss_sum(u: int, v: int, w: int, exact: bool = False, validate: bool = True) -> complex | ExactAmplitude:
    """``S(u, v, w) = sum_{n<|w|} exp(i pi (u n^2 + v n) / w)`` by direct summation.

    ``validate=False`` skips the coprimality and parity gates, which matter for
    closed-form evaluation but not for the sum itself (``w != 0`` is still needed).
    """
    if validate:
        GaussSumParams(u, v, w).validate()
    elif w == 0:
        raise InvalidGaussParams("w must be nonzero")
    exps = _gauss_exponents(u, v, w)
    if exact:
        return ExactAmplitude(GroupRingElement.from_exponents(abs(w), exps.tolist()))
    return complex(np.exp(1j * np.pi * exps / abs(w)).sum())


@dataclass(frozen=True)
class GaussOverlap:
    value: complex
    direct: complex
    via_gauss: bool
    exact_agrees: bool | None = None

    @property
    def residual(self) -> float:
        return abs(self.value - self.direct)


def overlap_via_gauss(d: int, a: int, alpha: int, b: int, beta: int, exact: bool = False) -> GaussOverlap:
    """``<a alpha | b beta>`` as ``S(a-b, -(a-b)d - 2(alpha-beta), d) / d``, cross-checked directly.

    For ``a = b`` the sum has ``u = 0`` and the overlap is the Kronecker delta.
    """
    d = _check_d(d)
    a, b, alpha, beta = a % d, b % d, alpha % d, beta % d
    direct = complex(np.vdot(hadamard(d, a)[:, alpha], hadamard(d, b)[:, beta]))
    if a == b:
        return GaussOverlap(float(alpha == beta), direct, via_gauss=False, exact_agrees=True if exact else None)
    u = a - b
    v = -(a - b) * d - 2 * (alpha - beta)
    s = gauss_sum(u, v, d, validate=False)
    agrees = None
    if exact:
        s_exact = gauss_sum(u, v, d, exact=True, validate=False)
        he_a = hadamard(d, a, exact=True)
        he_b = hadamard(d, b, exact=True)
        direct_exact = he_a[:, alpha].vdot(he_b[:, beta])
        # direct has scale 2, i.e. a factor 1/d, exactly like S/d
        agrees = direct_exact.equals(ExactAmplitude(s_exact.elem, 2))
    return GaussOverlap(s / d, direct, via_gauss=True, exact_agrees=agrees)


def check_gauss_overlaps(d: int, exact: bool = False, tol: float = FLOAT_TOL) -> Report:
    """Gauss-sum form vs. direct overlap for every ``a != b`` and every ``alpha, beta``."""
    report = Report(f"Gauss overlaps d={d}", "exact" if exact else "float")
    worst = 0.0
    witness = None
    exact_ok = True
    for a in range(d):
        for b in range(d):
            if a == b:
                continue
            for alpha in range(d):
                for beta in range(d):
                    g = overlap_via_gauss(d, a, alpha, b, beta, exact=exact)
                    if g.residual > worst:
                        worst = g.residual
                    if g.residual >= tol and witness is None:
                        witness = {"a": a, "b": b, "alpha": alpha, "beta": beta, "residual": g.residual}
                    if exact and not g.exact_agrees:
                        exact_ok = False
                        witness = witness or {"a": a, "b": b, "alpha": alpha, "beta": beta}
    report.add("float agreement", worst < tol, max_residual=worst, witness=witness)
    if exact:
        report.add("exact agreement", exact_ok, witness=None if exact_ok else witness)
    return report


def check_fourth_power(d: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """``(H_00)**4 = I``."""
    report = Report(f"(H_00)^4 d={d}", "exact" if exact else "float")
    if exact:
        report.add("(H_00)^4 = I", hadamard(d, 0, exact=True).power(4).is_scalar_identity(1))
    else:
        res = float(np.abs(np.linalg.matrix_power(hadamard(d, 0), 4) - np.eye(d)).max())
        report.add("(H_00)^4 = I", res < tol, max_residual=res)
    return report


def check_unitary(d: int, a: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    report = Report(f"H_0a unitary d={d} a={a}", "exact" if exact else "float")
    if exact:
        h = hadamard(d, a, exact=True)
        report.add("H^dag H = I", (h.dagger() @ h).is_scalar_identity(1))
    else:
        h = hadamard(d, a)
        res = float(np.abs(h.conj().T @ h - np.eye(d)).max())
        report.add("H^dag H = I", res < tol, max_residual=res)
    return report
