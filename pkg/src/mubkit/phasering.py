"""Exact arithmetic over the 2d-th roots of unity.

Every phase used by the library is a power of ``omega = exp(i*pi/d)``.  Half
integer powers of ``q = exp(2*i*pi/d)`` are therefore integer powers of omega,
and sums of such phases live in the group ring ``Z[C_2d]``.  Equality of two
group-ring elements as complex numbers is decided exactly by reducing modulo
the cyclotomic polynomial ``Phi_2d``.

Prefactors ``1/sqrt(d)`` are never evaluated in exact mode.  They are carried
as an integer ``rootd_scale`` ``s`` standing for the factor ``d**(-s/2)``.

Scalars are :class:`GroupRingElement` / :class:`ExactAmplitude`; vectors and
matrices are :class:`ExactArray`, an integer coefficient array whose last axis
indexes the power of omega.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_DIMENSION = 64


class DimensionError(ValueError):
    """Raised for dimensions outside the supported range or mismatched operands."""


def _check_dimension(d: int, minimum: int = 2) -> int:
    if int(d) != d or d < minimum:
        raise DimensionError(f"invalid dimension d={d!r}; need an integer >= {minimum}")
    return int(d)


def omega_value(d: int, k: int) -> complex:
    """Return ``exp(i*pi*k/d)`` with ``k`` reduced modulo ``2d`` first."""
    d = _check_dimension(d)
    k %= 2 * d
    # exact values on the axes keep downstream float comparisons clean
    if (4 * k) % (2 * d) == 0:
        return (1, 1j, -1, -1j)[(4 * k) // (2 * d)]
    return cmath.exp(1j * math.pi * k / d)


# ---------------------------------------------------------------------------
# integer polynomials, coefficient lists ordered from the constant term up

def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division by a monic integer polynomial."""
    den = _trim(list(den))
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    if len(rem) < len(den):
        return [0], _trim(rem)
    quot = [0] * (len(rem) - len(den) + 1)
    for shift in range(len(quot) - 1, -1, -1):
        c = rem[shift + len(den) - 1]
        if c:
            quot[shift] = c
            for i, y in enumerate(den):
                rem[shift + i] -= c * y
    return _trim(quot), _trim(rem[: len(den) - 1] or [0])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_n``, constant term first.

    Obtained by dividing ``x**n - 1`` by ``Phi_m`` for every proper divisor
    ``m`` of ``n``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"cyclotomic index must be a positive integer, got {n!r}")
    n = int(n)
    poly = [-1] + [0] * (n - 1) + [1]
    for m in range(1, n):
        if n % m == 0:
            poly, rem = poly_divmod(poly, cyclotomic_polynomial(m))
            if any(rem):
                raise ArithmeticError(f"Phi_{m} does not divide x^{n} - 1")  # pragma: no cover
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _reduction_matrix(d: int) -> np.ndarray:
    """Row ``k`` holds the coefficients of ``x**k mod Phi_2d``."""
    phi = cyclotomic_polynomial(2 * d)
    deg = len(phi) - 1
    rows = np.zeros((2 * d, deg), dtype=np.int64)
    for k in range(2 * d):
        _, rem = poly_divmod([0] * k + [1], phi)
        rows[k, : len(rem)] = rem
    rows.setflags(write=False)
    return rows


@lru_cache(maxsize=None)
def omega_powers(d: int) -> np.ndarray:
    out = np.array([omega_value(d, k) if d >= 2 else (1, -1)[k] for k in range(2 * d)])
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# scalar types


@dataclass(frozen=True)
class PhaseExponent:
    """The phase ``omega**k``; ``q**x`` maps to ``k = 2x``."""

    d: int
    k: int

    def __post_init__(self) -> None:
        _check_dimension(self.d)
        object.__setattr__(self, "k", self.k % (2 * self.d))

    @classmethod
    def from_q_power(cls, d: int, x2: int) -> "PhaseExponent":
        """``q**(x2/2)``; ``x2`` is twice the (possibly half-integer) q-exponent."""
        return cls(d, x2)

    @property
    def value(self) -> complex:
        return omega_value(self.d, self.k)

    def __mul__(self, other: "PhaseExponent") -> "PhaseExponent":
        if other.d != self.d:
            raise DimensionError("phase dimension mismatch")
        return PhaseExponent(self.d, self.k + other.k)

    def conj(self) -> "PhaseExponent":
        return PhaseExponent(self.d, -self.k)


@dataclass(frozen=True)
class CyclotomicReduced:
    """Canonical remainder modulo ``Phi_2d``; equal values have equal coefficients."""

    d: int
    coeffs: tuple[int, ...]

    @property
    def value(self) -> complex:
        return complex(np.dot(np.array(self.coeffs, dtype=float), omega_powers(self.d)[: len(self.coeffs)]))

    def is_constant(self, n: int) -> bool:
        return self.coeffs[0] == n and not any(self.coeffs[1:])

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class GroupRingElement:
    """Integer combination ``sum_k coeffs[k] * omega**k`` with ``omega = exp(i*pi/d)``."""

    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dimension(self.d, minimum=1)
        if len(self.coeffs) != 2 * self.d:
            raise ValueError(f"expected {2 * self.d} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def zero(cls, d: int) -> "GroupRingElement":
        return cls(d, (0,) * (2 * d))

    @classmethod
    def from_int(cls, d: int, n: int) -> "GroupRingElement":
        return cls.from_exponents(d, {0: n})

    @classmethod
    def monomial(cls, d: int, k: int, coeff: int = 1) -> "GroupRingElement":
        return cls.from_exponents(d, {k: coeff})

    @classmethod
    def from_exponents(cls, d: int, terms: dict[int, int] | Iterable[int]) -> "GroupRingElement":
        """Build from ``{exponent: coefficient}`` or an iterable of exponents (each counted once)."""
        c = [0] * (2 * d)
        items = terms.items() if isinstance(terms, dict) else ((k, 1) for k in terms)
        for k, v in items:
            c[int(k) % (2 * d)] += int(v)
        return cls(d, tuple(c))

    def _check(self, other: "GroupRingElement") -> None:
        if other.d != self.d:
            raise DimensionError(f"group ring mismatch: d={self.d} vs d={other.d}")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(self.d, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.d, tuple(-x for x in self.coeffs))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement | int") -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(self.d, tuple(other * x for x in self.coeffs))
        self._check(other)
        n = 2 * self.d
        out = [0] * n
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[(i + j) % n] += x * y
        return GroupRingElement(self.d, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "GroupRingElement":
        n = 2 * self.d
        return GroupRingElement(self.d, tuple(self.coeffs[(-k) % n] for k in range(n)))

    def reduce(self) -> CyclotomicReduced:
        return reduce(self)

    @property
    def value(self) -> complex:
        return complex(np.dot(np.array(self.coeffs, dtype=float), omega_powers(self.d)))


def reduce(e: GroupRingElement) -> CyclotomicReduced:
    """Remainder of ``sum coeffs[k] x**k`` modulo ``Phi_2d``."""
    red = np.array(e.coeffs, dtype=np.int64) @ _reduction_matrix(e.d)
    return CyclotomicReduced(e.d, tuple(int(c) for c in red))


def _lift_factor(d: int, steps: int) -> int:
    """Integer equal to ``d**(steps/2)``; odd steps need ``d`` to be a perfect square."""
    if steps % 2 == 0:
        return d ** (steps // 2)
    r = math.isqrt(d)
    if r * r != d:
        raise ArithmeticError(f"sqrt({d})**{steps} is not an integer; cannot align scales")
    return r**steps


@dataclass(frozen=True)
class ExactAmplitude:
    """``d**(-rootd_scale/2) * elem``."""

    elem: GroupRingElement
    rootd_scale: int = 0

    @property
    def d(self) -> int:
        return self.elem.d

    @classmethod
    def phase(cls, d: int, k: int, rootd_scale: int = 0) -> "ExactAmplitude":
        return cls(GroupRingElement.monomial(d, k), rootd_scale)

    @property
    def value(self) -> complex:
        return self.elem.value * self.d ** (-self.rootd_scale / 2)

    def with_scale(self, s: int) -> "ExactAmplitude":
        """Same number re-expressed with a larger scale ``s``."""
        if s < self.rootd_scale:
            raise ValueError("can only raise the scale")
        return ExactAmplitude(self.elem * _lift_factor(self.d, s - self.rootd_scale), s)

    def times_int(self, n: int) -> "ExactAmplitude":
        return ExactAmplitude(self.elem * n, self.rootd_scale)

    def __mul__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        return exact_mul(self, other)

    def __add__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        return exact_add(self, other)

    def __neg__(self) -> "ExactAmplitude":
        return ExactAmplitude(-self.elem, self.rootd_scale)

    def __sub__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        return exact_add(self, -other)

    def conj(self) -> "ExactAmplitude":
        return exact_conj(self)

    def abs2(self) -> "ExactAmplitude":
        return exact_mul(self, exact_conj(self))

    def equals(self, other: "ExactAmplitude") -> bool:
        diff = self - other
        return reduce(diff.elem).is_zero


def _same_ring(a: ExactAmplitude, b: ExactAmplitude) -> None:
    if a.d != b.d:
        raise DimensionError(f"amplitude mismatch: d={a.d} vs d={b.d}")


def exact_mul(a: ExactAmplitude, b: ExactAmplitude) -> ExactAmplitude:
    _same_ring(a, b)
    return ExactAmplitude(a.elem * b.elem, a.rootd_scale + b.rootd_scale)


def exact_add(a: ExactAmplitude, b: ExactAmplitude) -> ExactAmplitude:
    _same_ring(a, b)
    s = max(a.rootd_scale, b.rootd_scale)
    return ExactAmplitude(a.with_scale(s).elem + b.with_scale(s).elem, s)


def exact_conj(a: ExactAmplitude) -> ExactAmplitude:
    return ExactAmplitude(a.elem.conj(), a.rootd_scale)


def equals_rational_integer(a: ExactAmplitude, n: int) -> bool:
    """True iff ``a`` equals the integer ``n`` exactly.

    An odd scale is accepted only when ``d`` is a perfect square.
    """
    if a.rootd_scale >= 0:
        target = n * _lift_factor(a.d, a.rootd_scale)
        return reduce(a.elem).is_constant(target)
    # negative scale multiplies elem by a power of sqrt(d)
    return equals_rational_integer(ExactAmplitude(a.elem * _lift_factor(a.d, -a.rootd_scale), 0), n)


# ---------------------------------------------------------------------------
# arrays


def _is_monomial(coeffs: np.ndarray) -> bool:
    return bool(np.all(np.count_nonzero(coeffs, axis=-1) <= 1))


class ExactArray:
    """Array of exact amplitudes sharing one dimension ``d`` and one scale.

    ``coeffs`` has shape ``shape + (2d,)``; entry ``[..., k]`` is the integer
    coefficient of ``omega**k``.  The represented array is
    ``d**(-scale/2) * coeffs @ omega_powers``.
    """

    __slots__ = ("d", "coeffs", "scale")

    def __init__(self, d: int, coeffs: np.ndarray, scale: int = 0) -> None:
        self.d = _check_dimension(d, minimum=1)
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape[-1] != 2 * self.d:
            raise ValueError(f"last axis must have length {2 * self.d}")
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.scale = int(scale)

    # construction -----------------------------------------------------------

    @classmethod
    def from_exponents(cls, d: int, exponents: np.ndarray, scale: int = 0, mask: np.ndarray | None = None) -> "ExactArray":
        """One monomial ``omega**exponents[idx]`` per entry; ``mask`` zeroes entries."""
        exponents = np.asarray(exponents, dtype=np.int64) % (2 * d)
        coeffs = np.zeros(exponents.shape + (2 * d,), dtype=np.int64)
        vals = np.ones(exponents.shape, dtype=np.int64) if mask is None else np.asarray(mask, dtype=np.int64)
        np.put_along_axis(coeffs, exponents[..., None], vals[..., None], axis=-1)
        return cls(d, coeffs, scale)

    @classmethod
    def identity(cls, d: int, n: int) -> "ExactArray":
        return cls.from_exponents(d, np.zeros((n, n), dtype=np.int64), mask=np.eye(n, dtype=np.int64))

    @classmethod
    def from_amplitudes(cls, amps: Sequence[ExactAmplitude]) -> "ExactArray":
        amps = list(amps)
        d = amps[0].d
        s = max(a.rootd_scale for a in amps)
        rows = [a.with_scale(s).elem.coeffs for a in amps]
        return cls(d, np.array(rows, dtype=np.int64), s)

    # structure ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    def __getitem__(self, idx) -> "ExactAmplitude | ExactArray":
        sub = self.coeffs[idx]
        if sub.ndim == 1:
            return ExactAmplitude(GroupRingElement(self.d, tuple(sub)), self.scale)
        return ExactArray(self.d, sub, self.scale)

    def __len__(self) -> int:
        return self.shape[0]

    def __repr__(self) -> str:
        return f"ExactArray(d={self.d}, shape={self.shape}, scale={self.scale})"

    @property
    def value(self) -> np.ndarray:
        """Complex float evaluation."""
        return (self.coeffs @ omega_powers(self.d)) * self.d ** (-self.scale / 2)

    def reduced(self) -> np.ndarray:
        """Coefficients modulo ``Phi_2d``, shape ``shape + (phi(2d),)``."""
        return self.coeffs @ _reduction_matrix(self.d)

    @property
    def is_monomial(self) -> bool:
        return _is_monomial(self.coeffs)

    def transpose(self) -> "ExactArray":
        return ExactArray(self.d, np.swapaxes(self.coeffs, 0, 1), self.scale)

    @property
    def T(self) -> "ExactArray":
        return self.transpose()

    def conj(self) -> "ExactArray":
        n = 2 * self.d
        return ExactArray(self.d, self.coeffs[..., (-np.arange(n)) % n], self.scale)

    def dagger(self) -> "ExactArray":
        return self.conj().transpose()

    def with_scale(self, s: int) -> "ExactArray":
        if s == self.scale:
            return self
        if s < self.scale:
            raise ValueError("can only raise the scale")
        return ExactArray(self.d, self.coeffs * _lift_factor(self.d, s - self.scale), s)

    def times_int(self, n: int) -> "ExactArray":
        return ExactArray(self.d, self.coeffs * n, self.scale)

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "ExactArray") -> None:
        if not isinstance(other, ExactArray) or other.d != self.d:
            raise DimensionError("exact array ring mismatch")

    def __add__(self, other: "ExactArray") -> "ExactArray":
        self._check(other)
        s = max(self.scale, other.scale)
        return ExactArray(self.d, self.with_scale(s).coeffs + other.with_scale(s).coeffs, s)

    def __neg__(self) -> "ExactArray":
        return ExactArray(self.d, -self.coeffs, self.scale)

    def __sub__(self, other: "ExactArray") -> "ExactArray":
        return self + (-other)

    def scalar_mul(self, c: ExactAmplitude) -> "ExactArray":
        """Multiply every entry by the exact scalar ``c``."""
        if c.d != self.d:
            raise DimensionError("scalar ring mismatch")
        cc = np.array(c.elem.coeffs, dtype=np.int64)
        out = np.zeros_like(self.coeffs)
        for k in np.flatnonzero(cc):
            out = out + cc[k] * np.roll(self.coeffs, k, axis=-1)
        return ExactArray(self.d, out, self.scale + c.rootd_scale)

    def mul_elementwise(self, other: "ExactArray") -> "ExactArray":
        """Entrywise product (cyclic convolution along the phase axis)."""
        self._check(other)
        return ExactArray(self.d, _convolve(self.coeffs, other.coeffs, self.d), self.scale + other.scale)

    def __matmul__(self, other: "ExactArray") -> "ExactArray":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        vec = b.ndim == 2
        if vec:
            b = b[:, None, :]
        if a.ndim != 3 or b.shape[0] != a.shape[1]:
            raise DimensionError(f"cannot multiply shapes {self.shape} and {other.shape}")
        n = 2 * self.d
        if _is_monomial(a) and _is_monomial(b):
            out = _monomial_matmul(a, b, n)
        else:
            idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n  # idx[x, t] = t - x
            out = np.einsum("ijx,jlxt->ilt", a, b[:, :, idx], optimize=True)
        if vec:
            out = out[:, 0, :]
        return ExactArray(self.d, out, self.scale + other.scale)

    def vdot(self, other: "ExactArray") -> ExactAmplitude:
        """``<self|other>`` for two vectors."""
        g = self.conj().coeffs[None, :, :]
        return (ExactArray(self.d, g, self.scale) @ other)[0]

    def kron(self, other: "ExactArray") -> "ExactArray":
        """Kronecker product of two vectors or two matrices."""
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if a.ndim == 2 and b.ndim == 2:
            prod = _convolve(a[:, None, :], b[None, :, :], self.d)
            out = prod.reshape(-1, 2 * self.d)
        elif a.ndim == 3 and b.ndim == 3:
            prod = _convolve(a[:, None, :, None, :], b[None, :, None, :, :], self.d)
            r = a.shape[0] * b.shape[0]
            c = a.shape[1] * b.shape[1]
            out = prod.reshape(r, c, 2 * self.d)
        else:
            raise DimensionError("kron needs two vectors or two matrices")
        return ExactArray(self.d, out, self.scale + other.scale)

    def power(self, e: int) -> "ExactArray":
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = ExactArray.identity(self.d, self.shape[0])
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    # exact predicates -----------------------------------------------------------

    def equals(self, other: "ExactArray") -> bool:
        diff = self - other
        return not diff.reduced().any()

    def is_scalar_identity(self, n: int = 1) -> bool:
        """True iff the (square) array equals ``n * I`` exactly."""
        r, c = self.shape
        if r != c:
            return False
        target = n * _lift_factor(self.d, self.scale) if self.scale >= 0 else None
        red = self.reduced()
        if target is None:
            red = red * _lift_factor(self.d, -self.scale)
            target = n
        expect = np.zeros_like(red)
        expect[np.arange(r), np.arange(r), 0] = target
        return bool(np.array_equal(red, expect))

    def equals_constant_mask(self, n: int) -> np.ndarray:
        """Boolean mask of entries equal to the integer ``n`` exactly."""
        red = self.reduced()
        if self.scale >= 0:
            target = n * _lift_factor(self.d, self.scale)
        else:
            red = red * _lift_factor(self.d, -self.scale)
            target = n
        return (red[..., 0] == target) & ~red[..., 1:].any(axis=-1)

    def zero_mask(self) -> np.ndarray:
        """Boolean mask of entries that vanish exactly."""
        return ~self.reduced().any(axis=-1)


def _convolve(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    """Broadcasted cyclic convolution along the last axis (length 2d)."""
    n = 2 * d
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape, dtype=np.int64)
    nz = np.flatnonzero(a.reshape(-1, n).any(axis=0))
    for k in nz:
        out += a[..., k : k + 1] * np.roll(b, k, axis=-1)
    return out


def _monomial_matmul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Matrix product when every entry of both operands is a single signed power."""
    ka = np.argmax(a != 0, axis=-1)
    ca = np.take_along_axis(a, ka[..., None], axis=-1)[..., 0]
    kb = np.argmax(b != 0, axis=-1)
    cb = np.take_along_axis(b, kb[..., None], axis=-1)[..., 0]
    # term[i, j, l] = ca[i,j] cb[j,l] omega^(ka[i,j] + kb[j,l])
    exps = (ka[:, :, None] + kb[None, :, :]) % n
    weights = ca[:, :, None] * cb[None, :, :]
    m, _, l = exps.shape[0], exps.shape[1], exps.shape[2]
    flat = (np.arange(m)[:, None, None] * l + np.arange(l)[None, None, :]) * n + exps
    out = np.bincount(flat.ravel(), weights=weights.ravel().astype(np.float64), minlength=m * l * n)
    return np.rint(out).astype(np.int64).reshape(m, l, n)


def exact_unit_modulus_check(z: ExactAmplitude, dim: int) -> bool:
    """True iff ``|z|**2 * dim == 1`` exactly."""
    return equals_rational_integer(z.abs2().times_int(dim), 1)
