"""Bases built from the quadratic Fourier formula and their mutual unbiasedness.

A :class:`Basis` stores its vectors as the rows of one amplitude array, either
an :class:`~mubkit.phasering.ExactArray` or a complex ndarray.  Exact vectors
may live in a smaller cyclotomic ring than their dimension suggests: the
two-qubit bases are built from qubit amplitudes, so their ring is ``d = 2``
while the Hilbert space has dimension 4.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterator, Sequence

import numpy as np

from .phasering import MAX_DIMENSION, ExactAmplitude, ExactArray, GroupRingElement, reduce
from .qdft import hadamard_exponents
from .su2basis import RaParameters, SpinLabel, build_v

FLOAT_TOL = 1e-12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def _check_d(d: int, minimum: int = 2) -> int:
    if int(d) != d or d < minimum:
        raise ValueError(f"invalid dimension d={d!r}")
    if d > MAX_DIMENSION:
        raise ValueError(f"d={d} exceeds the supported maximum {MAX_DIMENSION}")
    return int(d)


@dataclass(frozen=True)
class StateVector:
    d: int
    amps: ExactArray | np.ndarray
    label: tuple

    @property
    def value(self) -> np.ndarray:
        return self.amps.value if isinstance(self.amps, ExactArray) else np.asarray(self.amps)


@dataclass(frozen=True)
class Basis:
    """Ordered orthonormal basis; row ``i`` of ``amps`` is vector ``i``."""

    d: int
    kind: str
    params: dict[str, Any]
    amps: ExactArray | np.ndarray
    labels: tuple = ()

    @property
    def exact(self) -> bool:
        return isinstance(self.amps, ExactArray)

    @property
    def name(self) -> str:
        if self.kind == "B0a":
            return f"B0{self.params['a']}"
        if self.kind == "computational":
            return f"B{self.d}"
        if self.kind == "tensor":
            return f"B0{self.params['a']}0{self.params['b']}"
        if self.kind == "W":
            return f"W{self.params['a']}{self.params['b']}"
        return self.kind

    @property
    def matrix(self) -> np.ndarray:
        """Float amplitudes, rows are vectors."""
        return self.amps.value if self.exact else np.asarray(self.amps)

    @property
    def vectors(self) -> list[StateVector]:
        labels = self.labels or tuple(range(self.d))
        return [StateVector(self.d, self.amps[i], labels[i]) for i in range(self.d)]

    def __iter__(self) -> Iterator[StateVector]:
        return iter(self.vectors)

    def __len__(self) -> int:
        return self.d

    def to_float(self) -> "Basis":
        return Basis(self.d, self.kind, dict(self.params), self.matrix, self.labels)


# ---------------------------------------------------------------------------
# constructions


def basis_b0a(d: int, a: int, exact: bool = True) -> Basis:
    """``B_0a``: ``|a alpha> = sum_n q**(n(d-n)a/2 + n alpha) |n> / sqrt(d)``."""
    d = _check_d(d)
    a %= d
    exps = hadamard_exponents(d, a).T  # rows alpha
    if exact:
        amps = ExactArray.from_exponents(d, exps, scale=1)
    else:
        amps = np.exp(1j * np.pi * exps / d) / math.sqrt(d)
    return Basis(d, "B0a", {"a": a}, amps, tuple((a, al) for al in range(d)))


def basis_b0a_kform(d: int, a: int, exact: bool = True) -> Basis:
    """The same vectors written on ``|k> = |j, m>`` with ``k = j - m``.

    Components ``q**((k+1)(d-k-1)a/2 - (k+1) alpha) / sqrt(d)`` indexed by ``k``;
    :func:`kform_to_nform` moves them onto the ``n`` index.
    """
    d = _check_d(d)
    a %= d
    k = np.arange(d)[None, :]
    alpha = np.arange(d)[:, None]
    exps = ((k + 1) * (d - k - 1) * a - 2 * (k + 1) * alpha) % (2 * d)
    if exact:
        amps = ExactArray.from_exponents(d, exps, scale=1)
    else:
        amps = np.exp(1j * np.pi * exps / d) / math.sqrt(d)
    return Basis(d, "B0a-kform", {"a": a}, amps, tuple((a, al) for al in range(d)))


def kform_to_nform(b: Basis) -> Basis:
    """Re-index components with ``|k> = |n = d - 1 - k>``."""
    if b.exact:
        amps = ExactArray(b.amps.d, b.amps.coeffs[:, ::-1], b.amps.scale)
    else:
        amps = np.asarray(b.amps)[:, ::-1]
    return Basis(b.d, "B0a", dict(b.params), amps, b.labels)


def computational_basis(d: int, exact: bool = True) -> Basis:
    d = _check_d(d, minimum=1)
    if exact:
        amps = ExactArray.identity(d, d)
    else:
        amps = np.eye(d, dtype=complex)
    return Basis(d, "computational", {}, amps, tuple(range(d)))


def tensor_basis(a: int, b: int, exact: bool = True) -> Basis:
    """``B_0a0b = {|a alpha> (x) |b beta>}`` in dimension 4, ordered by ``(alpha, beta)``."""
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("tensor bases need a, b in {0, 1}")
    u = basis_b0a(2, a, exact).amps
    v = basis_b0a(2, b, exact).amps
    labels = tuple((al, be) for al in range(2) for be in range(2))
    if exact:
        rows = [u[al].kron(v[be]) for al, be in labels]
        amps = _stack(rows)
    else:
        amps = np.array([np.kron(u[al], v[be]) for al, be in labels])
    return Basis(4, "tensor", {"a": a, "b": b}, amps, labels)


def _stack(rows: Sequence[ExactArray]) -> ExactArray:
    s = max(r.scale for r in rows)
    rows = [r.with_scale(s) for r in rows]
    return ExactArray(rows[0].d, np.stack([r.coeffs for r in rows]), s)


# lambda = (1 - i)/2, mu = (1 + i)/2 over Z[i] (omega = i for d = 2); scale 2 is the 1/2
LAMBDA = ExactAmplitude(GroupRingElement.from_exponents(2, {0: 1, 1: -1}), 2)
MU = ExactAmplitude(GroupRingElement.from_exponents(2, {0: 1, 1: 1}), 2)


def w_basis(a: int, b: int, exact: bool = True) -> Basis:
    """Two-qubit basis ``W_ab`` for ``a, b`` in ``{0, 1}``.

    ``W_aa`` is the product basis ``|a alpha> (x) |a beta>``.  ``W_a,a+1`` mixes
    ``|a alpha> (x) |a+1 beta>`` and ``|a alpha+1> (x) |a+1 beta+1>`` with
    weights ``lambda = (1-i)/2`` and ``mu = (1+i)/2``.
    """
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("W bases need a, b in {0, 1}")
    if a == b:
        tb = tensor_basis(a, a, exact)
        return Basis(4, "W", {"a": a, "b": b}, tb.amps, tb.labels)
    u = basis_b0a(2, a, exact).amps
    v = basis_b0a(2, b, exact).amps
    labels = tuple((al, be) for al in range(2) for be in range(2))
    if exact:
        rows = [
            u[al].kron(v[be]).scalar_mul(LAMBDA) + u[al ^ 1].kron(v[be ^ 1]).scalar_mul(MU)
            for al, be in labels
        ]
        amps = _stack(rows)
    else:
        lam, mu = (1 - 1j) / 2, (1 + 1j) / 2
        amps = np.array([lam * np.kron(u[al], v[be]) + mu * np.kron(u[al ^ 1], v[be ^ 1]) for al, be in labels])
    return Basis(4, "W", {"a": a, "b": b}, amps, labels)


def w_bases(exact: bool = True) -> list[Basis]:
    """``W_00, W_11, W_01, W_10`` and the computational basis of ``C^4``."""
    ws = [w_basis(a, b, exact) for a, b in ((0, 0), (1, 1), (0, 1), (1, 0))]
    comp = computational_basis(4, exact)
    if exact:
        # same ring as the W bases so that pairs can be compared exactly
        comp = Basis(4, comp.kind, {}, ExactArray.identity(2, 4), comp.labels)
    return ws + [comp]


def complete_set_prime(p: int, exact: bool = True) -> list[Basis]:
    """``B_00, ..., B_0(p-1), B_p`` for prime ``p``."""
    p = _check_d(p)
    if not is_prime(p):
        raise ValueError(f"d={p} is not prime")
    return [basis_b0a(p, a, exact) for a in range(p)] + [computational_basis(p, exact)]


def naive_set(d: int, exact: bool = True) -> list[Basis]:
    """All ``B_0a`` plus the computational basis, complete or not."""
    d = _check_d(d)
    return [basis_b0a(d, a, exact) for a in range(d)] + [computational_basis(d, exact)]


def triple_set(d: int, a: int, exact: bool = True) -> list[Basis]:
    d = _check_d(d)
    return [basis_b0a(d, a, exact), basis_b0a(d, (a + 1) % d, exact), computational_basis(d, exact)]


# ---------------------------------------------------------------------------
# verification


@dataclass
class PairVerdict:
    first: str
    second: str
    verdict: str  # "unbiased", "identical-orthonormal", "biased", "not-orthonormal"
    witness: dict[str, Any] | None = None
    max_deviation: float | None = None

    @property
    def passed(self) -> bool:
        return self.verdict in ("unbiased", "identical-orthonormal")


@dataclass
class MubReport:
    d: int
    mode: str
    pairs: list[PairVerdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.pairs)

    @property
    def unbiased_pairs(self) -> int:
        return sum(p.verdict == "unbiased" for p in self.pairs)

    @property
    def first_failure(self) -> PairVerdict | None:
        return next((p for p in self.pairs if not p.passed), None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "mode": self.mode,
            "passed": self.passed,
            "pairs": [
                {"first": p.first, "second": p.second, "verdict": p.verdict,
                 "witness": p.witness, "max_deviation": p.max_deviation}
                for p in self.pairs
            ],
        }


def _same_basis(b1: Basis, b2: Basis) -> bool:
    return b1 is b2 or (b1.kind == b2.kind and b1.params == b2.params and b1.d == b2.d)


def _common_ring(b1: Basis, b2: Basis) -> tuple[ExactArray, ExactArray]:
    u, v = b1.amps, b2.amps
    if u.d == v.d:
        return u, v
    raise ValueError(f"bases live in different cyclotomic rings (d={u.d} vs d={v.d})")


def _gram(b1: Basis, b2: Basis, exact: bool):
    if exact:
        u, v = _common_ring(b1, b2)
        return u.conj() @ v.T
    return b1.matrix.conj() @ b2.matrix.T


def check_unbiased(b1: Basis, b2: Basis, exact: bool | None = None, tol: float = FLOAT_TOL) -> PairVerdict:
    """Compare every overlap ``<b1_i | b2_j>``.

    Distinct bases pass when every ``|overlap| = 1/sqrt(d)``; a basis against
    itself passes when the Gram matrix is the identity.  A failure carries the
    first offending ``(alpha, beta, modulus)``.
    """
    if b1.d != b2.d:
        raise ValueError(f"dimension mismatch: {b1.d} vs {b2.d}")
    if exact is None:
        exact = b1.exact and b2.exact
    if exact and not (b1.exact and b2.exact):
        raise ValueError("exact comparison needs exact bases")
    d = b1.d
    same = _same_basis(b1, b2)
    g = _gram(b1, b2, exact)
    if exact:
        gf = np.abs(g.value)
        if same:
            ok_mask = _identity_mask(g)
        else:
            # |g|^2 * d == 1 exactly
            ok_mask = g.mul_elementwise(g.conj()).times_int(d).equals_constant_mask(1)
    else:
        gf = np.abs(g)
        target = np.eye(d) if same else np.full((d, d), 1 / math.sqrt(d))
        ok_mask = np.abs(gf - target) < tol
    dev = float(np.abs(gf - (np.eye(d) if same else 1 / math.sqrt(d))).max())
    verdict_ok = "identical-orthonormal" if same else "unbiased"
    verdict_bad = "not-orthonormal" if same else "biased"
    if bool(np.all(ok_mask)):
        return PairVerdict(b1.name, b2.name, verdict_ok, None, dev)
    al, be = map(int, np.argwhere(~ok_mask)[0])
    witness = {"alpha": al, "beta": be, "modulus": float(gf[al, be]), "expected": float(1 / math.sqrt(d)) if not same else float(al == be)}
    return PairVerdict(b1.name, b2.name, verdict_bad, witness, dev)


def _identity_mask(g: ExactArray) -> np.ndarray:
    n = g.shape[0]
    eye = ExactArray.identity(g.d, n)
    return (g - eye).zero_mask()


def check_orthonormal(b: Basis, exact: bool | None = None, tol: float = FLOAT_TOL) -> PairVerdict:
    return check_unbiased(b, b, exact, tol)


def verify_set(bases: Sequence[Basis], exact: bool | None = None, tol: float = FLOAT_TOL,
               workers: int | None = None) -> MubReport:
    """Check every pair ``i < j`` for unbiasedness; results keep pair order."""
    if not bases:
        raise ValueError("empty basis set")
    d = bases[0].d
    if exact is None:
        exact = all(b.exact for b in bases)
    pairs = list(combinations(range(len(bases)), 2))

    def run(ij):
        i, j = ij
        return check_unbiased(bases[i], bases[j], exact, tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(run, pairs))
    else:
        verdicts = [run(ij) for ij in pairs]
    return MubReport(d, "exact" if exact else "float", verdicts)


def check_odd_pair(d: int, a: int, exact: bool = True) -> PairVerdict:
    """``B_0a`` against ``B_0(a+2)`` for odd ``d >= 3``."""
    d = _check_d(d, minimum=3)
    if d % 2 == 0:
        raise ValueError(f"d={d} is even; the pair claim covers odd d only")
    return check_unbiased(basis_b0a(d, a, exact), basis_b0a(d, (a + 2) % d, exact), exact)


def check_form_equivalence(d: int, a: int, exact: bool = True, tol: float = FLOAT_TOL) -> bool:
    n_form = basis_b0a(d, a, exact)
    k_form = kform_to_nform(basis_b0a_kform(d, a, exact))
    if exact:
        return n_form.amps.equals(k_form.amps)
    return bool(np.abs(n_form.matrix - k_form.matrix).max() < tol)


# ---------------------------------------------------------------------------
# two-qubit structure


def schmidt_determinant(v: StateVector) -> ExactAmplitude | complex:
    """Determinant of the 2x2 amplitude matrix of a two-qubit vector; zero iff product."""
    if v.d != 4:
        raise ValueError("intrication test needs a two-qubit vector")
    a = v.amps
    if isinstance(a, ExactArray):
        return a[0] * a[3] - a[1] * a[2]
    return complex(a[0] * a[3] - a[1] * a[2])


def is_product(v: StateVector) -> bool:
    det = schmidt_determinant(v)
    if isinstance(det, ExactAmplitude):
        return reduce(det.elem).is_zero
    return abs(det) < FLOAT_TOL


def check_w_eigenvectors(tol: float = FLOAT_TOL) -> dict[str, float]:
    """Residual of ``(V_0a (x) V_0b) w = lambda w`` for each mixed ``W_ab``."""
    out = {}
    for a, b in ((0, 1), (1, 0)):
        op = np.kron(build_v(SpinLabel(1), RaParameters(0, a)), build_v(SpinLabel(1), RaParameters(0, b)))
        worst = 0.0
        for row in w_basis(a, b, exact=False).matrix:
            lam = np.vdot(row, op @ row)
            worst = max(worst, float(np.abs(op @ row - lam * row).max()))
        out[f"W{a}{b}"] = worst
    return out


def apply_unitary(b: Basis, u: np.ndarray) -> Basis:
    """Float basis with every vector mapped by ``u``."""
    return Basis(b.d, b.kind, dict(b.params), b.matrix @ np.asarray(u).T, b.labels)


def overlap_moduli(b1: Basis, b2: Basis) -> np.ndarray:
    return np.abs(b1.matrix.conj() @ b2.matrix.T)
