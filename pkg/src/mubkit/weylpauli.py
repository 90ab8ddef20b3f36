"""Weyl pair, generalized Pauli matrices and their commuting classes.

``X`` and ``Z`` use the printed layout: ``X`` has ones on the superdiagonal and
in the bottom-left corner (``X e_n = e_(n-1)``), ``Z = diag(1, q, ..., q**(d-1))``.
In this layout ``XZ = q ZX`` and the shift operator ``v_0a`` is ``X Z**a``.
That layout is the ``n``-ordered one of :mod:`mubkit.su2basis` read backwards,
see :func:`~mubkit.su2basis.reverse_layout`.

Products follow ``X^a Z^b X^c Z^e = q**(-bc) X^(a+c) Z^(b+e)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .mub import is_prime
from .phasering import ExactAmplitude, ExactArray, omega_powers
from .report import Report
from .su2basis import RaParameters, SpinLabel, build_v, reverse_layout

FLOAT_TOL = 1e-12


def _check_d(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"invalid dimension d={d!r}")
    return int(d)


def _check_prime(p: int) -> int:
    p = _check_d(p)
    if not is_prime(p):
        raise ValueError(f"d={p} is not prime")
    return p


def x_matrix(d: int, exact: bool = False) -> np.ndarray | ExactArray:
    d = _check_d(d)
    n = np.arange(d)
    if exact:
        mask = np.zeros((d, d), dtype=np.int64)
        mask[n, (n + 1) % d] = 1
        return ExactArray.from_exponents(d, np.zeros((d, d), dtype=np.int64), mask=mask)
    x = np.zeros((d, d), dtype=complex)
    x[n, (n + 1) % d] = 1
    return x


def z_matrix(d: int, exact: bool = False) -> np.ndarray | ExactArray:
    d = _check_d(d)
    n = np.arange(d)
    if exact:
        # q**n = omega**(2n)
        return ExactArray.from_exponents(d, np.diag(2 * n), mask=np.eye(d, dtype=np.int64))
    return np.diag(omega_powers(d)[(2 * n) % (2 * d)])


def v0a_matrix(d: int, a: int, exact: bool = False) -> np.ndarray | ExactArray:
    """``v_0a`` in the printed layout, obtained from the spin construction."""
    return reverse_layout(build_v(SpinLabel.from_dimension(_check_d(d)), RaParameters(0, a % d), exact=exact))


def _q(d: int, exact: bool, k: int = 1):
    """The scalar ``q**k``."""
    if exact:
        return ExactAmplitude.phase(d, 2 * k)
    return omega_powers(d)[(2 * k) % (2 * d)]


def _mat_equal(m1, m2, tol: float) -> tuple[bool, float | None]:
    if isinstance(m1, ExactArray):
        return m1.equals(m2), None
    res = float(np.abs(m1 - m2).max())
    return res < tol, res


def _scalar_times(c, m):
    if isinstance(m, ExactArray):
        return m.scalar_mul(c)
    return c * m


def _power(m, e: int):
    return m.power(e) if isinstance(m, ExactArray) else np.linalg.matrix_power(m, e)


def _identity(d: int, exact: bool):
    return ExactArray.identity(d, d) if exact else np.eye(d)


def check_weyl(d: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """``XZ - qZX = 0`` and ``X^d = Z^d = I``; also ``X = V_00`` and ``Z = V_00^dag V_01``."""
    d = _check_d(d)
    x, z = x_matrix(d, exact), z_matrix(d, exact)
    report = Report(f"Weyl pair d={d}", "exact" if exact else "float")
    ok, res = _mat_equal(x @ z, _scalar_times(_q(d, exact), z @ x), tol)
    report.add("XZ = qZX", ok, max_residual=res)
    ok, res = _mat_equal(_power(x, d), _identity(d, exact), tol)
    report.add("X^d = I", ok, max_residual=res)
    ok, res = _mat_equal(_power(z, d), _identity(d, exact), tol)
    report.add("Z^d = I", ok, max_residual=res)
    v00, v01 = v0a_matrix(d, 0, exact), v0a_matrix(d, 1, exact)
    ok, res = _mat_equal(v00, x, tol)
    report.add("X = V_00", ok, max_residual=res)
    v00h = v00.dagger() if exact else v00.conj().T
    ok, res = _mat_equal(v00h @ v01, z, tol)
    report.add("Z = V_00^dag V_01", ok, max_residual=res)
    return report


def check_v0a_weyl(d: int, a: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """``V Z = q Z V``, ``V^d = e^{i pi (d-1) a} I`` and ``V = X Z^a`` for ``V = V_0a``."""
    d = _check_d(d)
    a %= d
    v, z, x = v0a_matrix(d, a, exact), z_matrix(d, exact), x_matrix(d, exact)
    report = Report(f"V_0a Weyl pair d={d} a={a}", "exact" if exact else "float")
    ok, res = _mat_equal(v @ z, _scalar_times(_q(d, exact), z @ v), tol)
    report.add("V Z = q Z V", ok, max_residual=res)
    sign = -1 if ((d - 1) * a) % 2 else 1
    target = _identity(d, exact)
    target = target.times_int(sign) if exact else sign * target
    ok, res = _mat_equal(_power(v, d), target, tol)
    report.add("V^d = e^{i pi (d-1) a} I", ok, max_residual=res, details={"sign": sign})
    ok, res = _mat_equal(_power(z, d), _identity(d, exact), tol)
    report.add("Z^d = I", ok, max_residual=res)
    ok, res = _mat_equal(v, x @ _power(z, a), tol)
    report.add("V = X Z^a", ok, max_residual=res)
    return report


@dataclass(frozen=True)
class PauliOperator:
    """``X^a Z^b`` with exponents reduced mod ``d``."""

    d: int
    a: int
    b: int

    def __post_init__(self) -> None:
        _check_d(self.d)
        object.__setattr__(self, "a", self.a % self.d)
        object.__setattr__(self, "b", self.b % self.d)

    @property
    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        parts = [f"X^{self.a}" if self.a else "", f"Z^{self.b}" if self.b else ""]
        return "".join(parts) or "I"

    def product_phase_exponent(self, other: "PauliOperator") -> int:
        """``k`` in ``self * other = q**k X^(a+c) Z^(b+e)``."""
        return (-self.b * other.a) % self.d

    def commutes_with(self, other: "PauliOperator") -> bool:
        """Symplectic criterion ``a e - b c = 0 (mod d)``."""
        return (self.a * other.b - self.b * other.a) % self.d == 0


def pauli_matrix(op: PauliOperator, exact: bool = False) -> np.ndarray | ExactArray:
    return _power(x_matrix(op.d, exact), op.a) @ _power(z_matrix(op.d, exact), op.b)


def all_paulis(d: int, include_identity: bool = False) -> list[PauliOperator]:
    return [PauliOperator(d, a, b) for a in range(d) for b in range(d) if include_identity or (a, b) != (0, 0)]


@dataclass(frozen=True)
class CommutingClass:
    d: int
    label: int
    members: tuple[PauliOperator, ...]


def partition(p: int) -> list[CommutingClass]:
    """``V_0 = {Z^a}`` and ``V_(c+1) = {X^a Z^(ca)}`` for ``c = 0..p-1``, ``a = 1..p-1``."""
    p = _check_prime(p)
    classes = [CommutingClass(p, 0, tuple(PauliOperator(p, 0, a) for a in range(1, p)))]
    for c in range(p):
        classes.append(CommutingClass(p, c + 1, tuple(PauliOperator(p, a, c * a) for a in range(1, p))))
    return classes


def class_of(op: PauliOperator) -> int:
    """Label of the class containing a non-identity operator (prime ``d``)."""
    if op.is_identity:
        raise ValueError("the identity belongs to no class")
    if op.a == 0:
        return 0
    # b = c a  =>  c = b a^{-1}
    return (op.b * pow(op.a, -1, op.d)) % op.d + 1


def _commute_matrices(m1, m2, tol: float) -> bool:
    return _mat_equal(m1 @ m2, m2 @ m1, tol)[0]


def check_partition(p: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """Commutation inside classes, disjoint cover, ``V_0a`` in class ``a+1``, no cross-class commutation."""
    p = _check_prime(p)
    classes = partition(p)
    report = Report(f"partition p={p}", "exact" if exact else "float")
    mats = {op: pauli_matrix(op, exact) for op in all_paulis(p)}

    witness = None
    for cl in classes:
        for o1, o2 in combinations(cl.members, 2):
            if not (o1.commutes_with(o2) and _commute_matrices(mats[o1], mats[o2], tol)):
                witness = witness or {"class": cl.label, "ops": [str(o1), str(o2)]}
    report.add("within-class commutation", witness is None, witness=witness)

    members = [op for cl in classes for op in cl.members]
    cover = set(members) == set(all_paulis(p)) and len(members) == len(set(members)) == p * p - 1
    report.add("disjoint cover", cover, details={"classes": len(classes), "size": len(members)})

    witness = None
    for a in range(p):
        v = v0a_matrix(p, a, exact)
        op = PauliOperator(p, 1, a)
        if class_of(op) != a + 1 or not _mat_equal(v, mats[op], tol)[0]:
            witness = witness or {"a": a}
    report.add("V_0a in class a+1", witness is None, witness=witness)

    witness = None
    for c1, c2 in combinations(classes, 2):
        for o1 in c1.members:
            for o2 in c2.members:
                if o1.commutes_with(o2) or _commute_matrices(mats[o1], mats[o2], tol):
                    witness = witness or {"classes": [c1.label, c2.label], "ops": [str(o1), str(o2)]}
    report.add("cross-class non-commutation", witness is None, witness=witness)
    return report


def trace_gram(ops: list[PauliOperator], exact: bool = True) -> ExactArray | np.ndarray:
    """``G[i, j] = Tr(A_i^dag A_j)``."""
    mats = [pauli_matrix(op, exact) for op in ops]
    if exact:
        d = mats[0].d
        flat = ExactArray(d, np.stack([m.coeffs.reshape(-1, 2 * d) for m in mats]), mats[0].scale)
        return flat.conj() @ flat.T
    flat = np.stack([m.ravel() for m in mats])
    return flat.conj() @ flat.T


def check_cartan(p: int, exact: bool = True, tol: float = FLOAT_TOL) -> Report:
    """Operational content of the su(p) splitting into ``1 + p`` abelian pieces of dimension ``p - 1``.

    The ``p^2 - 1`` non-identity Paulis are traceless and trace-orthogonal
    (Gram ``= p I``), hence linearly independent; each class is abelian and
    the class dimensions add up to ``p^2 - 1``.
    """
    p = _check_prime(p)
    ops = all_paulis(p)
    report = Report(f"Cartan splitting p={p}", "exact" if exact else "float")
    gram = trace_gram(ops, exact)
    if exact:
        report.add("Gram = d I", gram.is_scalar_identity(p))
        report.add("traceless", all(_exact_trace_zero(pauli_matrix(op, True)) for op in ops))
    else:
        res = float(np.abs(gram - p * np.eye(len(ops))).max())
        report.add("Gram = d I", res < tol, max_residual=res)
        tr = max(abs(np.trace(pauli_matrix(op))) for op in ops)
        report.add("traceless", tr < tol, max_residual=float(tr))
    rank = int(np.linalg.matrix_rank(np.stack([pauli_matrix(op).ravel() for op in ops])))
    report.add("linearly independent", rank == p * p - 1, details={"rank": rank})
    classes = partition(p)
    abelian = check_partition(p, exact, tol).checks[0].passed
    report.add("classes abelian", abelian)
    dims = [len(cl.members) for cl in classes]
    report.add("dimension count", sum(dims) == p * p - 1 and all(x == p - 1 for x in dims),
               details={"classes": len(classes), "class_dim": p - 1, "total": sum(dims)})
    return report


def _exact_trace_zero(m: ExactArray) -> bool:
    diag = m.coeffs[np.arange(m.shape[0]), np.arange(m.shape[0])].sum(axis=0)
    return not ExactArray(m.d, diag[None, :], m.scale).reduced().any()


def partition_rows(p: int) -> list[tuple[int, int, int]]:
    """``(class_label, a, b)`` rows ordered by label then ``a``."""
    rows = [(cl.label, op.a, op.b) for cl in partition(p) for op in cl.members]
    return sorted(rows)


def partition_csv(p: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["class_label", "a", "b"])
    w.writerows(partition_rows(p))
    return buf.getvalue()
