"""End-to-end acceptance checks, one test per criterion."""

import time
from itertools import combinations

import numpy as np

from mubkit.mub import (
    check_form_equivalence,
    check_odd_pair,
    check_unbiased,
    complete_set_prime,
    naive_set,
    overlap_moduli,
    triple_set,
    verify_set,
    w_bases,
)
from mubkit.qdft import (
    check_diagonalization,
    check_fourth_power,
    check_parseval,
    overlap_via_gauss,
)
from mubkit.su2basis import (
    RaParameters,
    SpinLabel,
    check_eigen_relation,
    check_su2_commutators,
    polar_generators,
)
from mubkit.weylpauli import check_cartan, check_partition, check_v0a_weyl, check_weyl, partition


def test_criterion_1_complete_sets_for_primes(acceptance):
    start = time.perf_counter()
    failures = []
    for p in (2, 3, 5, 7, 11, 13):
        bases = complete_set_prime(p, exact=True)
        rep = verify_set(bases, exact=True)
        n_pairs = (p + 1) * p // 2
        if len(bases) != p + 1 or rep.unbiased_pairs != n_pairs or not rep.passed:
            failures.append(p)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10.0
    acceptance(1, ok, f"primes 2..13 exactly unbiased, {elapsed:.2f}s (limit 10s), failures={failures}")
    assert not failures
    assert elapsed < 10.0


def test_criterion_2_five_mubs_in_dimension_four(acceptance):
    bases = w_bases(exact=True)
    rep = verify_set(bases, exact=True)
    moduli_ok = all(np.allclose(overlap_moduli(b1, b2), 0.5, atol=1e-12) for b1, b2 in combinations(bases, 2))
    naive = verify_set(naive_set(4, exact=True), exact=True)
    witness = naive.first_failure.witness if naive.first_failure else None
    ok = (len(bases) == 5 and rep.unbiased_pairs == 10 and rep.passed and moduli_ok
          and not naive.passed and witness is not None)
    acceptance(2, ok, f"W bases: {rep.unbiased_pairs}/10 unbiased pairs; naive set witness={witness}")
    assert rep.unbiased_pairs == 10 and rep.passed and moduli_ok
    assert not naive.passed and witness is not None


def test_criterion_3_three_mubs_and_odd_pairs(acceptance):
    bad_triples = [(d, a) for d in range(2, 13) for a in range(d) if not verify_set(triple_set(d, a), exact=True).passed]
    bad_odd = [(d, a) for d in (3, 5, 7, 9, 11, 15) for a in range(d) if not check_odd_pair(d, a, exact=True).passed]
    ok = not bad_triples and not bad_odd
    acceptance(3, ok, f"triples d=2..12 all a, odd pairs d in 3,5,7,9,11,15; failures={bad_triples + bad_odd}")
    assert not bad_triples
    assert not bad_odd


def test_criterion_4_gauss_sum_overlaps(acceptance):
    worst = 0.0
    exact_bad = []
    count = 0
    for d in range(2, 10):
        for a in range(d):
            for b in range(d):
                if a == b:
                    continue
                for alpha in range(d):
                    for beta in range(d):
                        g = overlap_via_gauss(d, a, alpha, b, beta, exact=True)
                        worst = max(worst, g.residual)
                        count += 1
                        if not g.exact_agrees:
                            exact_bad.append((d, a, b, alpha, beta))
    ok = worst < 1e-12 and not exact_bad
    acceptance(4, ok, f"{count} overlaps, max float residual {worst:.2e} (tol 1e-12), exact mismatches={len(exact_bad)}")
    assert worst < 1e-12
    assert not exact_bad


def test_criterion_5_su2_polar_decomposition(acceptance):
    grid = np.linspace(-2.0, 2.0, 5)
    worst_comm = 0.0
    worst_eig = 0.0
    degenerate = []
    for two_j in range(0, 10):
        j = SpinLabel(two_j)
        for r in grid:
            for a in grid:
                p = RaParameters(float(r), float(a))
                rep = check_su2_commutators(*polar_generators(j, p), tol=1e-10)
                worst_comm = max(worst_comm, rep.max_residual)
                for alpha in range(j.d):
                    er = check_eigen_relation(j, p, alpha, tol=1e-12)
                    worst_eig = max(worst_eig, er.max_residual)
                    if not all(c.passed for c in er.checks if "nondegenerate" in c.name):
                        degenerate.append((two_j, r, a, alpha))
    ok = worst_comm < 1e-10 and worst_eig < 1e-12 and not degenerate
    acceptance(5, ok, f"commutator/Casimir max {worst_comm:.2e} (tol 1e-10), eigen max {worst_eig:.2e} (tol 1e-12), "
                      f"degenerate={len(degenerate)}")
    assert worst_comm < 1e-10
    assert worst_eig < 1e-12
    assert not degenerate


def test_criterion_6_fourier_facts(acceptance):
    fourth_bad = [d for d in range(2, 13) if not check_fourth_power(d, exact=True).passed]
    rng = np.random.default_rng(0)
    worst = 0.0
    for d in range(2, 13):
        for _ in range(100):
            x = rng.normal(size=d) + 1j * rng.normal(size=d)
            xp = rng.normal(size=d) + 1j * rng.normal(size=d)
            worst = max(worst, check_parseval(x, xp, d, tol=1e-12).max_residual)
    diag_bad = [(d, a) for d in range(2, 10) for a in range(d) if not check_diagonalization(d, a, exact=True).passed]
    ok = not fourth_bad and worst < 1e-12 and not diag_bad
    acceptance(6, ok, f"(H00)^4=I failures={fourth_bad}; Parseval max {worst:.2e} (tol 1e-12); "
                      f"diagonalization failures={diag_bad}")
    assert not fourth_bad
    assert worst < 1e-12
    assert not diag_bad


def test_criterion_7_weyl_and_pauli_structure(acceptance):
    start = time.perf_counter()
    weyl_bad = [d for d in range(2, 13) if not check_weyl(d, exact=True).passed]
    v0a_bad = [(d, a) for d in range(2, 13) for a in range(d) if not check_v0a_weyl(d, a, exact=True).passed]
    part_bad = []
    for p in (2, 3, 5, 7):
        classes = partition(p)
        shape_ok = len(classes) == p + 1 and all(len(c.members) == p - 1 for c in classes)
        if not (shape_ok and check_partition(p, exact=True).passed and check_cartan(p, exact=True).passed):
            part_bad.append(p)
    elapsed = time.perf_counter() - start
    ok = not weyl_bad and not v0a_bad and not part_bad and elapsed < 30.0
    acceptance(7, ok, f"Weyl/V0a d=2..12, partition+Cartan p=2,3,5,7; failures={weyl_bad + v0a_bad + part_bad}; "
                      f"{elapsed:.2f}s (limit 30s)")
    assert not weyl_bad and not v0a_bad and not part_bad
    assert elapsed < 30.0


def test_criterion_8_form_equivalence(acceptance):
    bad = [(d, a) for d in range(2, 10) for a in range(d) if not check_form_equivalence(d, a, exact=True)]
    acceptance(8, not bad, f"n-form vs k-form exact for d=2..9, all a; failures={bad}")
    assert not bad
