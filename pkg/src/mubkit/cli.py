"""Command-line front end.

Exit status: 0 when every check passes, 1 on a verification failure (the
artifact carries a witness), 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import mub, qdft, su2basis, weylpauli
from .phasering import MAX_DIMENSION, reduce
from .report import Report
from .serialize import SCHEMA_VERSION, bases_document

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    sub: str | None
    d: int | None
    a: float | None
    b: int | None
    alpha: int | None
    beta: int | None
    r: float
    mode: str
    tol: float
    output_format: str
    output_path: str | None
    seed: int
    naive: bool
    samples: int
    workers: int | None
    timing: bool
    u: int | None = None
    v: int | None = None
    w: int | None = None

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def echo(self) -> dict[str, Any]:
        keys = ("command", "sub", "d", "a", "b", "alpha", "beta", "r", "mode", "tol", "seed", "naive", "samples", "u", "v", "w")
        return {k: getattr(self, k) for k in keys if getattr(self, k) not in (None, False)}


_TIGHT_TOL = {"mub-set", "parseval", "gauss-overlap", "weyl", "partition", "cartan"}


def _default_mode() -> str:
    mode = os.environ.get("MUBKIT_MODE", "exact").strip().lower() or "exact"
    if mode not in ("exact", "float"):
        raise ConfigError(f"MUBKIT_MODE must be 'exact' or 'float', got {mode!r}")
    return mode


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", "--p", dest="d", type=int, help="dimension (prime for complete-prime/partition/cartan)")
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=int)
    common.add_argument("--alpha", type=int)
    common.add_argument("--beta", type=int)
    common.add_argument("--r", type=float, default=0.0)
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic mode (default: $MUBKIT_MODE or exact)")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--output", dest="output_path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100, help="random vector pairs for parseval")
    common.add_argument("--naive", action="store_true", help="mub-set: use B_00..B_0(d-1) and B_d regardless of d")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="include wall time in the artifact")

    parser = argparse.ArgumentParser(prog="mubkit", description="Mutually unbiased bases from the quadratic Fourier formula")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate bases")
    gsub = gen.add_subparsers(dest="sub", required=True)
    for name in ("b0a", "complete-prime", "w4", "tensor"):
        gsub.add_parser(name, parents=[common])

    ver = sub.add_parser("verify", help="run verification checks")
    vsub = ver.add_subparsers(dest="sub", required=True)
    for name in ("mub-set", "su2", "weyl", "partition", "cartan", "parseval", "gauss-overlap"):
        vsub.add_parser(name, parents=[common])

    gauss = sub.add_parser("gauss", help="evaluate S(u, v, w)", parents=[common])
    gauss.add_argument("--u", type=int, required=True)
    gauss.add_argument("--v", type=int, required=True)
    gauss.add_argument("--w", type=int, required=True)
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    mode = ns.mode or _default_mode()
    sub = getattr(ns, "sub", None)
    tol = ns.tol if ns.tol is not None else (1e-12 if sub in _TIGHT_TOL else su2basis.DEFAULT_TOL)
    cfg = RunConfig(
        command=ns.command, sub=getattr(ns, "sub", None), d=ns.d, a=ns.a, b=ns.b, alpha=ns.alpha,
        beta=ns.beta, r=ns.r, mode=mode, tol=tol, output_format=ns.output_format,
        output_path=ns.output_path, seed=ns.seed, naive=ns.naive, samples=ns.samples,
        workers=ns.workers, timing=ns.timing,
        u=getattr(ns, "u", None), v=getattr(ns, "v", None), w=getattr(ns, "w", None),
    )
    if cfg.d is not None and not 2 <= cfg.d <= MAX_DIMENSION:
        raise ConfigError(f"d={cfg.d} outside the supported range 2..{MAX_DIMENSION}")
    if cfg.exact:
        if cfg.r != 0:
            raise ConfigError("exact mode requires r = 0; use --mode float for general r")
        if cfg.a is not None and not float(cfg.a).is_integer():
            raise ConfigError("exact mode requires an integer a; use --mode float")
    return cfg


def _need(cfg: RunConfig, name: str) -> Any:
    val = getattr(cfg, name)
    if val is None:
        raise ConfigError(f"--{name} is required for {cfg.command} {cfg.sub or ''}".rstrip())
    return val


def _int_a(cfg: RunConfig, default: int | None = None) -> int:
    if cfg.a is None:
        if default is None:
            raise ConfigError("--a is required")
        return default
    if not float(cfg.a).is_integer():
        raise ConfigError("this command needs an integer a")
    return int(cfg.a)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(cfg: RunConfig) -> tuple[dict[str, Any], list[mub.Basis], bool]:
    exact = cfg.exact
    if cfg.sub == "b0a":
        bases = [mub.basis_b0a(_need(cfg, "d"), _int_a(cfg), exact)]
    elif cfg.sub == "complete-prime":
        d = _need(cfg, "d")
        if not mub.is_prime(d):
            raise ConfigError(f"d={d} is not prime")
        bases = mub.complete_set_prime(d, exact)
    elif cfg.sub == "w4":
        bases = mub.w_bases(exact)
    elif cfg.sub == "tensor":
        a, b = _int_a(cfg), _need(cfg, "b")
        if a not in (0, 1) or b not in (0, 1):
            raise ConfigError("tensor needs a, b in {0, 1}")
        bases = [mub.tensor_basis(a, b, exact)]
    else:  # pragma: no cover - argparse guards this
        raise ConfigError(f"unknown gen subcommand {cfg.sub}")
    doc = bases_document(bases, f"gen {cfg.sub}")
    doc["mode"] = cfg.mode
    doc["config"] = cfg.echo()
    return doc, bases, True


def _mub_set_bases(cfg: RunConfig) -> list[mub.Basis]:
    d = _need(cfg, "d")
    if cfg.naive:
        return mub.naive_set(d, cfg.exact)
    if mub.is_prime(d):
        return mub.complete_set_prime(d, cfg.exact)
    if d == 4:
        return mub.w_bases(cfg.exact)
    return mub.triple_set(d, _int_a(cfg, 0), cfg.exact)


def _report_from_mub(rep: mub.MubReport, title: str) -> Report:
    out = Report(title, rep.mode)
    for p in rep.pairs:
        out.add(f"{p.first} vs {p.second}: {p.verdict}", p.passed, max_residual=p.max_deviation, witness=p.witness)
    return out


def cmd_verify(cfg: RunConfig) -> tuple[dict[str, Any], Report, Any]:
    exact = cfg.exact
    extra: Any = None
    if cfg.sub == "mub-set":
        bases = _mub_set_bases(cfg)
        rep = mub.verify_set(bases, exact, tol=cfg.tol, workers=cfg.workers)
        report = _report_from_mub(rep, f"mub-set d={cfg.d}")
        extra = bases
    elif cfg.sub == "su2":
        d = _need(cfg, "d")
        j = su2basis.SpinLabel.from_dimension(d)
        p = su2basis.RaParameters(cfg.r, cfg.a if cfg.a is not None else 0.0)
        report = Report(f"su2 d={d}", cfg.mode)
        report.extend(su2basis.check_su2_commutators(*su2basis.polar_generators(j, p), tol=cfg.tol))
        for alpha in range(d):
            report.extend(su2basis.check_eigen_relation(j, p, alpha, tol=cfg.tol, exact=exact), prefix=f"alpha={alpha}: ")
        report.extend(su2basis.check_orthonormality(j, p, tol=cfg.tol, exact=exact))
    elif cfg.sub == "weyl":
        d = _need(cfg, "d")
        report = Report(f"weyl d={d}", cfg.mode)
        report.extend(weylpauli.check_weyl(d, exact, tol=cfg.tol))
        a_values = [_int_a(cfg)] if cfg.a is not None else range(d)
        for a in a_values:
            report.extend(weylpauli.check_v0a_weyl(d, a, exact, tol=cfg.tol), prefix=f"a={a}: ")
    elif cfg.sub in ("partition", "cartan"):
        p = _need(cfg, "d")
        if not mub.is_prime(p):
            raise ConfigError(f"p={p} is not prime")
        if cfg.sub == "partition":
            report = weylpauli.check_partition(p, exact, tol=cfg.tol)
            extra = weylpauli.partition_rows(p)
        else:
            report = weylpauli.check_cartan(p, exact, tol=cfg.tol)
    elif cfg.sub == "parseval":
        d = _need(cfg, "d")
        rng = np.random.default_rng(cfg.seed)
        report = Report(f"parseval d={d}", "float")
        tol = cfg.tol
        worst = 0.0
        witness = None
        for i in range(cfg.samples):
            x = rng.normal(size=d) + 1j * rng.normal(size=d)
            xp = rng.normal(size=d) + 1j * rng.normal(size=d)
            r = qdft.check_parseval(x, xp, d, tol=tol)
            worst = max(worst, r.max_residual or 0.0)
            if not r.passed and witness is None:
                witness = {"sample": i}
        report.add(f"{cfg.samples} random pairs, all a", witness is None, max_residual=worst, witness=witness)
    elif cfg.sub == "gauss-overlap":
        d = _need(cfg, "d")
        report = qdft.check_gauss_overlaps(d, exact, tol=cfg.tol)
    else:  # pragma: no cover
        raise ConfigError(f"unknown verify subcommand {cfg.sub}")
    doc = {"schema": SCHEMA_VERSION, "command": f"verify {cfg.sub}", "config": cfg.echo(), **report.to_dict()}
    if extra is not None and cfg.sub == "partition":
        doc["classes"] = [list(r) for r in extra]
    return doc, report, extra


def cmd_gauss(cfg: RunConfig) -> dict[str, Any]:
    params = qdft.GaussSumParams(cfg.u, cfg.v, cfg.w)
    bad = params.violations()
    if bad:
        raise ConfigError(f"S({cfg.u}, {cfg.v}, {cfg.w}) rejected: condition violated: " + "; ".join(bad))
    val = qdft.gauss_sum(cfg.u, cfg.v, cfg.w)
    ex = qdft.gauss_sum(cfg.u, cfg.v, cfg.w, exact=True)
    red = reduce(ex.elem)
    return {
        "schema": SCHEMA_VERSION,
        "command": "gauss",
        "config": cfg.echo(),
        "exact": {
            "ring_d": ex.d,
            "omega_exponents": {str(k): c for k, c in enumerate(ex.elem.coeffs) if c},
            "reduced": list(red.coeffs),
        },
        "value": {"re": _f(val.real), "im": _f(val.imag)},
        "modulus": _f(abs(val)),
    }


def _f(x: float) -> float:
    x = float(f"{x:.17g}")
    return 0.0 if abs(x) < 1e-15 else x


# ---------------------------------------------------------------------------
# rendering


def _json(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _report_table(report: Report) -> str:
    lines = [f"{report.title} [{report.mode}]"]
    for c in report.checks:
        res = "" if c.max_residual is None else f"  residual={c.max_residual:.3e}"
        wit = "" if c.witness is None else f"  witness={json.dumps(c.witness, sort_keys=True)}"
        lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.name}{res}{wit}")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def overlap_table(bases: Sequence[mub.Basis]) -> str:
    """Overlap moduli times sqrt(d) for every pair; unbiased pairs print as all ones."""
    out = []
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            m = mub.overlap_moduli(bases[i], bases[j]) * math.sqrt(bases[i].d)
            out.append(f"{bases[i].name} vs {bases[j].name}  (|<u|v>| * sqrt(d))")
            for row in m:
                out.append("  " + " ".join(f"{x:6.3f}" for x in row))
    return "\n".join(out) + "\n"


def _bases_csv(bases: Sequence[mub.Basis]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["basis", "kind", "vector", "component", "re", "im"])
    for b in bases:
        m = b.matrix
        for i in range(b.d):
            for n in range(b.d):
                w.writerow([b.name, b.kind, i, n, repr(_f(m[i, n].real)), repr(_f(m[i, n].imag))])
    return buf.getvalue()


def _report_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "passed", "max_residual", "witness"])
    for c in report.checks:
        w.writerow([c.name, int(c.passed), "" if c.max_residual is None else repr(c.max_residual),
                    "" if c.witness is None else json.dumps(c.witness, sort_keys=True)])
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        cfg = make_config(ns)
        if cfg.command == "gen":
            doc, bases, ok = cmd_gen(cfg)
            if cfg.timing:
                doc["wall_time"] = time.perf_counter() - start
            if cfg.output_format == "csv":
                text = _bases_csv(bases)
            elif cfg.output_format == "table":
                text = overlap_table(bases) if len(bases) > 1 else _bases_csv(bases)
            else:
                text = _json(doc)
            _emit(text, cfg)
            return EXIT_OK
        if cfg.command == "verify":
            doc, report, extra = cmd_verify(cfg)
            if cfg.timing:
                doc["wall_time"] = time.perf_counter() - start
            if cfg.output_format == "csv":
                text = weylpauli.partition_csv(cfg.d) if cfg.sub == "partition" else _report_csv(report)
            elif cfg.output_format == "table":
                text = _report_table(report)
                if cfg.sub == "mub-set":
                    text += overlap_table(extra)
            else:
                text = _json(doc)
            _emit(text, cfg)
            return EXIT_OK if report.passed else EXIT_FAIL
        if cfg.command == "gauss":
            doc = cmd_gauss(cfg)
            if cfg.output_format == "table":
                v = doc["value"]
                text = f"S({cfg.u}, {cfg.v}, {cfg.w}) = {v['re']:+.12g} {v['im']:+.12g}i  |S| = {doc['modulus']:.12g}\n"
            else:
                text = _json(doc)
            _emit(text, cfg)
            return EXIT_OK
    except (ConfigError, qdft.InvalidGaussParams, ValueError) as exc:
        print(f"mubkit: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG  # pragma: no cover


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
