"""Batch command-line front end.

Every command reads one JSON document (``--input``, ``-`` for stdin) and
writes one report (``--output``, ``-`` for stdout).  Exit codes: 0 success,
1 computation failure or rejected certificate, 2 invalid input, 3 cap
exceeded, 64 usage error.  Errors go to stderr as a JSON line carrying a
stable ``error`` code.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional

from . import __version__
from .complex_case import DEFAULT_MAX_PAIRS, beck_dichotomy, complex_certificate
from .errors import InvalidInput, TwistSumError
from .gp import PointSet, constructive_bound, gp_recurrence_bound, validate_general_position
from .montecarlo import sample_sums
from .pairing import PROOF_RULE, greedy_pairs
from .scalar import format_scalar, parse_scalar, parse_vector
from .support import (
    DEFAULT_CAP_M,
    DEFAULT_CAP_N,
    TupleInput,
    count_distinct_subset_sums,
    distinct_subset_sums,
    exact_support,
)
from .witness import (
    GENERATORS,
    WitnessCertificate,
    build_certificate,
    explore_t_asymptotics,
    verify_certificate,
)

SCHEMA_VERSION = 1
THREADS_ENV = "TWISTSUM_THREADS"
EXIT_USAGE = 64

COMMANDS = (
    "support",
    "subset-sums",
    "pairs",
    "witness-real",
    "witness-complex",
    "gp-bound",
    "beck",
    "mc",
    "explore-t",
    "verify",
)
CSV_COMMANDS = ("support", "mc")


class UsageError(Exception):
    pass


class MalformedInput(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    input_path: str = "-"
    output_path: str = "-"
    format: str = "json"
    threads: int = 1
    seed: int = 0
    max_exact_n: int = DEFAULT_CAP_N
    cap_subsets: int = DEFAULT_CAP_M
    samples: Optional[int] = None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistsum", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"twistsum {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", default="-", help="input JSON path ('-' for stdin)")
    p.add_argument("--output", "-o", default="-", help="report path ('-' for stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo sample count (overrides the input)")
    p.add_argument("--max-exact-n", type=int, default=DEFAULT_CAP_N)
    p.add_argument("--cap-subsets", type=int, default=DEFAULT_CAP_M)
    return p


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    threads = ns.threads
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise UsageError(f"${THREADS_ENV} must be an integer, got {env!r}")
    if threads < 1 or ns.max_exact_n < 1 or ns.cap_subsets < 1:
        raise UsageError("--threads and caps must be at least 1")
    if ns.format == "csv" and ns.command not in CSV_COMMANDS:
        raise UsageError(f"csv output is only available for {', '.join(CSV_COMMANDS)}")
    return RunConfig(
        command=ns.command,
        input_path=ns.input,
        output_path=ns.output,
        format=ns.format,
        threads=threads,
        seed=ns.seed,
        max_exact_n=ns.max_exact_n,
        cap_subsets=ns.cap_subsets,
        samples=ns.samples,
    )


def _read_input(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"input is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise MalformedInput("input must be a JSON object")
    return doc


def _field(doc: dict, name: str):
    if name not in doc:
        raise MalformedInput(f"input lacks the {name!r} field")
    return doc[name]


def _kind(doc: dict) -> str:
    kind = doc.get("kind", "rational")
    if kind not in ("rational", "gaussian"):
        raise MalformedInput(f"unknown kind {kind!r}")
    return kind


def _tuples(doc: dict) -> tuple[str, TupleInput, TupleInput]:
    kind = _kind(doc)
    a = TupleInput.parse(_field(doc, "a"), kind)
    b = TupleInput.parse(_field(doc, "b"), kind)
    return kind, a, b


def _echo(kind: str, a: TupleInput, b: TupleInput) -> dict:
    return {"kind": kind, "a": a.to_json(), "b": b.to_json()}


def cmd_support(doc: dict, cfg: RunConfig) -> dict:
    kind, a, b = _tuples(doc)
    summary = exact_support(a, b, cap_n=cfg.max_exact_n, workers=cfg.threads)
    return {"kind": kind, "n": a.n, "support": summary.to_json()}


def cmd_subset_sums(doc: dict, cfg: RunConfig) -> dict:
    if "points" in doc:
        ps = PointSet.parse(doc)
        values: list = list(ps.points)
        out: dict[str, Any] = {"d": ps.d}
    else:
        kind = _kind(doc)
        values = [parse_scalar(v, kind) for v in _field(doc, "values")]
        out = {"kind": kind}
    count, sums = distinct_subset_sums(values, cap_m=cfg.cap_subsets)
    out.update({"m": len(values), "count": count, "sums": [format_scalar(s) for s in sums]})
    return out


def cmd_pairs(doc: dict, cfg: RunConfig) -> dict:
    kind = _kind(doc)
    rule = doc.get("rule", PROOF_RULE)
    out: dict[str, Any] = {"kind": kind, "rule": rule}
    for name in ("a", "b"):
        if name in doc:
            t = TupleInput.parse(doc[name], kind)
            out[name] = greedy_pairs(t.entries, rule=rule).to_json()
    if "a" not in out and "b" not in out:
        raise MalformedInput("input needs an 'a' or 'b' tuple")
    return out


def cmd_witness_real(doc: dict, cfg: RunConfig) -> dict:
    kind, a, b = _tuples(doc)
    if kind != "rational":
        raise MalformedInput("witness-real needs kind 'rational'")
    cert = build_certificate(a, b, workers=cfg.threads)
    return {**_echo(kind, a, b), "certificate": cert.to_json()}


def cmd_witness_complex(doc: dict, cfg: RunConfig) -> dict:
    kind, a, b = _tuples(doc)
    a, b = TupleInput(a.entries, "gaussian"), TupleInput(b.entries, "gaussian")
    tau = doc.get("tau")
    cert = complex_certificate(
        a, b, tau=tau, max_pairs=int(doc.get("max_pairs", DEFAULT_MAX_PAIRS)), workers=cfg.threads
    )
    return {**_echo("gaussian", a, b), "certificate": cert.to_json()}


def cmd_gp_bound(doc: dict, cfg: RunConfig) -> dict:
    d = int(_field(doc, "d"))
    if "points" not in doc:
        return {"recurrence": gp_recurrence_bound(d, int(_field(doc, "m"))).to_json()}
    ps = PointSet.parse(doc)
    ok, bad = validate_general_position(ps)
    out: dict[str, Any] = {
        "d": d,
        "m": ps.m,
        "general_position": ok,
        "violator": [format_scalar(p) for p in bad] if bad else None,
        "recurrence": gp_recurrence_bound(d, ps.m).to_json(),
    }
    if ok:
        bound, trace = constructive_bound(ps)
        out["constructive_bound"] = bound
        out["trace"] = trace
    if ps.m <= cfg.cap_subsets:
        out["exact_subset_sums"] = count_distinct_subset_sums(list(ps.points), cap_m=cfg.cap_subsets)
    return out


def cmd_beck(doc: dict, cfg: RunConfig) -> dict:
    out: dict[str, Any] = {}
    names = [k for k in ("points", "a", "b") if k in doc]
    if not names:
        raise MalformedInput("input needs 'points', 'a' or 'b'")
    for name in names:
        pts = [parse_scalar(v, "gaussian") for v in doc[name]]
        tau = int(doc.get("tau", max(2, len(pts))))
        out[name] = beck_dichotomy(pts, tau).to_json()
    return out


def cmd_mc(doc: dict, cfg: RunConfig) -> dict:
    kind, a, b = _tuples(doc)
    samples = cfg.samples if cfg.samples is not None else int(doc.get("samples", 10_000))
    rep = sample_sums(a, b, samples, seed=cfg.seed, workers=cfg.threads)
    return {"kind": kind, "report": rep.to_json(with_table=True), "_table": rep.frequencies}


def cmd_explore_t(doc: dict, cfg: RunConfig) -> dict:
    gen = doc.get("generator", "squares")
    if gen not in GENERATORS:
        raise MalformedInput(f"unknown generator {gen!r}; choose from {sorted(GENERATORS)}")
    m_values = [int(m) for m in _field(doc, "m_values")]
    if any(m < 1 for m in m_values):
        raise MalformedInput("m_values must be positive")
    return {"generator": gen, "reports": [r.to_json() for r in explore_t_asymptotics(gen, m_values)]}


def cmd_verify(doc: dict, cfg: RunConfig) -> dict:
    kind, a, b = _tuples(doc)
    cert = WitnessCertificate.from_json(_field(doc, "certificate"), kind)
    verdict = verify_certificate(a, b, cert)
    return {"valid": verdict.ok, "reason": verdict.reason, "detail": verdict.detail, "claimed_count": cert.claimed_count}


HANDLERS: dict[str, Callable[[dict, RunConfig], dict]] = {
    "support": cmd_support,
    "subset-sums": cmd_subset_sums,
    "pairs": cmd_pairs,
    "witness-real": cmd_witness_real,
    "witness-complex": cmd_witness_complex,
    "gp-bound": cmd_gp_bound,
    "beck": cmd_beck,
    "mc": cmd_mc,
    "explore-t": cmd_explore_t,
    "verify": cmd_verify,
}


def _render_csv(cfg: RunConfig, report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if cfg.command == "support":
        summ = report["support"]
        if "values" not in summ:
            raise UsageError("support too large to list; use json output")
        w.writerow(["value", "multiplicity"])
        for v, c in zip(summ["values"], summ["multiplicities"]):
            w.writerow([json.dumps(v, sort_keys=True) if isinstance(v, dict) else v, c])
    else:
        w.writerow(["value", "frequency"])
        for v, c in report["_table"]:
            fv = format_scalar(v)
            w.writerow([json.dumps(fv, sort_keys=True) if isinstance(fv, dict) else fv, c])
    return buf.getvalue()


def run(cfg: RunConfig) -> tuple[int, str]:
    doc = _read_input(cfg.input_path)
    report = HANDLERS[cfg.command](doc, cfg)
    if cfg.format == "csv":
        return 0, _render_csv(cfg, report)
    report.pop("_table", None)
    report = {"schema_version": SCHEMA_VERSION, "version": __version__, "command": cfg.command, **report}
    code = 1 if cfg.command == "verify" and not report["valid"] else 0
    return code, json.dumps(report, indent=2, sort_keys=True) + "\n"


def _diagnostic(code: str, message: str) -> None:
    print(json.dumps({"error": code, "message": message}, sort_keys=True), file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
        status, text = run(cfg)
    except UsageError as exc:
        _diagnostic("UsageError", str(exc))
        return EXIT_USAGE
    except TwistSumError as exc:
        _diagnostic(exc.code, str(exc))
        return exc.exit_code
    except (KeyError, TypeError, ValueError) as exc:
        _diagnostic("MalformedInput", str(exc))
        return InvalidInput.exit_code
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status
