"""Command-line front end.

    hadspec [--config cfg.json] [--out DIR] [--seed S] [--workers K] TASK [task flags]
    hadspec --config cfg.json run

The config is one JSON document with keys ``triple``, ``task``, ``params`` and
``output``.  Integers are written as decimal strings, e.g.
{"triple": {"N": "4", "B": ["0", "2"], "L": ["0", "1"]}}.  Task flags given
on the command line override ``params``.

Exit status: 0 success, 1 a mathematical precondition failed, 2 config or
resource problems.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import fourier, numtheory, selfsimilar, spectrum
from .errors import ConfigError, DomainError, HadspecError, ResourceError
from .hadamard import HadamardTriple, verify

TASKS = (
    "verify", "cycles", "spectrum", "eigenvalue", "scan", "power-closure", "dp-scan",
    "fourier-q", "order-stats", "pplus-stats", "dickman", "eh-sum",
)
NEEDS_TRIPLE = {"verify", "cycles", "spectrum", "eigenvalue", "scan", "power-closure", "dp-scan", "fourier-q"}
PARAM_KEYS = {
    "q", "x", "delta", "depth", "levels", "M", "budget", "grid", "seed", "primes",
    "p", "a", "u", "theta", "scale", "steps",
}
_INT_RE = re.compile(r"^[+-]?\d+$")


@dataclass
class RunConfig:
    task: str
    triple: dict | None = None
    params: dict[str, Any] = field(default_factory=dict)
    output: dict[str, str] = field(default_factory=dict)

    def canonical(self) -> str:
        return json.dumps(
            {"task": self.task, "triple": self.triple, "params": self.params, "output": self.output},
            sort_keys=True, default=str,
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


# ----------------------------------------------------------------- parsing


def _int(value, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and _INT_RE.match(value.strip()):
        return int(value)
    raise ConfigError(f"{name}: expected an integer as a decimal string, got {value!r}")


def _real(value, name: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None


def _strict(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _strict(doc, {"triple", "task", "params", "output"}, "config")
    if "triple" in doc:
        if not isinstance(doc["triple"], dict):
            raise ConfigError("triple must be an object")
        _strict(doc["triple"], {"N", "B", "L"}, "triple")
    if "params" in doc:
        if not isinstance(doc["params"], dict):
            raise ConfigError("params must be an object")
        _strict(doc["params"], PARAM_KEYS, "params")
    if "output" in doc:
        _strict(doc["output"], {"dir", "json", "csv"}, "output")
    return doc


def _triple_lists(raw: dict) -> tuple[int, list[int], list[int]]:
    try:
        return (
            _int(raw["N"], "triple.N"),
            [_int(b, "triple.B") for b in raw["B"]],
            [_int(ell, "triple.L") for ell in raw["L"]],
        )
    except KeyError as exc:
        raise ConfigError(f"triple is missing {exc}") from None


def build_triple(raw: dict | None) -> HadamardTriple | None:
    if raw is None:
        return None
    return HadamardTriple.create(*_triple_lists(raw))


# ------------------------------------------------------------------ output


def _csv_text(header: list[str], rows: list[list], cfg: RunConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    buf.write(f"# config-hash: {cfg.digest()}\n")
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


# -------------------------------------------------------------------- tasks


def _need(params: dict, key: str, conv=_int):
    if key not in params:
        raise ConfigError(f"missing parameter '{key}'")
    return conv(params[key], key)


def _grid(value) -> list[float]:
    if isinstance(value, list):
        return [float(_real(v, "grid")) for v in value]
    path = Path(str(value))
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read grid file {path}: {exc}") from None
    text = text.strip()
    if text.startswith("["):
        return [float(_real(v, "grid")) for v in json.loads(text)]
    return [float(_real(tok, "grid")) for tok in text.split()]


def execute(cfg: RunConfig, workers: int = 1) -> tuple[dict, tuple[list[str], list[list]] | None]:
    """Run one task; returns (json report, optional csv table)."""
    task, p = cfg.task, cfg.params
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    if task in NEEDS_TRIPLE and cfg.triple is None:
        raise ConfigError(f"task '{task}' needs a triple {{N, B, L}} in the config")

    if task == "verify":
        N, B, L = _triple_lists(cfg.triple)
        return verify(N, B, L).as_dict(), None

    t = build_triple(cfg.triple) if cfg.triple is not None else None

    if task == "cycles":
        cycles = spectrum.extreme_cycles(t)
        return {"triple": t.as_dict(), "cycles": [c.as_dict() for c in cycles]}, None

    if task == "spectrum":
        n = _need(p, "levels")
        kwargs = {"budget": _int(p["budget"], "budget")} if "budget" in p else {}
        lv = spectrum.canonical_levels(t, n, **kwargs)
        rows = [[k, str(x)] for k, level in enumerate(lv.levels) for x in level]
        report = {
            "triple": t.as_dict(),
            "levels": [[str(x) for x in level] for level in lv.levels],
            "nested": lv.is_nested(),
        }
        return report, (["level", "point"], rows)

    if task == "eigenvalue":
        return spectrum.is_spectral_eigenvalue(t, _need(p, "q")).as_dict(), None

    if task == "scan":
        rep = spectrum.eigenvalue_scan(t, _need(p, "x"), workers=workers)
        half, big = spectrum.SCAN_DELTAS
        rows = [
            [r.p, r.verdict.is_eigenvalue, r.ord_N_p, r.in_A[half], r.in_A[big],
             "" if r.verdict.witness is None else str(r.verdict.witness)]
            for r in rep.rows
        ]
        summary = rep.summary()
        report = {
            "verdict": {k: summary[k] for k in ("triple", "x", "primes_scanned", "eigenvalues", "large_eigenvalue_check")},
            "diagnostic": {k: summary[k] for k in ("eigenvalue_fraction", "similarity_dimension")},
        }
        return report, (["p", "is_eigenvalue", "ord_N_p", "in_A_half", "in_A_0677", "witness"], rows)

    if task == "power-closure":
        primes = p.get("primes")
        if primes is None:
            raise ConfigError("missing parameter 'primes'")
        if isinstance(primes, str):
            primes = [tok for tok in primes.split(",") if tok.strip()]
        primes = [_int(v, "primes") for v in primes]
        rep = spectrum.power_closure_check(t, primes, _need(p, "M"), _need(p, "budget"))
        return rep.as_dict(), None

    if task == "dp-scan":
        scale = p.get("scale", "d")
        if scale not in ("d", "1", 1):
            raise ConfigError("scale must be 'd' (K(N, dL)) or '1' (K(N, L))")
        factor = t.d if scale == "d" else 1
        sysm = spectrum.dual_system(t, factor)
        rep = selfsimilar.dp_intersection(sysm, _need(p, "p"), _need(p, "M"))
        out = {"system": str(sysm), **rep.as_dict()}
        rows = [[m, str(x)] for m, level in enumerate(rep.levels) for x in level]
        return out, (["level", "point"], rows)

    if task == "fourier-q":
        n = _need(p, "levels")
        depth = _int(p.get("depth", fourier.DEFAULT_DEPTH), "depth")
        grid = _grid(p["grid"]) if "grid" in p else [0.0]
        lv = spectrum.canonical_levels(t, n)
        rows, table = [], {}
        for k in range(n + 1):
            qs = fourier.completeness_Q(t, lv[k], grid, depth, workers=workers)
            table[k] = qs
            rows.extend([g, k, q] for g, q in zip(grid, qs))
        report = {"triple": t.as_dict(), "diagnostic": {"depth": depth, "grid": grid, "Q": {str(k): v for k, v in table.items()}}}
        return report, (["t0", "level", "Q"], rows)

    if task == "order-stats":
        a, x = _need(p, "a"), _need(p, "x")
        delta = _need(p, "delta", _real)
        rep = numtheory.order_density(a, delta, x)
        recs = numtheory.prime_records(x, (a,))
        rows = [[r.p, r.ord[a], numtheory.exceeds_power(r.ord[a], r.p, delta)] for r in recs if a in r.ord]
        return {"verdict": rep.as_dict() | {"delta": str(delta)}}, (["p", "ord_a_p", "in_A"], rows)

    if task == "pplus-stats":
        x = _need(p, "x")
        delta = _need(p, "delta", _real)
        rep = numtheory.pplus_density(x, delta)
        target = 1 - numtheory.dickman(1 / float(delta))
        recs = numtheory.prime_records(x)
        rows = [[r.p, r.pplus, numtheory.exceeds_power(r.pplus, x, delta)] for r in recs]
        report = {
            "verdict": rep.as_dict() | {"delta": str(delta)},
            "diagnostic": {"dickman_target": target, "gap": rep.ratio - target},
        }
        return report, (["p", "pplus", "exceeds_x_delta"], rows)

    if task == "dickman":
        u = float(_need(p, "u", _real))
        steps = _int(p.get("steps", numtheory.DICKMAN_STEPS), "steps")
        return {"diagnostic": {"u": u, "steps": steps, "rho": numtheory.dickman(u, steps)}}, None

    if task == "eh-sum":
        x = _need(p, "x")
        theta = _need(p, "theta", _real)
        val = numtheory.eh_discrepancy(x, theta)
        return {"diagnostic": {"x": x, "theta": str(theta), "sum": val, "normalized": val / (x / math.log(x))}}, None

    raise AssertionError(task)


def write_reports(cfg: RunConfig, report: dict, table, out_dir: str | None) -> None:
    text = _json_text(report)
    sys.stdout.write(text)
    target = out_dir or cfg.output.get("dir")
    if not target:
        return
    outp = Path(target)
    outp.mkdir(parents=True, exist_ok=True)
    stem = cfg.task.replace("-", "_")
    (outp / cfg.output.get("json", f"{stem}.json")).write_text(text, encoding="utf-8")
    if table is not None:
        header, rows = table
        (outp / cfg.output.get("csv", f"{stem}.csv")).write_text(_csv_text(header, rows, cfg), encoding="utf-8")


# -------------------------------------------------------------------- argparse


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hadspec", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="JSON run config")
    ap.add_argument("--out", help="directory for CSV/JSON reports")
    ap.add_argument("--seed", help="seed recorded in the config hash (all computations here are deterministic)")
    ap.add_argument("--workers", type=int, default=1, help="worker pool size (default: sequential)")
    sub = ap.add_subparsers(dest="task")

    sub.add_parser("run", help="run the task named in the config")
    sub.add_parser("verify", help="exact Hadamard check of the config triple")
    sub.add_parser("cycles", help="extreme cycles")
    s = sub.add_parser("spectrum", help="canonical spectrum levels")
    s.add_argument("--levels", dest="levels")
    s = sub.add_parser("eigenvalue", help="decide whether q is a spectral eigenvalue")
    s.add_argument("--q", dest="q")
    s = sub.add_parser("scan", help="eigenvalue scan over primes <= X")
    s.add_argument("--x", dest="x")
    s = sub.add_parser("power-closure", help="composite eigenvalues from a stabilization level")
    s.add_argument("--primes", dest="primes")
    s.add_argument("--M", dest="M")
    s.add_argument("--budget", dest="budget")
    s = sub.add_parser("dp-scan", help="K ∩ D_p by p-adic level")
    s.add_argument("--p", dest="p")
    s.add_argument("--M", dest="M")
    s.add_argument("--scale", dest="scale", choices=["d", "1"])
    s = sub.add_parser("fourier-q", help="completeness functional over canonical levels")
    s.add_argument("--levels", dest="levels")
    s.add_argument("--depth", dest="depth")
    s.add_argument("--grid", dest="grid")
    s = sub.add_parser("order-stats", help="density of A_a(delta)")
    s.add_argument("--a", dest="a")
    s.add_argument("--delta", dest="delta")
    s.add_argument("--x", dest="x")
    s = sub.add_parser("pplus-stats", help="density of P+(p-1) > x^delta")
    s.add_argument("--x", dest="x")
    s.add_argument("--delta", dest="delta")
    s = sub.add_parser("dickman", help="Dickman rho(u)")
    s.add_argument("--u", dest="u")
    s.add_argument("--steps", dest="steps")
    s = sub.add_parser("eh-sum", help="Elliott-Halberstam discrepancy sum")
    s.add_argument("--x", dest="x")
    s.add_argument("--theta", dest="theta")
    return ap


_GLOBAL = {"config", "out", "seed", "workers", "task"}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        doc = load_config(args.config)
        task = args.task
        if task in (None, "run"):
            task = doc.get("task")
            if task is None:
                raise ConfigError("no task given on the command line or in the config")
        params = dict(doc.get("params", {}))
        params.update({k: v for k, v in vars(args).items() if k not in _GLOBAL and v is not None})
        if args.seed is not None:
            params["seed"] = args.seed
        cfg = RunConfig(task, doc.get("triple"), params, dict(doc.get("output", {})))
        report, table = execute(cfg, workers=max(1, args.workers))
        write_reports(cfg, report, table, args.out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HadspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
