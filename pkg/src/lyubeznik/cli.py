"""Command-line interface: ``lyubeznik chi|lambda|table|bound|check``.

Exit codes: 0 success, 1 check failure or disagreement, 2 parse error,
3 semantic error, 4 size cap.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .combinatorics import (
    MAX_VARS,
    SimplicialComplex,
    SizeCapError,
    SquareFreeIdeal,
    complex_of_ideal,
    from_vertices,
    stanley_reisner_ideal,
)
from .invariants import (
    GLNQuery,
    chi_engine,
    chi_faces,
    chi_inclusion_exclusion,
    generalized_lyubeznik,
    lyubeznik_table,
    minimal_prime_bound,
    property_suite,
)
from .linalg import FieldSpec

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SEMANTIC, EXIT_SIZE = 0, 1, 2, 3, 4
CACHE_ENV = "LYUBEZNIK_CACHE_DIR"
CHI_METHODS = ("engine", "faces", "ie", "all")
CHI_LABELS = {
    "engine": "alternating sum of lambda^i_0 from local cohomology",
    "faces": "signed face count sum (-2)^k f_(k-1)",
    "ie": "inclusion-exclusion over generator lcms",
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# --- input -----------------------------------------------------------------


@dataclass(frozen=True)
class ParsedInput:
    ideal: SquareFreeIdeal
    source: str
    kind: str  # "ideal" or "complex"

    def canonical(self) -> dict:
        return {"n": self.ideal.n, "generators": self.ideal.generator_lists()}


def _index_sets(n: int, raw: Any, what: str) -> list[int]:
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise CliError(EXIT_PARSE, f"{what} must be a list of lists of integers")
    out = []
    for s in raw:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in s):
            raise CliError(EXIT_PARSE, f"{what} entries must be integers")
        if len(set(s)) != len(s):
            raise CliError(EXIT_SEMANTIC, f"duplicate index in {what[:-1]} {s}")
        bad = [v for v in s if not 1 <= v <= n]
        if bad:
            raise CliError(EXIT_SEMANTIC, f"index {bad[0]} out of range 1..{n}")
        out.append(from_vertices(s))
    return out


def parse_input(path: str | Path) -> ParsedInput:
    """Read an ideal file (``n`` + ``generators``) or a complex file (``n`` + ``facets``)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict) or "n" not in obj:
        raise CliError(EXIT_PARSE, f"{path}: expected an object with an integer 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise CliError(EXIT_PARSE, f"{path}: 'n' must be an integer")
    if not 0 <= n <= MAX_VARS:
        raise CliError(EXIT_SEMANTIC, f"{path}: n={n} outside 0..{MAX_VARS}")
    has_g, has_f = "generators" in obj, "facets" in obj
    if has_g == has_f:
        raise CliError(EXIT_PARSE, f"{path}: give exactly one of 'generators' or 'facets'")
    if has_g:
        sets = _index_sets(n, obj["generators"], "generators")
        ideal = SquareFreeIdeal(n, tuple(sets))
        if len(ideal.gens) != len(sets):
            _warn(f"{path}: generators minimized from {len(sets)} to {len(ideal.gens)}")
        return ParsedInput(ideal, str(path), "ideal")
    sets = _index_sets(n, obj["facets"], "facets")
    cx = SimplicialComplex(n, tuple(sets))
    if len(cx.facets) != len(sets):
        _warn(f"{path}: facets reduced from {len(sets)} to {len(cx.facets)}")
    if cx.is_void:
        raise CliError(EXIT_SEMANTIC, f"{path}: the void complex has no Stanley-Reisner ring")
    return ParsedInput(stanley_reisner_ideal(cx), str(path), "complex")


def _require_proper(inp: ParsedInput) -> None:
    if not inp.ideal.is_proper:
        raise CliError(EXIT_SEMANTIC, f"{inp.source}: the unit ideal defines the zero ring")


# --- cache -----------------------------------------------------------------


def cache_key(payload: dict) -> str:
    blob = json.dumps({**payload, "version": __version__}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_lookup(cache_dir: Path | None, key: str) -> Any | None:
    if cache_dir is None:
        return None
    path = cache_dir / f"{key}.json"
    if not path.exists():
        return None
    try:
        entry = json.loads(path.read_text())
        body = json.dumps(entry["result"], sort_keys=True)
        if entry["key"] != key or entry["sha256"] != hashlib.sha256(body.encode()).hexdigest():
            raise ValueError("checksum mismatch")
        return entry["result"]
    except (OSError, ValueError, KeyError, TypeError):
        _warn(f"cache entry {path.name} is corrupted; recomputing")
        return None


def cache_store(cache_dir: Path | None, key: str, result: Any) -> None:
    if cache_dir is None:
        return
    body = json.dumps(result, sort_keys=True)
    entry = {"key": key, "result": result, "sha256": hashlib.sha256(body.encode()).hexdigest()}
    try:
        cache_dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, cache_dir / f"{key}.json")
    except OSError as exc:
        _warn(f"could not write cache: {exc}")


def _cached(cfg: "JobConfig", payload: dict, compute) -> Any:
    key = cache_key(payload)
    hit = cache_lookup(cfg.cache_dir, key)
    if hit is not None:
        return hit
    result = compute()
    cache_store(cfg.cache_dir, key, result)
    return result


# --- commands --------------------------------------------------------------


@dataclass
class JobConfig:
    command: str
    inputs: list[str]
    field: FieldSpec
    fmt: str
    cache_dir: Path | None
    options: dict = field(default_factory=dict)


@dataclass
class Outcome:
    result: dict
    code: int = EXIT_OK


def run_chi(cfg: JobConfig) -> Outcome:
    inp = parse_input(cfg.inputs[0])
    _require_proper(inp)
    method = cfg.options["method"]
    wanted = ["engine", "faces", "ie"] if method == "all" else [method]
    ideal = inp.ideal

    def compute() -> dict:
        vals = {}
        for m in wanted:
            if m == "engine":
                vals[m] = chi_engine(ideal, cfg.field)
            elif m == "faces":
                vals[m] = chi_faces(complex_of_ideal(ideal))
            else:
                vals[m] = chi_inclusion_exclusion(ideal, "auto")
        return {"input": inp.canonical(), "field": str(cfg.field), "chi": vals}

    payload = {"cmd": "chi", "input": inp.canonical(), "field": str(cfg.field), "methods": wanted}
    result = _cached(cfg, payload, compute)
    agree = len(set(result["chi"].values())) == 1
    result["agree"] = agree
    return Outcome(result, EXIT_OK if agree else EXIT_FAIL)


def run_lambda(cfg: JobConfig) -> Outcome:
    paths = cfg.inputs
    indices = cfg.options["indices"]
    if len(indices) != len(paths):
        raise CliError(EXIT_PARSE, f"need one --i per ideal: got {len(paths)} ideals and {len(indices)} indices")
    if any(k < 0 for k in indices):
        raise CliError(EXIT_SEMANTIC, "indices must be natural numbers")
    inputs = [parse_input(p) for p in paths]
    if len({i.ideal.n for i in inputs}) != 1:
        raise CliError(EXIT_SEMANTIC, "all ideals must have the same n")
    for i in inputs:
        _require_proper(i)
    q = GLNQuery(tuple(i.ideal for i in inputs), tuple(indices), cfg.field)
    payload = {"cmd": "lambda", "inputs": [i.canonical() for i in inputs], "field": str(cfg.field), "indices": indices}
    result = _cached(
        cfg,
        payload,
        lambda: {
            "inputs": [i.canonical() for i in inputs],
            "indices": indices,
            "field": str(cfg.field),
            "lambda": generalized_lyubeznik(q),
        },
    )
    return Outcome(result)


def run_table(cfg: JobConfig) -> Outcome:
    inp = parse_input(cfg.inputs[0])
    _require_proper(inp)

    def compute() -> dict:
        t = lyubeznik_table(inp.ideal, cfg.field)
        return {"input": inp.canonical(), "field": str(cfg.field), "d": t.d, "table": [list(r) for r in t.entries]}

    payload = {"cmd": "table", "input": inp.canonical(), "field": str(cfg.field)}
    return Outcome(_cached(cfg, payload, compute))


def run_bound(cfg: JobConfig) -> Outcome:
    inp = parse_input(cfg.inputs[0])
    _require_proper(inp)
    j = cfg.options["j"]
    if not 0 <= j <= inp.ideal.n:
        raise CliError(EXIT_SEMANTIC, f"j={j} outside 0..{inp.ideal.n}")
    payload = {"cmd": "bound", "input": inp.canonical(), "j": j}
    result = _cached(cfg, payload, lambda: {"input": inp.canonical(), "j": j, "bound": minimal_prime_bound(inp.ideal, j)})
    return Outcome(result)


def run_check(cfg: JobConfig) -> Outcome:
    o = cfg.options
    try:
        report = property_suite(o["seed"], o["trials"], o["nmax"])
    except SizeCapError as exc:
        raise CliError(EXIT_SIZE, str(exc)) from None
    result = report.to_dict()
    ok = report.ok
    if o["deep"]:
        from .oracle import oracle_sweep

        sweep = oracle_sweep(n_max=min(o["nmax"], 4), iterated_n_max=min(o["nmax"], 3))
        result["oracle"] = {"checked": sweep.checked, "ok": sweep.ok, "failures": sweep.failures}
        ok = ok and sweep.ok
    result["ok"] = ok
    return Outcome(result, EXIT_OK if ok else EXIT_FAIL)


COMMANDS = {"chi": run_chi, "lambda": run_lambda, "table": run_table, "bound": run_bound, "check": run_check}


# --- rendering -------------------------------------------------------------


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def render(command: str, result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    if command == "chi":
        vals = result["chi"]
        if fmt == "csv":
            return _csv([["method", "chi"], *([m, v] for m, v in vals.items())])
        lines = [f"chi ({CHI_LABELS[m]}): {v}" for m, v in vals.items()]
        if len(vals) > 1:
            lines.append("all methods agree" if result["agree"] else "METHODS DISAGREE")
        return "\n".join(lines) + "\n"
    if command == "lambda":
        if fmt == "csv":
            return _csv([["indices", "lambda"], [" ".join(map(str, result["indices"])), result["lambda"]]])
        idx = ",".join(map(str, reversed(result["indices"])))
        return f"lambda^({idx}) = {result['lambda']} over {result['field']}\n"
    if command == "table":
        table = result["table"]
        d = result["d"]
        if fmt == "csv":
            return _csv([["i\\j", *range(d + 1)], *([i, *row] for i, row in enumerate(table))])
        width = max(len(str(v)) for row in table for v in row)
        width = max(width, len(str(d)))
        head = " " * (width + 3) + " ".join(f"{j:>{width}}" for j in range(d + 1))
        body = [f"{i:>{width}} | " + " ".join(f"{v:>{width}}" for v in row) for i, row in enumerate(table)]
        return f"Lyubeznik table over {result['field']} (d = {d}; rows i, columns j)\n{head}\n" + "\n".join(body) + "\n"
    if command == "bound":
        if fmt == "csv":
            return _csv([["j", "bound"], [result["j"], result["bound"]]])
        return f"minimal-prime bound on lambda^{result['j']}_0: {result['bound']}\n"
    # check
    if fmt == "csv":
        rows = [["check", "trials", "ok"]] + [[c["name"], c["trials"], c["ok"]] for c in result["checks"]]
        if "oracle" in result:
            rows.append(["oracle sweep", result["oracle"]["checked"], result["oracle"]["ok"]])
        return _csv(rows)
    lines = []
    for c in result["checks"]:
        lines.append(f"{'PASS' if c['ok'] else 'FAIL'} {c['name']} ({c['trials']} trials)")
        lines.extend(f"  {v}" for v in c["violations"])
    if "oracle" in result:
        o = result["oracle"]
        lines.append(f"{'PASS' if o['ok'] else 'FAIL'} window oracle sweep ({o['checked']} comparisons)")
        lines.extend(f"  {v}" for v in o["failures"])
    return "\n".join(lines) + "\n"


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (rationals, default) or fp:<p>")
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cache", type=Path, help=f"cache directory (default: ${CACHE_ENV} if set)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")

    parser = argparse.ArgumentParser(prog="lyubeznik", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi", parents=[common], help="Lyubeznik characteristic")
    p.add_argument("file")
    p.add_argument("--method", choices=CHI_METHODS, default="all")

    p = sub.add_parser("lambda", parents=[common], help="generalized Lyubeznik number, innermost ideal first")
    p.add_argument("file")
    p.add_argument("--i", dest="indices", type=int, action="append", required=True)
    p.add_argument("--ideal", dest="ideals", action="append", default=[])

    p = sub.add_parser("table", parents=[common], help="classical Lyubeznik table")
    p.add_argument("file")

    p = sub.add_parser("bound", parents=[common], help="minimal-prime upper bound on lambda^j_0")
    p.add_argument("file")
    p.add_argument("--j", type=int, required=True)

    p = sub.add_parser("check", parents=[common], help="randomized property suite")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--deep", action="store_true", help="also run the exhaustive window oracle sweep")
    return parser


def _config(args: argparse.Namespace) -> JobConfig:
    try:
        fld = FieldSpec.parse(args.field)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    cache_dir = None
    if not args.no_cache:
        cache_dir = args.cache or (Path(os.environ[CACHE_ENV]) if os.environ.get(CACHE_ENV) else None)
    options = {k: v for k, v in vars(args).items() if k not in ("command", "file", "field", "fmt", "cache", "no_cache")}
    inputs = [args.file] if hasattr(args, "file") else []
    if args.command == "lambda":
        inputs += options.pop("ideals")
    return JobConfig(args.command, inputs, fld, args.fmt, cache_dir, options)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        outcome = COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SizeCapError as exc:
        print(f"error: size cap: {exc}", file=sys.stderr)
        return EXIT_SIZE
    sys.stdout.write(render(cfg.command, outcome.result, cfg.fmt))
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
