"""Command line front end.

Example::

    polydiffeo maps/ft.map --set t=1
    polydiffeo maps/ft.map --set t=-1 --transforms
    polydiffeo maps/ft.map --sweep t=-2..2 step 1/2 --out sweep.json

A single run exits with 0 (Diffeomorphism), 1 (NotDiffeomorphism) or
2 (Unknown). Usage and parse errors exit with 64, an unbound parameter
with 65 and an internal determinant mismatch with 70.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .certify import DIFFEOMORPHISM, NOT_DIFFEOMORPHISM, Options, diffeomorphism_verdict
from .jacobian import FormulaMismatchError, SamplingBudget
from .poly import PolynomialMap, PolynomialSyntaxError, parse_polynomial

SCHEMA = 1

EXIT_CODES = {DIFFEOMORPHISM: 0, NOT_DIFFEOMORPHISM: 1, "Unknown": 2}
EXIT_USAGE = 64
EXIT_UNBOUND = 65
EXIT_INTERNAL = 70


class MapFileError(ValueError):
    pass


class UnboundParameterError(ValueError):
    def __init__(self, names):
        super().__init__("unbound parameter(s): " + ", ".join(sorted(names)))
        self.names = sorted(names)


@dataclass
class MapFile:
    dimension: int
    components: list[str]
    name: str | None = None
    comments: list[str] = field(default_factory=list)


_LINE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


def parse_map_file(text: str) -> MapFile:
    """Read ``n = ...``, ``F1 = ...`` .. ``Fn = ...`` and an optional ``name = ...``."""
    dim = None
    name = None
    comps: dict[int, str] = {}
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        m = _LINE.match(line)
        if m is None:
            raise MapFileError(f"line {lineno}: expected 'key = value'")
        key, value = m.groups()
        if key == "n":
            if not value.isdigit() or int(value) < 1:
                raise MapFileError(f"line {lineno}: n must be a positive integer")
            dim = int(value)
        elif key == "name":
            name = value
        elif re.fullmatch(r"F\d+", key):
            i = int(key[1:])
            if i in comps:
                raise MapFileError(f"line {lineno}: component {key} given twice")
            comps[i] = value
        else:
            raise MapFileError(f"line {lineno}: unknown key {key!r}")
    if dim is None:
        raise MapFileError("missing 'n = <dimension>'")
    if sorted(comps) != list(range(1, dim + 1)):
        raise MapFileError(f"expected exactly the components F1..F{dim}, got {sorted(comps)}")
    return MapFile(dim, [comps[i] for i in range(1, dim + 1)], name, comments)


_IDENT = re.compile(r"(x\d+)|([A-Za-z][A-Za-z0-9_]*)")


def substitute(expr: str, params: dict[str, Fraction]) -> str:
    """Replace each parameter name by its parenthesised rational value."""
    missing = set()

    def repl(m):
        if m.group(1):
            return m.group(0)
        name = m.group(2)
        if name not in params:
            missing.add(name)
            return name
        return f"({params[name]})"

    out = _IDENT.sub(repl, expr)
    if missing:
        raise UnboundParameterError(missing)
    return out


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def parse_assignment(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    name = name.strip()
    if not sep or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
        raise ValueError(f"expected NAME=RATIONAL, got {text!r}")
    return name, parse_rational(value)


def sweep_values(spec: str) -> tuple[str, list[Fraction]]:
    """``t=a..b step s`` or ``t=v1,v2,...``."""
    name, sep, rest = spec.partition("=")
    name = name.strip()
    if not sep or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
        raise ValueError(f"bad sweep specification {spec!r}")
    m = re.fullmatch(r"\s*(\S+?)\s*\.\.\s*(\S+)\s+step\s+(\S+)\s*", rest)
    if m is None:
        return name, [parse_rational(v) for v in rest.split(",") if v.strip()]
    a, b, step = (parse_rational(v) for v in m.groups())
    if step <= 0:
        raise ValueError("sweep step must be positive")
    values = []
    v = a
    while v <= b:
        values.append(v)
        v += step
    return name, values


@dataclass
class ReportDocument:
    input: dict
    parameters: dict
    options: dict
    report: dict
    seed: int
    tool: str = "polydiffeo"
    version: str = __version__
    schema: int = SCHEMA
    timing: dict | None = None

    def to_json(self) -> str:
        data = asdict(self)
        if data["timing"] is None:
            del data["timing"]
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)

    @property
    def verdict(self) -> str:
        return self.report["verdict"]


def build_map(mf: MapFile, params: dict[str, Fraction]) -> tuple[PolynomialMap, list[str]]:
    resolved = [substitute(expr, params) for expr in mf.components]
    comps = tuple(parse_polynomial(expr, mf.dimension) for expr in resolved)
    return PolynomialMap(comps), resolved


def run(
    mf: MapFile,
    params: dict[str, Fraction],
    options: Options,
    source: dict | None = None,
    timing: bool = False,
) -> ReportDocument:
    t0 = time.perf_counter()
    fmap, resolved = build_map(mf, params)
    report = diffeomorphism_verdict(fmap, options)
    elapsed = time.perf_counter() - t0
    return ReportDocument(
        input={
            **(source or {}),
            "name": mf.name,
            "dimension": mf.dimension,
            "components": list(mf.components),
            "resolved_components": resolved,
            "expanded_components": fmap.to_texts(),
        },
        parameters={k: str(v) for k, v in sorted(params.items())},
        options=options.to_dict(),
        report=report.to_dict(),
        seed=options.sampling.seed,
        timing={"seconds": round(elapsed, 6)} if timing else None,
    )


def _run_one(args):
    return run(*args)


def sweep(
    mf: MapFile,
    params: dict[str, Fraction],
    name: str,
    values: Sequence[Fraction],
    options: Options,
    source: dict | None = None,
    timing: bool = False,
    jobs: int = 1,
) -> list[ReportDocument]:
    tasks = [(mf, {**params, name: v}, options, source, timing) for v in values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, tasks))
    return [_run_one(task) for task in tasks]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polydiffeo", description="Certify or refute global diffeomorphism of a polynomial map.")
    ap.add_argument("mapfile", help="map file (n = ..., F1 = ..., ...)")
    ap.add_argument("--set", action="append", default=[], metavar="NAME=RATIONAL",
                    help="bind a parameter (repeatable)")
    ap.add_argument("--sweep", nargs="+", metavar="SPEC",
                    help="NAME=A..B step S, or NAME=V1,V2,...")
    ap.add_argument("--transforms", action="store_true",
                    help="search linear coordinate changes when coercivity is undecided")
    ap.add_argument("--transform-bound", type=int, default=1, metavar="K",
                    help="entries of candidate matrices lie in [-K, K] (default 1)")
    ap.add_argument("--transform-budget", type=int, default=None, metavar="M",
                    help="try at most M matrices")
    ap.add_argument("--weights", choices=("default", "proportional"), default="default")
    ap.add_argument("--assert-nonvanishing", action="store_true",
                    help="treat an undecided Jacobian sign as nonvanishing")
    ap.add_argument("--samples", type=int, default=500, metavar="N",
                    help="uniform random sample points for the Jacobian sign search")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing in reports")
    ap.add_argument("--out", metavar="PATH", help="write JSON here instead of stdout")
    return ap


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.transform_bound < 1 or args.samples < 0:
        ap.error("--transform-bound must be >= 1 and --samples >= 0")
    try:
        params = dict(parse_assignment(s) for s in args.set)
        sweep_spec = sweep_values(" ".join(args.sweep)) if args.sweep else None
        path = Path(args.mapfile)
        text = path.read_text(encoding="utf-8")
        mf = parse_map_file(text)
    except (ValueError, OSError) as exc:
        print(f"polydiffeo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    options = Options(
        transforms=args.transforms,
        transform_bound=args.transform_bound,
        transform_budget=args.transform_budget,
        weights=args.weights,
        assert_nonvanishing=args.assert_nonvanishing,
        sampling=SamplingBudget(uniform_points=args.samples, seed=args.seed),
    )
    source = {"path": str(path), "text": text}
    try:
        if sweep_spec is None:
            doc = run(mf, params, options, source, args.timing)
            _emit(doc.to_json(), args.out)
            return EXIT_CODES[doc.verdict]
        name, values = sweep_spec
        docs = sweep(mf, params, name, values, options, source, args.timing, args.jobs)
        payload = {
            "schema": SCHEMA,
            "sweep": {"parameter": name, "values": [str(v) for v in values]},
            "reports": [json.loads(doc.to_json()) for doc in docs],
            "summary": [{"value": str(v), "verdict": doc.verdict} for v, doc in zip(values, docs)],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
        for v, doc in zip(values, docs):
            print(f"{name}={v}\t{doc.verdict}", file=sys.stderr)
        return 0
    except UnboundParameterError as exc:
        print(f"polydiffeo: error: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    except PolynomialSyntaxError as exc:
        print(f"polydiffeo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormulaMismatchError as exc:
        print(f"polydiffeo: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
