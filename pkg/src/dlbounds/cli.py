"""Command-line entry point.

Every subcommand prints one JSON document on stdout, except ``sweep`` which
prints CSV by default.  Exit status: 0 ok, 2 precondition error, 3 budget
exhausted (partial output still printed), 1 anything else.

``sweep`` columns, in order::

    theorem,n,coefficient,main_coefficient,log2_bound_lo,log2_bound_hi,
    redundancy_lo,redundancy_hi,valid,threshold_n
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .ballmath import SizeBounds, b11_size_exact, ball_bounds, run_bounds
from .codebounds import (
    BoundParams,
    BoundValue,
    CheckMode,
    WeightKind,
    block_bound,
    certificate_bound,
    certificate_check,
    implied_constant,
    make_weight_scheme,
    redundancy_lower,
    theorem_bound,
)
from .errorballs import ChannelKind, ChannelSpec, enumerate_ball
from .errors import BudgetExceeded, PreconditionError
from .extremal import Code, conflict_graph, max_code_exact, verify_code
from .seqcore import format_sequence, parse_sequence, run_count, run_stats

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3

# exact bounds are printed in full only below this length; log2 is always printed
EXACT_PRINT_MAX_N = 4096
SWEEP_COLUMNS = [
    "theorem",
    "n",
    "coefficient",
    "main_coefficient",
    "log2_bound_lo",
    "log2_bound_hi",
    "redundancy_lo",
    "redundancy_hi",
    "valid",
    "threshold_n",
]


@dataclass
class CommandConfig:
    subcommand: str
    args: dict[str, Any] = field(default_factory=dict)
    output: str = "json"
    seed: int = 0
    threads: int = 1


@dataclass
class Result:
    document: Any
    status: int = EXIT_OK


# ---------------------------------------------------------------------------
# argument helpers

def _channel(a: dict[str, Any]) -> ChannelSpec:
    kind = ChannelKind(a["channel"])
    if kind is ChannelKind.DEL_TRANS:
        return ChannelSpec.del_trans(a["s"], a["t"])
    if kind is ChannelKind.ASYMMETRIC:
        return ChannelSpec.asymmetric(a["s"], a["t_plus"], a["t_minus"])
    if kind is ChannelKind.BLOCK:
        return ChannelSpec.block(a["s"], a["t"], a["b"])
    return ChannelSpec.damerau(a["s_d"], a["s_i"], a["t_t"], a["t_s"])


def _fraction_or_none(v: Any) -> str | None:
    return None if v is None else str(v)


def _bits_dict(b) -> dict[str, float]:
    return {"value": b.value, "lo": b.lo, "hi": b.hi}


def _scheme(a: dict[str, Any], q: int):
    kind = WeightKind(a["scheme"])
    keys = {
        WeightKind.W_1D1T: (),
        WeightKind.W_1DTT: ("t",),
        WeightKind.W_SDTT: ("s", "t"),
        WeightKind.W_EXTENDED: ("s_d", "s_i", "t_t", "t_s"),
        WeightKind.W_ASYMMETRIC: ("s", "t_plus", "t_minus"),
    }[kind]
    params = {k: a[k] for k in keys}
    if kind is WeightKind.W_EXTENDED:
        params["q"] = q
    return make_weight_scheme(kind, **params)


def _bound_params(a: dict[str, Any]) -> BoundParams:
    return BoundParams(
        a["theorem"],
        q=a["q"],
        s=a["s"],
        t=a["t"],
        u=a["u"],
        eps=Fraction(a["eps"]),
        b=a["b"],
        mu=Fraction(a["mu"]),
        s_d=a["s_d"],
        s_i=a["s_i"],
        t_t=a["t_t"],
        t_s=a["t_s"],
        t_plus=a["t_plus"],
        t_minus=a["t_minus"],
    )


# ---------------------------------------------------------------------------
# subcommands

def _cmd_ball(cfg: CommandConfig) -> Result:
    a = cfg.args
    x = parse_sequence(a["x"], a["q"])
    return Result(enumerate_ball(x, _channel(a), a["q"]).to_json_dict())


def _bounds_doc(b: SizeBounds) -> dict[str, Any]:
    return {
        "exact": b.exact,
        "lower": _fraction_or_none(b.lower),
        "lower_weak": _fraction_or_none(b.lower_weak),
        "upper": _fraction_or_none(b.upper),
        "bound_applicable": b.applicable,
    }


def _cmd_stats(cfg: CommandConfig) -> Result:
    """Run statistics with the one-deletion one-transposition ball size they determine."""
    a = cfg.args
    q = a["q"]
    x = parse_sequence(a["x"], q)
    if not x:
        raise PreconditionError("run statistics need a non-empty word")
    st = run_stats(x)
    doc: dict[str, Any] = {"x": format_sequence(x, q), "q": q, "n": len(x)}
    doc.update(st.as_dict())
    if len(x) >= 2:
        doc.update(_bounds_doc(ball_bounds(x, ChannelSpec.del_trans(1, 1), q)))
        doc["closed_form"] = b11_size_exact(st)
    else:
        doc.update(_bounds_doc(SizeBounds()))
        doc["closed_form"] = None
    return Result(doc)


def _cmd_ballsize(cfg: CommandConfig) -> Result:
    a = cfg.args
    q = a["q"]
    channel = _channel(a)
    if (a["x"] is None) == (a["r"] is None):
        raise PreconditionError("give exactly one of --x and --r")
    if a["x"] is None:
        doc: dict[str, Any] = {"r": a["r"], "q": q, "channel": channel.to_dict(), "size": None}
        doc.update(_bounds_doc(run_bounds(a["r"], channel)))
        return Result(doc)
    x = parse_sequence(a["x"], q)
    size = enumerate_ball(x, channel, q).size
    b = ball_bounds(x, channel, q)
    doc = {"x": format_sequence(x, q), "r": run_count(x), "q": q, "channel": channel.to_dict(), "size": size}
    doc.update(_bounds_doc(b))
    doc["bracketed"] = b.brackets(size)
    return Result(doc)


def _value_doc(bv: BoundValue, q: int, n: int) -> dict[str, Any]:
    log2 = bv.log2()
    return {
        "coefficient": str(bv.coefficient),
        "main_coefficient": str(bv.main_coefficient),
        "divisor": str(bv.divisor),
        "bound": str(bv.exact()) if n <= EXACT_PRINT_MAX_N else None,
        "log2_bound": {"lo": float(log2.a), "hi": float(log2.b)},
        "redundancy_lower_bits": _bits_dict(redundancy_lower(q, n, bv)),
        "valid": bv.valid,
        "threshold_n": bv.threshold_n,
        "terms": {k: str(v) for k, v in bv.terms.items()},
    }


def bound_document(a: dict[str, Any], n: int) -> dict[str, Any]:
    theorem, q = a["theorem"], a["q"]
    doc: dict[str, Any] = {"theorem": theorem, "q": q, "n": n}
    if theorem in (19, 20, 21):
        params = _bound_params(a)
        doc.update(_value_doc(theorem_bound(params, n), q, n))
        return doc
    if theorem == 22:
        bv = block_bound(q, a["s"], a["t"], a["b"], n, Fraction(a["mu"]))
        doc.update(_value_doc(bv, q, n))
        return doc
    # 24 and 26 assert only the existence of a constant; report the certificate
    if theorem == 24:
        scheme = make_weight_scheme(
            WeightKind.W_EXTENDED, s_d=a["s_d"], s_i=a["s_i"], t_t=a["t_t"], t_s=a["t_s"], q=q
        )
        order = a["s_d"] + a["s_i"] + a["t_t"] + a["t_s"]
    else:
        scheme = make_weight_scheme(
            WeightKind.W_ASYMMETRIC, s=a["s"], t_plus=a["t_plus"], t_minus=a["t_minus"]
        )
        order = a["s"] + a["t_plus"] + a["t_minus"]
    channel = scheme.channel()
    channel.validate(n, q)
    total = certificate_bound(scheme, n, q)
    valid = None
    if q**n <= EXACT_PRINT_MAX_N:
        valid = certificate_check(scheme, channel, n, q, threads=a["threads"]).feasible
    doc.update(
        {
            "certificate_bound": str(total) if n <= EXACT_PRINT_MAX_N else None,
            "implied_constant": str(implied_constant(total, q, n, order)),
            "order": order,
            "redundancy_lower_bits": _bits_dict(redundancy_lower(q, n, total)),
            "valid": valid,
            "threshold_n": None,
        }
    )
    return doc


def _cmd_bound(cfg: CommandConfig) -> Result:
    a = dict(cfg.args, threads=cfg.threads)
    return Result(bound_document(a, a["n"]))


def _cmd_certify(cfg: CommandConfig) -> Result:
    a = cfg.args
    q = a["q"]
    scheme = _scheme(a, q)
    report = certificate_check(
        scheme,
        scheme.channel(),
        a["n"],
        q,
        mode=CheckMode(a["mode"]),
        samples=a["samples"],
        seed=cfg.seed,
        threads=cfg.threads,
    )
    return Result(report.to_json_dict())


def _code_doc(code: Code) -> dict[str, Any]:
    return {
        "channel": code.channel.to_dict(),
        "n": code.n,
        "q": code.q,
        "size": code.size,
        "optimal": code.optimal,
        "codewords": [format_sequence(x, code.q) for x in code.codewords],
    }


def _cmd_search(cfg: CommandConfig) -> Result:
    a = cfg.args
    graph = conflict_graph(a["n"], a["q"], _channel(a), budget=a["vertex_budget"], threads=cfg.threads)
    code = max_code_exact(graph, a["budget_seconds"], threads=cfg.threads)
    return Result(_code_doc(code), EXIT_OK if code.optimal else EXIT_BUDGET)


def _read_code_file(path: str, q: int) -> list[tuple[int, ...]]:
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        lines = [line.strip() for line in stream]
    finally:
        if stream is not sys.stdin:
            stream.close()
    return [parse_sequence(line, q) for line in lines if line]


def _cmd_verify(cfg: CommandConfig) -> Result:
    a = cfg.args
    q = a["q"]
    words = _read_code_file(a["code_file"], q)
    if not words:
        raise PreconditionError("code file holds no sequences")
    n = len(words[0])
    code = Code(n, q, _channel(a), tuple(sorted(words)))
    verdict = verify_code(code)
    doc: dict[str, Any] = {"n": n, "q": q, "size": code.size, "valid": verdict.valid, "witness": None}
    if verdict.witness is not None:
        x, x2, y = verdict.witness
        doc["witness"] = {
            "x": format_sequence(x, q),
            "x_prime": format_sequence(x2, q),
            "common": format_sequence(y, q),
        }
    return Result(doc)


def _sweep_lengths(a: dict[str, Any]) -> list[int]:
    if a["ns"]:
        return [int(v) for v in a["ns"].split(",")]
    return list(range(a["n_min"], a["n_max"] + 1, a["n_step"]))


def _cmd_sweep(cfg: CommandConfig) -> Result:
    a = dict(cfg.args, threads=cfg.threads)
    rows = []
    for n in _sweep_lengths(a):
        doc = bound_document(a, n)
        coefficient = doc.get("coefficient", doc.get("implied_constant"))
        log2 = doc.get("log2_bound")
        red = doc["redundancy_lower_bits"]
        rows.append(
            {
                "theorem": a["theorem"],
                "n": n,
                "coefficient": coefficient,
                "main_coefficient": doc.get("main_coefficient", ""),
                "log2_bound_lo": "" if log2 is None else repr(log2["lo"]),
                "log2_bound_hi": "" if log2 is None else repr(log2["hi"]),
                "redundancy_lo": repr(red["lo"]),
                "redundancy_hi": repr(red["hi"]),
                "valid": "" if doc["valid"] is None else str(doc["valid"]).lower(),
                "threshold_n": "" if doc["threshold_n"] is None else doc["threshold_n"],
            }
        )
    if cfg.output == "json":
        return Result(rows)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return Result(buf.getvalue())


COMMANDS = {
    "ball": _cmd_ball,
    "stats": _cmd_stats,
    "ballsize": _cmd_ballsize,
    "bound": _cmd_bound,
    "certify": _cmd_certify,
    "search": _cmd_search,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def dispatch(cfg: CommandConfig) -> Result:
    if cfg.subcommand not in COMMANDS:
        raise PreconditionError(f"unknown subcommand {cfg.subcommand!r}")
    if cfg.threads < 1:
        raise PreconditionError(f"--threads must be >= 1, got {cfg.threads}")
    if "q" in cfg.args and cfg.args["q"] < 2:
        raise PreconditionError(f"alphabet size must be >= 2, got {cfg.args['q']}")
    return COMMANDS[cfg.subcommand](cfg)


# ---------------------------------------------------------------------------
# argparse

def _add_channel(p: argparse.ArgumentParser, default: str = "del-trans") -> None:
    p.add_argument("--channel", default=default, choices=[k.value for k in ChannelKind])
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--t-plus", type=int, default=0)
    p.add_argument("--t-minus", type=int, default=0)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--s-d", type=int, default=0)
    p.add_argument("--s-i", type=int, default=0)
    p.add_argument("--t-t", type=int, default=0)
    p.add_argument("--t-s", type=int, default=0)


def _add_bound_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theorem", type=int, required=True, choices=[19, 20, 21, 22, 24, 26])
    p.add_argument("--u", type=int, default=0)
    p.add_argument("--eps", default="1/2", help="rational, e.g. 0.5 or 1/2")
    p.add_argument("--mu", default="1/2", help="rational, e.g. 0.5 or 1/2")
    _add_channel(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlbounds", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--output", choices=["json", "csv"], default=None)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ball", parents=[common], help="enumerate an error ball")
    p.add_argument("--x", required=True)
    _add_channel(p)

    p = sub.add_parser("stats", parents=[common], help="run statistics of a word")
    p.add_argument("--x", required=True)

    p = sub.add_parser("ballsize", parents=[common], help="ball size against closed-form bounds")
    p.add_argument("--x", default=None, help="a word; the ball is enumerated")
    p.add_argument("--r", type=int, default=None, help="a run count; bounds only")
    _add_channel(p)

    p = sub.add_parser("bound", parents=[common], help="evaluate a code-size upper bound")
    p.add_argument("--n", type=int, required=True)
    _add_bound_params(p)

    p = sub.add_parser("certify", parents=[common], help="check a fractional covering certificate")
    p.add_argument("--scheme", required=True, choices=[k.value for k in WeightKind])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in CheckMode], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    _add_channel(p)

    p = sub.add_parser("search", parents=[common], help="exact maximum code at small n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--vertex-budget", type=int, default=1 << 16)
    _add_channel(p)

    p = sub.add_parser("verify", parents=[common], help="check a code file for ball disjointness")
    p.add_argument("code_file", help="one sequence per line; '-' reads stdin")
    _add_channel(p)

    p = sub.add_parser("sweep", parents=[common], help="tabulate a bound over many lengths")
    p.add_argument("--ns", default="", help="comma separated lengths; overrides the range")
    p.add_argument("--n-min", type=int, default=10)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--n-step", type=int, default=10)
    _add_bound_params(p)
    return parser


def config_from_args(argv: list[str] | None = None) -> CommandConfig:
    ns = vars(build_parser().parse_args(argv))
    sub = ns.pop("subcommand")
    output = ns.pop("output") or ("csv" if sub == "sweep" else "json")
    if output == "csv" and sub != "sweep":
        raise PreconditionError("CSV output is available for sweep only")
    seed = ns.pop("seed")
    threads = ns.pop("threads")
    return CommandConfig(sub, ns, output, seed, threads)


def _emit(result: Result) -> None:
    doc = result.document
    if isinstance(doc, str):
        sys.stdout.write(doc)
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        result = dispatch(cfg)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Exception as exc:  # noqa: BLE001 - top-level guard maps to exit 1
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(result)
    if result.status == EXIT_BUDGET:
        print("budget exhausted: returning the best code found", file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
