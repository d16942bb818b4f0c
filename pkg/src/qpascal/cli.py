"""Command-line front end.

Subcommands:
    table      print a law triangle (v, tilde, or d = Gaussian binomials)
    sample     draw words from a process; optional level histogram
    recover    read a triangle from JSON and recover its mixing measure
    check      recursion / q-exchangeability / q-complete monotonicity
    grassmann  enumerate a Grassmannian or grow a subspace chain
    flip       reduce a super-unit word or triangle to the sub-unit regime

Exit codes: 0 success, 2 usage, 3 regime violation, 4 invalid input or
failed check, 5 field construction error, 6 enumeration guard tripped.
All structured output is JSON (or CSV where stated) on stdout; -o sends
it to a file instead.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .boundary import (
    BoundaryMeasure,
    MomentSequence,
    extreme_array,
    is_q_completely_monotone,
    mixture_array,
    recover_measure,
)
from .errors import (
    FieldConstructionError,
    InvalidArrayError,
    QPascalError,
    RegimeError,
    TooLargeError,
)
from .exactq import QParam, format_rational, parse_rational, q_binomial
from .galois import (
    FieldSpec,
    Subspace,
    codim_word,
    enumerate_grassmannian,
    make_field,
    sample_growth,
)
from .laws import (
    FiniteLaw,
    VArray,
    check_q_exchangeable,
    check_recursion,
    tilde_of_v,
)
from .pascal_graph import BinaryWord, flip_reduction
from .processes import (
    MODES,
    PolyaParams,
    ThetaParams,
    empirical_level_histogram,
    extreme_sampler,
    polya_array,
    polya_forward_probs,
    polya_sampler,
    sample_extreme,
    sample_polya,
    sample_theta,
    theta_array,
    theta_sampler,
)

LAWS = ("extreme", "mixture", "theta", "polya")
PROCESSES = ("extreme", "theta", "polya")


def _parse_q(text: str) -> QParam:
    return QParam(parse_rational(text))


def _parse_kappa(text: str):
    if text == "inf":
        return math.inf
    value = int(text)
    if value < 0:
        raise ValueError("kappa must be >= 0 or 'inf'")
    return value


def _parse_theta(text: str):
    if text == "inf":
        return math.inf
    return parse_rational(text)


def _parse_strength(text: str):
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_varray(path: str) -> VArray:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        return VArray.from_jsonable(data)
    except (KeyError, TypeError) as exc:
        raise ValueError(
            "%s is not a triangle file (expected keys q, depth, v): %s"
            % (path, exc)
        ) from exc


# ------------------------------------------------------------------- table


def _build_array(args) -> VArray:
    q = _parse_q(args.q)
    if args.law == "extreme":
        if args.kappa is None:
            raise ValueError("--kappa is required for the extreme law")
        return extreme_array(_parse_kappa(args.kappa), q, args.depth)
    if args.law == "mixture":
        if not args.measure_file:
            raise ValueError("--measure-file is required for a mixture")
        with open(args.measure_file, encoding="utf-8") as fh:
            measure = BoundaryMeasure.from_jsonable(json.load(fh))
        return mixture_array(measure, args.depth)
    if args.law == "theta":
        if args.theta is None:
            raise ValueError("--theta is required for the theta process")
        return theta_array(ThetaParams(_parse_theta(args.theta), q), args.depth)
    if args.a is None or args.b is None:
        raise ValueError("--a and --b are required for the urn process")
    return polya_array(
        PolyaParams(_parse_strength(args.a), _parse_strength(args.b), q), args.depth
    )


def _triangle_rows(kind: str, args):
    if kind == "d":
        q = _parse_q(args.q)
        return (
            {"q": format_rational(q.q), "depth": args.depth},
            [
                [q_binomial(n, k, q) for k in range(n + 1)]
                for n in range(args.depth + 1)
            ],
        )
    array = _build_array(args)
    if kind == "tilde":
        data = tilde_of_v(array).to_jsonable()
        rows = [[parse_rational(v) for v in row] for row in data["tv"]]
        return ({"q": data["q"], "depth": data["depth"]}, rows)
    data = array.to_jsonable()
    rows = [[parse_rational(v) for v in row] for row in data["v"]]
    return ({"q": data["q"], "depth": data["depth"]}, rows)


def _cmd_table(args) -> int:
    if args.kind == "v" and args.format == "json":
        # emit the triangle file format so the output feeds straight
        # back into recover / check / flip
        _emit(args, json.dumps(_build_array(args).to_jsonable(), indent=2))
        return 0
    header, rows = _triangle_rows(args.kind, args)
    if args.format == "json":
        payload = dict(header)
        payload["law"] = args.law if args.kind != "d" else None
        payload["kind"] = args.kind
        payload["rows"] = [[format_rational(v) for v in row] for row in rows]
        _emit(args, json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["n,k,value"]
        for n, row in enumerate(rows):
            for k, v in enumerate(row):
                lines.append("%d,%d,%s" % (n, k, format_rational(v)))
        _emit(args, "\n".join(lines))
    else:
        lines = []
        for n, row in enumerate(rows):
            lines.append("%2d | %s" % (n, "  ".join(format_rational(v) for v in row)))
        _emit(args, "\n".join(lines))
    return 0


# ------------------------------------------------------------------ sample


def _make_sampler(args):
    q = _parse_q(args.q)
    if args.process == "extreme":
        if args.kappa is None:
            raise ValueError("--kappa is required for the extreme process")
        kappa = _parse_kappa(args.kappa)
        sampler = extreme_sampler(kappa, q, args.mode)
        params = {"kappa": args.kappa, "q": args.q, "mode": args.mode}
        exact = lambda n: _tilde_level(extreme_array(kappa, q, n), n)
        return sampler, params, exact
    if args.process == "theta":
        if args.theta is None:
            raise ValueError("--theta is required for the theta process")
        tp = ThetaParams(_parse_theta(args.theta), q)
        params = {"theta": args.theta, "q": args.q}
        if tp.infinite:
            exact = lambda n: [Fraction(0)] * n + [Fraction(1)]
        else:
            exact = lambda n: _tilde_level(theta_array(tp, n), n)
        return theta_sampler(tp), params, exact
    if args.a is None or args.b is None:
        raise ValueError("--a and --b are required for the urn process")
    pp = PolyaParams(_parse_strength(args.a), _parse_strength(args.b), q)
    params = {"a": args.a, "b": args.b, "q": args.q}
    if pp.float_mode:
        exact = lambda n: _polya_level_float(pp, n)
    else:
        exact = lambda n: _tilde_level(polya_array(pp, n), n)
    return polya_sampler(pp), params, exact


def _tilde_level(array: VArray, n: int) -> list[Fraction]:
    return list(tilde_of_v(array).rows[n])


def _polya_level_float(params: PolyaParams, n: int) -> list[float]:
    level = [1.0]
    for step in range(n):
        nxt = [0.0] * (len(level) + 1)
        for k, mass in enumerate(level):
            if mass:
                p_zero, p_one = polya_forward_probs(params, step, k)
                nxt[k] += mass * p_zero
                nxt[k + 1] += mass * p_one
        level = nxt
    return level


def _cmd_sample(args) -> int:
    sampler, params, exact_level = _make_sampler(args)
    if args.trials:
        counts = empirical_level_histogram(sampler, args.n, args.trials, args.seed)
        expected = exact_level(args.n)
        lines = ["k,count,frequency,expected"]
        for k in range(args.n + 1):
            c = counts.get(k, 0)
            lines.append(
                "%d,%d,%.10g,%.10g"
                % (k, c, c / args.trials, float(expected[k]))
            )
        _emit(args, "\n".join(lines))
        return 0
    from .rng import SplitMix64

    word = sampler(args.n, SplitMix64(args.seed))
    payload = {
        "process": args.process,
        "params": params,
        "n": args.n,
        "seed": args.seed,
        "word": str(word),
        "ones": word.ones,
    }
    _emit(args, json.dumps(payload, indent=2))
    return 0


# ----------------------------------------------------------------- recover


def _cmd_recover(args) -> int:
    array = _load_varray(args.input)
    measure = recover_measure(array, nu=args.nu, kmax=args.kmax)
    payload = {"nu": args.nu, "kmax": args.kmax, "measure": measure.to_jsonable()}
    _emit(args, json.dumps(payload, indent=2))
    return 0


# ------------------------------------------------------------------- check


def _cmd_check(args) -> int:
    if args.kind == "recursion":
        result = check_recursion(_load_varray(args.input))
        witness = None if result.ok else {"n": result.witness[0], "k": result.witness[1]}
        payload = {"kind": args.kind, "ok": result.ok, "witness": witness}
        _emit(args, json.dumps(payload, indent=2))
        return 0 if result.ok else 4
    with open(args.input, encoding="utf-8") as fh:
        data = json.load(fh)
    if args.kind == "exchangeable":
        if not args.q:
            raise ValueError("--q is required for the exchangeability check")
        law = FiniteLaw(
            int(data["n"]),
            {w: parse_rational(p) for w, p in data["probs"].items()},
        )
        result = check_q_exchangeable(law, _parse_q(args.q))
        witness = None
        if not result.ok:
            word, i = result.witness
            witness = {"word": str(word), "position": i}
    else:
        if not args.q:
            raise ValueError("--q is required for the monotonicity check")
        moments = MomentSequence(tuple(parse_rational(v) for v in data["moments"]))
        result = is_q_completely_monotone(moments, _parse_q(args.q), depth=args.depth)
        witness = None
        if not result.ok:
            iterate, index = result.witness
            witness = {"iterate": iterate, "index": index}
    payload = {"kind": args.kind, "ok": result.ok, "witness": witness}
    _emit(args, json.dumps(payload, indent=2))
    return 0 if result.ok else 4


# --------------------------------------------------------------- grassmann


def _cmd_grassmann(args) -> int:
    modulus = None
    if args.modulus:
        modulus = tuple(int(c) for c in args.modulus.split(","))
    field = make_field(args.p, args.m, modulus)
    if args.enumerate:
        n, k = args.enumerate
        subspaces = list(enumerate_grassmannian(field, n, k))
        payload = {
            "field": field.to_jsonable(),
            "n": n,
            "k": k,
            "count": len(subspaces),
            "subspaces": [[list(row) for row in s.basis] for s in subspaces],
        }
        _emit(args, json.dumps(payload, indent=2))
        return 0
    if args.grow is None:
        raise ValueError("one of --enumerate or --grow is required")
    chain = sample_growth(_parse_kappa(args.grow), field, args.nmax, args.seed)
    payload = {
        "field": field.to_jsonable(),
        "kappa": args.grow,
        "seed": args.seed,
        "word": str(codim_word(chain)),
        "chain": [
            {"n": s.ambient_dim, "dim": s.dim, "basis": [list(r) for r in s.basis]}
            for s in chain
        ],
    }
    _emit(args, json.dumps(payload, indent=2))
    return 0


# -------------------------------------------------------------------- flip


def _cmd_flip(args) -> int:
    if args.word:
        if not args.q:
            raise ValueError("--q is required when flipping a word")
        word, q_new = flip_reduction(BinaryWord.from_string(args.word), _parse_q(args.q))
        payload = {"word": str(word), "q": format_rational(q_new.q)}
        _emit(args, json.dumps(payload, indent=2))
        return 0
    if not args.input:
        raise ValueError("one of --word or --input is required")
    flipped, q_new = flip_reduction(_load_varray(args.input))
    payload = flipped.to_jsonable()
    _emit(args, json.dumps(payload, indent=2))
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpascal",
        description="q-deformed exchangeability: triangles, samplers, boundaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("table", help="print a law triangle")
    p.add_argument("--law", choices=LAWS, default="extreme")
    p.add_argument("--kind", choices=("v", "tilde", "d"), default="v")
    p.add_argument("--q", required=True, help="rational, e.g. 1/2")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--kappa", help="atom index, or 'inf'")
    p.add_argument("--theta")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--measure-file")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    add_output(p)
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("sample", help="draw words from a process")
    p.add_argument("--process", choices=PROCESSES, required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kappa")
    p.add_argument("--theta")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--mode", choices=MODES, default="forward")
    p.add_argument("--trials", type=int, help="emit a level histogram (CSV)")
    add_output(p)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("recover", help="mixing measure from a deep triangle")
    p.add_argument("--input", required=True, help="triangle JSON file")
    p.add_argument("--nu", type=int, default=40)
    p.add_argument("--kmax", type=int, default=12)
    add_output(p)
    p.set_defaults(handler=_cmd_recover)

    p = sub.add_parser("check", help="validate structural properties")
    p.add_argument("--kind", choices=("recursion", "exchangeable", "monotone"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--q")
    p.add_argument("--depth", type=int)
    add_output(p)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("grassmann", help="subspace enumeration and growth")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--modulus", help="comma-separated coefficients, low degree first")
    p.add_argument("--enumerate", nargs=2, type=int, metavar=("N", "K"))
    p.add_argument("--grow", help="kappa, or 'inf'")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(handler=_cmd_grassmann)

    p = sub.add_parser("flip", help="map the q > 1 regime to q < 1")
    p.add_argument("--word")
    p.add_argument("--q", help="required with --word; must be > 1")
    p.add_argument("--input", help="triangle JSON file")
    add_output(p)
    p.set_defaults(handler=_cmd_flip)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except RegimeError as exc:
        print("regime error: %s" % exc, file=sys.stderr)
        return 3
    except InvalidArrayError as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 4
    except FieldConstructionError as exc:
        print("field error: %s" % exc, file=sys.stderr)
        return 5
    except TooLargeError as exc:
        print("guard: %s" % exc, file=sys.stderr)
        return 6
    except (ValueError, KeyError, OSError, QPascalError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
