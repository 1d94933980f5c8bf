"""Command-line interface.

Exit codes: 0 success, 1 certificate nonzero or check failed, 2 usage or
format error, 3 non-generic input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .formats import (FormatError, dumps, format_scalar, params_from_json, params_to_json,
                      read_json, scalar_to_json, state_from_json, state_to_json, write_text)
from .geom import dimension_report
from .member import (CERTIFICATES, SymmetryError, corner_state, eval_certificate,
                     improper_marginalize, reduced_density)
from .parametrize import (BoundaryPair, MatrixTuple, NonGenericError, RealizationError,
                          RhoParams, make_family, pb_normal_form, phi_trace, psi_ob, psi_pb,
                          rho, trace_coords, trace_word_reduce)
from .states import SizeGuardError, as_word, necklace_count, necklaces
from .vanish import SearchError, generator_profile, kernel_search, linear_invariants

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_NONGENERIC = 0, 1, 2, 3
RANDOM_ENTRY_RANGE = 9


class UsageError(ValueError):
    """Arguments are well-formed but inconsistent."""


def _config(args: argparse.Namespace) -> dict:
    """The run configuration embedded in report files."""
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


class _Output:
    """Collects stdout lines; ``--out`` writes the structured payload to a file."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.lines: list[str] = []

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def finish(self, payload: dict | None = None) -> None:
        out = getattr(self.args, "out", None)
        if out and payload is not None:
            write_text(out, dumps(payload))
            self.say(f"wrote {out}")
        sys.stdout.write("".join(line + "\n" for line in self.lines))


def _report(args, kind: str, body: dict) -> dict:
    return {"kind": kind, "config": _config(args), **body}


def _multidegree(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad multidegree {text!r}; expected e.g. 12,12") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _field(text: str) -> tuple[str, int | None]:
    """'rational', 'float' or 'p:<modulus>'."""
    if text in ("rational", "float"):
        return text, None
    if text.startswith("p:"):
        try:
            return "modp", int(text[2:])
        except ValueError:
            pass
    raise UsageError(f"bad field {text!r}; use rational, float or p:<modulus>")


# --------------------------------------------------------------------------
# subcommands

def cmd_necklaces(args) -> int:
    out = _Output(args)
    neck = necklaces(args.d, args.N)
    out.say(str(necklace_count(args.d, args.N)))
    for n in neck:
        out.say(n.label)
    out.finish(_report(args, "necklaces", {"count": len(neck), "labels": [n.label for n in neck]}))
    return EXIT_OK


def _random_params(args, rng: np.random.Generator):
    ri = lambda *shape: rng.integers(-RANDOM_ENTRY_RANGE, RANDOM_ENTRY_RANGE + 1, size=shape).tolist()
    if args.model == "rho":
        return RhoParams(*ri(5))
    A = MatrixTuple(ri(args.d, args.D, args.D))
    if args.model == "ob":
        return A, BoundaryPair(ri(args.D), ri(args.D))
    return A


def _as_float(params):
    conv = lambda x: complex(x)
    if isinstance(params, RhoParams):
        return RhoParams(*(conv(x) for x in params.as_tuple()))
    if isinstance(params, tuple):
        A, bd = params
        return A.map(conv), BoundaryPair([conv(x) for x in bd.b0], [conv(x) for x in bd.b1])
    return params.map(conv)


def _build_state(model: str, params, N: int):
    if model == "rho":
        if not isinstance(params, RhoParams):
            raise UsageError("model rho needs rho_params")
        return rho(params, N)
    if model == "ob":
        if not isinstance(params, tuple):
            raise UsageError("model ob needs ob_params")
        return psi_ob(params[0], params[1], N)
    if not isinstance(params, MatrixTuple):
        raise UsageError(f"model {model} needs pb_params")
    if model == "phi":
        return phi_trace(trace_coords(params), N)
    return psi_pb(params, N)


def cmd_state(args) -> int:
    out = _Output(args)
    if args.corner:
        s = corner_state()
        out.say("# corner state of the periodic N=4 certificate")
        payload = state_to_json(s)
    else:
        if args.params:
            params = params_from_json(read_json(args.params))
        else:
            if args.N is None:
                raise UsageError("--N is required")
            params = _random_params(args, np.random.default_rng(args.seed))
            out.say(f"# seed: {args.seed}")
        if args.N is None:
            raise UsageError("--N is required")
        if args.field == "float":
            params = _as_float(params)
        elif args.field != "rational":
            raise UsageError("state supports --field rational or float")
        s = _build_state(args.model, params, args.N)
        payload = state_to_json(s)
        if args.params_out:
            write_text(args.params_out, dumps(params_to_json(params)))
    if args.out:
        write_text(args.out, dumps(payload))
        out.say(f"wrote {args.out}")
    else:
        out.say(dumps(payload).rstrip("\n"))
    out.finish()
    return EXIT_OK


def _load_state(path: str):
    return state_from_json(read_json(path))


def cmd_member(args) -> int:
    out = _Output(args)
    cert = CERTIFICATES[args.cert]
    s = _load_state(args.state)
    r = eval_certificate(cert, s)
    out.say(f"certificate: {cert.name} ({cert.n_terms} terms, degree {cert.degree})")
    out.say(f"value: {format_scalar(r.value)}")
    if r.residual is not None:
        out.say(f"scaled residual: {format_scalar(r.residual)}")
    out.say("consistent with membership" if r.consistent
            else "nonzero: the state is outside the closure")
    out.finish(_report(args, "membership", {
        "certificate": cert.name, "value": scalar_to_json(r.value),
        "residual": r.residual, "consistent": r.consistent}))
    return EXIT_OK if r.consistent else EXIT_VIOLATED


def cmd_invariants(args) -> int:
    out = _Output(args)
    fam = make_family(args.model, args.D, args.d, args.N)
    verify = None if args.verify == "none" else args.verify
    rep = kernel_search(fam, args.degree, _multidegree(args.multidegree), seed=args.seed,
                        exact=True, verify=verify)
    out.say(f"seed: {args.seed}")
    out.say(f"model: {args.model} D={args.D} d={args.d} N={args.N} degree={args.degree}")
    out.say(f"primes: {', '.join(map(str, rep.primes))}")
    out.say(f"dimension: {rep.dim}")
    for q, status in zip(rep.basis, rep.verified):
        out.say(f"  {q.to_string()}" + (f"  [{status}]" if verify else ""))
    body = {"summary": rep.summary(), "basis": [q.to_json() for q in rep.basis],
            "verified": list(rep.verified)}
    if args.model == "pb" and args.degree == 1 and args.multidegree is None:
        li = linear_invariants(args.N, args.D, args.d, seed=args.seed)
        out.say(f"reflection differences: {li.reflection_dim}")
        out.say(f"modulo reflection differences: {li.nontrivial}")
        for q in li.quotient_basis:
            out.say(f"  {q.to_string()}")
        body["nontrivial"] = li.nontrivial
        body["quotient_basis"] = [q.to_json() for q in li.quotient_basis]
    out.finish(_report(args, "invariants", body))
    return EXIT_OK


def cmd_generators(args) -> int:
    out = _Output(args)
    fam = make_family(args.model, args.D, args.d, args.N)
    g = generator_profile(fam, args.max_degree, seed=args.seed)
    out.say(f"seed: {args.seed}")
    out.say(f"model: {args.model} D={args.D} d={args.d} N={args.N}")
    out.say("degree  ideal_dim  new_generators")
    for k in sorted(g.counts):
        out.say(f"{k:6d}  {g.dims[k]:9d}  {g.counts[k]:14d}")
    out.finish(_report(args, "generators", {
        "counts": {str(k): v for k, v in g.counts.items()},
        "dims": {str(k): v for k, v in g.dims.items()},
        "per_prime": {str(p): {str(k): v for k, v in c.items()} for p, c in g.per_prime.items()}}))
    return EXIT_OK


def cmd_dim(args) -> int:
    out = _Output(args)
    field, p = _field(args.field)
    kw = {"p": p} if p else {}
    rep = dimension_report(args.model, args.D, args.d, args.N, seed=args.seed, draws=args.draws,
                           field=field, **kw)
    out.say(f"seed: {args.seed}")
    for k, v in rep.as_dict().items():
        if k != "seed":
            out.say(f"{k}: {v}")
    out.finish(_report(args, "dimension", rep.as_dict()))
    return EXIT_OK


def cmd_marginalize(args) -> int:
    s = _load_state(args.state)
    m = improper_marginalize(s, args.start, args.width)
    text = dumps(state_to_json(m))
    if args.out:
        write_text(args.out, text)
        sys.stdout.write(f"wrote {args.out}\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_density(args) -> int:
    out = _Output(args)
    s = _load_state(args.state)
    keep = _int_list(args.keep)
    rho_m = reduced_density(s, keep)
    rows = [[format_scalar(x) for x in row] for row in rho_m.tolist()]
    width = max((len(x) for r in rows for x in r), default=1)
    for r in rows:
        out.say("  ".join(x.rjust(width) for x in r))
    out.finish(_report(args, "density", {
        "keep": keep, "rows": [[scalar_to_json(x) for x in row] for row in rho_m.tolist()]}))
    return EXIT_OK


def cmd_normal_form(args) -> int:
    out = _Output(args)
    params = params_from_json(read_json(args.params))
    if not isinstance(params, MatrixTuple) or params.d != 2 or params.D != 2:
        raise UsageError("normal form needs pb_params with D = d = 2")
    p = pb_normal_form(params[0], params[1], mode=args.mode, verify_N=args.verify_N)
    for name, v in zip(RhoParams.names(), p.as_tuple()):
        out.say(f"{name} = {format_scalar(v)}")
    out.finish(_report(args, "normal_form", params_to_json(p)))
    return EXIT_OK


def cmd_trace_reduce(args) -> int:
    out = _Output(args)
    w = as_word(args.word, args.d)
    q = trace_word_reduce(w, args.d)
    out.say(q.to_string() if q.n_terms else "0")
    out.finish(_report(args, "trace_reduce", {"word": args.word, "poly": q.to_json()}))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_all
    only = set(_int_list(args.only)) if args.only else None
    sys.stdout.write(f"seed: {args.seed}\n")
    results = run_all(seed=args.seed, only=only,
                      echo=lambda line: (sys.stdout.write(line + "\n"), sys.stdout.flush()))
    passed = sum(r.passed for r in results)
    sys.stdout.write(f"{passed}/{len(results)} criteria passed\n")
    if args.out:
        write_text(args.out, dumps(_report(args, "reproduction", {"results": [
            {"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
            for r in results]})))
    return EXIT_OK if passed == len(results) else EXIT_VIOLATED


# --------------------------------------------------------------------------
# parser

def _shape(p: argparse.ArgumentParser, model: bool = True, N: bool = True) -> None:
    if model:
        p.add_argument("--model", choices=("pb", "ob", "rho", "phi"), default="pb")
    p.add_argument("--D", type=int, default=2, help="bond dimension")
    p.add_argument("--d", type=int, default=2, help="physical dimension")
    if N:
        p.add_argument("--N", type=int, required=True, help="number of sites")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpsvar", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("necklaces", help="list necklace classes")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_necklaces)

    p = sub.add_parser("state", help="build a state from parameters (or random ones)")
    _shape(p, N=False)
    p.add_argument("--N", type=int)
    p.add_argument("--params", help="params file; omitted means random integer entries")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", default="rational", help="rational or float")
    p.add_argument("--corner", action="store_true", help="emit the corner state")
    p.add_argument("--params-out", help="also write the parameters used")
    p.add_argument("--out")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("member", help="evaluate a hypersurface certificate")
    p.add_argument("--cert", choices=sorted(CERTIFICATES), required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("invariants", help="polynomials vanishing on a family")
    _shape(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--multidegree", help="comma-separated letter counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", choices=("none", "symbolic", "modular"), default="none")
    p.add_argument("--out")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("generators", help="new minimal generators per degree")
    _shape(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("dim", help="Jacobian rank of a parametrization")
    _shape(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=5)
    p.add_argument("--field", default="p:2147483647", help="rational, float or p:<modulus>")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("marginalize", help="sum amplitudes outside a window")
    p.add_argument("--state", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_marginalize)

    p = sub.add_parser("density", help="reduced density matrix on consecutive sites")
    p.add_argument("--state", required=True)
    p.add_argument("--keep", required=True, help="comma-separated sites, e.g. 0,1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("normal-form", help="rho parameters of a generic D=d=2 pair")
    p.add_argument("--params", required=True)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--verify-N", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("trace-reduce", help="trace of a word in the trace coordinates")
    p.add_argument("--word", required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace_reduce)

    p = sub.add_parser("reproduce-paper", help="run every reproduction check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (NonGenericError, RealizationError) as exc:
        print(f"non-generic input: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except (FormatError, UsageError, SymmetryError, SizeGuardError, FileNotFoundError,
            ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchError as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
