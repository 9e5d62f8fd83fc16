"""Command line front end: ``weyljanet COMMAND PROBLEM_FILE [flags]``.

Exit codes: 0 success, 1 usage or input error, 2 a resource cap was hit,
3 the linear system has no solution.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from .algebra import Element, format_element, format_monomial
from .cones import decompose, hilbert_from_cones
from .errors import AmbientMismatch, ParseError, ResourceLimitError
from .graded import dehomogenize, gr_generators, homogenize, saturate_x0
from .hilbert import SOURCES, c_shadow, hilbert_function, macaulay_constants
from .janet import _Reducer, complete, janet_basis, normal_form
from .linsolve import ShiftedMatrix, SolutionSet, graded_kernel, solve_system
from .parse import ProblemFile, format_matrix_row, parse_order, parse_problem

SCHEMA = "v1"
EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_UNSOLVABLE = 0, 1, 2, 3
COMMANDS = ("janet", "reduce", "nf", "homogenize", "saturate", "gr", "hilbert", "hpoly",
            "macaulay", "solve", "kernel", "cones")


@dataclass
class ResultDocument:
    command: str
    inputs_digest: str
    outputs: dict
    caps: dict
    seed: int
    timings: dict = field(default_factory=dict)
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        # field order is part of the format
        return {
            "schema": self.schema,
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "outputs": self.outputs,
            "caps": self.caps,
            "seed": self.seed,
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        return cls(d["command"], d["inputs_digest"], d["outputs"], d["caps"], d["seed"],
                   d.get("timings", {}), d["schema"])

    def to_text(self) -> str:
        lines = [f"# {self.command} ({self.inputs_digest[:12]})"]
        for key, val in self.outputs.items():
            if isinstance(val, list) and val and all(isinstance(v, str) for v in val):
                lines.append(f"{key}:")
                lines.extend(f"  {v}" for v in val)
            else:
                lines.append(f"{key}: {json.dumps(val, ensure_ascii=False)}")
        return "\n".join(lines) + "\n"


class _Unsolvable(Exception):
    def __init__(self, outputs: dict):
        super().__init__("system has no solution")
        self.outputs = outputs


def _digest(text: str, command: str, args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    h.update(command.encode())
    h.update(b"\0")
    h.update(text.encode())
    for k in ("order", "mmax", "source", "cap_degree", "cap_size", "seed"):
        h.update(f"\0{k}={getattr(args, k, None)}".encode())
    return h.hexdigest()


def _fmt(elems) -> list[str]:
    return [format_element(g) for g in elems]


def _order(prob: ProblemFile, args):
    return parse_order(args.order, prob.ring.n) if args.order else prob.order


def _caps(args) -> dict:
    return {"max_degree": args.cap_degree, "max_size": args.cap_size}


def _nonzero(gens):
    return [g for g in gens if g._terms]


def _need(prob: ProblemFile, cond: bool, msg: str):
    if not cond:
        raise AmbientMismatch(msg)


# commands -------------------------------------------------------------------------


def cmd_janet(prob, args):
    basis = janet_basis(_nonzero(prob.generators), _order(prob, args), ring=prob.ring, rank=prob.rank,
                        **_caps(args))
    return {
        "order": basis.order.spec() if hasattr(basis.order, "spec") else str(basis.order),
        "basis": _fmt(basis.elements),
        "leading_monomials": [_fmt_lead(prob, m) for m in basis.leading_monomials()],
    }


def _fmt_lead(prob, m) -> str:
    mono = format_monomial(prob.ring, m.exps) or "1"
    return mono if prob.rank == 1 else f"{mono}*e{m.pos + 1}"


def cmd_reduce(prob, args):
    """Division by the generators as given (no completion)."""
    gens = _nonzero(prob.generators)
    order = _order(prob, args)
    from .janet import _resolve_order
    red = _Reducer(gens, _resolve_order(order, prob.ring)) if gens else None
    out = []
    for t in prob.section("targets"):
        if red is None or not t._terms:
            out.append(format_element(t))
            continue
        rem, scale = red.reduce(t._terms)
        out.append(format_element(Element(prob.ring, {m: c * scale for m, c in rem.items()}, prob.rank)))
    return {"remainders": out}


def cmd_nf(prob, args):
    basis = complete(_nonzero(prob.generators), _order(prob, args), ring=prob.ring, rank=prob.rank,
                     **_caps(args))
    forms = [normal_form(t, basis) for t in prob.section("targets")]
    return {"normal_forms": _fmt(forms), "members": [not f._terms for f in forms]}


def cmd_homogenize(prob, args):
    if prob.ring.homogenized:
        out = [dehomogenize(g) for g in prob.generators]
        return {"algebra": "A", "generators": _fmt(out)}
    out = [homogenize(g) for g in prob.generators]
    return {"algebra": "hA", "generators": _fmt(out)}


def _homogeneous_generators(prob):
    gens = _nonzero(prob.generators)
    if prob.ring.homogenized:
        return gens, prob.ring
    return [homogenize(g) for g in gens], prob.ring.homogenization()


def cmd_saturate(prob, args):
    _need(prob, not prob.ring.commutative, "saturate works over the Weyl algebra")
    gens, hring = _homogeneous_generators(prob)
    res = saturate_x0(gens, _order(prob, args), ring=hring, rank=prob.rank, **_caps(args))
    return {"N": res.N, "generators": _fmt(res.generators), "trace": list(res.trace)}


def cmd_gr(prob, args):
    _need(prob, not prob.ring.commutative, "gr works over the Weyl algebra")
    gens, hring = _homogeneous_generators(prob)
    res = saturate_x0(gens, _order(prob, args), ring=hring, rank=prob.rank, **_caps(args))
    return {"algebra": "grA", "generators": _fmt(gr_generators(res.generators))}


def _hilbert(prob, args):
    _need(prob, not prob.ring.homogenized and not prob.ring.commutative,
          "hilbert expects generators in the affine Weyl algebra")
    return hilbert_function(_nonzero(prob.generators), args.source, args.mmax, _order(prob, args),
                            ring=prob.ring, rank=prob.rank, **_caps(args))


def _frac(c) -> str:
    return str(Fraction(c))


def cmd_hilbert(prob, args):
    data = _hilbert(prob, args)
    return {"source": data.source, "values": list(data.values)}


def cmd_hpoly(prob, args):
    data = _hilbert(prob, args)
    coeffs = None if data.poly_coeffs is None else [_frac(c) for c in data.poly_coeffs]
    return {"source": data.source, "values": list(data.values), "coefficients": coeffs,
            "stabilization_index": data.stabilization_index}


def _monomial_data(prob, args) -> tuple[list, list[str]]:
    """(copy, exponent tuple) pairs of a monomial module and the variable names.

    Commutative monomial input is used as given; otherwise the leading
    monomials of a Janet basis are taken (of the saturated homogenization
    for affine input).
    """
    ring = prob.ring
    gens = _nonzero(prob.generators)
    slots = slice(0, None) if ring.homogenized else slice(1, None)
    if ring.commutative:
        if any(len(g._terms) != 1 for g in gens):
            raise ValueError("commutative input must consist of monomials")
        mons = [next(iter(g._terms)) for g in gens]
    elif ring.homogenized:
        mons = janet_basis(gens, _order(prob, args), ring=ring, rank=prob.rank, **_caps(args)).leading_monomials()
    else:
        hgens = [homogenize(g) for g in gens]
        sat = saturate_x0(hgens, _order(prob, args), ring=ring.homogenization(), rank=prob.rank, **_caps(args))
        mons = [next(iter(m._terms)) for m in c_shadow(sat.basis)]
        ring, slots = ring.homogenization(), slice(0, None)
    names = (["x0"] if slots.start == 0 and not ring.homogenized else []) + ring.variable_names()
    return [(m.pos, tuple(m.exps[slots])) for m in mons], names


def _cone_text(c, names) -> str:
    inner = ", ".join(f"{names[j]}={v}" for j, v in c.fixed)
    return f"copy {c.copy + 1}: {{{inner}}}"


def cmd_macaulay(prob, args):
    pairs, names = _monomial_data(prob, args)
    nvars = len(names)
    out = []
    for i in range(prob.rank):
        gens = [e for k, e in pairs if k == i]
        mc = macaulay_constants(gens, nvars)
        out.append({"summand": i + 1, "b": list(mc.b), "generators": [list(g) for g in mc.generators]})
    return {"variables": names, "summands": out}


def cmd_cones(prob, args):
    pairs, names = _monomial_data(prob, args)
    dec = decompose(pairs, len(names), prob.rank)
    top = args.mmax if args.mmax is not None else 10
    return {
        "variables": names,
        "cones": [_cone_text(c, names) for c in dec.cones],
        "epsilon": [[_cone_text(p, names), e]
                    for p, e in sorted(dec.epsilon.items(), key=lambda pe: pe[0].sort_key())],
        "counts": [hilbert_from_cones(dec, z) for z in range(top + 1)],
    }


def _matrix(prob) -> ShiftedMatrix:
    _need(prob, prob.ring.homogenized and not prob.ring.commutative,
          "matrices for solve/kernel live over the homogenized algebra")
    rows = [g.components() if prob.rank > 1 else [g] for g in prob.generators]
    return ShiftedMatrix.from_rows(rows, prob.ring, l=prob.rank)


def cmd_kernel(prob, args):
    b = _matrix(prob)
    z = graded_kernel(b, args.cap_degree if args.cap_degree_given else None)
    return {"row_shifts": list(b.row_shifts), "col_shifts": list(b.col_shifts), "z": format_matrix_row(z)}


def cmd_solve(prob, args):
    b = _matrix(prob)
    rhs = prob.section("rhs")
    if len(rhs) != 1:
        raise ValueError("solve needs exactly one vector in the @rhs section")
    u = rhs[0].components() if prob.rank > 1 else [rhs[0]]
    res = solve_system(b, u, args.cap_degree if args.cap_degree_given else None)
    if not isinstance(res, SolutionSet):
        raise _Unsolvable({"solvable": False, "certificate": res.certificate})
    return {
        "solvable": True,
        "particular": format_matrix_row(res.particular),
        "kernel_generators": [format_matrix_row(g) for g in res.kernel_generators],
        "certified_degree": res.certified_degree,
        "nu": res.nu,
    }


HANDLERS: dict[str, Callable] = {
    "janet": cmd_janet, "reduce": cmd_reduce, "nf": cmd_nf, "homogenize": cmd_homogenize,
    "saturate": cmd_saturate, "gr": cmd_gr, "hilbert": cmd_hilbert, "hpoly": cmd_hpoly,
    "macaulay": cmd_macaulay, "solve": cmd_solve, "kernel": cmd_kernel, "cones": cmd_cones,
}


# entry points -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weyljanet", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help="problem file, or - for standard input")
    p.add_argument("--order", help="order spec overriding the file header")
    p.add_argument("--mmax", type=int, help="largest degree tabulated")
    p.add_argument("--source", choices=SOURCES, default="affine", help="Hilbert function route")
    p.add_argument("--cap-degree", type=int, default=None)
    p.add_argument("--cap-size", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock timings")
    return p


def run(command: str, text: str, args: argparse.Namespace) -> tuple[int, ResultDocument | None, str]:
    """Execute one command on problem-file text; returns (exit code, document, diagnostic)."""
    args.cap_degree_given = args.cap_degree is not None
    if args.cap_degree is None:
        args.cap_degree = 64
    caps = {"degree": args.cap_degree, "size": args.cap_size}
    digest = _digest(text, command, args)
    start = time.perf_counter()
    try:
        prob = parse_problem(text)
        outputs = HANDLERS[command](prob, args)
        code = EXIT_OK
    except _Unsolvable as exc:
        outputs, code = exc.outputs, EXIT_UNSOLVABLE
    except ResourceLimitError as exc:
        return EXIT_CAP, None, f"resource cap reached: {exc}"
    except (ParseError, AmbientMismatch, ValueError) as exc:
        return EXIT_USAGE, None, f"error: {exc}"
    timings = {} if getattr(args, "no_timings", False) else {"wall_seconds": round(time.perf_counter() - start, 6)}
    doc = ResultDocument(command, digest, outputs, caps, args.seed, timings)
    return code, doc, ""


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.problem == "-":
            text = sys.stdin.read()
        else:
            with open(args.problem, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code, doc, diag = run(args.command, text, args)
    if diag:
        print(diag, file=sys.stderr)
    if doc is not None:
        sys.stdout.write(doc.to_json() if args.format == "json" else doc.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
