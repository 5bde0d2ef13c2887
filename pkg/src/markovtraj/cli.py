"""Command line interface.

Verbs:
  validate  load a model file and report its shape
  marginal  law of the depth-b prefix from a starting prefix
  cylinder  list the prefixes a cylinder constraint allows
  content   probability of a cylinder from a starting prefix
  sample    seeded exact sampling of full trajectories, as counts
  witness   a common point of nested cylinders with contents >= eps
  condexp   conditional probability of a cylinder given b coordinates
  verify    run every identity check on the model and print the report

Prefixes are written as labels joined by "|" (so "S|R" is x_0=S, x_1=R)
and cylinder constraints as comma-separated coordinate clauses like
"1=S,2=S|R", where "|" separates allowed states.  Rationals are written
"p/q" or "p".  Exit codes: 0 success, 1 failed verify checks, 2 malformed
model file, 3 bad request (unknown state, depth out of range, violated
precondition), 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import random
import sys

from .errors import (
    DomainError,
    InvariantError,
    ModelFormatError,
    PreconditionError,
)
from .model_io import LoadedModel, load_model
from .rational import format_rational, parse_rational
from .report import Report
from .trajectory import (
    cond_exp,
    cylinder_content,
    cylinder_from_constraints,
    extract_witness,
    lift_cylinder,
    sample_trajectory,
    traj_marginal,
)
from .verify import run_verify


def _parse_point(text: str) -> tuple:
    return tuple(text.split("|"))


def _parse_cylinder_spec(spec: str) -> dict:
    constraints: dict = {}
    for clause in spec.split(","):
        clause = clause.strip()
        coord_text, sep, states_text = clause.partition("=")
        if not sep or not coord_text or not states_text:
            raise DomainError(f"bad cylinder clause {clause!r}; want COORD=STATE[|STATE..]")
        try:
            coord = int(coord_text)
        except ValueError:
            raise DomainError(f"bad coordinate {coord_text!r} in cylinder spec") from None
        if coord in constraints:
            raise DomainError(f"coordinate {coord} constrained twice")
        constraints[coord] = states_text.split("|")
    return constraints


def _parse_eps(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _load(args) -> LoadedModel:
    return load_model(args.model)


def _model_line(loaded: LoadedModel) -> str:
    chain = loaded.chain
    sizes = "x".join(str(s.size) for s in chain.spaces)
    kind = "chain" if loaded.marginals is None else "product"
    return f"MODEL kind={kind} depth={chain.max_depth} sizes={sizes}"


def _cmd_validate(args) -> int:
    loaded = _load(args)
    print(_model_line(loaded))
    print("VALID")
    return 0


def _cmd_marginal(args) -> int:
    chain = _load(args).chain
    point = _parse_point(args.point)
    dist = traj_marginal(chain, len(point) - 1, point, args.at)
    space = dist.space
    for i, w in dist.support():
        print(f"{space.format_point(space.point_at(i))} {format_rational(w)}")
    return 0


def _cmd_cylinder(args) -> int:
    chain = _load(args).chain
    cyl = cylinder_from_constraints(chain, _parse_cylinder_spec(args.cylinder[0]))
    if args.lift is not None:
        cyl = lift_cylinder(chain, cyl, args.lift)
    space = cyl.base.space
    for i in sorted(cyl.base.indices):
        print(space.format_point(space.point_at(i)))
    return 0


def _cmd_content(args) -> int:
    chain = _load(args).chain
    point = _parse_point(args.point)
    cyl = cylinder_from_constraints(chain, _parse_cylinder_spec(args.cylinder[0]))
    print(format_rational(cylinder_content(chain, len(point) - 1, point, cyl)))
    return 0


def _cmd_sample(args) -> int:
    loaded = _load(args)
    chain = loaded.chain
    rng = random.Random(args.seed)
    if args.point is not None:
        start = _parse_point(args.point)
        draw_start = None
    elif loaded.marginals is not None:
        start = None
        draw_start = loaded.marginals[0]
    else:
        raise DomainError(
            "a chain file does not say how to draw coordinate 0; give --point"
        )
    counts: dict = {}
    for _ in range(args.samples):
        prefix = start if start is not None else (draw_start.sample(rng),)
        traj = sample_trajectory(chain, prefix, rng)
        counts[traj] = counts.get(traj, 0) + 1
    space = chain.prefix_space(chain.max_depth)
    for index, traj in sorted((space.index_of(t), t) for t in counts):
        print(f"{space.format_point(traj)} {counts[traj]}")
    return 0


def _cmd_witness(args) -> int:
    chain = _load(args).chain
    point = _parse_point(args.point)
    cylinders = [
        cylinder_from_constraints(chain, _parse_cylinder_spec(spec))
        for spec in args.cylinder
    ]
    eps = _parse_eps(args.eps)
    witness = extract_witness(chain, len(point) - 1, point, cylinders, eps)
    print(chain.prefix_space(len(witness) - 1).format_point(witness))
    return 0


def _cmd_condexp(args) -> int:
    chain = _load(args).chain
    cyl = cylinder_from_constraints(chain, _parse_cylinder_spec(args.cylinder[0]))
    lifted = lift_cylinder(chain, cyl, chain.max_depth)

    def indicator(traj) -> int:
        return 1 if lifted.base.space.index_of(traj) in lifted.base.indices else 0

    table = cond_exp(chain, args.at, indicator)
    space = chain.prefix_space(args.at)
    for p in space.points():
        print(f"{space.format_point(p)} {format_rational(table[p])}")
    return 0


def _cmd_verify(args) -> int:
    report: Report = run_verify(_load(args))
    print(report.render())
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovtraj",
        description="Exact trajectory measures of finite-depth Markov chains.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="path to a model JSON file")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, "load a model file and report its shape")

    p = add("marginal", _cmd_marginal, "law of the depth-b prefix from a start prefix")
    p.add_argument("--point", required=True, help='start prefix, e.g. "S|R"')
    p.add_argument("--at", type=int, required=True, help="target depth b")

    p = add("cylinder", _cmd_cylinder, "list the prefixes a cylinder allows")
    p.add_argument("--cylinder", action="append", required=True, help='e.g. "1=S,2=S|R"')
    p.add_argument("--lift", type=int, help="describe the cylinder at this depth")

    p = add("content", _cmd_content, "probability of a cylinder from a start prefix")
    p.add_argument("--point", required=True)
    p.add_argument("--cylinder", action="append", required=True)

    p = add("sample", _cmd_sample, "seeded exact sampling, printed as counts")
    p.add_argument("--point", help="start prefix; product files may omit it")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10000)

    p = add("witness", _cmd_witness, "common point of nested cylinders")
    p.add_argument("--point", required=True)
    p.add_argument("--cylinder", action="append", required=True,
                   help="repeat for a nested family, outermost first")
    p.add_argument("--eps", required=True, help="content lower bound, e.g. 1/4")

    p = add("condexp", _cmd_condexp, "conditional cylinder probability table")
    p.add_argument("--cylinder", action="append", required=True)
    p.add_argument("--at", type=int, required=True, help="condition on depths 0..b")

    add("verify", _cmd_verify, "run all identity checks and print a report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
