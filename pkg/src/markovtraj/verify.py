"""Exhaustive identity checks for a loaded model, rendered as a report.

Every check compares two values that the theory says must be equal, built
through the public operations, and adds one PASS/FAIL line.  All depth
combinations of the model are covered, so the cost grows quickly with
maxDepth; this is meant for the small models that ship in model files.
"""
from __future__ import annotations

from .kernel import (
    Kernel,
    comp_kernel,
    comp_measure,
    comp_prod_kernel,
    comp_prod_measure,
    const_kernel,
    map_kernel,
)
from .measure import TupleSpace, dirac, product_dist, pushforward_dist
from .model_io import LoadedModel
from .product import initial_prefix_dist, product_prefix_dist
from .rational import ONE, ZERO, Rat
from .report import (
    Report,
    canonical_dist,
    canonical_kernel,
    canonical_table,
)
from .trajectory import (
    ChainModel,
    cond_exp,
    content_at_depth,
    cylinder_content,
    cylinder_from_constraints,
    disjoint_union_cylinders,
    extract_witness,
    intersect_cylinders,
    lift_cylinder,
    expectation_table,
    traj_marginal,
)


def run_verify(loaded: LoadedModel) -> Report:
    chain = loaded.chain
    sizes = "x".join(str(s.size) for s in chain.spaces)
    kind = "chain" if loaded.marginals is None else "product"
    report = Report(f"MODEL kind={kind} depth={chain.max_depth} sizes={sizes}")
    _kernel_checks(report, chain)
    _content_checks(report, chain)
    _witness_check(report, chain)
    _condexp_checks(report, chain)
    _split_checks(report, chain)
    if loaded.marginals is not None:
        _product_checks(report, chain, loaded.marginals)
    return report


def _index_fraction(space):
    """Canonical nonnegative test function: enumeration index over size."""
    return lambda p: Rat(space.index_of(p), space.size)


def _depth_triples(depth: int):
    return (
        (a, b, c)
        for a in range(depth + 1)
        for b in range(a, depth + 1)
        for c in range(b, depth + 1)
    )


def _kernel_checks(report: Report, chain: ChainModel) -> None:
    for a, b, c in _depth_triples(chain.max_depth):
        composed = comp_kernel(chain.partial_traj(a, b), chain.partial_traj(b, c))
        report.add_compared(
            f"kernel-comp:{a},{b},{c}",
            canonical_kernel(composed),
            canonical_kernel(chain.partial_traj(a, c)),
        )
    for a, b, c in _depth_triples(chain.max_depth):
        restricted = map_kernel(
            chain.partial_traj(a, c), lambda p: p[: b + 1], chain.prefix_space(b)
        )
        report.add_compared(
            f"restrict:{a},{b},{c}",
            canonical_kernel(restricted),
            canonical_kernel(chain.partial_traj(a, b)),
        )
    for a, b, c in _depth_triples(chain.max_depth):
        f = _index_fraction(chain.prefix_space(c))
        staged = expectation_table(chain, a, b, expectation_table(chain, b, c, f))
        direct = expectation_table(chain, a, c, f)
        space_a = chain.prefix_space(a)
        report.add_compared(
            f"tower:{a},{b},{c}",
            canonical_table(space_a, staged),
            canonical_table(space_a, direct),
        )


def _canonical_start(chain: ChainModel) -> tuple:
    return (chain.spaces[0].labels[0],)


def _best_constraint_cylinder(chain: ChainModel, start, coord: int, within=None):
    """Cylinder {x_coord = s} (intersected with `within`) of largest content.

    Ties go to the first state in enumeration order, so the choice is
    deterministic; the maximum is positive because the candidate contents
    sum to the content of `within` (or to 1).
    """
    best = None
    best_content = None
    for s in chain.spaces[coord].points():
        cand = cylinder_from_constraints(chain, {coord: [s]})
        if within is not None:
            cand = intersect_cylinders(chain, within, cand)
        content = cylinder_content(chain, 0, start, cand)
        if best_content is None or content > best_content:
            best = cand
            best_content = content
    return best, best_content


def _content_checks(report: Report, chain: ChainModel) -> None:
    start = _canonical_start(chain)
    coord = min(1, chain.max_depth)
    outer, _ = _best_constraint_cylinder(chain, start, coord)
    report.add_scalars(
        "content-depth",
        content_at_depth(chain, 0, start, outer, max(0, outer.depth)),
        content_at_depth(chain, 0, start, outer, chain.max_depth),
    )
    parts = [
        cylinder_from_constraints(chain, {coord: [s]})
        for s in chain.spaces[coord].points()
    ]
    union = disjoint_union_cylinders(chain, parts)
    total = sum((cylinder_content(chain, 0, start, c) for c in parts), ZERO)
    report.add_scalars(
        "content-additive", total, cylinder_content(chain, 0, start, union)
    )


def _witness_check(report: Report, chain: ChainModel) -> None:
    start = _canonical_start(chain)
    outer, _ = _best_constraint_cylinder(chain, start, min(1, chain.max_depth))
    inner, eps = _best_constraint_cylinder(
        chain, start, min(2, chain.max_depth), within=outer
    )
    witness = extract_witness(chain, 0, start, [outer, inner], eps)
    member = ONE
    for cyl in (outer, inner):
        lifted = lift_cylinder(chain, cyl, len(witness) - 1)
        if lifted.base.space.index_of(witness) not in lifted.base.indices:
            member = ZERO
    report.add_scalars("witness-member", member, ONE)


def _condexp_checks(report: Report, chain: ChainModel) -> None:
    depth = chain.max_depth
    space_d = chain.prefix_space(depth)
    f = _index_fraction(space_d)
    for b in range(depth + 1):
        space_b = chain.prefix_space(b)
        table = cond_exp(chain, b, f)
        ratio = space_d.size // space_b.size
        for a in range(b + 1):
            u = chain.prefix_space(a).point_at(0)
            law = traj_marginal(chain, a, u, depth)
            f_mass: dict = {}
            mass: dict = {}
            for j, w in law.support():
                block = j // ratio
                f_mass[block] = f_mass.get(block, ZERO) + w * f(space_d.point_at(j))
                mass[block] = mass.get(block, ZERO) + w
            lhs = {space_b.point_at(i): v for i, v in f_mass.items()}
            rhs = {
                space_b.point_at(i): mass[i] * table[space_b.point_at(i)]
                for i in mass
            }
            report.add_compared(
                f"condexp:{a},{b}",
                canonical_table(space_b, lhs),
                canonical_table(space_b, rhs),
            )


def _split_checks(report: Report, chain: ChainModel) -> None:
    depth = chain.max_depth
    space_d = chain.prefix_space(depth)
    for b in range(depth + 1):
        space_b = chain.prefix_space(b)
        rest = chain.partial_traj(b, depth)
        for a in range(b + 1):
            first = chain.partial_traj(a, b)
            whole = chain.partial_traj(a, depth)
            pair_source = TupleSpace([chain.prefix_space(a), space_b])
            continuation = Kernel(
                pair_source,
                space_d,
                [rest.row_at(i % space_b.size) for i in range(pair_source.size)],
            )
            two_stage = comp_prod_kernel(first, continuation)
            direct = map_kernel(
                whole,
                lambda y: (y[: b + 1], y),
                TupleSpace([space_b, space_d]),
            )
            report.add_compared(
                f"split:{a},{b}",
                canonical_kernel(two_stage),
                canonical_kernel(direct),
            )


def _product_checks(report: Report, chain: ChainModel, marginals) -> None:
    depth = chain.max_depth
    for a in range(depth + 1):
        space_a = chain.prefix_space(a)
        for b in range(a, depth + 1):
            rows = []
            for prefix in space_a.points():
                factors = [dirac(sp, s) for sp, s in zip(chain.spaces, prefix)]
                factors.extend(marginals[a + 1 : b + 1])
                rows.append(product_dist(factors))
            literal = Kernel(space_a, chain.prefix_space(b), rows)
            report.add_compared(
                f"product-form:{a},{b}",
                canonical_kernel(chain.partial_traj(a, b)),
                canonical_kernel(literal),
            )
    law = comp_measure(
        initial_prefix_dist(marginals[0]), chain.partial_traj(0, depth)
    )
    report.add_compared(
        "product-law",
        canonical_dist(law),
        canonical_dist(product_prefix_dist(marginals, depth)),
    )
    for a in range(depth + 1):
        for b in range(a + 1, depth + 1):
            whole = product_prefix_dist(marginals, b)
            head = product_prefix_dist(marginals, a)
            tail = product_dist(list(marginals[a + 1 : b + 1]))
            paired = comp_prod_measure(head, const_kernel(head.space, tail))
            flattened = pushforward_dist(
                paired, lambda pair: pair[0] + pair[1], whole.space
            )
            report.add_compared(
                f"product-split:{a},{b}",
                canonical_dist(flattened),
                canonical_dist(whole),
            )
            restricted = pushforward_dist(whole, lambda p: p[: a + 1], head.space)
            report.add_compared(
                f"product-proj:{a},{b}",
                canonical_dist(restricted),
                canonical_dist(head),
            )
