"""Shared fixtures, model builders, and independent oracles.

The brute-force helpers here enumerate paths directly from the step rows,
never through the kernel algebra under test, so they can serve as oracles
for it.
"""
from __future__ import annotations

import random

import pytest

from markovtraj import (
    ChainModel,
    Dist,
    FiniteSpace,
    Kernel,
    Rat,
    TupleSpace,
)

# ---- acceptance reporting ----

ACCEPTANCE_LINES: list = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    # keep the one-line-per-criterion summary visible despite output capture
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


# ---- hand-written models ----

WEATHER_ROWS = {"S": ("3/4", "1/4"), "R": ("1/2", "1/2")}


def last_state_chain(space: FiniteSpace, rows: dict, depth: int) -> ChainModel:
    """Chain whose step at every depth depends only on the last state."""
    dists = {label: Dist(space, rows[label]) for label in space.points()}
    steps = []
    for n in range(depth):
        prefix_space = TupleSpace([space] * (n + 1))
        steps.append(
            Kernel(prefix_space, space, [dists[p[-1]] for p in prefix_space.points()])
        )
    return ChainModel([space] * (depth + 1), steps)


def weather_chain(depth: int = 3) -> ChainModel:
    return last_state_chain(FiniteSpace("W", ["S", "R"]), WEATHER_ROWS, depth)


@pytest.fixture
def weather() -> ChainModel:
    return weather_chain()


# ---- random models ----


def random_dist(rng: random.Random, space: FiniteSpace) -> Dist:
    """Random rational distribution; zero weights are allowed but not forced."""
    weights = [rng.randint(0, 4) for _ in range(space.size)]
    if not any(weights):
        weights[rng.randrange(space.size)] = 1
    total = sum(weights)
    return Dist(space, [Rat(w, total) for w in weights])


def random_chain(rng: random.Random, depth: int | None = None) -> ChainModel:
    """Random chain: 2-3 states per depth, depth 2-5, arbitrary step rows."""
    if depth is None:
        depth = rng.randint(2, 5)
    spaces = [
        FiniteSpace(f"X{i}", [f"s{j}" for j in range(rng.randint(2, 3))])
        for i in range(depth + 1)
    ]
    steps = []
    for n in range(depth):
        prefix_space = TupleSpace(spaces[: n + 1])
        rows = [random_dist(rng, spaces[n + 1]) for _ in range(prefix_space.size)]
        steps.append(Kernel(prefix_space, spaces[n + 1], rows))
    return ChainModel(spaces, steps)


def random_prefix(rng: random.Random, chain: ChainModel, depth: int) -> tuple:
    return tuple(rng.choice(space.labels) for space in chain.spaces[: depth + 1])


def positive_extension(rng: random.Random, chain: ChainModel, prefix: tuple) -> tuple:
    """Extend to full depth through states of positive step weight."""
    p = tuple(prefix)
    for n in range(len(p) - 1, chain.max_depth):
        row = chain.steps[n].row(p)
        choices = [row.space.point_at(i) for i, _ in row.support()]
        p = p + (rng.choice(choices),)
    return p


def random_nested_family(rng: random.Random, chain: ChainModel, start: tuple) -> list:
    """Nested cylinders, outermost first, all of positive content from `start`.

    Built around a positive-probability extension of `start`: the innermost
    base holds its restriction, each shallower base holds the restrictions
    of the deeper one plus random extras, so nesting holds by construction
    and every content is at least the extension's probability.
    """
    from markovtraj import cylinder

    traj = positive_extension(rng, chain, start)
    depths = sorted(rng.sample(range(chain.max_depth + 1), rng.randint(1, 3)))
    family = []
    inner_points = {traj[: depths[-1] + 1]}
    for depth in reversed(depths):
        points = {t[: depth + 1] for t in inner_points}
        for _ in range(rng.randint(0, 2)):
            points.add(random_prefix(rng, chain, depth))
        family.append(cylinder(chain, depth, points))
        inner_points = points
    family.reverse()
    return family


# ---- brute-force oracles ----


def brute_force_prefix_law(chain: ChainModel, prefix: tuple, b: int) -> dict:
    """Law of the depth-b prefix from `prefix`, by direct path enumeration.

    Walks the step rows one depth at a time and multiplies weights along
    every path, without touching the kernel algebra.
    """
    a = len(prefix) - 1
    if b <= a:
        return {prefix[: b + 1]: Rat(1)}
    acc = {tuple(prefix): Rat(1)}
    for n in range(a, b):
        nxt: dict = {}
        for p, w in acc.items():
            row = chain.steps[n].row(p)
            for i, ws in row.support():
                q = p + (row.space.point_at(i),)
                nxt[q] = nxt.get(q, Rat(0)) + w * ws
        acc = nxt
    return acc


def brute_force_content(chain: ChainModel, prefix: tuple, constraints: dict) -> Rat:
    """Probability of {x_i in allowed_i} from `prefix`, by path enumeration."""
    depth = max(max(constraints), len(prefix) - 1)
    law = brute_force_prefix_law(chain, prefix, depth)
    total = Rat(0)
    for traj, w in law.items():
        if all(traj[i] in allowed for i, allowed in constraints.items()):
            total += w
    return total
