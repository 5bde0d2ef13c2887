"""Finite-depth Markov chains and their trajectory measures, exactly.

Implements:
  * ChainModel: state spaces X_0..X_D plus one step kernel per depth, where
    each step reads the whole prefix so far.
  * partial_traj: the kernel from depth-a prefixes to depth-b prefixes,
    built by composing one-step advances (and by plain restriction when the
    target depth is not larger).
  * expectation_table / traj_marginal / sample_trajectory: integration against,
    marginals of, and exact seeded sampling from the trajectory law.
  * Cylinder: a constraint on finitely many coordinates, stored as a set of
    prefixes at its depth, with lifting, intersection and disjoint union.
  * cylinder_content and extract_witness: the content of a cylinder under
    the trajectory law, and a greedy construction of a common point for a
    nested sequence of cylinders whose contents stay above a bound.
  * cond_exp / check_cond_exp / check_traj_split: conditional
    expectation given the first b coordinates as an explicit table, and
    exact checks of its defining identity and of the two-stage
    decomposition of the trajectory law.

Prefixes are tuples of state labels; a prefix of depth n has n + 1 entries.
Prefix spaces enumerate lexicographically with coordinate 0 most
significant, so all prefixes sharing a given initial segment form one
contiguous index block.  Several routines below lean on that.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError, InvariantError, PreconditionError
from .kernel import (
    Kernel,
    comp_kernel,
    deterministic_kernel,
    id_kernel,
    map_kernel,
    prod_kernel,
)
from .measure import Dist, SubsetOf, TupleSpace
from .rational import ZERO, Rat


def restrict_prefix(prefix: tuple, depth: int) -> tuple:
    """Initial segment of a prefix down to the given depth."""
    if not 0 <= depth < len(prefix):
        raise DomainError(f"cannot restrict a prefix of {len(prefix)} entries to depth {depth}")
    return prefix[: depth + 1]


class ChainModel:
    """A Markov chain of fixed finite depth with history-dependent steps.

    Parameters
    ----------
    spaces : sequence of FiniteSpace
        State spaces X_0 .. X_D; the chain has max_depth D = len(spaces) - 1.
    steps : sequence of Kernel
        steps[n] maps the depth-n prefix space into X_{n+1}; there must be
        exactly max_depth of them.

    Partial-trajectory kernels and the per-depth advance kernels are
    memoized on the model, so repeated queries share all the work.
    """

    def __init__(self, spaces: Sequence, steps: Sequence[Kernel]):
        self.spaces = tuple(spaces)
        if not self.spaces:
            raise DomainError("a chain needs at least the depth-0 space")
        self.max_depth = len(self.spaces) - 1
        self.steps = tuple(steps)
        if len(self.steps) != self.max_depth:
            raise DomainError(
                f"expected {self.max_depth} step kernels, got {len(self.steps)}"
            )
        self._prefix_spaces: dict = {}
        for n, step in enumerate(self.steps):
            if step.source != self.prefix_space(n):
                raise DomainError(f"step {n} does not read the depth-{n} prefix space")
            if step.target != self.spaces[n + 1]:
                raise DomainError(f"step {n} does not map into the depth-{n + 1} space")
        self._partial: dict = {}
        self._advance: dict = {}

    def prefix_space(self, depth: int) -> TupleSpace:
        """Space of prefixes (x_0, .., x_depth)."""
        if not 0 <= depth <= self.max_depth:
            raise DomainError(f"depth {depth} outside 0..{self.max_depth}")
        space = self._prefix_spaces.get(depth)
        if space is None:
            space = TupleSpace(self.spaces[: depth + 1])
            self._prefix_spaces[depth] = space
        return space

    def check_prefix(self, prefix, depth: int) -> tuple:
        """Validate a prefix of the given depth, returning it as a tuple."""
        prefix = tuple(prefix)
        self.prefix_space(depth).index_of(prefix)
        return prefix

    def depth_of(self, prefix: tuple) -> int:
        depth = len(prefix) - 1
        self.check_prefix(prefix, depth)
        return depth

    def advance_kernel(self, depth: int) -> Kernel:
        """One-step extension kernel from depth-`depth` to depth-`depth`+1 prefixes.

        Built as: keep the prefix, draw the next state from the step kernel
        as a one-entry segment, then concatenate the pair.
        """
        kern = self._advance.get(depth)
        if kern is None:
            if not 0 <= depth < self.max_depth:
                raise DomainError(f"no step kernel at depth {depth}")
            here = self.prefix_space(depth)
            segment = TupleSpace([self.spaces[depth + 1]])
            step_as_segment = map_kernel(self.steps[depth], lambda s: (s,), segment)
            paired = prod_kernel(id_kernel(here), step_as_segment)
            kern = map_kernel(
                paired, lambda pair: pair[0] + pair[1], self.prefix_space(depth + 1)
            )
            self._advance[depth] = kern
        return kern

    def partial_traj(self, a: int, b: int) -> Kernel:
        """Kernel from depth-a prefixes to depth-b prefixes.

        For b <= a this is deterministic restriction; otherwise it is the
        (a, b-1) kernel followed by the one-step advance at b-1.
        """
        if not 0 <= a <= self.max_depth:
            raise DomainError(f"depth {a} outside 0..{self.max_depth}")
        if not 0 <= b <= self.max_depth:
            raise DomainError(f"depth {b} outside 0..{self.max_depth}")
        kern = self._partial.get((a, b))
        if kern is None:
            if b <= a:
                kern = deterministic_kernel(
                    self.prefix_space(a),
                    self.prefix_space(b),
                    lambda p: p[: b + 1],
                )
            else:
                kern = comp_kernel(self.partial_traj(a, b - 1), self.advance_kernel(b - 1))
            self._partial[(a, b)] = kern
        return kern

    def __repr__(self) -> str:
        sizes = "x".join(str(s.size) for s in self.spaces)
        return f"ChainModel(depth={self.max_depth}, sizes={sizes})"


# ---- integration and sampling ----


def _as_fn(f) -> Callable:
    if callable(f):
        return f
    if isinstance(f, Mapping):
        return f.__getitem__
    raise DomainError("expected a callable or a mapping from prefixes to rationals")


def expectation_table(model: ChainModel, a: int, b: int, f) -> dict:
    """Integrate a nonnegative f on depth-b prefixes back to depth a.

    Returns the table {depth-a prefix: integral of f against the (a, b)
    trajectory kernel started there}.  For a <= b <= c, integrating first
    from c to b and then to a agrees with integrating from c to a directly.
    """
    if not 0 <= a <= b <= model.max_depth:
        raise DomainError(f"need 0 <= a <= b <= {model.max_depth}")
    fn = _as_fn(f)
    kern = model.partial_traj(a, b)
    return {
        p: kern.row_at(i).integrate(fn)
        for i, p in enumerate(model.prefix_space(a).points())
    }


def traj_marginal(model: ChainModel, a: int, prefix, b: int) -> Dist:
    """Law of the depth-b prefix when the chain is started from `prefix`."""
    prefix = model.check_prefix(prefix, a)
    return model.partial_traj(a, b).row(prefix)


def sample_trajectory(model: ChainModel, prefix, rng) -> tuple:
    """Extend `prefix` to a full depth-D trajectory by sampling each step.

    Exact: each state is drawn with its rational probability.  The result
    is a pure function of the rng state, which is advanced in place.
    """
    depth = len(prefix) - 1
    p = model.check_prefix(prefix, depth)
    for n in range(depth, model.max_depth):
        p = p + (model.steps[n].row(p).sample(rng),)
    return p


# ---- cylinders ----


@dataclass(frozen=True)
class Cylinder:
    """A set of trajectories constrained on coordinates 0..depth.

    Held as the set of allowed depth-`depth` prefixes; a trajectory belongs
    to the cylinder iff its restriction to that depth is in `base`.
    """

    depth: int
    base: SubsetOf

    def __post_init__(self):
        if self.depth != len(self.base.space.components) - 1:
            raise DomainError("cylinder depth does not match its base space")

    def __contains__(self, trajectory) -> bool:
        return trajectory[: self.depth + 1] in self.base

    def __len__(self) -> int:
        return len(self.base)


def cylinder(model: ChainModel, depth: int, prefixes: Iterable) -> Cylinder:
    """Cylinder of all trajectories whose depth-`depth` prefix is listed."""
    space = model.prefix_space(depth)
    return Cylinder(depth, SubsetOf.from_points(space, map(tuple, prefixes)))


def cylinder_from_constraints(model: ChainModel, constraints: Mapping[int, Iterable]) -> Cylinder:
    """Cylinder {x_i in allowed_i for each constrained coordinate i}.

    The cylinder's depth is the largest constrained coordinate.
    """
    if not constraints:
        raise DomainError("at least one coordinate must be constrained")
    depth = max(constraints)
    if min(constraints) < 0 or depth > model.max_depth:
        raise DomainError(f"constrained coordinates must lie in 0..{model.max_depth}")
    allowed = {}
    for i, states in constraints.items():
        allowed[i] = {model.spaces[i].index_of(s) for s in states}
    space = model.prefix_space(depth)
    indices = [
        i
        for i, p in enumerate(space.points())
        if all(model.spaces[j].index_of(p[j]) in ok for j, ok in allowed.items())
    ]
    return Cylinder(depth, SubsetOf(space, indices))


def lift_cylinder(model: ChainModel, cyl: Cylinder, depth: int) -> Cylinder:
    """The same set of trajectories, described at a greater depth."""
    if depth < cyl.depth:
        raise DomainError("cannot lift a cylinder to a smaller depth")
    if depth == cyl.depth:
        return cyl
    space = model.prefix_space(depth)
    # Extensions of one prefix form a contiguous block of the lexicographic
    # enumeration, so lifting is a union of blocks.
    ratio = space.size // model.prefix_space(cyl.depth).size
    indices = [i * ratio + t for i in cyl.base.indices for t in range(ratio)]
    return Cylinder(depth, SubsetOf(space, indices))


def intersect_cylinders(model: ChainModel, first: Cylinder, second: Cylinder) -> Cylinder:
    """Intersection, described at the deeper of the two depths."""
    depth = max(first.depth, second.depth)
    a = lift_cylinder(model, first, depth)
    b = lift_cylinder(model, second, depth)
    return Cylinder(depth, SubsetOf(a.base.space, a.base.indices & b.base.indices))


def union_cylinders(model: ChainModel, first: Cylinder, second: Cylinder) -> Cylinder:
    """Union, described at the deeper of the two depths."""
    depth = max(first.depth, second.depth)
    a = lift_cylinder(model, first, depth)
    b = lift_cylinder(model, second, depth)
    return Cylinder(depth, SubsetOf(a.base.space, a.base.indices | b.base.indices))


def diff_cylinders(model: ChainModel, first: Cylinder, second: Cylinder) -> Cylinder:
    """Trajectories of `first` not in `second`, at the deeper of the depths.

    With intersection this makes the cylinders a ring of sets: both
    operations land on cylinders again, no closure under complement needed.
    """
    depth = max(first.depth, second.depth)
    a = lift_cylinder(model, first, depth)
    b = lift_cylinder(model, second, depth)
    return Cylinder(depth, SubsetOf(a.base.space, a.base.indices - b.base.indices))


def disjoint_union_cylinders(model: ChainModel, cylinders: Sequence[Cylinder]) -> Cylinder:
    """Union of pairwise disjoint cylinders, at the deepest depth involved."""
    if not cylinders:
        raise DomainError("union of zero cylinders is not defined")
    depth = max(c.depth for c in cylinders)
    lifted = [lift_cylinder(model, c, depth) for c in cylinders]
    seen: set = set()
    for c in lifted:
        if seen & c.base.indices:
            raise PreconditionError("cylinders overlap; union would double-count")
        seen |= c.base.indices
    return Cylinder(depth, SubsetOf(lifted[0].base.space, seen))


def is_sub_cylinder(model: ChainModel, inner: Cylinder, outer: Cylinder) -> bool:
    """Whether every trajectory of `inner` belongs to `outer`."""
    depth = max(inner.depth, outer.depth)
    a = lift_cylinder(model, inner, depth)
    b = lift_cylinder(model, outer, depth)
    return a.base.indices <= b.base.indices


# ---- cylinder content ----


def content_at_depth(model: ChainModel, a: int, prefix, cyl: Cylinder, depth: int) -> Rat:
    """Probability of the cylinder, evaluated through the depth-`depth` law.

    Any depth >= max(a, cyl.depth) gives the same value; `cylinder_content`
    uses the smallest one, and this entry point exists so that independence
    of the choice can be checked exactly.
    """
    if depth < max(a, cyl.depth):
        raise DomainError("evaluation depth must cover both the prefix and the cylinder")
    lifted = lift_cylinder(model, cyl, depth)
    return traj_marginal(model, a, prefix, depth).mass(lifted.base)


def cylinder_content(model: ChainModel, a: int, prefix, cyl: Cylinder) -> Rat:
    """Probability that the chain started from `prefix` lands in the cylinder."""
    return content_at_depth(model, a, prefix, cyl, max(a, cyl.depth))


def check_content_additivity(
    model: ChainModel, a: int, prefix, cylinders: Sequence[Cylinder]
) -> bool:
    """Exact check that content adds up over a disjoint cylinder family."""
    union = disjoint_union_cylinders(model, cylinders)
    total = sum((cylinder_content(model, a, prefix, c) for c in cylinders), ZERO)
    return total == cylinder_content(model, a, prefix, union)


# ---- witness extraction ----


def extract_witness(
    model: ChainModel, a: int, prefix, cylinders: Sequence[Cylinder], eps
) -> tuple:
    """A prefix that extends `prefix` and meets every listed cylinder.

    Requires the cylinders to be nested (each contained in the one before)
    and every content from `prefix` to be at least eps > 0; under those
    preconditions a common point exists, and this constructs one greedily.

    At each depth the next state is chosen to maximise the content of the
    innermost cylinder from the extended prefix, first state in enumeration
    order on ties.  The maximum over successor states is at least the
    step-weighted average, which is the current content, so the content
    stays >= eps until the cylinder depth is reached, where it becomes a
    membership indicator.
    """
    eps = Rat(eps)
    if eps <= 0:
        raise DomainError("the content bound must be positive")
    if not cylinders:
        raise DomainError("need at least one cylinder")
    prefix = model.check_prefix(prefix, a)
    target_depth = max(a, max(c.depth for c in cylinders))
    lifted = [lift_cylinder(model, c, target_depth) for c in cylinders]
    for inner, outer in zip(lifted[1:], lifted):
        if not inner.base.indices <= outer.base.indices:
            raise PreconditionError("cylinders are not nested")
    for c in cylinders:
        if cylinder_content(model, a, prefix, c) < eps:
            raise PreconditionError(f"a cylinder has content below {eps}")

    innermost = lifted[-1].base
    current = prefix
    for depth in range(a, target_depth):
        best_state = None
        best_content = None
        for state in model.spaces[depth + 1].points():
            extended = current + (state,)
            content = (
                model.partial_traj(depth + 1, target_depth)
                .row(extended)
                .mass(innermost)
            )
            if best_content is None or content > best_content:
                best_state = state
                best_content = content
        current = current + (best_state,)

    for c in lifted:
        if model.prefix_space(target_depth).index_of(current) not in c.base.indices:
            raise InvariantError("constructed point escaped a cylinder")
    return current


# ---- conditional expectation ----


def cond_exp(model: ChainModel, b: int, f) -> dict:
    """Conditional expectation of f given the first b coordinates, as a table.

    f assigns a rational to every full trajectory; the returned table maps
    each depth-b prefix to the mean of f under the chain continued from it.
    """
    fn = _as_fn(f)
    kern = model.partial_traj(b, model.max_depth)
    space_d = model.prefix_space(model.max_depth)
    table = {}
    for i, p in enumerate(model.prefix_space(b).points()):
        total = ZERO
        for j, w in kern.row_at(i).support():
            total += w * Rat(fn(space_d.point_at(j)))
        table[p] = total
    return table


def check_cond_exp(model: ChainModel, a: int, prefix, b: int, f) -> bool:
    """Exact check of the defining property of `cond_exp`.

    For the chain started from a depth-a `prefix` (a <= b), and for every
    event determined by the first b coordinates, integrating f agrees with
    integrating the conditional-expectation table.  Events fixing the
    depth-b prefix generate all of them, so those are what is checked.
    """
    if not 0 <= a <= b <= model.max_depth:
        raise DomainError(f"need 0 <= a <= b <= {model.max_depth}")
    fn = _as_fn(f)
    law = traj_marginal(model, a, prefix, model.max_depth)
    space_d = model.prefix_space(model.max_depth)
    ratio = space_d.size // model.prefix_space(b).size
    f_mass: dict = {}
    total_mass: dict = {}
    for j, w in law.support():
        block = j // ratio  # index of the depth-b restriction
        f_mass[block] = f_mass.get(block, ZERO) + w * Rat(fn(space_d.point_at(j)))
        total_mass[block] = total_mass.get(block, ZERO) + w
    continue_kern = model.partial_traj(b, model.max_depth)
    for block, mass in total_mass.items():
        expected = ZERO
        for j, w in continue_kern.row_at(block).support():
            expected += w * Rat(fn(space_d.point_at(j)))
        if f_mass[block] != mass * expected:
            return False
    return True


def check_traj_split(model: ChainModel, a: int, b: int) -> bool:
    """Exact check that the trajectory law splits at depth b.

    Drawing a depth-b prefix from the (a, b) kernel and continuing it with
    the (b, D) kernel gives the same joint law of (depth-b prefix, full
    trajectory) as drawing the full trajectory from the (a, D) kernel and
    restricting it.  Joint laws are compared entry by entry on their
    supports.
    """
    if not 0 <= a <= b <= model.max_depth:
        raise DomainError(f"need 0 <= a <= b <= {model.max_depth}")
    first = model.partial_traj(a, b)
    rest = model.partial_traj(b, model.max_depth)
    whole = model.partial_traj(a, model.max_depth)
    size_d = model.prefix_space(model.max_depth).size
    ratio = size_d // model.prefix_space(b).size
    for u in range(model.prefix_space(a).size):
        two_stage: dict = {}
        for i, w1 in first.row_at(u).support():
            for j, w2 in rest.row_at(i).support():
                key = i * size_d + j
                two_stage[key] = two_stage.get(key, ZERO) + w1 * w2
        direct: dict = {}
        for j, w in whole.row_at(u).support():
            key = (j // ratio) * size_d + j
            direct[key] = direct.get(key, ZERO) + w
        if two_stage != direct:
            return False
    return True
