"""Markov kernels between enumerated finite spaces, with exact weights.

Implements:
  * Kernel: one distribution per source point, stored as a dense row table.
  * Constructors: deterministic_kernel, id_kernel, const_kernel.
  * Algebra: map_kernel (push a kernel forward along a map), comp_kernel
    (sequential composition, written first-to-last), comp_measure (bind a
    distribution through a kernel), prod_kernel (same-source pairing),
    comp_prod_kernel / comp_prod_measure (couple a step that reads the
    combined history, keeping the joint law on the pair space).

Pair-shaped targets are two-component TupleSpace instances, so joint points
are plain tuples (y, z) and all index arithmetic is the tuple space's.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import DomainError
from .measure import Dist, TupleSpace, dirac, product_dist, pushforward_dist
from .rational import ZERO


def _same_space(a, b) -> bool:
    return a is b or a == b


def _mix(target, weighted_rows: Iterable) -> Dist:
    """Mixture sum(w * row) of distributions on target; weights sum to 1."""
    acc: dict = {}
    for w, row in weighted_rows:
        if not _same_space(row.space, target):
            raise DomainError("mixture component lives on a different space")
        for i, v in row.support():
            acc[i] = acc.get(i, ZERO) + w * v
    return Dist.from_support(target, acc.items())


class Kernel:
    """A Markov kernel: a measurable-by-construction map source -> Dist(target).

    Parameters
    ----------
    source, target : spaces
        Enumerated spaces; `rows` is aligned with the source enumeration.
    rows : sequence of Dist
        rows[i] is the distribution of the next state given source point i.
    """

    __slots__ = ("source", "target", "rows")

    def __init__(self, source, target, rows: Sequence[Dist]):
        rows = tuple(rows)
        if len(rows) != source.size:
            raise DomainError(
                f"expected {source.size} rows for {source!r}, got {len(rows)}"
            )
        for row in rows:
            if not _same_space(row.space, target):
                raise DomainError("kernel row lives on a different space")
        self.source = source
        self.target = target
        self.rows = rows

    def row(self, point) -> Dist:
        """The distribution this kernel assigns to a source point."""
        return self.rows[self.source.index_of(point)]

    def row_at(self, index: int) -> Dist:
        return self.rows[index]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Kernel)
            and self.source == other.source
            and self.target == other.target
            and (self.rows is other.rows or self.rows == other.rows)
        )

    def __hash__(self) -> int:
        return hash(("Kernel", self.source, self.target, self.rows))

    def __repr__(self) -> str:
        return f"Kernel({self.source!r} -> {self.target!r}, {len(self.rows)} rows)"


# ---- constructors ----


def deterministic_kernel(source, target, f: Callable) -> Kernel:
    """Kernel putting unit mass at f(x) for each source point x."""
    return Kernel(
        source, target, [dirac(target, f(p)) for p in source.points()]
    )


def id_kernel(space) -> Kernel:
    """Deterministic kernel for the identity map."""
    return deterministic_kernel(space, space, lambda p: p)


def const_kernel(source, d: Dist) -> Kernel:
    """Kernel ignoring its input: every row is the same distribution."""
    return Kernel(source, d.space, (d,) * source.size)


# ---- algebra ----


def map_kernel(k: Kernel, f: Callable, target) -> Kernel:
    """Push each row of k forward along f : k.target -> target."""
    cache: dict = {}
    rows = []
    for row in k.rows:
        pushed = cache.get(id(row))
        if pushed is None:
            pushed = pushforward_dist(row, f, target)
            cache[id(row)] = pushed
        rows.append(pushed)
    return Kernel(k.source, target, rows)


def comp_kernel(first: Kernel, second: Kernel) -> Kernel:
    """Sequential composition: run `first`, then `second` on its outcome.

    Row at x is the mixture of second's rows weighted by first.row(x).
    """
    if not _same_space(first.target, second.source):
        raise DomainError("composition: first.target differs from second.source")
    rows = [
        _mix(second.target, ((w, second.row_at(i)) for i, w in row.support()))
        for row in first.rows
    ]
    return Kernel(first.source, second.target, rows)


def comp_measure(d: Dist, k: Kernel) -> Dist:
    """Law of the kernel's output when the input is drawn from d."""
    if not _same_space(d.space, k.source):
        raise DomainError("bind: distribution space differs from kernel source")
    return _mix(k.target, ((w, k.row_at(i)) for i, w in d.support()))


def prod_kernel(k: Kernel, l: Kernel) -> Kernel:
    """Same-source pairing x -> k(x) * l(x), a kernel into the pair space.

    The two coordinates are independent given the common input.
    """
    if not _same_space(k.source, l.source):
        raise DomainError("pairing: kernels have different sources")
    cache: dict = {}
    rows = []
    for kr, lr in zip(k.rows, l.rows):
        key = (id(kr), id(lr))
        row = cache.get(key)
        if row is None:
            row = product_dist([kr, lr])
            cache[key] = row
        rows.append(row)
    target = TupleSpace([k.target, l.target])
    return Kernel(k.source, target, rows)


def comp_prod_kernel(k: Kernel, l: Kernel) -> Kernel:
    """Couple k : X -> Y with a follow-up l : (X, Y) -> Z, keeping the pair.

    The result maps x to the joint law of (y, z) where y ~ k(x) and
    z ~ l((x, y)); l's source must be the tuple space of X and Y.
    """
    pair_source = TupleSpace([k.source, k.target])
    if not _same_space(l.source, pair_source):
        raise DomainError("coupling: follow-up kernel must read the (x, y) pair")
    target = TupleSpace([k.target, l.target])
    z_size = l.target.size
    rows = []
    for x_index, krow in enumerate(k.rows):
        base = x_index * k.target.size
        items = []
        for y_index, wy in krow.support():
            lrow = l.row_at(base + y_index)
            items.extend(
                (y_index * z_size + z_index, wy * wz)
                for z_index, wz in lrow.support()
            )
        rows.append(Dist.from_support(target, items))
    return Kernel(k.source, target, rows)


def comp_prod_measure(d: Dist, k: Kernel) -> Dist:
    """Joint law of (x, y) with x ~ d and y ~ k(x), on the pair space."""
    if not _same_space(d.space, k.source):
        raise DomainError("coupling: distribution space differs from kernel source")
    target = TupleSpace([d.space, k.target])
    y_size = k.target.size
    items = []
    for x_index, wx in d.support():
        for y_index, wy in k.row_at(x_index).support():
            items.append((x_index * y_size + y_index, wx * wy))
    return Dist.from_support(target, items)
