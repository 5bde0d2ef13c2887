"""Finite products of distributions as chains with constant steps.

Implements:
  * const_chain: the ChainModel whose step at every depth ignores the
    prefix and draws the next coordinate from a fixed marginal, so its
    trajectory law is the product of the marginals.
  * product_prefix_dist / initial_prefix_dist: truncated products on
    prefix spaces.
  * check_partial_traj_const: the partial-trajectory kernel of a constant
    chain is a point mass on the given prefix times the product of the
    remaining marginals.
  * check_product_split: a product over 0..b re-associates as the product
    over 0..a coupled with the product over a+1..b, under the coordinate
    flattening map.
  * check_product_projection: truncated products are projective under
    prefix restriction.
  * check_const_chain_law: feeding the first marginal into the chain's
    (0, D) kernel recovers the full product.

These are the checks that pin down the product measure as a special case
of the trajectory construction rather than a separate definition.
"""
from __future__ import annotations

from typing import Sequence

from .errors import DomainError
from .kernel import comp_measure, comp_prod_measure, const_kernel
from .measure import Dist, TupleSpace, dirac, product_dist, pushforward_dist
from .trajectory import ChainModel


def const_chain(marginals: Sequence[Dist]) -> ChainModel:
    """Chain with state spaces taken from the marginals and constant steps."""
    marginals = tuple(marginals)
    if not marginals:
        raise DomainError("a constant chain needs at least one marginal")
    spaces = [m.space for m in marginals]
    steps = [
        const_kernel(TupleSpace(spaces[: n + 1]), marginals[n + 1])
        for n in range(len(marginals) - 1)
    ]
    return ChainModel(spaces, steps)


def initial_prefix_dist(marginal: Dist) -> Dist:
    """A distribution on states, viewed on the space of depth-0 prefixes."""
    return pushforward_dist(
        marginal, lambda s: (s,), TupleSpace([marginal.space])
    )


def product_prefix_dist(marginals: Sequence[Dist], depth: int) -> Dist:
    """Product of the first depth+1 marginals, on the depth-`depth` prefix space."""
    if not 0 <= depth < len(marginals):
        raise DomainError(f"depth {depth} outside 0..{len(marginals) - 1}")
    return product_dist(list(marginals[: depth + 1]))


def check_partial_traj_const(
    chain: ChainModel, marginals: Sequence[Dist], a: int, b: int
) -> bool:
    """Exact check of the constant-chain form of the trajectory kernel.

    From any depth-a prefix, the (a, b) kernel of `chain` must equal the
    point mass on that prefix times the product of marginals a+1 .. b.
    """
    if not 0 <= a <= b <= chain.max_depth:
        raise DomainError(f"need 0 <= a <= b <= {chain.max_depth}")
    kern = chain.partial_traj(a, b)
    for i, prefix in enumerate(chain.prefix_space(a).points()):
        factors = [dirac(space, s) for space, s in zip(chain.spaces, prefix)]
        factors.extend(marginals[a + 1 : b + 1])
        if kern.row_at(i) != product_dist(factors):
            return False
    return True


def check_product_split(marginals: Sequence[Dist], a: int, b: int) -> bool:
    """Exact check that products re-associate across a cut after depth a.

    The product over coordinates 0..b equals the joint law of (head, tail)
    with head the product over 0..a and tail the independent product over
    a+1..b, flattened back to a single tuple.
    """
    if not 0 <= a <= b < len(marginals):
        raise DomainError(f"need 0 <= a <= b <= {len(marginals) - 1}")
    whole = product_prefix_dist(marginals, b)
    if a == b:
        return True
    head = product_prefix_dist(marginals, a)
    tail = product_dist(list(marginals[a + 1 : b + 1]))
    paired = comp_prod_measure(head, const_kernel(head.space, tail))
    flattened = pushforward_dist(
        paired, lambda pair: pair[0] + pair[1], whole.space
    )
    return flattened == whole


def check_product_projection(marginals: Sequence[Dist], a: int, b: int) -> bool:
    """Exact check that restricting a truncated product drops factors.

    Pushing the product over coordinates 0..b forward along restriction to
    0..a must give the product over 0..a: truncated products form a
    projective family.
    """
    if not 0 <= a <= b < len(marginals):
        raise DomainError(f"need 0 <= a <= b <= {len(marginals) - 1}")
    longer = product_prefix_dist(marginals, b)
    shorter = product_prefix_dist(marginals, a)
    return pushforward_dist(longer, lambda p: p[: a + 1], shorter.space) == shorter


def check_const_chain_law(chain: ChainModel, marginals: Sequence[Dist]) -> bool:
    """Exact check that the chain's full law is the product of the marginals."""
    start = initial_prefix_dist(marginals[0])
    law = comp_measure(start, chain.partial_traj(0, chain.max_depth))
    return law == product_prefix_dist(marginals, chain.max_depth)
