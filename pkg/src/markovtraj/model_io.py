"""Loading chain models from JSON files.

A chain file looks like:

    {
      "maxDepth": 3,
      "spaces": [{"id": "X", "states": ["S", "R"]}],
      "steps": [
        {"n": 0, "kind": "last-state",
         "rows": {"S": {"S": "3/4", "R": "1/4"},
                  "R": {"S": "1/2", "R": "1/2"}}},
        ...
      ]
    }

with one step per depth 0 .. maxDepth-1.  A single entry under "spaces" is
reused at every depth; otherwise exactly maxDepth+1 entries are required.
Step kinds:

  * "table": "rows" maps every depth-n prefix, written as labels joined by
    "|", to a distribution over next states.
  * "last-state": "rows" maps each possible last state to a distribution;
    prefixes sharing a last state share the row.
  * "const": a single "row" distribution used for every prefix.

Distributions are objects {state label: rational string}; omitted states
get weight 0 and the weights must sum to exactly 1.  A file may instead be
a plain product:

    {"kind": "product", "factors": [{"H": "1/2", "T": "1/2"}, ...]}

which is loaded as a chain with constant steps, keeping the factor list
around (a product file also says how to draw coordinate 0, which a chain
file does not).  Any malformed input raises ModelFormatError.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .errors import DomainError, ModelFormatError
from .kernel import Kernel, const_kernel
from .measure import Dist, FiniteSpace, TupleSpace
from .product import const_chain
from .rational import parse_rational
from .trajectory import ChainModel

# Loading builds one kernel row table per step, so refuse prefix spaces too
# large to materialise.
_MAX_PREFIX_POINTS = 1 << 22


@dataclass(frozen=True)
class LoadedModel:
    """A chain plus, for product files, the marginals it was built from."""

    chain: ChainModel
    marginals: tuple | None = None


def load_model(path) -> LoadedModel:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(data)


def model_from_dict(data) -> LoadedModel:
    if not isinstance(data, Mapping):
        raise ModelFormatError("model document must be a JSON object")
    if data.get("kind") == "product":
        return _load_product(data)
    return _load_chain(data)


def _load_product(data: Mapping) -> LoadedModel:
    factors = data.get("factors")
    if not isinstance(factors, list) or not factors:
        raise ModelFormatError('"factors" must be a nonempty list')
    marginals = []
    for i, entry in enumerate(factors):
        if not isinstance(entry, Mapping) or not entry:
            raise ModelFormatError(f"factor {i} must be a nonempty object")
        space = _make_space(f"X{i}", list(entry.keys()), f"factor {i}")
        marginals.append(_dist_from_mapping(space, entry, f"factor {i}"))
    return LoadedModel(const_chain(marginals), tuple(marginals))


def _load_chain(data: Mapping) -> LoadedModel:
    max_depth = data.get("maxDepth")
    if not isinstance(max_depth, int) or isinstance(max_depth, bool) or max_depth < 0:
        raise ModelFormatError('"maxDepth" must be a nonnegative integer')
    spaces_entry = data.get("spaces")
    if not isinstance(spaces_entry, list) or not spaces_entry:
        raise ModelFormatError('"spaces" must be a nonempty list')
    if len(spaces_entry) == 1:
        spaces_entry = spaces_entry * (max_depth + 1)
    if len(spaces_entry) != max_depth + 1:
        raise ModelFormatError(
            f'"spaces" must have 1 or {max_depth + 1} entries, got {len(spaces_entry)}'
        )
    spaces = [_space_from_entry(entry, i) for i, entry in enumerate(spaces_entry)]

    total = 1
    for space in spaces:
        total *= space.size
    if total > _MAX_PREFIX_POINTS:
        raise ModelFormatError(
            f"model has {total} full trajectories; the loader caps at {_MAX_PREFIX_POINTS}"
        )

    steps_entry = data.get("steps")
    if not isinstance(steps_entry, list):
        raise ModelFormatError('"steps" must be a list')
    by_depth: dict = {}
    for entry in steps_entry:
        if not isinstance(entry, Mapping):
            raise ModelFormatError("each step must be an object")
        n = entry.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n < max_depth:
            raise ModelFormatError(f'step "n" must lie in 0..{max_depth - 1}')
        if n in by_depth:
            raise ModelFormatError(f"step {n} given twice")
        by_depth[n] = entry
    missing = [n for n in range(max_depth) if n not in by_depth]
    if missing:
        raise ModelFormatError(f"missing steps for depths {missing}")

    chain_spaces = tuple(spaces)
    prefix_spaces = [
        TupleSpace(chain_spaces[: n + 1]) for n in range(max_depth)
    ]
    steps = [
        _step_kernel(by_depth[n], prefix_spaces[n], chain_spaces[n + 1], n)
        for n in range(max_depth)
    ]
    try:
        chain = ChainModel(chain_spaces, steps)
    except DomainError as exc:
        raise ModelFormatError(str(exc)) from exc
    return LoadedModel(chain)


def _space_from_entry(entry, position: int) -> FiniteSpace:
    if not isinstance(entry, Mapping):
        raise ModelFormatError(f"space {position} must be an object")
    space_id = entry.get("id", f"X{position}")
    states = entry.get("states")
    if not isinstance(states, list) or not states:
        raise ModelFormatError(f'space {position} needs a nonempty "states" list')
    return _make_space(space_id, states, f"space {position}")


def _make_space(space_id, states, where: str) -> FiniteSpace:
    for s in states:
        if not isinstance(s, str) or not s:
            raise ModelFormatError(f"{where}: state labels must be nonempty strings")
        if "|" in s:
            raise ModelFormatError(f'{where}: state labels may not contain "|"')
    try:
        return FiniteSpace(str(space_id), states)
    except DomainError as exc:
        raise ModelFormatError(f"{where}: {exc}") from exc


def _dist_from_mapping(space: FiniteSpace, mapping: Mapping, where: str) -> Dist:
    weights = [0] * space.size
    for label, text in mapping.items():
        if label not in space:
            raise ModelFormatError(f"{where}: unknown state {label!r}")
        if not isinstance(text, str):
            raise ModelFormatError(
                f"{where}: weights must be rational strings, got {text!r}"
            )
        try:
            weights[space.index_of(label)] = parse_rational(text)
        except ValueError as exc:
            raise ModelFormatError(f"{where}: {exc}") from exc
    try:
        return Dist(space, weights)
    except DomainError as exc:
        raise ModelFormatError(f"{where}: {exc}") from exc


def _step_kernel(entry: Mapping, prefix_space, target: FiniteSpace, n: int) -> Kernel:
    kind = entry.get("kind")
    where = f"step {n}"
    if kind == "const":
        row = entry.get("row")
        if not isinstance(row, Mapping):
            raise ModelFormatError(f'{where}: "const" needs a "row" object')
        return const_kernel(prefix_space, _dist_from_mapping(target, row, where))
    if kind == "last-state":
        rows = entry.get("rows")
        if not isinstance(rows, Mapping):
            raise ModelFormatError(f'{where}: "last-state" needs a "rows" object')
        last_space = prefix_space.components[-1]
        by_label = {}
        for label in last_space.points():
            if label not in rows:
                raise ModelFormatError(f"{where}: no row for last state {label!r}")
            row = rows[label]
            if not isinstance(row, Mapping):
                raise ModelFormatError(f"{where}: row {label!r} must be an object")
            by_label[label] = _dist_from_mapping(target, row, f"{where}, row {label!r}")
        extra = set(rows) - set(last_space.points())
        if extra:
            raise ModelFormatError(f"{where}: rows for unknown states {sorted(extra)}")
        dists = [by_label[p[-1]] for p in prefix_space.points()]
        return Kernel(prefix_space, target, dists)
    if kind == "table":
        rows = entry.get("rows")
        if not isinstance(rows, Mapping):
            raise ModelFormatError(f'{where}: "table" needs a "rows" object')
        parsed = {}
        for key, row in rows.items():
            prefix = tuple(key.split("|"))
            try:
                index = prefix_space.index_of(prefix)
            except DomainError as exc:
                raise ModelFormatError(f"{where}: bad prefix key {key!r}") from exc
            if index in parsed:
                raise ModelFormatError(f"{where}: prefix {key!r} given twice")
            if not isinstance(row, Mapping):
                raise ModelFormatError(f"{where}: row {key!r} must be an object")
            parsed[index] = _dist_from_mapping(target, row, f"{where}, row {key!r}")
        if len(parsed) != prefix_space.size:
            raise ModelFormatError(
                f"{where}: {len(parsed)} rows for {prefix_space.size} prefixes"
            )
        return Kernel(prefix_space, target, [parsed[i] for i in range(prefix_space.size)])
    raise ModelFormatError(f'{where}: unknown kind {kind!r}')
