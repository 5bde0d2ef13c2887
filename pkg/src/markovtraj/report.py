"""Deterministic check reports.

A report is a fixed header plus one line per check:

    CHECK <id> PASS|FAIL <lhs> <rhs>

Scalar comparisons print the two rationals; structural comparisons
(distributions, kernels, tables) print short fingerprints of a canonical
text form, so equal objects show equal columns.  Rendering depends only on
the compared values, never on timing or identity, so a report is stable
byte for byte across runs.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import List, Mapping

from .rational import format_rational


def fingerprint(text: str) -> str:
    """Short stable digest of a canonical text form."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def canonical_dist(d) -> str:
    space = d.space
    entries = (
        f"{space.format_point(space.point_at(i))}={format_rational(w)}"
        for i, w in d.support()
    )
    return " ".join(entries)


def canonical_kernel(k) -> str:
    source = k.source
    rows = (
        f"{source.format_point(source.point_at(i))}:{canonical_dist(row)}"
        for i, row in enumerate(k.rows)
    )
    return "; ".join(rows)


def canonical_table(space, table: Mapping) -> str:
    """Canonical form of a {point: rational} table, in enumeration order."""
    entries = (
        f"{space.format_point(p)}={format_rational(table[p])}"
        for p in space.points()
        if p in table
    )
    return " ".join(entries)


@dataclass(frozen=True)
class CheckLine:
    check_id: str
    ok: bool
    lhs: str
    rhs: str

    def render(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"CHECK {self.check_id} {status} {self.lhs} {self.rhs}"


@dataclass
class Report:
    header: str
    lines: List[CheckLine] = field(default_factory=list)

    def add(self, check_id: str, ok: bool, lhs: str, rhs: str) -> None:
        self.lines.append(CheckLine(check_id, ok, lhs, rhs))

    def add_compared(self, check_id: str, lhs_text: str, rhs_text: str) -> None:
        """Add a structural comparison; PASS iff the canonical forms agree."""
        self.add(
            check_id, lhs_text == rhs_text, fingerprint(lhs_text), fingerprint(rhs_text)
        )

    def add_scalars(self, check_id: str, lhs, rhs) -> None:
        self.add(check_id, lhs == rhs, format_rational(lhs), format_rational(rhs))

    @property
    def ok(self) -> bool:
        return all(line.ok for line in self.lines)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def render(self) -> str:
        failed = sum(1 for line in self.lines if not line.ok)
        if failed:
            summary = f"RESULT FAIL failed={failed} checks={len(self.lines)}"
        else:
            summary = f"RESULT PASS checks={len(self.lines)}"
        parts = [self.header]
        parts.extend(line.render() for line in self.lines)
        parts.append(summary)
        return "\n".join(parts)
