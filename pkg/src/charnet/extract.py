"""Character co-occurrence networks from raw text.

Pipeline: ``tokenize`` -> ``scan_occurrences`` -> ``build_network``.  Names
are matched through an alias table (the manual curation surface) and two
characters are linked once for every pair of mentions at most
``WindowConfig.distance`` tokens apart.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .graph import Graph

_TOKEN = re.compile(r"[^\W_]+")


class AliasError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs; everything else separates."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class AliasTable:
    """Canonical character name -> alias token tuples.

    Insertion order of ``entries`` fixes node order in the extracted graph.
    """

    entries: Mapping[str, tuple[tuple[str, ...], ...]]
    _lookup: Mapping[tuple[str, ...], str] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        lookup: dict[tuple[str, ...], str] = {}
        for name, aliases in self.entries.items():
            for alias in aliases:
                owner = lookup.setdefault(alias, name)
                if owner != name:
                    raise AliasError(f"alias {' '.join(alias)!r} assigned to both {owner!r} and {name!r}")
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def from_mapping(cls, table: Mapping[str, Iterable[str]]) -> "AliasTable":
        entries = {}
        for name, aliases in table.items():
            toks = []
            for alias in (name, *aliases):
                t = tuple(tokenize(alias))
                if not t:
                    raise AliasError(f"alias {alias!r} of {name!r} has no tokens")
                if t not in toks:
                    toks.append(t)
            entries[name] = tuple(toks)
        return cls(entries)

    @classmethod
    def from_csv(cls, text: str) -> "AliasTable":
        """One row per character: canonical name, then aliases."""
        table: dict[str, list[str]] = {}
        for row in csv.reader(io.StringIO(text.lstrip("﻿"))):
            row = [c.strip() for c in row if c.strip()]
            if not row:
                continue
            if row[0] in table:
                raise AliasError(f"duplicate canonical name {row[0]!r}")
            table[row[0]] = row[1:]
        if not table:
            raise AliasError("alias table is empty")
        return cls.from_mapping(table)

    @property
    def names(self) -> list[str]:
        return list(self.entries)

    @property
    def lookup(self) -> Mapping[tuple[str, ...], str]:
        return self._lookup

    @property
    def longest(self) -> int:
        return max((len(a) for a in self._lookup), default=0)


class Hit(NamedTuple):
    position: int
    name: str


@dataclass(frozen=True)
class WindowConfig:
    distance: int = 15

    def __post_init__(self):
        if not isinstance(self.distance, int) or self.distance < 1:
            raise ValueError(f"window distance must be a positive integer, got {self.distance!r}")


def scan_occurrences(tokens: list[str], aliases: AliasTable) -> list[Hit]:
    """Greedy longest-match alias scan; a match consumes its tokens."""
    hits = []
    lookup, longest = aliases.lookup, aliases.longest
    i = 0
    while i < len(tokens):
        for k in range(min(longest, len(tokens) - i), 0, -1):
            name = lookup.get(tuple(tokens[i:i + k]))
            if name is not None:
                hits.append(Hit(i, name))
                i += k
                break
        else:
            i += 1
    return hits


def cooccurrence_weights(hits: list[Hit], distance: int) -> dict[tuple[str, str], int]:
    """Count deduplicated in-window mention pairs per unordered name pair.

    Pairs are visited left to right.  A mention takes part in at most one
    co-occurrence with any given partner character, so two mentions of the
    same character near one mention of another only count once.
    """
    used: set[tuple[int, str]] = set()
    weights: dict[tuple[str, str], int] = {}
    for i, (p, a) in enumerate(hits):
        for j in range(i + 1, len(hits)):
            q, b = hits[j]
            if q - p > distance:
                break
            if a == b or (i, b) in used or (j, a) in used:
                continue
            used.add((i, b))
            used.add((j, a))
            key = (a, b) if a < b else (b, a)
            weights[key] = weights.get(key, 0) + 1
    return weights


def build_network(hits: list[Hit], cfg: WindowConfig, names: list[str]) -> Graph:
    """Weighted character graph; every name in ``names`` becomes a node."""
    index = {name: i for i, name in enumerate(names)}
    edges = [(index[a], index[b], w) for (a, b), w in cooccurrence_weights(hits, cfg.distance).items()]
    return Graph(names, edges)


def extract_pipeline(text: str, aliases: AliasTable, cfg: WindowConfig = WindowConfig()) -> Graph:
    return build_network(scan_occurrences(tokenize(text), aliases), cfg, aliases.names)
