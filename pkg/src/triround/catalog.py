"""Reproducible catalogs of small 3-connected graphs and binary matroids.

The graph generator closes the wheels under the two moves that preserve
simple 3-connectivity — adding an edge between nonadjacent vertices, and
splitting a vertex of degree at least four into an adjacent pair with each
side taking at least two of the old neighbors.  Every simple 3-connected
graph on four or more vertices is reachable from a wheel through
3-connected intermediates by such moves, so a breadth-first closure with
canonical-form deduplication enumerates each isomorphism class exactly
once.

The binary generator walks dependence representations ``[I_r | D]`` with
``D`` drawn from the nonzero non-unit columns, for ranks up to ``n/2``.  A
candidate whose row space contains a nonzero word of weight below three
has a coloop or a series pair and is dropped immediately; the survivors
are thinned to one representative per coordinate-permutation orbit,
deduplicated exactly by canonical key, and filtered by an exhaustive
separation scan.  The ranks above ``n/2`` are added as duals: the
connectivity function is self-dual, so closing under duality is both
sound and complete.

Catalogs can be cached on disk as JSON; pass ``cache_dir`` or set the
``TRIROUND_CATALOG_DIR`` environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from . import graphsupport
from .kernel import (BudgetExceededError, DomainError, GF2Matroid,
                     GraphicMatroid, ValidationError, bitcount, build)
from .minors import MINOR_PAIR_BUDGET, binary_key, has_minor
from .structure import is_3connected

__all__ = [
    "CatalogEntry",
    "catalog_file",
    "filter_with_minor",
    "gen_binary_3c",
    "gen_graphs_3c",
    "load_catalog",
]

GRAPH_VERTEX_CAP = 9
BINARY_SIZE_CAP = 11


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """One catalog member: stable key, the matroid, and how it was made."""

    key: str
    matroid: object
    provenance: dict

    def describe(self):
        return {
            "key": self.key,
            "provenance": dict(self.provenance),
            "matroid": self.matroid.describe(),
        }


# ---------------------------------------------------------------------------
# simple 3-connected graphs


def _wheel(k):
    """Wheel with hub 0 and rim 1..k (k + 1 vertices, 2k edges)."""
    spokes = [(0, i) for i in range(1, k + 1)]
    rim = [(i, i % k + 1) for i in range(1, k + 1)]
    return k + 1, spokes + rim


def _graph_moves(nv, edges, vcap):
    """One-step extensions of a simple graph that stay simple by shape."""
    adj = {v: set() for v in range(nv)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for u in range(nv):
        for v in range(u + 1, nv):
            if v not in adj[u]:
                out.append((nv, edges + [(u, v)]))
    if nv >= vcap:
        return out
    for v in range(nv):
        nb = sorted(adj[v])
        d = len(nb)
        if d < 4:
            continue
        w = nv
        # split v into v--w; A (with nb[0]) stays on v, the rest moves to w
        for asz in range(1, d - 2):
            for extra in combinations(nb[1:], asz):
                aset = {nb[0], *extra}
                new = []
                for a, b in edges:
                    if a == v and b not in aset:
                        new.append((w, b))
                    elif b == v and a not in aset:
                        new.append((a, w))
                    else:
                        new.append((a, b))
                new.append((v, w))
                out.append((nv + 1, new))
    return out


@lru_cache(maxsize=None)
def gen_graphs_3c(max_vertices=8):
    """All simple 3-connected graphs on 4..max_vertices vertices.

    One CatalogEntry per isomorphism class, in a deterministic order
    (vertex count, then edge count, then canonical code).  The returned
    tuple is cached; treat it as immutable.
    """
    if max_vertices < 4:
        raise DomainError("the smallest 3-connected simple graph has "
                          "four vertices")
    if max_vertices > GRAPH_VERTEX_CAP:
        raise BudgetExceededError(
            f"graph catalog not sized beyond {GRAPH_VERTEX_CAP} vertices",
            bound=GRAPH_VERTEX_CAP)

    seen = set()
    classes = []
    frontier = []

    def admit(nv, edges):
        edges = sorted((u, v) if u < v else (v, u) for u, v in edges)
        code, _ = graphsupport.canonical_form(nv, edges)
        if (nv, code) in seen:
            return
        seen.add((nv, code))
        classes.append((nv, edges, code))
        frontier.append((nv, edges))

    for k in range(3, max_vertices):
        admit(*_wheel(k))
    while frontier:
        nv, edges = frontier.pop()
        for nv2, edges2 in _graph_moves(nv, edges, max_vertices):
            if graphsupport.vertex_3connected(nv2, edges2):
                admit(nv2, edges2)

    classes.sort(key=lambda t: (t[0], len(t[1]), t[2]))
    counter = {}
    entries = []
    for nv, edges, _code in classes:
        i = counter.get(nv, 0)
        counter[nv] = i + 1
        entries.append(CatalogEntry(
            key=f"graphic-3c/v{nv}-{i:04d}",
            matroid=GraphicMatroid(nv, edges),
            provenance={"family": "graphic-3c", "vertices": nv,
                        "edges": len(edges)},
        ))
    return tuple(entries)


# ---------------------------------------------------------------------------
# 3-connected binary matroids


@lru_cache(maxsize=None)
def _perm_tables(r):
    """Per row permutation, the induced relabeling of column values."""
    tables = []
    for perm in permutations(range(r)):
        tab = [0] * (1 << r)
        for v in range(1 << r):
            w = 0
            for i in range(r):
                if v >> i & 1:
                    w |= 1 << perm[i]
            tab[v] = w
        tables.append(tuple(tab))
    return tuple(tables)


def _min_word_at_least_3(cols, r):
    """True when every nonzero row-space word has weight >= 3.

    Weight-one words are coloops and weight-two words are series pairs,
    so this is exactly 'cosimple and coloop-free' for distinct nonzero
    columns.
    """
    rows = []
    for h in range(r):
        w = 0
        for j, c in enumerate(cols):
            if c >> h & 1:
                w |= 1 << j
        rows.append(w)
    words = [0]
    for rw in rows:
        nxt = []
        for wd in words:
            x = wd ^ rw
            if bitcount(x) < 3:
                return False
            nxt.append(x)
        words.extend(nxt)
    return True


def _perm_minimal(D, tables):
    """D (a sorted tuple) is its own coordinate-permutation minimum."""
    for tab in tables:
        img = sorted(tab[v] for v in D)
        if tuple(img) < D:
            return False
    return True


def _binary_rank_classes(n, r):
    """(canonical code, matroid) per isomorphism class at size n, rank r."""
    units = tuple(1 << i for i in range(r))
    space = tuple(v for v in range(1, 1 << r) if bitcount(v) >= 2)
    tables = _perm_tables(r)
    labels = [f"e{i}" for i in range(n)]
    found = {}
    for D in combinations(space, n - r):
        cols = units + D
        if not _min_word_at_least_3(cols, r):
            continue
        if not _perm_minimal(D, tables):
            continue
        G = GF2Matroid(labels, cols, nrows=r)
        code = binary_key(G)
        if code not in found:
            found[code] = G
    return [(code, found[code]) for code in sorted(found)
            if is_3connected(found[code])]


@lru_cache(maxsize=None)
def gen_binary_3c(max_size=10):
    """All 3-connected binary matroids with 4..max_size elements.

    One CatalogEntry per isomorphism class, deterministically ordered by
    (size, rank, canonical code).  The returned tuple is cached; treat it
    as immutable.
    """
    if max_size < 4:
        raise DomainError("sizes below four are settled by convention, "
                          "not enumeration")
    if max_size > BINARY_SIZE_CAP:
        raise BudgetExceededError(
            f"binary catalog not sized beyond {BINARY_SIZE_CAP} elements",
            bound=BINARY_SIZE_CAP)

    entries = []
    for n in range(4, max_size + 1):
        rmin = next(r for r in range(2, n + 1) if (1 << r) - 1 >= n)
        rows = []
        for r in range(max(rmin, 3), n // 2 + 1):
            for code, G in _binary_rank_classes(n, r):
                rows.append((r, code, G, "direct"))
        for r, _code, G, _src in list(rows):
            if r < n - r:
                Gd = G.dual()
                rows.append((n - r, binary_key(Gd), Gd, "dual"))
        rows.sort(key=lambda t: (t[0], t[1]))
        for i, (r, _code, G, src) in enumerate(rows):
            entries.append(CatalogEntry(
                key=f"binary-3c/n{n}-r{r}-{i:03d}",
                matroid=G,
                provenance={"family": "binary-3c", "size": n, "rank": r,
                            "source": src},
            ))
    return tuple(entries)


# ---------------------------------------------------------------------------
# annotation and persistence


def filter_with_minor(entries, N, budget=MINOR_PAIR_BUDGET):
    """Pair every entry with the exact outcome of an N-minor search."""
    return tuple((entry, has_minor(entry.matroid, N, budget=budget))
                 for entry in entries)


_GENERATORS = {"graphic": gen_graphs_3c, "binary": gen_binary_3c}


def catalog_file(kind, bound, cache_dir=None):
    """Path of the JSON cache for a catalog, or None without a cache dir."""
    root = cache_dir or os.environ.get("TRIROUND_CATALOG_DIR")
    if not root:
        return None
    return os.path.join(root, f"{kind}-3c-{int(bound)}.json")


def load_catalog(kind, bound, cache_dir=None, force_regen=False):
    """Catalog entries, read from the JSON cache when present.

    ``kind`` is "graphic" (bound = max vertices) or "binary" (bound = max
    elements).  A missing or force-regenerated cache is rebuilt and, when
    a cache directory is configured, rewritten deterministically.
    """
    try:
        gen = _GENERATORS[kind]
    except KeyError:
        raise DomainError(f"unknown catalog kind: {kind!r}") from None
    path = catalog_file(kind, bound, cache_dir)
    if path and not force_regen and os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("kind") != kind or data.get("bound") != int(bound):
            raise ValidationError(
                f"catalog file {path} holds kind={data.get('kind')!r} "
                f"bound={data.get('bound')!r}, not {kind!r}/{bound}")
        return tuple(CatalogEntry(key=e["key"], matroid=build(e["matroid"]),
                                  provenance=e["provenance"])
                     for e in data["entries"])
    entries = gen(int(bound))
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        payload = {"kind": kind, "bound": int(bound),
                   "entries": [e.describe() for e in entries]}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return entries
