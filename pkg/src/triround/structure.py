"""Connectivity structure: separations, 3-connectivity, si/co, small circuits.

The connectivity function is lambda(A) = r(A) + r(E-A) - r(M).  A
k-separation is a bipartition with both sides of size >= k and
lambda <= k-1; a vertical k-separation demands both sides of rank >= k
instead.  3-connectivity means no 1- or 2-separation, vertical
3-connectivity means no vertical 1- or 2-separation.

Exhaustive bipartition scans decide small instances.  Larger ones go
through exact fast paths: graphic matroids reduce to vertex connectivity
of the underlying simple graph, and simple low-rank matroids reduce to a
scan over flats (any minimum-lambda side can be pushed to a flat, or
shrunk to a 2-element side, without raising lambda).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import graphsupport
from .kernel import (
    BudgetExceededError,
    DomainError,
    DualMatroid,
    GF2Matroid,
    GraphicMatroid,
    Matroid,
    RelabeledMatroid,
    UniformMatroid,
    bitcount,
    bits_of,
)

SCAN_LIMIT = 1 << 16  # max bipartitions an exhaustive separation scan walks
SEPARATION_SIZE_BOUND = 24  # default element-count bound for find_separation
FLAT_ENUM_LIMIT = 300_000  # max subsets enumerated when listing proper flats


def lambda_mask(M, amask):
    return M.rank_mask(amask) + M.rank_mask(M.full_mask ^ amask) - M.full_rank


def connectivity_lambda(M, side_a):
    """lambda of the bipartition (side_a, rest)."""
    return lambda_mask(M, M.mask_of(side_a))


@dataclass(frozen=True)
class Separation:
    order: int          # the k for which this is a k-separation
    lam: int            # lambda of the split (= order - 1 when exact)
    side_a: frozenset
    side_b: frozenset


def _unwrap(M):
    """Strip relabeling wrappers: the rank function is preserved bit-for-bit.

    Safe in any rank computation.  Duals are NOT stripped here; duality
    preserves lambda but not ranks, parallel classes or minors.
    """
    while isinstance(M, RelabeledMatroid):
        M = M.base
    return M


def _unwrap_lambda(M):
    """Strip wrappers that preserve the connectivity function bit-for-bit.

    Duality preserves lambda; relabeling preserves bit positions.  Only
    valid for self-dual computations (separations, 3-connectivity).
    """
    while isinstance(M, (DualMatroid, RelabeledMatroid)):
        M = M.base
    return M


def find_separation(M, k, bound=SEPARATION_SIZE_BOUND):
    """An exact k-separation of M, or None.

    Exhaustive over bipartitions (element 0 pinned to side A), so it is
    budgeted: raises BudgetExceededError when |E(M)| exceeds `bound`
    (default 24; pass a larger bound to force bigger scans).
    """
    if k < 1:
        raise DomainError("separation order must be >= 1")
    n = M.n
    if n < 2 * k:
        return None
    if n > bound:
        raise BudgetExceededError(
            f"exact separation scan supports up to {bound} elements, got {n}",
            bound=bound)
    core = _unwrap_lambda(M)
    full = M.full_mask
    for rest in range(1 << (n - 1)):
        amask = (rest << 1) | 1
        na = bitcount(amask)
        if na < k or n - na < k:
            continue
        if lambda_mask(core, amask) <= k - 1:
            return Separation(order=k, lam=lambda_mask(core, amask),
                              side_a=M.labels_of(amask),
                              side_b=M.labels_of(full ^ amask))
    return None


def loops(M):
    return frozenset(M.ground[i] for i in range(M.n) if M.rank_mask(1 << i) == 0)


def coloops(M):
    full = M.full_mask
    r = M.full_rank
    return frozenset(M.ground[i] for i in range(M.n)
                     if M.rank_mask(full ^ (1 << i)) == r - 1)


def _parallel_pairs_idx(M):
    """Index pairs (i, j) that are parallel (rank-1 two-element circuits)."""
    nonloop = [i for i in range(M.n) if M.rank_mask(1 << i) == 1]
    out = []
    for a, b in combinations(nonloop, 2):
        if M.rank_mask((1 << a) | (1 << b)) == 1:
            out.append((a, b))
    return out


def _series_pairs_idx(M):
    """Index pairs forming 2-element cocircuits."""
    full = M.full_mask
    r = M.full_rank
    noncoloop = [i for i in range(M.n) if M.rank_mask(full ^ (1 << i)) == r]
    out = []
    for a, b in combinations(noncoloop, 2):
        if M.rank_mask(full ^ (1 << a) ^ (1 << b)) == r - 1:
            out.append((a, b))
    return out


def _classes_from_pairs(universe, pairs):
    parent = {x: x for x in universe}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    buckets = {}
    for x in universe:
        buckets.setdefault(find(x), []).append(x)
    return [frozenset(v) for v in buckets.values()]


def parallel_classes(M):
    """Partition of the non-loops into parallel classes (GF(2)/graph fast paths)."""
    core = _unwrap(M)
    if isinstance(core, GF2Matroid):
        buckets = {}
        for i, c in enumerate(core.cols):
            if c:
                buckets.setdefault(c, []).append(i)
        classes_idx = list(buckets.values())
    elif isinstance(core, GraphicMatroid):
        buckets = {}
        for i, (u, v) in enumerate(core.edges):
            if u != v:
                buckets.setdefault((min(u, v), max(u, v)), []).append(i)
        classes_idx = list(buckets.values())
    else:
        nonloop = [i for i in range(M.n) if M.rank_mask(1 << i) == 1]
        classes_idx = [sorted(c) for c in
                       _classes_from_pairs(nonloop, _parallel_pairs_idx(core))]
    out = [frozenset(M.ground[i] for i in c) for c in classes_idx]
    out.sort(key=lambda s: min(s))
    return out


def series_classes(M):
    """Partition of the non-coloops into series classes (2-cocircuit closure)."""
    full = M.full_mask
    r = M.full_rank
    core = _unwrap(M)
    noncoloop = [i for i in range(M.n) if M.rank_mask(full ^ (1 << i)) == r]
    classes_idx = [sorted(c) for c in
                   _classes_from_pairs(noncoloop, _series_pairs_idx(core))]
    out = [frozenset(M.ground[i] for i in c) for c in classes_idx]
    out.sort(key=lambda s: min(s))
    return out


@dataclass(frozen=True)
class SimplificationMap:
    """Result of si/co: the reduced matroid plus the collapse bookkeeping."""
    matroid: Matroid
    kept: tuple                 # representative labels, original order
    removed: frozenset          # labels not present in the reduction
    rep_of: dict                # collapsed label -> surviving representative
    reason: dict = None         # removed label -> loop/parallel/coloop/series


def _pick_rep(cls_labels, prefer_order):
    for p in prefer_order:
        if p in cls_labels:
            return p
    return min(cls_labels)


def simplify(M, prefer=()):
    """si(M): drop loops, keep one representative per parallel class.

    Representatives are the earliest `prefer` label in the class when one
    is present, else the lexicographically smallest label.
    """
    prefer = tuple(prefer)
    rep_of = {}
    keep = []
    for cls in parallel_classes(M):
        rep = _pick_rep(cls, prefer)
        keep.append(rep)
        for e in cls:
            rep_of[e] = rep
    keep_set = set(keep)
    kept = tuple(e for e in M.ground if e in keep_set)
    removed = frozenset(e for e in M.ground if e not in keep_set)
    reason = {e: ("parallel" if e in rep_of else "loop") for e in removed}
    return SimplificationMap(matroid=M.restrict(kept), kept=kept,
                             removed=removed, rep_of=rep_of, reason=reason)


def cosimplify(M, prefer=()):
    """co(M): drop coloops, contract each series class to one representative."""
    prefer = tuple(prefer)
    rep_of = {}
    keep = []
    for cls in series_classes(M):
        rep = _pick_rep(cls, prefer)
        keep.append(rep)
        for e in cls:
            rep_of[e] = rep
    keep_set = set(keep)
    kept = tuple(e for e in M.ground if e in keep_set)
    removed = frozenset(e for e in M.ground if e not in keep_set)
    reason = {e: ("series" if e in rep_of else "coloop") for e in removed}
    return SimplificationMap(matroid=M.contract(removed), kept=kept,
                             removed=removed, rep_of=rep_of, reason=reason)


def is_simple(M):
    return not loops(M) and all(len(c) == 1 for c in parallel_classes(M))


def is_cosimple(M):
    return not coloops(M) and all(len(c) == 1 for c in series_classes(M))


# ---------------------------------------------------------------------------
# 3-connectivity


def _proper_flats(M, max_subset):
    """All proper flats, found as closures of subsets of size <= max_subset.

    Complete whenever max_subset >= r(M) - 1.  Budgeted by FLAT_ENUM_LIMIT.
    """
    n = M.n
    count = 0
    seen = {M.closure_mask(0)}
    idx = list(range(n))
    for size in range(1, max_subset + 1):
        for combo in combinations(idx, size):
            count += 1
            if count > FLAT_ENUM_LIMIT:
                raise BudgetExceededError("flat enumeration too large",
                                          bound=FLAT_ENUM_LIMIT)
            mask = 0
            for i in combo:
                mask |= 1 << i
            seen.add(M.closure_mask(mask))
    return [f for f in seen if f != M.full_mask]


def _simple_lowrank_small_sep(M):
    """Separation of order <= 2 in a simple, cosimple matroid via flats.

    Any side of a lambda <= 1 bipartition can absorb the elements its
    closure reaches on the other side without raising lambda, so some
    witness has a flat side -- unless shrinking the other side first hits
    size 2, which the pairwise scan covers.
    """
    n = M.n
    full = M.full_mask
    r = M.full_rank
    # pair sides
    for i, j in combinations(range(n), 2):
        amask = (1 << i) | (1 << j)
        lam = lambda_mask(M, amask)
        if lam <= 1 and n - 2 >= 2:
            return Separation(order=2, lam=lam, side_a=M.labels_of(amask),
                              side_b=M.labels_of(full ^ amask))
    # flat sides
    for fmask in _proper_flats(M, r - 1):
        na = bitcount(fmask)
        if na == 0 or na == n:
            continue
        lam = lambda_mask(M, fmask)
        if lam == 0 and n - na >= 1:
            return Separation(order=1, lam=0, side_a=M.labels_of(fmask),
                              side_b=M.labels_of(full ^ fmask))
        if lam <= 1 and na >= 2 and n - na >= 2:
            return Separation(order=2, lam=lam, side_a=M.labels_of(fmask),
                              side_b=M.labels_of(full ^ fmask))
    return None


def _scan_small_sep(M):
    """Exhaustive order <= 2 separation search (2^(n-1) bipartitions)."""
    n = M.n
    full = M.full_mask
    for rest in range(1 << max(0, n - 1)):
        amask = (rest << 1) | 1
        if amask == full:
            continue
        na = bitcount(amask)
        lam = lambda_mask(M, amask)
        if lam == 0:
            return Separation(order=1, lam=0, side_a=M.labels_of(amask),
                              side_b=M.labels_of(full ^ amask))
        if lam <= 1 and na >= 2 and n - na >= 2:
            return Separation(order=2, lam=lam, side_a=M.labels_of(amask),
                              side_b=M.labels_of(full ^ amask))
    return None


def is_3connected(M):
    """No 1- or 2-separation.  Exact; raises BudgetExceededError only when
    no decision procedure fits the instance."""
    core = _unwrap_lambda(M)
    n = core.n
    if n <= 3:
        # small-case convention: up to three elements, 3-connected iff uniform
        r = core.full_rank
        return all(core.rank_mask(m) == min(bitcount(m), r)
                   for m in range(1 << n))

    if isinstance(core, GraphicMatroid):
        return _graphic_3connected(core)

    # degenerate elements give immediate separations
    if loops(core) and n >= 2:
        return False
    if coloops(core) and n >= 2:
        return False
    if n >= 4:
        if any(len(c) > 1 for c in parallel_classes(core)):
            return False
        if any(len(c) > 1 for c in series_classes(core)):
            return False

    if 1 << (n - 1) <= SCAN_LIMIT:
        return _scan_small_sep(core) is None

    # simple and cosimple from here on (checked above for n >= 4)
    if n >= 4:
        r = core.full_rank
        if r <= 2 or core.n - r <= 2:
            return True  # a long line, or the dual of one (lambda is self-dual)
        for side in (core, core.dual()):
            if side.full_rank - 1 <= 5:
                try:
                    return _simple_lowrank_small_sep(side) is None
                except BudgetExceededError:
                    continue
    raise BudgetExceededError(
        f"no exact 3-connectivity procedure for n={n}", bound=SCAN_LIMIT)


def _graphic_3connected(G):
    nv, edges, n = G.nv, list(G.edges), G.n
    if n <= 1:
        return True
    if any(u == v for u, v in edges):
        return False  # a loop is a 1-separation once n >= 2
    if 1 << (n - 1) <= 4096:
        return _scan_small_sep(G) is None
    if not graphsupport.is_simple(edges):
        return False  # parallel pair, n >= 4 here
    return graphsupport.vertex_3connected(nv, edges)


# ---------------------------------------------------------------------------
# vertical 3-connectivity


def _scan_vertical_sep(M):
    """Exhaustive vertical k-separation search for k in {1, 2}."""
    n = M.n
    full = M.full_mask
    for rest in range(1 << max(0, n - 1)):
        amask = (rest << 1) | 1
        if amask == full:
            continue
        ra = M.rank_mask(amask)
        rb = M.rank_mask(full ^ amask)
        lam = ra + rb - M.full_rank
        for k in (1, 2):
            if lam <= k - 1 and min(ra, rb) >= k:
                return Separation(order=k, lam=lam, side_a=M.labels_of(amask),
                                  side_b=M.labels_of(full ^ amask))
    return None


def is_vertically_3connected(M):
    """No vertical 1- or 2-separation (both sides of rank >= k, lambda <= k-1).

    Equivalent to si(M) being 3-connected; the exhaustive definition-level
    scan is used when it fits, the si reduction otherwise.
    """
    core = _unwrap(M)
    if 1 << max(0, core.n - 1) <= SCAN_LIMIT and core.n <= 14:
        return _scan_vertical_sep(core) is None
    return is_3connected(simplify(core).matroid)


# ---------------------------------------------------------------------------
# small named structures: triangles, triads, lines, circuits


def is_circuit(M, labels):
    mask = M.mask_of(labels)
    k = bitcount(mask)
    if k == 0 or M.rank_mask(mask) != k - 1:
        return False
    return all(M.rank_mask(mask ^ (1 << i)) == k - 1 for i in bits_of(mask))


def is_cocircuit(M, labels):
    """Minimal set meeting every basis (complement is a hyperplane)."""
    mask = M.mask_of(labels)
    if mask == 0:
        return False
    full = M.full_mask
    r = M.full_rank
    if M.rank_mask(full ^ mask) != r - 1:
        return False
    return all(M.rank_mask((full ^ mask) | (1 << i)) == r for i in bits_of(mask))


def is_triangle(M, labels):
    labels = tuple(labels)
    return len(set(labels)) == 3 and is_circuit(M, labels)


def is_triad(M, labels):
    labels = tuple(labels)
    return len(set(labels)) == 3 and is_cocircuit(M, labels)


def triangles(M, through=()):
    """All triangles, or those containing every label in `through`."""
    through = tuple(through)
    base = M.mask_of(through)
    if bitcount(base) != len(through):
        raise DomainError("through labels must be distinct")
    pool = [i for i in range(M.n) if not base >> i & 1]
    need = 3 - len(through)
    if need < 0:
        return []
    out = []
    for combo in combinations(pool, need):
        mask = base
        for i in combo:
            mask |= 1 << i
        if _is_triangle_mask(M, mask):
            out.append(M.labels_of(mask))
    out.sort(key=lambda s: tuple(sorted(s)))
    return out


def _is_triangle_mask(M, mask):
    if M.rank_mask(mask) != 2:
        return False
    return all(M.rank_mask(mask ^ (1 << i)) == 2 for i in bits_of(mask))


def triads(M, through=()):
    """All triads (3-element cocircuits), optionally through given labels."""
    through = tuple(through)
    base = M.mask_of(through)
    if bitcount(base) != len(through):
        raise DomainError("through labels must be distinct")
    pool = [i for i in range(M.n) if not base >> i & 1]
    need = 3 - len(through)
    if need < 0:
        return []
    out = []
    full = M.full_mask
    r = M.full_rank
    for combo in combinations(pool, need):
        mask = base
        for i in combo:
            mask |= 1 << i
        rest = full ^ mask
        if M.rank_mask(rest) != r - 1:
            continue
        if all(M.rank_mask(rest | (1 << i)) == r for i in bits_of(mask)):
            out.append(M.labels_of(mask))
    out.sort(key=lambda s: tuple(sorted(s)))
    return out


def is_segment(M, labels, k=None):
    """A k-segment: k distinct non-parallel rank-2 elements on a common line."""
    labels = tuple(labels)
    if k is not None and len(labels) != k:
        return False
    if len(set(labels)) != len(labels) or len(labels) < 3:
        return False
    mask = M.mask_of(labels)
    if M.rank_mask(mask) != 2:
        return False
    for i, j in combinations(list(bits_of(mask)), 2):
        if M.rank_mask((1 << i) | (1 << j)) != 2:
            return False
    return True


def segments(M, k):
    """All k-point segments: k pairwise-non-parallel elements on one line."""
    if k < 3:
        raise DomainError("a segment has at least 3 points")
    nonloop = [i for i in range(M.n) if M.rank_mask(1 << i) == 1]
    lines = set()
    for a, b in combinations(nonloop, 2):
        pm = (1 << a) | (1 << b)
        if M.rank_mask(pm) == 2:
            lines.add(M.closure_mask(pm))
    out = set()
    for fmask in lines:
        members = [i for i in bits_of(fmask) if M.rank_mask(1 << i) == 1]
        if len(members) < k:
            continue
        for combo in combinations(members, k):
            if all(M.rank_mask((1 << i) | (1 << j)) == 2
                   for i, j in combinations(combo, 2)):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                out.add(M.labels_of(mask))
    return sorted(out, key=lambda s: tuple(sorted(map(str, s))))


def four_point_line_extensions(M, T):
    """Elements x with T + x a 4-point line (T a triangle)."""
    tmask = M.mask_of(T)
    out = []
    for i in range(M.n):
        if tmask >> i & 1:
            continue
        if is_segment(M, tuple(T) + (M.ground[i],), 4):
            out.append(M.ground[i])
    return out


def cocircuits_up_to(M, k, meeting=None, budget=None):
    """Cocircuits of size <= k via circuits of the dual."""
    D = M.dual() if not isinstance(M, DualMatroid) else M.base
    if budget is None:
        return D.circuits_up_to(k, meeting=meeting)
    return D.circuits_up_to(k, meeting=meeting, budget=budget)
