"""Isomorphism, canonical keys, and exhaustive minor search.

Isomorphism testing layers exact invariant refinement (per-element
profiles of small-subset ranks, iterated against neighbor colors) over a
backtracking bijection search; every complete candidate bijection is
re-verified on all subsets, so a positive answer is always exact, and a
negative answer is exact because the refinement is isomorphism-invariant.

Minor search runs in normal form: contract an independent set whose size
is exactly the rank gap, then delete down to size.  For simple targets
the deletion stage works inside the simplification of the contraction,
which is safe because parallel elements are interchangeable by
automorphisms.  Graphic host/target pairs use branch-set embeddings in
the underlying graphs instead; for a 3-connected simple target on at
least four vertices, graph minors and cycle-matroid minors coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from . import graphsupport
from .kernel import (
    BudgetExceededError,
    DomainError,
    DualMatroid,
    GF2Matroid,
    GraphicMatroid,
    Matroid,
    RelabeledMatroid,
    ValidationError,
    as_gf2,
    binary_columns,
    bitcount,
    bits_of,
)
from .structure import (_unwrap, is_simple, is_triangle, parallel_classes,
                        simplify, triangles)

FULL_VERIFY_LIMIT = 16          # max n for subset-exhaustive iso verification
ISO_NODE_BUDGET = 400_000
CANON_RANK_BUDGET = 1_500_000
MINOR_PAIR_BUDGET = 2_000_000


@dataclass(frozen=True)
class MinorWitness:
    """A verified expression N = M / contract \\ delete (up to isomorphism).

    `iso` records the witnessing bijection as sorted (minor label, target
    label) pairs; empty when the search certified existence some other way.
    """
    contract: frozenset
    delete: frozenset
    note: str = ""
    iso: tuple = ()

    def __bool__(self):
        return True

    def iso_map(self):
        return dict(self.iso)


@dataclass(frozen=True)
class Absence:
    """An exhaustive negative answer; `checked` counts candidate shapes.

    `bound` echoes the search budget the exhaustive run operated under.
    """
    note: str = ""
    checked: int = 0
    bound: int = 0

    def __bool__(self):
        return False


# ---------------------------------------------------------------------------
# invariant colors


def _initial_profiles(M):
    """Per-element profile from ranks of all subsets of size <= 3."""
    n = M.n
    prof = [[0, [], []] for _ in range(n)]  # rank, pair ranks, triple ranks
    for i in range(n):
        prof[i][0] = M.rank_mask(1 << i)
    for i, j in combinations(range(n), 2):
        r = M.rank_mask((1 << i) | (1 << j))
        prof[i][1].append(r)
        prof[j][1].append(r)
    for i, j, k in combinations(range(n), 3):
        r = M.rank_mask((1 << i) | (1 << j) | (1 << k))
        prof[i][2].append(r)
        prof[j][2].append(r)
        prof[k][2].append(r)
    return [(p[0], tuple(sorted(p[1])), tuple(sorted(p[2]))) for p in prof]


def element_colors(M, rounds=2):
    """Isomorphism-invariant element coloring (ints, normalized by value).

    Start from small-subset rank profiles, then refine each element by the
    multiset of (other color, pair rank) and (pair of colors, triple rank)
    observations.  Color ids are ranks of the sorted distinct profiles, so
    isomorphic matroids get identical colorings up to the bijection.
    """
    n = M.n
    profiles = _initial_profiles(M)
    order = {p: c for c, p in enumerate(sorted(set(profiles)))}
    colors = [order[p] for p in profiles]
    for _ in range(rounds):
        obs = [[colors[i], [], []] for i in range(n)]
        for i, j in combinations(range(n), 2):
            r = M.rank_mask((1 << i) | (1 << j))
            obs[i][1].append((colors[j], r))
            obs[j][1].append((colors[i], r))
        for i, j, k in combinations(range(n), 3):
            r = M.rank_mask((1 << i) | (1 << j) | (1 << k))
            obs[i][2].append((tuple(sorted((colors[j], colors[k]))), r))
            obs[j][2].append((tuple(sorted((colors[i], colors[k]))), r))
            obs[k][2].append((tuple(sorted((colors[i], colors[j]))), r))
        keys = [(o[0], tuple(sorted(o[1])), tuple(sorted(o[2]))) for o in obs]
        order = {p: c for c, p in enumerate(sorted(set(keys)))}
        new_colors = [order[k] for k in keys]
        if new_colors == colors:
            break
        colors = new_colors
    return colors


def invariant_signature(M):
    """A cheap exact isomorphism invariant (equal for isomorphic matroids)."""
    colors = element_colors(M, rounds=1)
    hist = tuple(sorted(colors))
    return (M.n, M.full_rank, hist)


# ---------------------------------------------------------------------------
# isomorphism


def _full_verify(M1, M2, mapping_idx):
    """Check r1(S) == r2(phi(S)) for every subset (n <= FULL_VERIFY_LIMIT)."""
    n = M1.n
    bits2 = [1 << mapping_idx[i] for i in range(n)]
    for m in range(1 << n):
        m2 = 0
        mm = m
        while mm:
            b = mm & -mm
            m2 |= bits2[b.bit_length() - 1]
            mm ^= b
        if M1.rank_mask(m) != M2.rank_mask(m2):
            return False
    return True


def find_isomorphism(M1, M2, budget=ISO_NODE_BUDGET):
    """A ground-set bijection realizing M1 == M2, as a label dict, or None."""
    if M1.n != M2.n or M1.full_rank != M2.full_rank:
        return None
    n = M1.n
    if n == 0:
        return {}

    g1, flip1 = _unwrap_parity(M1)
    g2, flip2 = _unwrap_parity(M2)
    if (flip1 == flip2 and isinstance(g1, GraphicMatroid)
            and isinstance(g2, GraphicMatroid)):
        got = _graphic_isomorphism(M1, M2, g1, g2)
        if got is not NotImplemented:
            return got

    if n > FULL_VERIFY_LIMIT or n >= 11:
        got = _binary_isomorphism(M1, M2)
        if got is not NotImplemented:
            return got

    if n > FULL_VERIFY_LIMIT:
        raise BudgetExceededError(
            f"isomorphism verification above {FULL_VERIFY_LIMIT} elements",
            bound=FULL_VERIFY_LIMIT)

    c1 = element_colors(M1)
    c2 = element_colors(M2)
    if sorted(c1) != sorted(c2):
        return None

    # process M1 elements, rarest color class first
    class_size = {}
    for c in c1:
        class_size[c] = class_size.get(c, 0) + 1
    order1 = sorted(range(n), key=lambda i: (class_size[c1[i]], c1[i], i))
    cands_by_color = {}
    for j in range(n):
        cands_by_color.setdefault(c2[j], []).append(j)

    mapping = [-1] * n
    used = [False] * n
    nodes = 0

    def paircheck(i, j, depth):
        # all <=4-subsets of mapped elements through the new pair
        placed = [order1[t] for t in range(depth)]
        b1 = 1 << i
        b2 = 1 << j
        if M1.rank_mask(b1) != M2.rank_mask(b2):
            return False
        for a in placed:
            m1 = b1 | (1 << a)
            m2 = b2 | (1 << mapping[a])
            if M1.rank_mask(m1) != M2.rank_mask(m2):
                return False
        for a, b in combinations(placed, 2):
            m1 = b1 | (1 << a) | (1 << b)
            m2 = b2 | (1 << mapping[a]) | (1 << mapping[b])
            if M1.rank_mask(m1) != M2.rank_mask(m2):
                return False
        for trip in combinations(placed, 3):
            m1 = b1
            m2 = b2
            for a in trip:
                m1 |= 1 << a
                m2 |= 1 << mapping[a]
            if M1.rank_mask(m1) != M2.rank_mask(m2):
                return False
        return True

    def rec(depth):
        nonlocal nodes
        if depth == n:
            return _full_verify(M1, M2, mapping)
        i = order1[depth]
        for j in cands_by_color.get(c1[i], ()):
            if used[j]:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError("isomorphism search budget", bound=budget)
            if not paircheck(i, j, depth):
                continue
            mapping[i] = j
            used[j] = True
            if rec(depth + 1):
                return True
            mapping[i] = -1
            used[j] = False
        return False

    if rec(0):
        return {M1.ground[i]: M2.ground[mapping[i]] for i in range(n)}
    return None


def _graphic_isomorphism(M1, M2, g1, g2):
    """Graph-level isomorphism for 3-connected simple graphic pairs.

    For such pairs cycle-matroid isomorphism coincides with graph
    isomorphism, and the canonical vertex orders produce the edge map.
    Returns NotImplemented when the preconditions fail.
    """
    for g in (g1, g2):
        if not graphsupport.is_simple(list(g.edges)):
            return NotImplemented
        if not graphsupport.vertex_3connected(g.nv, list(g.edges)):
            return NotImplemented
    code1, order1 = graphsupport.canonical_form(g1.nv, list(g1.edges))
    code2, order2 = graphsupport.canonical_form(g2.nv, list(g2.edges))
    if code1 != code2:
        return None
    # canonical position of each vertex
    pos1 = {v: t for t, v in enumerate(order1)}
    pos2 = {t: v for t, v in enumerate(order2)}
    vmap = {v: pos2[pos1[v]] for v in pos1}
    edge_of = {}
    for idx, (u, v) in enumerate(g2.edges):
        edge_of[(min(u, v), max(u, v))] = M2.ground[idx]
    out = {}
    for idx, (u, v) in enumerate(g1.edges):
        a, b = vmap[u], vmap[v]
        out[M1.ground[idx]] = edge_of[(min(a, b), max(a, b))]
    return out


BINARY_ISO_LIMIT = 20           # max n for the binary canonical-form iso path


def _unwrap_parity(M):
    """(core, dual parity) after stripping dual/relabel wrappers."""
    flips = 0
    while isinstance(M, (DualMatroid, RelabeledMatroid)):
        if isinstance(M, DualMatroid):
            flips ^= 1
        M = M.base
    return M, flips


def _strip_relabel(M):
    """Strip relabel wrappers only (positions, hence ranks, are unchanged)."""
    while isinstance(M, RelabeledMatroid):
        M = M.base
    return M


def _binary_isomorphism(M1, M2):
    """Canonical-form isomorphism for recognizably binary pairs.

    Binary matroids are uniquely GF(2)-representable, so equal canonical
    dependence matrices give an isomorphism by matching order positions.
    NotImplemented when either side has no visible binary representation
    or the size exceeds BINARY_ISO_LIMIT.
    """
    if M1.n > BINARY_ISO_LIMIT:
        return NotImplemented
    got1 = binary_columns(_strip_relabel(M1))
    got2 = binary_columns(_strip_relabel(M2))
    if got1 is None or got2 is None:
        return NotImplemented
    G1 = GF2Matroid(M1.ground, got1[0], nrows=got1[1])
    G2 = GF2Matroid(M2.ground, got2[0], nrows=got2[1])
    code1, order1 = _binary_canonical(G1, budget=CANON_RANK_BUDGET)
    code2, order2 = _binary_canonical(G2, budget=CANON_RANK_BUDGET)
    if code1 != code2:
        return None
    return {M1.ground[i]: M2.ground[j] for i, j in zip(order1, order2)}


def are_isomorphic(M1, M2, budget=ISO_NODE_BUDGET):
    return find_isomorphism(M1, M2, budget=budget) is not None


def isomorphism(M1, M2, budget=ISO_NODE_BUDGET):
    """Ground-set bijection realizing M1 == M2 as a label dict, or None.

    General pairs are handled exhaustively up to 16 elements; recognizably
    binary pairs up to 20 via canonical dependence matrices.
    """
    return find_isomorphism(M1, M2, budget=budget)


# ---------------------------------------------------------------------------
# canonical keys


def canonical_key(M, budget=CANON_RANK_BUDGET):
    """Representation-independent canonical bytes: equal iff isomorphic.

    Minimizes, over all element orders consistent with the invariant
    coloring, the vector of ranks of all subsets in order-respecting
    enumeration.  Exact but exponential; intended for small instances
    (the budget counts rank evaluations).
    """
    n = M.n
    colors = element_colors(M)
    header = bytes([n, M.full_rank]) + bytes(
        b for c in sorted(colors) for b in divmod(c, 256))
    if n == 0:
        return header
    evals = 0
    best = None

    def rec(order, used_mask, prefix):
        nonlocal best, evals
        depth = len(order)
        if depth == n:
            # prefix covers all masks through the new element at each level,
            # which together enumerate every nonempty subset exactly once
            if best is None or bytes(prefix) < best:
                best = bytes(prefix)
            return
        unused = [i for i in range(n) if not used_mask >> i & 1]
        mincol = min(colors[i] for i in unused)
        for e in unused:
            if colors[e] != mincol:
                continue
            base_masks = 1 << depth
            evals += base_masks
            if evals > budget:
                raise BudgetExceededError("canonical key budget", bound=budget)
            ext = bytearray()
            for m in range(base_masks):
                mask = 1 << e
                mm = m
                while mm:
                    b = mm & -mm
                    mask |= 1 << order[b.bit_length() - 1]
                    mm ^= b
                ext.append(M.rank_mask(mask))
            cand = prefix + ext
            if best is not None:
                head = best[:len(cand)]
                cb = bytes(cand)
                if cb > head:
                    continue  # no completion can beat the incumbent
                if cb < head:
                    best = None  # every completion beats the incumbent
            rec(order + [e], used_mask | (1 << e), cand)

    rec([], 0, bytearray())
    return header + best


def binary_key(M):
    """Canonical bytes for binary matroids: equal iff isomorphic.

    Minimum, over all bases and admissible row orders, of the sorted
    fundamental-dependence matrix written against that basis.
    """
    return _binary_canonical(as_gf2(M))[0]


def _binary_canonical(G, budget=None):
    """(code, element order) canonical form of a GF2Matroid.

    `order` lists the indices realizing the code: the winning basis in row
    order, then the non-basis elements in sorted-column order.  Two binary
    matroids with equal codes are isomorphic via matching order positions
    (tied rows or columns are interchangeable by automorphisms).  `budget`
    caps basis * row-order work when set.
    """
    n, r = G.n, G.full_rank
    if r == 0 or r == n:
        return bytes([n, r]), tuple(range(n))
    best = None
    best_order = None
    spent = 0
    for basis in combinations(range(n), r):
        bmask = 0
        for i in basis:
            bmask |= 1 << i
        if G.rank_mask(bmask) != r:
            continue
        # express every non-basis column over the basis columns
        pivot = {}
        cols = []
        for i in basis:
            v = G.cols[i]
            combo = 1 << len(cols)
            while v:
                h = v.bit_length() - 1
                got = pivot.get(h)
                if got is None:
                    pivot[h] = (v, combo)
                    break
                v ^= got[0]
                combo ^= got[1]
            cols.append(i)
        dvecs = []
        for j in range(n):
            if bmask >> j & 1:
                continue
            v = G.cols[j]
            combo = 0
            while v:
                h = v.bit_length() - 1
                got = pivot[h]
                v ^= got[0]
                combo ^= got[1]
            dvecs.append(combo)
        # rows of the dependence matrix (one per basis element)
        rows = []
        for t in range(r):
            w = 0
            for k, dv in enumerate(dvecs):
                if dv >> t & 1:
                    w |= 1 << k
            rows.append(w)
        # admissible row orders: permute only within equal row-weight groups
        groups = {}
        for t, w in enumerate(rows):
            groups.setdefault(bitcount(w), []).append(t)
        orderings = [[]]
        for wt in sorted(groups):
            new = []
            for head in orderings:
                for perm in permutations(groups[wt]):
                    new.append(head + list(perm))
            orderings = new
        if budget is not None:
            spent += len(orderings)
            if spent > budget:
                raise BudgetExceededError("binary canonical form budget",
                                          bound=budget)
        width = max(2, (r + 7) // 8)
        nonbasis = [j for j in range(n) if not bmask >> j & 1]
        for row_order in orderings:
            colvals = []
            for k in range(len(dvecs)):
                v = 0
                for newt, t in enumerate(row_order):
                    if rows[t] >> k & 1:
                        v |= 1 << newt
                colvals.append(v)
            ranked = sorted(range(len(dvecs)), key=lambda k: colvals[k])
            code = bytes([n, r]) + b"".join(
                colvals[k].to_bytes(width, "big") for k in ranked)
            if best is None or code < best:
                best = code
                best_order = tuple(cols[t] for t in row_order) + tuple(
                    nonbasis[k] for k in ranked)
    return best, best_order


# ---------------------------------------------------------------------------
# witnesses


def normalize_witness(M, contract, delete):
    """Equivalent minor expression with an independent contract-set and a
    coindependent delete-set (sizes then equal the rank and corank gaps).

    Pass one: rank-redundant contract-elements are loops after contracting
    the rest, and deleting a loop is the same minor.  Pass two: deleted
    elements still needed to span (together with the survivors and the
    contract-set) are coloops after the other deletions, and contracting a
    coloop is the same minor; greedily absorbing them restores full rank
    while keeping the contract-set independent.
    """
    cmask = M.mask_of(contract)
    dmask = M.mask_of(delete)
    if cmask & dmask:
        raise ValidationError("contract and delete sets overlap")
    basis = 0
    r = 0
    for i in bits_of(cmask):
        if M.rank_mask(basis | (1 << i)) > r:
            basis |= 1 << i
            r += 1
    dmask |= cmask ^ basis
    cmask = basis
    cur = M.full_mask ^ dmask  # survivors plus the contract-set
    have = M.rank_mask(cur)
    grab = 0
    if have < M.full_rank:
        for i in bits_of(dmask):
            nxt = M.rank_mask(cur | grab | (1 << i))
            if nxt > have:
                grab |= 1 << i
                have = nxt
                if have == M.full_rank:
                    break
    cmask |= grab
    dmask ^= grab
    return M.labels_of(cmask), M.labels_of(dmask)


def verify_witness(M, witness, N, budget=ISO_NODE_BUDGET):
    """Exact check that M / contract \\ delete is isomorphic to N.

    When the witness carries its bijection, that mapping is checked
    directly on every subset; otherwise an isomorphism is searched for.
    """
    sub = M.minor(contract=witness.contract, delete=witness.delete)
    if sub.n != N.n:
        return False
    if witness.iso:
        mp = dict(witness.iso)
        if set(mp) != set(sub.ground) or set(mp.values()) != set(N.ground):
            return False
        if sub.n > FULL_VERIFY_LIMIT:
            raise BudgetExceededError(
                f"witness verification above {FULL_VERIFY_LIMIT} elements",
                bound=FULL_VERIFY_LIMIT)
        mapping_idx = [N._idx[mp[sub.ground[i]]] for i in range(sub.n)]
        return _full_verify(sub, N, mapping_idx)
    return are_isomorphic(sub, N, budget=budget)


# ---------------------------------------------------------------------------
# minor search


def has_minor(M, N, keep=(), budget=MINOR_PAIR_BUDGET, verify=True):
    """Search for an N-minor of M; `keep` labels must survive into it.

    Returns a MinorWitness (truthy) or an exhaustive Absence (falsy).
    Incomplete searches raise BudgetExceededError instead of guessing.
    """
    keep = tuple(keep)
    kmask = M.mask_of(keep)
    if bitcount(kmask) != len(keep):
        raise DomainError("keep labels must be distinct")
    if N.n > M.n or N.full_rank > M.full_rank or N.corank > M.corank:
        return Absence(note="size or rank precludes a minor", checked=0)
    if len(keep) > N.n:
        return Absence(note="more kept elements than target size", checked=0)

    g1 = _unwrap(M)
    g2 = _unwrap(N)
    if isinstance(g1, GraphicMatroid) and isinstance(g2, GraphicMatroid):
        got = _graphic_has_minor(M, N, g1, g2, keep, budget)
        if got is not NotImplemented:
            return got

    if is_simple(N):
        return _si_minor_search(M, N, keep, budget, verify)
    return _plain_minor_search(M, N, keep, budget, verify)


def has_minor_using_triangle(M, N, T, budget=MINOR_PAIR_BUDGET, verify=True):
    """An N-minor of M in which the triangle T survives as a triangle.

    For a simple target this is exactly ``has_minor(M, N, keep=T)``: a
    circuit stays dependent under contractions away from it, so three
    surviving, pairwise non-parallel triangle elements form a triangle of
    the minor.  Targets with parallel elements or loops instead rerun the
    search with T pinned onto each triangle of N under each rotation.
    """
    T = tuple(T)
    if len(set(T)) != 3:
        raise DomainError("a triangle has three distinct labels")
    if not is_triangle(M, T):
        raise DomainError("the given labels are not a triangle of the host")
    if is_simple(N):
        return has_minor(M, N, keep=T, budget=budget, verify=verify)
    total = 0
    for TN in triangles(N):
        for perm in permutations(sorted(TN, key=str)):
            got = _plain_minor_search(M, N, T, budget, verify,
                                      forced=dict(zip(perm, T)))
            if got:
                return got
            total += got.checked
    return Absence(note="no embedding keeps the triangle on a target triangle",
                   checked=total, bound=budget)


def _independent_sets_avoiding(M, size, avoid_mask):
    """All independent index-subsets of the given size avoiding a mask."""
    pool = [i for i in range(M.n) if not avoid_mask >> i & 1]

    def rec(start, chosen_mask, depth):
        if depth == size:
            yield chosen_mask
            return
        for t in range(start, len(pool)):
            i = pool[t]
            m = chosen_mask | (1 << i)
            if M.rank_mask(m) == bitcount(m):
                yield from rec(t + 1, m, depth + 1)

    yield from rec(0, 0, 0)


class _Work:
    __slots__ = ("count", "budget")

    def __init__(self, budget):
        self.count = 0
        self.budget = budget

    def spend(self, amount=1):
        self.count += amount
        if self.count > self.budget:
            raise BudgetExceededError("minor search budget", bound=self.budget)


def _restriction_embedding(S, N, required, work, forced=None):
    """An injection of N's ground into S's with N == S restricted to the
    image (exact: every candidate passes subset-exhaustive verification).

    `required` labels of S must land in the image; `forced` pins chosen
    N labels to chosen S labels.  Returns the image as a label tuple
    ordered like N.ground, or None (exhaustive).
    """
    n2 = N.n
    if S.n < n2:
        return None
    colorsN = element_colors(N)
    class_size = {}
    for c in colorsN:
        class_size[c] = class_size.get(c, 0) + 1
    orderN = sorted(range(n2), key=lambda i: (class_size[colorsN[i]],
                                              colorsN[i], i))
    req_idx = [S._idx[e] for e in required]
    req_set = set(req_idx)
    pinned = {}
    if forced:
        for nlab, slab in forced.items():
            if slab not in S._idx:
                return None
            pinned[N._idx[nlab]] = S._idx[slab]
        if len(set(pinned.values())) != len(pinned):
            return None
        orderN = sorted(orderN, key=lambda i: i not in pinned)
    image = [-1] * n2
    used = set()

    def consistent(x, s, depth):
        bx = 1 << x
        bs = 1 << s
        if N.rank_mask(bx) != S.rank_mask(bs):
            return False
        placed = [orderN[t] for t in range(depth)]
        for a in placed:
            if N.rank_mask(bx | (1 << a)) != S.rank_mask(bs | (1 << image[a])):
                return False
        for a, b in combinations(placed, 2):
            m1 = bx | (1 << a) | (1 << b)
            m2 = bs | (1 << image[a]) | (1 << image[b])
            if N.rank_mask(m1) != S.rank_mask(m2):
                return False
        return True

    def full_check():
        for m in range(1 << n2):
            ms = 0
            mm = m
            while mm:
                b = mm & -mm
                ms |= 1 << image[b.bit_length() - 1]
                mm ^= b
            if N.rank_mask(m) != S.rank_mask(ms):
                return False
        return True

    def rec(depth):
        if depth == n2:
            if req_set - used:
                return False
            work.spend(1 << n2)
            return full_check()
        missing = len(req_set - used)
        if missing > n2 - depth:
            return False
        x = orderN[depth]
        choices = (pinned[x],) if x in pinned else range(S.n)
        for s in choices:
            if s in used:
                continue
            work.spend()
            if not consistent(x, s, depth):
                continue
            image[x] = s
            used.add(s)
            if rec(depth + 1):
                return True
            image[x] = -1
            used.discard(s)
        return False

    if rec(0):
        return tuple(S.ground[image[i]] for i in range(n2))
    return None


def _iso_pairs(image, N):
    return tuple(sorted(zip(image, N.ground), key=lambda p: str(p[0])))


def _si_minor_search(M, N, keep, budget, verify):
    # The simplification can only shrink under contraction and deletion, so
    # a simple target larger than si(M) rules out every minor at once.
    if len(parallel_classes(M)) < N.n:
        return Absence(note="simplification already smaller than the target",
                       checked=0)
    rgap = M.full_rank - N.full_rank
    kmask = M.mask_of(keep)
    work = _Work(budget)
    checked = 0
    for imask in _independent_sets_avoiding(M, rgap, kmask):
        work.spend()
        checked += 1
        Mq = M._minor_masks(imask, 0)
        sm = simplify(Mq, prefer=keep)
        S = sm.matroid
        if S.n < N.n:
            continue
        if any(k not in S._idx for k in keep):
            continue  # two kept elements merged: no simple minor keeps both
        image = _restriction_embedding(S, N, keep, work)
        if image is not None:
            contract = M.labels_of(imask)
            delete = frozenset(M.ground) - contract - set(image)
            w = MinorWitness(contract=contract, delete=delete,
                             note="normal-form search (simple target)",
                             iso=_iso_pairs(image, N))
            if verify and not verify_witness(M, w, N):
                raise ValidationError("minor witness failed verification")
            return w
    return Absence(note="exhausted normal-form search", checked=checked,
                   bound=budget)


def _plain_minor_search(M, N, keep, budget, verify, forced=None):
    rgap = M.full_rank - N.full_rank
    kmask = M.mask_of(keep)
    work = _Work(budget)
    checked = 0
    for imask in _independent_sets_avoiding(M, rgap, kmask):
        work.spend()
        checked += 1
        Mq = M._minor_masks(imask, 0)
        image = _restriction_embedding(Mq, N, keep, work, forced=forced)
        if image is not None:
            contract = M.labels_of(imask)
            delete = frozenset(M.ground) - contract - set(image)
            w = MinorWitness(contract=contract, delete=delete,
                             note="normal-form search",
                             iso=_iso_pairs(image, N))
            if verify and not verify_witness(M, w, N):
                raise ValidationError("minor witness failed verification")
            return w
    return Absence(note="exhausted normal-form search", checked=checked,
                   bound=budget)


# ---------------------------------------------------------------------------
# graphic fast path


def _graphic_has_minor(M, N, g1, g2, keep, budget=MINOR_PAIR_BUDGET):
    """Graph-level minor search for graphic host and 3-connected simple
    graphic target with >= 4 vertices; NotImplemented when out of scope."""
    nv2, edges2 = graphsupport.strip_isolated(g2.nv, list(g2.edges))
    if nv2 < 4 or not graphsupport.is_simple(edges2):
        return NotImplemented
    if not graphsupport.vertex_3connected(nv2, edges2):
        return NotImplemented

    host_nv, host_edges = g1.nv, list(g1.edges)
    hnv, hedges = graphsupport.strip_isolated(host_nv, host_edges)
    if hnv == nv2 and len(hedges) == len(edges2):
        # An equal-size minor keeps every vertex and edge, so the host must
        # already be the pattern: simple, with the same degree multiset.
        if (not graphsupport.is_simple(hedges)
                or sorted(graphsupport.degrees(hnv, hedges))
                != sorted(graphsupport.degrees(nv2, edges2))):
            return Absence(note="equal-size host cannot match the pattern",
                           checked=0)

    if not keep:
        work = _Work(budget)
        got = graphsupport.find_pattern_minor((host_nv, host_edges),
                                              (nv2, edges2), work=work)
        if got is None:
            return Absence(note="contraction-subgraph search exhausted",
                           checked=work.count, bound=budget)
        contracted, reps = got
        kept = set(reps)
        iso = tuple(sorted(((M.ground[r], N.ground[t])
                            for t, r in enumerate(reps)),
                           key=lambda q: str(q[0])))
        return MinorWitness(
            contract=frozenset(M.ground[i] for i in contracted),
            delete=frozenset(M.ground[i] for i in range(M.n)
                             if i not in contracted and i not in kept),
            note="contraction-subgraph search", iso=iso)

    # anchored shape: exactly three kept labels forming a host triangle;
    # other keep shapes fall back to the generic search
    if len(keep) != 3:
        return NotImplemented
    kidx = [M._idx[e] for e in keep]
    vset = set()
    for i in kidx:
        u, v = g1.edges[i]
        if u == v:
            return NotImplemented
        vset.update((u, v))
    if len(vset) != 3:
        return NotImplemented
    adj2 = {v: set() for v in range(nv2)}
    for u, v in edges2:
        adj2[u].add(v)
        adj2[v].add(u)
    if not any(b in adj2[a] and c in adj2[a] and c in adj2[b]
               for a, b, c in combinations(range(nv2), 3)):
        return Absence(note="kept elements form no matching triangle",
                       checked=0)
    work = _Work(budget)
    got = graphsupport.find_pattern_minor((host_nv, host_edges),
                                          (nv2, edges2), work=work,
                                          anchor=tuple(kidx))
    if got is None:
        return Absence(note="anchored contraction-subgraph search exhausted",
                       checked=work.count, bound=budget)
    contracted, reps = got
    kept = set(reps)
    iso = tuple(sorted(((M.ground[r], N.ground[t])
                        for t, r in enumerate(reps)),
                       key=lambda q: str(q[0])))
    return MinorWitness(
        contract=frozenset(M.ground[i] for i in contracted),
        delete=frozenset(M.ground[i] for i in range(M.n)
                         if i not in contracted and i not in kept),
        note="anchored contraction-subgraph search", iso=iso)
