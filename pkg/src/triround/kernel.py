"""Exact matroids: labeled ground sets, rank oracles, derived combinators.

Every matroid exposes one oracle interface: an immutable ground tuple and
exact integer ranks for arbitrary subsets, addressed either by label
collections or by bitmasks over the ground order (element ``i`` is bit
``i``).  All arithmetic is exact: GF(2) columns live in Python ints and
rational coordinates in ``fractions.Fraction``.  Nothing here floats.

Base representations: GF(2) column matrices, labeled multigraphs, uniform
matroids, rational affine point sets.  Derived combinators: dual, minor,
truncation, principal extension, circuit-hyperplane relaxation, 2-sum, and
a matrix-level binary 3-sum.  Rank queries are memoized per matroid keyed
by subset bitmask.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import graphsupport

MEMO_CAP = 1 << 18
CIRCUIT_ENUM_BUDGET = 2_000_000


class MatroidError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MatroidError):
    """A label or subset outside the matroid's ground set."""


class ValidationError(MatroidError):
    """Inputs that violate a constructor's precondition."""


class BudgetExceededError(MatroidError):
    """A search or enumeration hit its configured budget.

    Distinct from a negative answer: callers must never treat this as
    "absent".  The offending bound is carried for reporting.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


def bitcount(mask):
    return mask.bit_count()


def bits_of(mask):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def gf2_rank(columns):
    """Rank of a collection of GF(2) column vectors stored as ints."""
    basis = {}
    r = 0
    for v in columns:
        while v:
            h = v.bit_length() - 1
            w = basis.get(h)
            if w is None:
                basis[h] = v
                r += 1
                break
            v ^= w
    return r


def gf2_nullspace(columns):
    """Basis of the dependency space of the columns, as index-bitmasks.

    A returned mask ``m`` means the columns at the set bits of ``m`` sum to
    zero over GF(2); the masks are independent and span all dependencies.
    """
    basis = {}  # top bit -> (vector, combo mask)
    out = []
    for i, v in enumerate(columns):
        combo = 1 << i
        while v:
            h = v.bit_length() - 1
            got = basis.get(h)
            if got is None:
                basis[h] = (v, combo)
                break
            v ^= got[0]
            combo ^= got[1]
        else:
            out.append(combo)
    return out


class Matroid:
    """Immutable matroid with an exact, memoized rank oracle."""

    __slots__ = ("ground", "n", "full_mask", "_idx", "_memo", "_frank")

    def __init__(self, ground):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise ValidationError("duplicate labels in ground set")
        for e in ground:
            if not isinstance(e, str) or not e:
                raise ValidationError("labels must be non-empty strings")
        self.ground = ground
        self.n = len(ground)
        self.full_mask = (1 << self.n) - 1
        self._idx = {e: i for i, e in enumerate(ground)}
        self._memo = {}
        self._frank = None

    # -- label/mask plumbing ------------------------------------------------

    def mask_of(self, labels):
        m = 0
        for e in labels:
            i = self._idx.get(e)
            if i is None:
                raise DomainError(f"label {e!r} not in ground set")
            m |= 1 << i
        return m

    def labels_of(self, mask):
        return frozenset(self.ground[i] for i in bits_of(mask))

    def sorted_labels(self, mask):
        return tuple(self.ground[i] for i in bits_of(mask))

    # -- the oracle ----------------------------------------------------------

    def _rank_raw(self, mask):
        raise NotImplementedError

    def rank_mask(self, mask):
        memo = self._memo
        r = memo.get(mask)
        if r is None:
            r = self._rank_raw(mask)
            if len(memo) < MEMO_CAP:
                memo[mask] = r
        return r

    def rank(self, labels=None):
        if labels is None:
            return self.full_rank
        return self.rank_mask(self.mask_of(labels))

    @property
    def full_rank(self):
        if self._frank is None:
            self._frank = self.rank_mask(self.full_mask)
        return self._frank

    @property
    def corank(self):
        return self.n - self.full_rank

    def is_independent_mask(self, mask):
        return self.rank_mask(mask) == bitcount(mask)

    def is_coindependent_mask(self, mask):
        return self.rank_mask(self.full_mask ^ mask) == self.full_rank

    def closure_mask(self, mask):
        r = self.rank_mask(mask)
        out = mask
        rest = self.full_mask ^ mask
        for i in bits_of(rest):
            if self.rank_mask(mask | (1 << i)) == r:
                out |= 1 << i
        return out

    def closure(self, labels):
        return self.labels_of(self.closure_mask(self.mask_of(labels)))

    def is_flat_mask(self, mask):
        return self.closure_mask(mask) == mask

    # -- combinators ----------------------------------------------------------

    def dual(self):
        return DualMatroid(self)

    def minor(self, contract=(), delete=()):
        cmask = self.mask_of(contract)
        dmask = self.mask_of(delete)
        if cmask & dmask:
            raise ValidationError("contract and delete sets overlap")
        return self._minor_masks(cmask, dmask)

    def _minor_masks(self, cmask, dmask):
        if cmask == 0 and dmask == 0:
            return self
        return MinorMatroid(self, cmask, dmask)

    def contract(self, labels):
        return self.minor(contract=labels)

    def delete(self, labels):
        return self.minor(delete=labels)

    def restrict(self, keep):
        kmask = self.mask_of(keep)
        return self._minor_masks(0, self.full_mask ^ kmask)

    # -- enumeration -----------------------------------------------------------

    def circuits_up_to(self, k, meeting=None, budget=CIRCUIT_ENUM_BUDGET):
        """All circuits of size at most k, optionally only those meeting a set.

        Enumeration anchors one element inside the meeting set (halving
        duplicated work); an unfiltered call walks all subsets up to size k.
        Raises BudgetExceededError when the subset count would pass budget.
        """
        n = self.n
        if meeting is not None:
            anchor_idx = sorted(bits_of(self.mask_of(meeting)))
        else:
            anchor_idx = None
        total = 0
        found = []
        found_masks = []

        def emit(mask):
            for fm in found_masks:
                if fm & mask == fm:
                    return
            found_masks.append(mask)
            found.append(self.labels_of(mask))

        def is_circuit(mask, size):
            if self.rank_mask(mask) != size - 1:
                return False
            for i in bits_of(mask):
                if self.rank_mask(mask ^ (1 << i)) != size - 1:
                    return False
            return True

        if anchor_idx is None:
            pool = list(range(n))
            for size in range(1, k + 1):
                for combo in combinations(pool, size):
                    total += 1
                    if total > budget:
                        raise BudgetExceededError(
                            "circuit enumeration budget exceeded", bound=budget)
                    mask = 0
                    for i in combo:
                        mask |= 1 << i
                    if is_circuit(mask, size):
                        emit(mask)
        else:
            aset = set(anchor_idx)
            for pos, a in enumerate(anchor_idx):
                smaller = set(anchor_idx[:pos])
                pool = [i for i in range(n) if i != a and i not in smaller]
                for size in range(1, k + 1):
                    for combo in combinations(pool, size - 1):
                        total += 1
                        if total > budget:
                            raise BudgetExceededError(
                                "circuit enumeration budget exceeded", bound=budget)
                        mask = 1 << a
                        for i in combo:
                            mask |= 1 << i
                        if is_circuit(mask, size):
                            emit(mask)
        found.sort(key=lambda s: (len(s), tuple(sorted(s))))
        return found

    # -- serialization hook -----------------------------------------------------

    def describe(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n} r={self.full_rank}>"


# ---------------------------------------------------------------------------
# base representations


class GF2Matroid(Matroid):
    """Columns over GF(2); column ``i`` is an int whose bits are the rows."""

    __slots__ = ("cols", "nrows", "_prov")

    def __init__(self, ground, cols, nrows=None, _prov=None):
        super().__init__(ground)
        cols = tuple(int(c) for c in cols)
        if len(cols) != self.n:
            raise ValidationError("one column per ground element required")
        if nrows is None:
            nrows = max((c.bit_length() for c in cols), default=0)
        if any(c >> nrows for c in cols):
            raise ValidationError("column exceeds declared row count")
        self.cols = cols
        self.nrows = nrows
        self._prov = _prov

    def _rank_raw(self, mask):
        basis = {}
        r = 0
        cols = self.cols
        for i in bits_of(mask):
            v = cols[i]
            while v:
                h = v.bit_length() - 1
                w = basis.get(h)
                if w is None:
                    basis[h] = v
                    r += 1
                    break
                v ^= w
        return r

    def dual(self):
        cycles = gf2_nullspace(self.cols)
        dual_cols = []
        for j in range(self.n):
            v = 0
            for i, cyc in enumerate(cycles):
                if cyc >> j & 1:
                    v |= 1 << i
            dual_cols.append(v)
        return GF2Matroid(self.ground, dual_cols, nrows=len(cycles),
                          _prov={"op": "dual", "children": [self]})

    def _minor_masks(self, cmask, dmask):
        if cmask == 0 and dmask == 0:
            return self
        cols = list(self.cols)
        # eliminate a maximal independent subset of the contracted columns
        basis = {}
        for i in bits_of(cmask):
            v = cols[i]
            while v:
                h = v.bit_length() - 1
                w = basis.get(h)
                if w is None:
                    basis[h] = v
                    break
                v ^= w
        pivots = sorted(basis, reverse=True)
        keep_rows = [h for h in range(self.nrows) if h not in basis]
        new_cols = []
        new_ground = []
        gone = cmask | dmask
        for i in range(self.n):
            if gone >> i & 1:
                continue
            v = cols[i]
            for h in pivots:
                if v >> h & 1:
                    v ^= basis[h]
            w = 0
            for k, h in enumerate(keep_rows):
                if v >> h & 1:
                    w |= 1 << k
            new_cols.append(w)
            new_ground.append(self.ground[i])
        return GF2Matroid(new_ground, new_cols, nrows=len(keep_rows))

    def describe(self):
        if self._prov is not None:
            return _derived_describe(self._prov)
        rows = []
        for h in range(self.nrows):
            rows.append([(c >> h) & 1 for c in self.cols])
        return {"type": "linear_gf2", "matrix": rows, "labels": list(self.ground)}


class GraphicMatroid(Matroid):
    """Cycle matroid of a labeled multigraph (loops and parallels allowed)."""

    __slots__ = ("nv", "edges")

    def __init__(self, nv, edges, labels=None):
        edges = [tuple(e[:2]) for e in edges]
        if labels is None:
            labels = [f"e{u}_{v}_{i}" for i, (u, v) in enumerate(edges)]
        super().__init__(labels)
        nv = int(nv)
        for u, v in edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise ValidationError("edge endpoint outside vertex range")
        self.nv = nv
        self.edges = tuple(edges)

    def _rank_raw(self, mask):
        return graphsupport.graph_rank(self.nv, self.edges, bits_of(mask))

    def _minor_masks(self, cmask, dmask):
        if cmask == 0 and dmask == 0:
            return self
        nv2, kept, _ = graphsupport.contract_edges(self.nv, self.edges, set(bits_of(cmask)))
        edges2 = []
        labels2 = []
        for i, e in kept:
            if dmask >> i & 1:
                continue
            edges2.append(e)
            labels2.append(self.ground[i])
        return GraphicMatroid(nv2, edges2, labels2)

    def describe(self):
        return {
            "type": "graphic",
            "vertices": self.nv,
            "edges": [[u, v, lbl] for (u, v), lbl in zip(self.edges, self.ground)],
        }


class UniformMatroid(Matroid):
    __slots__ = ("r",)

    def __init__(self, r, n=None, labels=None):
        if labels is None:
            if n is None:
                raise ValidationError("need n or labels")
            labels = [f"e{i}" for i in range(n)]
        super().__init__(labels)
        if not (0 <= r <= self.n):
            raise ValidationError("uniform rank out of range")
        self.r = r

    def _rank_raw(self, mask):
        return min(self.r, bitcount(mask))

    def dual(self):
        return UniformMatroid(self.n - self.r, labels=self.ground)

    def _minor_masks(self, cmask, dmask):
        if cmask == 0 and dmask == 0:
            return self
        c = bitcount(cmask)
        new_r = max(0, self.r - min(self.r, c))
        gone = cmask | dmask
        labels = [e for i, e in enumerate(self.ground) if not gone >> i & 1]
        return UniformMatroid(min(new_r, len(labels)), labels=labels)

    def describe(self):
        return {"type": "uniform", "r": self.r, "n": self.n, "labels": list(self.ground)}


class RationalAffineMatroid(Matroid):
    """Affine dependence matroid of labeled rational points.

    Rank of a subset is the linear rank of the homogenized coordinates
    (a leading 1 prepended to each point), so a k-flat carries rank k+1.
    """

    __slots__ = ("dim", "points", "hcols")

    def __init__(self, dim, points):
        labels = list(points)
        super().__init__(labels)
        self.dim = int(dim)
        pts = []
        hcols = []
        for e in labels:
            coords = tuple(Fraction(x) for x in points[e])
            if len(coords) != self.dim:
                raise ValidationError("point dimension mismatch")
            pts.append(coords)
            hcols.append((Fraction(1),) + coords)
        self.points = tuple(pts)
        self.hcols = tuple(hcols)

    def _rank_raw(self, mask):
        basis = []  # (pivot index, normalized row)
        r = 0
        for i in bits_of(mask):
            v = list(self.hcols[i])
            for p, row in basis:
                if v[p]:
                    coef = v[p]
                    v = [a - coef * b for a, b in zip(v, row)]
            piv = next((j for j, a in enumerate(v) if a), None)
            if piv is not None:
                inv = v[piv]
                v = [a / inv for a in v]
                basis.append((piv, v))
                r += 1
        return r

    def describe(self):
        pts = {}
        for e, coords in zip(self.ground, self.points):
            pts[e] = [f"{c.numerator}/{c.denominator}" for c in coords]
        return {"type": "rational_affine", "dim": self.dim, "points": pts}


# ---------------------------------------------------------------------------
# derived representations


def _derived_describe(prov):
    children = [c.describe() for c in prov["children"]]
    out = {"type": "derived", "op": prov["op"], "children": children}
    if prov.get("args"):
        out["args"] = prov["args"]
    return out


class DualMatroid(Matroid):
    __slots__ = ("base",)

    def __init__(self, base):
        super().__init__(base.ground)
        self.base = base

    def _rank_raw(self, mask):
        b = self.base
        return bitcount(mask) + b.rank_mask(self.full_mask ^ mask) - b.full_rank

    def dual(self):
        return self.base

    def describe(self):
        return _derived_describe({"op": "dual", "children": [self.base]})


class MinorMatroid(Matroid):
    __slots__ = ("base", "cmask", "dmask", "base_bits", "_rc")

    def __init__(self, base, cmask, dmask):
        # nested minors never reach here: _minor_masks on a MinorMatroid
        # lifts the masks and delegates to the grandparent
        keep = [i for i in range(base.n) if not (cmask | dmask) >> i & 1]
        super().__init__(base.ground[i] for i in keep)
        self.base = base
        self.cmask = cmask
        self.dmask = dmask
        self.base_bits = tuple(1 << i for i in keep)
        self._rc = base.rank_mask(cmask)

    def _rank_raw(self, mask):
        bm = self.cmask
        bits = self.base_bits
        for i in bits_of(mask):
            bm |= bits[i]
        return self.base.rank_mask(bm) - self._rc

    def _minor_masks(self, cmask, dmask):
        if cmask == 0 and dmask == 0:
            return self
        bc = 0
        bd = 0
        bits = self.base_bits
        for i in bits_of(cmask):
            bc |= bits[i]
        for i in bits_of(dmask):
            bd |= bits[i]
        return self.base._minor_masks(self.cmask | bc, self.dmask | bd)

    def describe(self):
        return _derived_describe({
            "op": "minor",
            "args": {
                "contract": sorted(self.base.labels_of(self.cmask)),
                "delete": sorted(self.base.labels_of(self.dmask)),
            },
            "children": [self.base],
        })


class TruncationMatroid(Matroid):
    __slots__ = ("base", "tr")

    def __init__(self, base):
        if base.full_rank < 1:
            raise ValidationError("cannot truncate a rank-0 matroid")
        super().__init__(base.ground)
        self.base = base
        self.tr = base.full_rank - 1

    def _rank_raw(self, mask):
        return min(self.base.rank_mask(mask), self.tr)

    def describe(self):
        return _derived_describe({"op": "truncation", "children": [self.base]})


class PrincipalExtensionMatroid(Matroid):
    """Adds one element freely placed on a flat (the whole ground set for a
    free extension)."""

    __slots__ = ("base", "flat_mask", "newbit")

    def __init__(self, base, flat_labels, new_label):
        if new_label in base._idx:
            raise ValidationError("new label already present")
        # any anchor set works: the rank formula only tests F <= cl(A),
        # which depends on F through cl(F)
        fmask = base.mask_of(flat_labels)
        super().__init__(base.ground + (new_label,))
        self.base = base
        self.flat_mask = fmask
        self.newbit = 1 << base.n

    def _rank_raw(self, mask):
        b = self.base
        if not mask & self.newbit:
            return b.rank_mask(mask)
        rest = mask ^ self.newbit
        r = b.rank_mask(rest)
        if b.rank_mask(rest | self.flat_mask) == r:
            return r
        return r + 1

    def describe(self):
        return _derived_describe({
            "op": "principal_extension",
            "args": {"flat": sorted(self.base.labels_of(self.flat_mask)),
                     "element": self.ground[-1]},
            "children": [self.base],
        })


class RelaxationMatroid(Matroid):
    """Relax a circuit-hyperplane into a basis (whirls come from wheels)."""

    __slots__ = ("base", "hmask")

    def __init__(self, base, ch_labels):
        hmask = base.mask_of(ch_labels)
        r = base.rank_mask(hmask)
        if r != base.full_rank - 1 or base.closure_mask(hmask) != hmask:
            raise ValidationError("set is not a hyperplane")
        if r != bitcount(hmask) - 1 or any(
                base.rank_mask(hmask ^ (1 << i)) != r for i in bits_of(hmask)):
            raise ValidationError("set is not a circuit")
        super().__init__(base.ground)
        self.base = base
        self.hmask = hmask

    def _rank_raw(self, mask):
        r = self.base.rank_mask(mask)
        if mask == self.hmask:
            r += 1
        return r

    def describe(self):
        return _derived_describe({
            "op": "relaxation",
            "args": {"circuit_hyperplane": sorted(self.labels_of(self.hmask))},
            "children": [self.base],
        })


class TwoSumMatroid(Matroid):
    """2-sum of two matroids across a shared basepoint label.

    The rank of A is r_P(A_P) + r_Q(A_Q), minus one when the basepoint lies
    in both closures.  Validated against brute-force circuit constructions
    in the tests.
    """

    __slots__ = ("p1", "p2", "basepoint", "_split", "pbit1", "pbit2")

    def __init__(self, p1, p2, basepoint):
        shared = set(p1.ground) & set(p2.ground)
        if shared != {basepoint}:
            raise ValidationError("ground sets must share exactly the basepoint")
        if p1.n < 3 or p2.n < 3:
            raise ValidationError("2-sum parts need at least 3 elements")
        for M in (p1, p2):
            pb = M.mask_of([basepoint])
            if M.rank_mask(pb) == 0:
                raise ValidationError("basepoint is a loop")
            if M.rank_mask(M.full_mask ^ pb) < M.full_rank:
                raise ValidationError("basepoint is a coloop")
        g1 = [e for e in p1.ground if e != basepoint]
        g2 = [e for e in p2.ground if e != basepoint]
        super().__init__(g1 + g2)
        self.p1 = p1
        self.p2 = p2
        self.basepoint = basepoint
        self.pbit1 = 1 << p1._idx[basepoint]
        self.pbit2 = 1 << p2._idx[basepoint]
        split = []
        for e in self.ground:
            if e in p1._idx and e != basepoint:
                split.append((0, 1 << p1._idx[e]))
            else:
                split.append((1, 1 << p2._idx[e]))
        self._split = tuple(split)

    def _rank_raw(self, mask):
        m1 = 0
        m2 = 0
        split = self._split
        for i in bits_of(mask):
            side, bit = split[i]
            if side == 0:
                m1 |= bit
            else:
                m2 |= bit
        r1 = self.p1.rank_mask(m1)
        r2 = self.p2.rank_mask(m2)
        drop = 0
        if (self.p1.rank_mask(m1 | self.pbit1) == r1
                and self.p2.rank_mask(m2 | self.pbit2) == r2):
            drop = 1
        return r1 + r2 - drop

    def describe(self):
        return _derived_describe({
            "op": "two_sum",
            "args": {"basepoint": self.basepoint},
            "children": [self.p1, self.p2],
        })


# ---------------------------------------------------------------------------
# sums and the public constructors


def two_sum(p1, p2, basepoint):
    """2-sum across ``basepoint``; auto-renames other label collisions in
    the second part by priming them."""
    clashes = (set(p1.ground) & set(p2.ground)) - {basepoint}
    if clashes:
        rename = {}
        taken = set(p1.ground) | set(p2.ground)
        for e in sorted(clashes):
            cand = e + "'"
            while cand in taken:
                cand += "'"
            rename[e] = cand
            taken.add(cand)
        p2 = relabel(p2, rename)
    return TwoSumMatroid(p1, p2, basepoint)


def binary_columns(M):
    """GF(2) columns for matroids with a recognizably binary representation.

    Returns (cols, nrows) or None.  Handles GF(2) matrices, graphs (vertex
    incidence), duals and minors of those; anything else is out of scope.
    """
    if isinstance(M, GF2Matroid):
        return M.cols, M.nrows
    if isinstance(M, GraphicMatroid):
        cols = []
        for u, v in M.edges:
            cols.append(0 if u == v else (1 << u) | (1 << v))
        return tuple(cols), M.nv
    if isinstance(M, DualMatroid):
        got = binary_columns(M.base)
        if got is None:
            return None
        g = GF2Matroid(M.base.ground, got[0], nrows=got[1]).dual()
        return g.cols, g.nrows
    if isinstance(M, MinorMatroid):
        got = binary_columns(M.base)
        if got is None:
            return None
        g = GF2Matroid(M.base.ground, got[0], nrows=got[1])
        m = g._minor_masks(M.cmask, M.dmask)
        return m.cols, m.nrows
    return None


def as_gf2(M):
    """A GF2Matroid with the same labels and rank function, when recognizably
    binary; raises ValidationError otherwise."""
    got = binary_columns(M)
    if got is None:
        raise ValidationError("no binary representation available")
    return GF2Matroid(M.ground, got[0], nrows=got[1])


def _is_triangle(M, mask):
    if bitcount(mask) != 3 or M.rank_mask(mask) != 2:
        return False
    return all(M.rank_mask(mask ^ (1 << i)) == 2 for i in bits_of(mask))


def three_sum_binary(k_part, l_part, seam):
    """Matrix-level 3-sum of two binary matroids across a shared triangle.

    The cycle space of the sum consists of the symmetric differences of
    cycles of the parts that agree on the seam, restricted off the seam;
    the returned matroid carries a GF(2) matrix whose null space is exactly
    that cycle space.
    """
    seam = tuple(seam)
    if len(set(seam)) != 3:
        raise ValidationError("seam must have 3 distinct labels")
    shared = set(k_part.ground) & set(l_part.ground)
    if shared != set(seam):
        raise ValidationError("ground sets must share exactly the seam")
    if k_part.n < 7 or l_part.n < 7:
        raise ValidationError("3-sum parts need at least 7 elements")
    gk = as_gf2(k_part)
    gl = as_gf2(l_part)
    for g in (gk, gl):
        if not _is_triangle(g, g.mask_of(seam)):
            raise ValidationError("seam is not a triangle of both parts")

    cyc_k = gf2_nullspace(gk.cols)
    cyc_l = gf2_nullspace(gl.cols)
    ks = [gk._idx[s] for s in seam]
    ls = [gl._idx[s] for s in seam]

    # solve for cycle pairs agreeing on the seam: variables are the two
    # cycle-basis coefficient vectors side by side
    nk, nl = len(cyc_k), len(cyc_l)
    rows = []
    for t in range(3):
        row = 0
        for i, c in enumerate(cyc_k):
            if c >> ks[t] & 1:
                row |= 1 << i
        for j, c in enumerate(cyc_l):
            if c >> ls[t] & 1:
                row |= 1 << (nk + j)
        rows.append(row)
    # nullspace of the 3 x (nk+nl) constraint matrix
    sol_basis = _nullspace_rows(rows, nk + nl)

    ground = [e for e in k_part.ground if e not in shared] + \
             [e for e in l_part.ground if e not in shared]
    pos = {e: i for i, e in enumerate(ground)}
    proj = []
    for sol in sol_basis:
        z = 0
        for i in range(nk):
            if sol >> i & 1:
                z ^= cyc_k[i]
        w = 0
        for idx in bits_of(z):
            e = gk.ground[idx]
            if e in pos:
                w ^= 1 << pos[e]
        zz = 0
        for j in range(nl):
            if sol >> (nk + j) & 1:
                zz ^= cyc_l[j]
        for idx in bits_of(zz):
            e = gl.ground[idx]
            if e in pos:
                w ^= 1 << pos[e]
        if w:
            proj.append(w)
    # independent spanning set for the cycle space of the sum
    cyc_basis = []
    basis = {}
    for v in proj:
        w = v
        while w:
            h = w.bit_length() - 1
            got = basis.get(h)
            if got is None:
                basis[h] = w
                cyc_basis.append(v)
                break
            w ^= got
    # representation matrix: a basis of the orthogonal complement
    comp = _nullspace_rows(cyc_basis, len(ground))
    cols = []
    for j in range(len(ground)):
        v = 0
        for i, row in enumerate(comp):
            if row >> j & 1:
                v |= 1 << i
        cols.append(v)
    return GF2Matroid(ground, cols, nrows=len(comp),
                      _prov={"op": "three_sum", "args": {"seam": list(seam)},
                             "children": [k_part, l_part]})


def _nullspace_rows(rows, width):
    """Nullspace basis (as ints of given width) of a GF(2) row system."""
    pivots = {}  # column -> reduced row
    reduced = []
    for row in rows:
        r = row
        for c, pr in pivots.items():
            if r >> c & 1:
                r ^= pr
        if r:
            c = r.bit_length() - 1
            pivots[c] = r
            reduced.append(r)
    free_cols = [c for c in range(width) if c not in pivots]
    # each pivot is the TOP bit of its reduced row, so processing pivot
    # columns in increasing order sees only already-determined coordinates
    piv_cols = sorted(pivots)
    out = []
    for fc in free_cols:
        v = 1 << fc
        for c in piv_cols:
            if bitcount(pivots[c] & v) & 1:
                v |= 1 << c
        out.append(v)
    return out


def principal_extension(M, flat_labels, new_label):
    return PrincipalExtensionMatroid(M, flat_labels, new_label)


def free_extension(M, new_label):
    return PrincipalExtensionMatroid(M, M.ground, new_label)


def truncate(M):
    return TruncationMatroid(M)


def relax(M, circuit_hyperplane):
    return RelaxationMatroid(M, circuit_hyperplane)


def relabel(M, mapping):
    """Same matroid with labels renamed by the mapping (missing keys keep
    their name)."""
    new_ground = [mapping.get(e, e) for e in M.ground]
    return RelabeledMatroid(M, new_ground)


class RelabeledMatroid(Matroid):
    __slots__ = ("base",)

    def __init__(self, base, new_ground):
        super().__init__(new_ground)
        self.base = base

    def _rank_raw(self, mask):
        return self.base.rank_mask(mask)

    def describe(self):
        return {"type": "derived", "op": "relabel",
                "args": {"labels": list(self.ground)},
                "children": [self.base.describe()]}


# ---------------------------------------------------------------------------
# descriptor -> matroid (the structured build entry point)


def build(desc):
    """Construct a matroid from a JSON-style descriptor dict."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise ValidationError("descriptor must be a dict with a 'type' key")
    t = desc["type"]
    if t == "linear_gf2":
        rows = desc["matrix"]
        labels = desc.get("labels")
        ncols = len(rows[0]) if rows else 0
        if labels is None:
            labels = [f"c{i}" for i in range(ncols)]
        if rows and any(len(r) != ncols for r in rows):
            raise ValidationError("ragged GF(2) matrix")
        cols = []
        for j in range(ncols):
            v = 0
            for i, row in enumerate(rows):
                if row[j] & 1:
                    v |= 1 << i
            cols.append(v)
        return GF2Matroid(labels, cols, nrows=len(rows))
    if t == "graphic":
        edges = []
        labels = []
        for item in desc["edges"]:
            u, v, lbl = item
            edges.append((int(u), int(v)))
            labels.append(lbl)
        return GraphicMatroid(int(desc["vertices"]), edges, labels)
    if t == "uniform":
        return UniformMatroid(int(desc["r"]), n=int(desc["n"]),
                              labels=desc.get("labels"))
    if t == "rational_affine":
        return RationalAffineMatroid(int(desc["dim"]), desc["points"])
    if t == "derived":
        children = [build(c) for c in desc.get("children", [])]
        op = desc.get("op")
        args = desc.get("args", {})
        if op == "dual":
            return children[0].dual()
        if op == "minor":
            return children[0].minor(args.get("contract", ()), args.get("delete", ()))
        if op == "truncation":
            return truncate(children[0])
        if op == "principal_extension":
            return principal_extension(children[0], args["flat"], args["element"])
        if op == "relaxation":
            return relax(children[0], args["circuit_hyperplane"])
        if op == "two_sum":
            return two_sum(children[0], children[1], args["basepoint"])
        if op == "three_sum":
            return three_sum_binary(children[0], children[1], args["seam"])
        if op == "relabel":
            new = args["labels"]
            return relabel(children[0], dict(zip(children[0].ground, new)))
        raise ValidationError(f"unknown derived op {op!r}")
    raise ValidationError(f"unknown matroid type {t!r}")
