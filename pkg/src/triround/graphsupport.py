"""Multigraph helpers backing the graphic representation.

Pure functions over ``(vertex_count, edge_list)`` pairs.  Edge lists may
contain parallel edges and loops; vertices are integers ``0..nv-1``.  These
routines give the graphic rank oracle its fast paths (connectivity checks,
canonical forms, contraction-subgraph minor search); the generic rank-oracle
algorithms re-derive the same answers in the test suite.
"""

from __future__ import annotations

from itertools import combinations, permutations


def component_count(nv, edges, idx_iter=None):
    """Number of connected components among vertices touched by the edges."""
    parent = list(range(nv))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    touched = set()
    items = edges if idx_iter is None else [edges[i] for i in idx_iter]
    for u, v in items:
        touched.add(u)
        touched.add(v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in touched})


def graph_rank(nv, edges, idx_iter):
    """Matroid rank of an edge subset: touched vertices minus components."""
    parent = list(range(nv))
    rank = 0
    for i in idx_iter:
        u, v = edges[i]
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u != v:
            parent[u] = v
            rank += 1
    return rank


def degrees(nv, edges):
    deg = [0] * nv
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def is_simple(edges):
    """No loops, no parallel edges."""
    seen = set()
    for u, v in edges:
        if u == v:
            return False
        key = (u, v) if u < v else (v, u)
        if key in seen:
            return False
        seen.add(key)
    return True


def strip_isolated(nv, edges):
    """Drop untouched vertices; returns (nv2, edges2) with vertices renumbered."""
    touched = sorted({w for e in edges for w in e})
    remap = {w: i for i, w in enumerate(touched)}
    return len(touched), [(remap[u], remap[v]) for u, v in edges]


def _adjacency(nv, edges, skip=()):
    adj = [set() for _ in range(nv)]
    for u, v in edges:
        if u == v or u in skip or v in skip:
            continue
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _connected_avoiding(nv, adj, avoid):
    verts = [v for v in range(nv) if v not in avoid]
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        w = stack.pop()
        for x in adj[w]:
            if x not in avoid and x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == len(verts)


def vertex_3connected(nv, edges):
    """Vertex 3-connectivity of the graph on vertices actually touched.

    Requires at least 4 touched vertices, connectivity, and no cut set of
    size at most 2.  Loops and edge multiplicities are irrelevant here.
    """
    nv2, simple_edges = strip_isolated(nv, edges)
    if nv2 < 4:
        return False
    adj = _adjacency(nv2, simple_edges)
    if any(len(a) == 0 for a in adj):
        return False
    if not _connected_avoiding(nv2, adj, set()):
        return False
    for a in range(nv2):
        if not _connected_avoiding(nv2, adj, {a}):
            return False
    for a, b in combinations(range(nv2), 2):
        if not _connected_avoiding(nv2, adj, {a, b}):
            return False
    return True


def contract_edges(nv, edges, contract_idx):
    """Contract the edges at the given indices; returns (nv2, edges2, vmap).

    ``edges2`` keeps one entry per surviving original edge position, in the
    original order of the surviving positions (the caller tracks labels).
    Contracted loops simply disappear along with their index.
    """
    parent = list(range(nv))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    cset = set(contract_idx)
    for i in cset:
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    roots = sorted({find(v) for v in range(nv)})
    remap = {r: i for i, r in enumerate(roots)}
    vmap = [remap[find(v)] for v in range(nv)]
    edges2 = []
    for i, (u, v) in enumerate(edges):
        if i in cset:
            continue
        edges2.append((i, (vmap[u], vmap[v])))
    return len(roots), edges2, vmap


# ---------------------------------------------------------------------------
# canonical form


def _refine(nv, nbr, colors):
    """One-dimensional color refinement over weighted neighborhoods."""
    while True:
        sig = []
        for v in range(nv):
            around = sorted((colors[w], m) for w, m in nbr[v].items())
            sig.append((colors[v], tuple(around)))
        order = sorted(range(nv), key=lambda v: sig[v])
        new = [0] * nv
        c = 0
        for i, v in enumerate(order):
            if i and sig[v] != sig[order[i - 1]]:
                c += 1
            new[v] = c
        if new == colors:
            return colors
        colors = new


def _code_for_order(nv, nbr, loops, order):
    pos = {v: i for i, v in enumerate(order)}
    cells = []
    for v in order:
        cells.append(loops[v])
    for i in range(nv):
        u = order[i]
        for j in range(i + 1, nv):
            cells.append(nbr[u].get(order[j], 0))
    return bytes(cells)


def canonical_form(nv, edges):
    """Canonical bytes + vertex order for a multigraph (refinement + branching).

    Two multigraphs get equal bytes iff they are isomorphic.  Intended for
    small graphs (at most ~10 vertices).
    """
    nbr = [dict() for _ in range(nv)]
    loops = [0] * nv
    for u, v in edges:
        if u == v:
            loops[u] += 1
        else:
            nbr[u][v] = nbr[u].get(v, 0) + 1
            nbr[v][u] = nbr[v].get(u, 0) + 1
    init = [0] * nv
    base = sorted(range(nv), key=lambda v: (len(nbr[v]), sum(nbr[v].values()), loops[v]))
    c = 0
    key0 = lambda v: (len(nbr[v]), sum(nbr[v].values()), loops[v])
    for i, v in enumerate(base):
        if i and key0(v) != key0(base[i - 1]):
            c += 1
        init[v] = c

    best = [None, None]  # code, order

    def search(colors):
        colors = _refine(nv, nbr, colors)
        buckets = {}
        for v in range(nv):
            buckets.setdefault(colors[v], []).append(v)
        cells = [buckets[k] for k in sorted(buckets)]
        branch = None
        for cell in cells:
            if len(cell) > 1:
                branch = cell
                break
        if branch is None:
            order = [v for cell in cells for v in cell]
            code = _code_for_order(nv, nbr, loops, order)
            if best[0] is None or code < best[0]:
                best[0] = code
                best[1] = tuple(order)
            return
        top = max(colors) + 1
        for v in branch:
            nxt = list(colors)
            nxt[v] = top
            search(nxt)

    search(init)
    return best[0], best[1]


def subgraph_embedding(host, pattern, pins=None):
    """Injective vertex map placing the pattern as a subgraph of the host.

    host, pattern: (nv, edges); the pattern must be simple.  Returns a dict
    pattern vertex -> host vertex, or None after an exhaustive search.
    Candidates for each pattern vertex are intersected over the host
    neighborhoods of its already-placed pattern neighbors.  ``pins``, when
    given, is a partial map {pattern vertex: host vertex} the embedding
    must extend.
    """
    hn, hedges = host
    pn, pedges = pattern
    if pn > hn or len(pedges) > len(hedges):
        return None
    hadj = [set() for _ in range(hn)]
    for u, v in hedges:
        if u != v:
            hadj[u].add(v)
            hadj[v].add(u)
    padj = [set() for _ in range(pn)]
    for u, v in pedges:
        padj[u].add(v)
        padj[v].add(u)
    image = {}
    used = set()
    if pins:
        if len(set(pins.values())) != len(pins):
            return None
        for p, h in pins.items():
            if len(hadj[h]) < len(padj[p]):
                return None
            image[p] = h
            used.add(h)
        for u, v in pedges:
            if u in image and v in image and image[v] not in hadj[image[u]]:
                return None
    free = [p for p in range(pn) if p not in image]
    by_degree = sorted(free, key=lambda p: -len(padj[p]))
    # placement order: highest degree first, then always expand along
    # pattern adjacency so candidate sets stay constrained
    order = []
    rest = set(free)
    while rest:
        nxt = next((p for p in by_degree
                    if p in rest and any(q not in rest for q in padj[p])),
                   None)
        if nxt is None:
            nxt = next(p for p in by_degree if p in rest)
        order.append(nxt)
        rest.discard(nxt)

    def rec(i):
        if i == len(order):
            return True
        p = order[i]
        req = [image[q] for q in padj[p] if q in image]
        cands = set.intersection(*(hadj[h] for h in req)) if req \
            else set(range(hn))
        for h in sorted(cands - used):
            if len(hadj[h]) < len(padj[p]):
                continue
            image[p] = h
            used.add(h)
            if rec(i + 1):
                return True
            del image[p]
            used.discard(h)
        return False

    return dict(image) if rec(0) else None


def find_pattern_minor(host, pattern, work=None, anchor=None):
    """Exact minor search of a simple connected pattern in a host multigraph.

    Every minor is a subgraph of a contraction, so the search recursively
    contracts one edge at a time and tests for a subgraph embedding at each
    state, memoizing failed states by canonical form.  Returns
    (contracted, representatives): host edge indices to contract, plus one
    host edge index per pattern edge (in pattern edge-list order).  Returns
    None only after exhausting the state space.  ``work``, when given, must
    expose ``spend(n)`` and is charged one unit per state explored.

    ``anchor``, when given, names three host edge positions forming a host
    triangle that must survive into the minor: the three edges become the
    representatives of some pattern triangle.  Anchored edges are never
    contracted (contracting one of them, or any edge joining the same pair
    of branch sets, would turn an anchored edge into a loop), they win
    parallel-class collapses, and each embedding attempt pins the pattern
    triangle's vertices onto their endpoints.
    """
    hn, hedges = host
    pn, pedges = pattern
    fails = set()

    ptris = None
    if anchor is not None:
        anchor = tuple(anchor)
        vset = set()
        for i in anchor:
            u, v = hedges[i]
            if u == v:
                return None
            vset.update((u, v))
        if (len(anchor) != 3 or len(set(anchor)) != 3 or len(vset) != 3
                or len({frozenset(hedges[i]) for i in anchor}) != 3):
            return None
        padj = [set() for _ in range(pn)]
        for u, v in pedges:
            padj[u].add(v)
            padj[v].add(u)
        ptris = [t for t in combinations(range(pn), 3)
                 if t[1] in padj[t[0]] and t[2] in padj[t[0]]
                 and t[2] in padj[t[1]]]
        if not ptris:
            return None

    def embed(cnv, cedges):
        if anchor is None:
            return subgraph_embedding((cnv, cedges), (pn, pedges))
        # anchored entries sit at the front of the edge list; their three
        # endpoints must carry a pattern triangle
        ws = sorted({x for p in cedges[:3] for x in p})
        for tri in ptris:
            for img in permutations(ws):
                emb = subgraph_embedding((cnv, cedges), (pn, pedges),
                                         pins=dict(zip(tri, img)))
                if emb is not None:
                    return emb
        return None

    def rec(edges):
        # edges: (u, v, original_index), loop-free and parallel-free, with
        # anchored entries first (kept there by the collapse preference)
        if len(edges) < len(pedges):
            return None
        live = sorted({x for u, v, _ in edges for x in (u, v)})
        if len(live) < pn:
            return None
        remap = {x: i for i, x in enumerate(live)}
        cnv = len(live)
        cedges = [(remap[u], remap[v]) for u, v, _ in edges]
        code, order = canonical_form(cnv, cedges)
        if anchor is None:
            key = code
        else:
            cpos = {x: i for i, x in enumerate(order)}
            key = (code, tuple(sorted(
                tuple(sorted((cpos[u], cpos[v]))) for u, v in cedges[:3])))
        if key in fails:
            return None
        if work is not None:
            work.spend(1)
        emb = embed(cnv, cedges)
        if emb is not None:
            pos = {}
            for (u, v), (_, _, orig) in zip(cedges, edges):
                pos[(u, v) if u < v else (v, u)] = orig
            reps = []
            for a, b in pedges:
                u, v = emb[a], emb[b]
                reps.append(pos[(u, v) if u < v else (v, u)])
            return set(), reps
        if cnv > pn:
            lo = 0 if anchor is None else 3
            for t in range(lo, len(edges)):
                u0, v0, orig = edges[t]
                merged = []
                seen = set()
                for u, v, o in edges:
                    if o == orig:
                        continue
                    a = u0 if u == v0 else u
                    b = u0 if v == v0 else v
                    if a == b:
                        continue
                    key2 = (a, b) if a < b else (b, a)
                    if key2 in seen:
                        continue
                    seen.add(key2)
                    merged.append((a, b, o))
                got = rec(merged)
                if got is not None:
                    got[0].add(orig)
                    return got
        fails.add(key)
        return None

    start = []
    seen = set()
    first = () if anchor is None else anchor
    for i in (*first, *range(len(hedges))):
        u, v = hedges[i]
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        start.append((u, v, i))
    return rec(start)
