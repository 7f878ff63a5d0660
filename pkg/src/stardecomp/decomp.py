"""Constructive k-star decompositions.

Pipeline: greedy independent set -> thinning -> size adjustment -> max-flow
in-regular orientation of the complement -> star extraction, plus verifiers
and small-instance brute-force oracles for the orientation feasibility
condition.

Tie-breaking is lowest-id-first everywhere so identical inputs give identical
decompositions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .entropy import alpha_dk
from .graphs import (
    Graph,
    GraphFormatError,
    check_thin,
    edges_to,
    greedy_independent_set,
    induced_edges,
    induced_subgraph,
    is_independent,
)


@dataclass(frozen=True)
class ThinIndependentSet:
    members: frozenset
    d_hat: int
    verified: bool = True


@dataclass
class Orientation:
    """Head assignment for every edge of a graph (loops head at their vertex)."""

    graph: Graph
    heads: list  # heads[eid] = head vertex of edge eid

    def in_degrees(self):
        indeg = [0] * self.graph.n
        for v in self.heads:
            indeg[v] += 1
        return indeg


@dataclass
class InfeasibleCertificate:
    """Min-cut witness: a vertex set U with e[U] > ell * |U|."""

    violating_set: set
    ell: int
    induced: int


@dataclass
class StarDecomposition:
    k: int
    stars: list  # (center, [leaf_1, ..., leaf_k])
    leftover: list = field(default_factory=list)  # uncovered (u, v) edges


class SetTooSmall(RuntimeError):
    """Independent set smaller than the required density target."""


class DecompositionFailed(RuntimeError):
    def __init__(self, stage, detail, attempts):
        super().__init__(f"failed at stage {stage!r}: {detail}")
        self.stage = stage
        self.detail = detail
        self.attempts = attempts  # list of (seed, stage, detail)


def thin_down(g: Graph, A, d_hat) -> ThinIndependentSet:
    """Shrink the independent set A until every outside vertex has at most
    d_hat edges into it.

    Outside vertices are processed in ascending id order; removal victims are
    the lowest-id neighbors still in the set.  Vertices removed from A have no
    neighbors in A (A is independent), so one pass suffices.
    """
    if not 1 <= d_hat:
        raise ValueError("d_hat must be >= 1")
    A = set(A)
    if not is_independent(g, A):
        raise ValueError("not independent")
    current = set(A)
    for v in range(g.n):
        if v in A:
            continue
        excess = edges_to(g, v, current) - d_hat
        if excess <= 0:
            continue
        for w in sorted({w for _, w in g.adj[v] if w in current}):
            if excess <= 0:
                break
            lost = sum(1 for _, x in g.adj[v] if x == w)
            current.discard(w)
            excess -= lost
    return ThinIndependentSet(frozenset(current), d_hat,
                              verified=check_thin(g, current, d_hat))


def adjust_size(g: Graph, thin: ThinIndependentSet, target) -> ThinIndependentSet:
    """Trim a thin independent set down to exactly `target` members (highest
    ids removed first); removal cannot break independence or thinness.
    Raises SetTooSmall if the set is below target."""
    if target < 0:
        raise ValueError("target must be >= 0")
    members = set(thin.members)
    if len(members) < target:
        raise SetTooSmall(f"have {len(members)}, need {target}")
    for v in sorted(members, reverse=True):
        if len(members) == target:
            break
        members.remove(v)
    return ThinIndependentSet(frozenset(members), thin.d_hat, verified=True)


def relief_trim(g: Graph, thin: ThinIndependentSet, target) -> ThinIndependentSet:
    """Trim a thin independent set to `target` members, preferring members
    whose removal relieves outside vertices sitting at the thinness bound.

    Plain highest-id trimming (adjust_size) tends to leave the complement
    with clusters of minimum-degree vertices that make the in-regular
    orientation infeasible; relieving saturated outside vertices instead
    raises their complement degree.  Deterministic: ties break by highest id.
    Removal only shrinks the set, so independence and thinness are preserved.
    """
    if target < 0:
        raise ValueError("target must be >= 0")
    members = set(thin.members)
    if len(members) < target:
        raise SetTooSmall(f"have {len(members)}, need {target}")
    d_hat = thin.d_hat
    into = {
        v: sum(1 for _, w in g.adj[v] if w in members)
        for v in range(g.n)
        if v not in members
    }
    while len(members) > target:
        best, best_key = None, None
        for a in members:
            relief = sum(
                1 for _, v in g.adj[a] if v not in members and into[v] >= d_hat
            )
            key = (relief, a)
            if best is None or key > best_key:
                best, best_key = a, key
        members.remove(best)
        for _, v in g.adj[best]:
            if v in into:
                into[v] -= 1
        into[best] = sum(1 for _, w in g.adj[best] if w in members)
    return ThinIndependentSet(frozenset(members), d_hat, verified=True)


class _Dinic:
    def __init__(self, n):
        self.n = n
        self.adj = [[] for _ in range(n)]

    def add_edge(self, u, v, cap):
        self.adj[u].append([v, cap, len(self.adj[v])])
        self.adj[v].append([u, 0, len(self.adj[u]) - 1])

    def _bfs(self, s, t):
        self.level = [-1] * self.n
        self.level[s] = 0
        queue = [s]
        for u in queue:
            for v, cap, _ in self.adj[u]:
                if cap > 0 and self.level[v] < 0:
                    self.level[v] = self.level[u] + 1
                    queue.append(v)
        return self.level[t] >= 0

    def _dfs(self, u, t, pushed):
        if u == t:
            return pushed
        while self.it[u] < len(self.adj[u]):
            arc = self.adj[u][self.it[u]]
            v, cap, rev = arc
            if cap > 0 and self.level[v] == self.level[u] + 1:
                got = self._dfs(v, t, min(pushed, cap))
                if got > 0:
                    arc[1] -= got
                    self.adj[v][rev][1] += got
                    return got
            self.it[u] += 1
        return 0

    def max_flow(self, s, t):
        flow = 0
        while self._bfs(s, t):
            self.it = [0] * self.n
            while True:
                pushed = self._dfs(s, t, float("inf"))
                if pushed == 0:
                    break
                flow += pushed
        return flow

    def reachable_from(self, s):
        seen = [False] * self.n
        seen[s] = True
        queue = [s]
        for u in queue:
            for v, cap, _ in self.adj[u]:
                if cap > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen


def in_regular_orientation(H: Graph, ell, mode="exact"):
    """Orient H so that every in-degree equals ell (mode "exact") or is at
    most ell (mode "at_most"), or produce a violating vertex set.

    Flow network: source -> edge node (cap 1) -> the edge's endpoint vertex
    nodes (cap 1) -> sink (cap ell).  The orientation exists iff the max flow
    saturates all edges; otherwise the source side of the min cut yields a set
    U with e[U] > ell * |U|.
    """
    if mode not in ("exact", "at_most"):
        raise ValueError(f"unknown mode {mode!r}")
    m, n = H.num_edges(), H.n
    if mode == "exact" and m != ell * n:
        raise ValueError(f"exact mode needs e(H) = ell*|V|, got {m} != {ell * n}")
    if mode == "at_most" and m > ell * n:
        raise ValueError(f"at_most mode needs e(H) <= ell*|V|, got {m} > {ell * n}")
    # Node layout: 0 = source, 1..m = edge nodes, m+1..m+n = vertex nodes, sink last.
    src, sink = 0, m + n + 1
    net = _Dinic(m + n + 2)
    for eid, (u, v) in enumerate(H.edges):
        net.add_edge(src, 1 + eid, 1)
        net.add_edge(1 + eid, m + 1 + u, 1)
        if v != u:
            net.add_edge(1 + eid, m + 1 + v, 1)
    for v in range(n):
        net.add_edge(m + 1 + v, sink, ell)
    flow = net.max_flow(src, sink)
    if flow < m:
        seen = net.reachable_from(src)
        U = {v for v in range(n) if seen[m + 1 + v]}
        induced = induced_edges(H, U)
        if induced <= ell * len(U):
            raise AssertionError("min-cut witness failed re-verification")
        return InfeasibleCertificate(violating_set=U, ell=ell, induced=induced)
    heads = [None] * m
    for eid in range(m):
        u, v = H.edges[eid]
        if u == v:
            heads[eid] = u
            continue
        for to, cap, _ in net.adj[1 + eid]:
            if cap == 0 and to != src:
                heads[eid] = to - (m + 1)
                break
    return Orientation(graph=H, heads=heads)


def orientation_feasible_bruteforce(H: Graph, ell):
    """Exhaustively check e[U] <= ell * |U| over all vertex subsets (n <= 20).

    Returns (feasible, witness) with the first violating subset if any.  When
    H has average degree exactly 2*ell, the equivalent complement form
    e[V-U] + e[U, V-U] >= ell * |V-U| is cross-checked as well.
    """
    n = H.n
    if n > 20:
        raise ValueError(f"n={n} exceeds brute-force cap 20")
    exact = H.num_edges() == ell * n
    deg = [H.degree(v) for v in range(n)]
    masks = [(u, v) for u, v in H.edges]
    for S in range(1, 1 << n):
        U = [v for v in range(n) if S >> v & 1]
        inside = sum(1 for u, v in masks if S >> u & 1 and S >> v & 1)
        ok = inside <= ell * len(U)
        if exact:
            comp = [v for v in range(n) if not S >> v & 1]
            comp_inside = sum(
                1 for u, v in masks if not S >> u & 1 and not S >> v & 1
            )
            cross = H.num_edges() - inside - comp_inside
            ok2 = comp_inside + cross >= ell * len(comp)
            if ok != ok2:
                raise AssertionError("equivalent feasibility forms disagree")
        if not ok:
            return False, set(U)
    return True, None


def stars_from_orientation(g: Graph, A, orientation: Orientation, k,
                           vertex_map=None):
    """Assemble a star decomposition from an independent set A and an
    orientation of g[complement of A].

    Edges touching A point into A; complement-internal edges follow the given
    orientation (vertex_map translates its vertex ids back to g's, defaulting
    to sorted(complement)).  Each complement vertex contributes one k-star
    (its first k out-edges in edge-id order); surplus out-edges go to
    leftover.
    """
    A = set(A)
    comp = [v for v in range(g.n) if v not in A]
    if vertex_map is None:
        vertex_map = comp
    back = {i: v for i, v in enumerate(vertex_map)}
    # Head of every g-edge; complement-internal heads are matched up by
    # vertex pair, parallel edges consuming heads in queue order.
    heads = {}
    pair_heads = {}
    for eid, (u, v) in enumerate(orientation.graph.edges):
        gu, gv = back[u], back[v]
        key = (gu, gv) if gu <= gv else (gv, gu)
        pair_heads.setdefault(key, []).append(back[orientation.heads[eid]])
    for eid, (u, v) in enumerate(g.edges):
        if u in A and v in A:
            raise ValueError("independent set has an internal edge")
        if u in A:
            heads[eid] = u
        elif v in A:
            heads[eid] = v
        else:
            key = (u, v)
            queue = pair_heads.get(key)
            if not queue:
                raise ValueError("orientation does not cover all complement edges")
            heads[eid] = queue.pop(0)
    out_edges = {v: [] for v in comp}
    for eid, (u, v) in enumerate(g.edges):
        tail = v if heads[eid] == u else u
        if tail in A:
            raise ValueError("vertex in A has an outgoing edge")
        out_edges[tail].append(eid)
    stars, leftover = [], []
    for v in comp:
        eids = sorted(out_edges[v])
        if len(eids) < k:
            raise ValueError(f"vertex {v} has out-degree {len(eids)} < k={k}")
        leaves = []
        for eid in eids[:k]:
            a, b = g.edges[eid]
            leaves.append(b if a == v else a)
        stars.append((v, leaves))
        for eid in eids[k:]:
            leftover.append(g.edges[eid])
    return StarDecomposition(k=k, stars=stars, leftover=leftover)


def verify_decomposition(g: Graph, sd: StarDecomposition):
    """Check that sd is a valid (near-)decomposition of g.

    Returns (ok, diagnostics): star sizes equal k, every star edge is incident
    to its center, the star edges plus leftover partition E(g) exactly, and
    the leftover has fewer than k edges.
    """
    diagnostics = []
    claimed = []
    for center, leaves in sd.stars:
        if len(leaves) != sd.k:
            diagnostics.append(
                f"star at {center} has {len(leaves)} edges, expected {sd.k}"
            )
        for leaf in leaves:
            claimed.append((center, leaf) if center <= leaf else (leaf, center))
    for u, v in sd.leftover:
        claimed.append((u, v) if u <= v else (v, u))
    if len(sd.leftover) > sd.k - 1:
        diagnostics.append(f"leftover has {len(sd.leftover)} edges > k-1")
    have = Counter(claimed)
    want = Counter(g.edges)
    extra = have - want
    missing = want - have
    for e, c in sorted(extra.items()):
        diagnostics.append(f"edge {e} covered {want[e] + c} times (edge covered twice)")
    if missing:
        diagnostics.append(
            f"uncovered edges: {sorted(missing.elements())[:10]}"
        )
    if not sd.leftover and len(g.edges) % sd.k != 0:
        diagnostics.append("exact decomposition claimed but k does not divide e(G)")
    return not diagnostics, diagnostics


def decompose(g: Graph, k, seed=0, max_retries=10, d_hat=None):
    """Build a k-star decomposition of a d-regular simple graph.

    Runs greedy independent set -> thin_down -> adjust_size -> in-regular
    orientation of the complement -> star extraction, retrying with fresh
    greedy seeds on failure.  The thinness parameter defaults to k, the
    necessary bound for complement degrees to reach d - k.

    If k does not divide e(g) the result is a near-decomposition with at most
    k - 1 leftover edges.  Raises DecompositionFailed with the failing stage
    after max_retries attempts.
    """
    if not g.is_regular():
        raise ValueError("graph is not regular")
    d = g.degree(0) if g.n else 0
    if 2 * k <= d:
        raise ValueError(f"need k > d/2, got d={d}, k={k}")
    # alpha_dk(d, k) * n = n * (2k - d) / (2k); integer ceiling avoids float
    # roundoff pushing the target one vertex too high.
    target = -(g.n * (2 * k - d) // -(2 * k))
    exact = (g.n * d) % (2 * k) == 0
    ell = d - k
    attempts = []
    d_hat_eff = k if d_hat is None else d_hat
    for attempt in range(max_retries):
        attempt_seed = seed + attempt
        A0 = greedy_independent_set(g, attempt_seed)
        thin = thin_down(g, A0, d_hat_eff) if d_hat_eff < d else ThinIndependentSet(
            frozenset(A0), d_hat_eff
        )
        try:
            thin = relief_trim(g, thin, target)
        except SetTooSmall as exc:
            attempts.append((attempt_seed, "adjust_size", str(exc)))
            continue
        A = set(thin.members)
        H, vmap, _ = induced_subgraph(g, set(range(g.n)) - A)
        mode = "exact" if exact else "at_most"
        oriented = in_regular_orientation(H, ell, mode)
        if isinstance(oriented, InfeasibleCertificate):
            witness = sorted(vmap[v] for v in oriented.violating_set)
            attempts.append(
                (attempt_seed, "orientation",
                 f"violating set of size {len(witness)}: {witness[:10]}")
            )
            continue
        sd = stars_from_orientation(g, A, oriented, k, vertex_map=vmap)
        ok, diagnostics = verify_decomposition(g, sd)
        if not ok:
            attempts.append((attempt_seed, "verify", "; ".join(diagnostics)))
            continue
        return sd
    stage = attempts[-1][1] if attempts else "greedy"
    detail = attempts[-1][2] if attempts else "no attempts recorded"
    raise DecompositionFailed(stage, detail, attempts)


def check_sufficiency(g: Graph, A, d_hat, c, k):
    """Exhaustively evaluate the three sufficient conditions that make the
    orientation of g[complement of A] feasible (n <= 20):

    (i)   A is d_hat-thin with density exactly 1 - d/(2k);
    (ii)  e[U] <= (d-k)|U| for every U in the complement with |U| <= c*N;
    (iii) e[W] <= (k-d_hat)|W| for every complement W with
          |W| < (1 - alpha - c)*N.

    Returns a dict with one boolean per condition.
    """
    if g.n > 20:
        raise ValueError("graph too large for exhaustive scan")
    d = g.degree(0) if g.n else 0
    A = set(A)
    alpha = alpha_dk(d, k)
    thin_ok = is_independent(g, A) and check_thin(g, A, d_hat)
    density_ok = abs(len(A) - alpha * g.n) < 1e-9
    comp = [v for v in range(g.n) if v not in A]
    ii = True
    iii = True
    limit_ii = c * g.n
    limit_iii = (1.0 - alpha - c) * g.n
    for S in range(1, 1 << len(comp)):
        U = [comp[i] for i in range(len(comp)) if S >> i & 1]
        e_in = induced_edges(g, U)
        if len(U) <= limit_ii and e_in > (d - k) * len(U):
            ii = False
        if len(U) < limit_iii and e_in > (k - d_hat) * len(U):
            iii = False
        if not ii and not iii:
            break
    return {"thin_and_density": thin_ok and density_ok, "small_sets": ii,
            "large_complements": iii}


def write_decomposition(sd: StarDecomposition, path):
    """Text format: first line `k r`, one `center leaf_1 ... leaf_k` line per
    star, then r `u v` leftover lines."""
    with open(path, "w") as fh:
        fh.write(f"{sd.k} {len(sd.leftover)}\n")
        for center, leaves in sd.stars:
            fh.write(" ".join(map(str, [center, *leaves])) + "\n")
        for u, v in sd.leftover:
            fh.write(f"{u} {v}\n")


def read_decomposition(path) -> StarDecomposition:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise GraphFormatError(f"{path}: empty file")
    try:
        k, r = map(int, lines[0].split())
        body = lines[1:]
        if r > len(body):
            raise ValueError
        star_lines, leftover_lines = body[: len(body) - r], body[len(body) - r:]
        stars = []
        for ln in star_lines:
            parts = list(map(int, ln.split()))
            if len(parts) != k + 1:
                raise ValueError
            stars.append((parts[0], parts[1:]))
        leftover = []
        for ln in leftover_lines:
            u, v = map(int, ln.split())
            leftover.append((u, v))
    except ValueError as exc:
        raise GraphFormatError(f"{path}: malformed decomposition file") from exc
    return StarDecomposition(k=k, stars=stars, leftover=leftover)
