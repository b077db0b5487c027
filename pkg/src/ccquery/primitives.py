"""Query subroutines shared by the reconstruction algorithms.

All functions take the oracle first and communicate with the hidden graph only
through it. Every edge any routine returns has been individually verified (or
follows from an exact predicate), so outputs are always true edges outside the
supplied known set; budget exhaustion truncates output instead of failing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph_core import Edge, edge
from .oracle import CcOracle, QueryBudgetExceeded

KnownEdges = set  # set[Edge]; kept as a plain set of normalized pairs


def has_neighbor(oracle: CcOracle, u: int, s: Iterable[int]) -> bool:
    """Whether ``u`` has at least one neighbor inside ``s``; two queries.

    Decided as ``cc(s + {u}) - cc(s) != 1``: adding ``u`` either creates its
    own component (difference 1, no neighbor) or merges k >= 1 existing
    components (difference 1-k <= 0). Empty ``s`` is False for free.
    """
    members = list(s)
    if u in members:
        raise ValueError(f"vertex {u} must not belong to s")
    if not members:
        return False
    with_u = oracle.query(members + [u])
    without = oracle.query(members)
    return (with_u - without) != 1


def has_cross_edge(oracle: CcOracle, s: Iterable[int], u: Iterable[int]) -> bool:
    """Whether any edge has one endpoint in ``s`` and the other in ``u``.

    The sets may overlap. At most four queries: with ``W = s & u`` there is no
    crossing edge iff ``cc(s-W) + cc(W) + cc(u-W) == cc(s | u)`` and ``W`` is
    independent (``cc(W) == |W|``).
    """
    s_set = set(s)
    u_set = set(u)
    if not s_set or not u_set:
        return False
    w = s_set & u_set
    cc_w = 0
    if w:
        cc_w = oracle.query(w)
        if cc_w != len(w):
            return True
    s_only = s_set - w
    u_only = u_set - w
    if not s_only and not u_only:
        return False  # s == u and the intersection is independent
    total = cc_w
    if s_only:
        total += oracle.query(s_only)
    if u_only:
        total += oracle.query(u_only)
    return oracle.query(s_set | u_set) != total


def find_adjacent_to_set(
    oracle: CcOracle,
    s: Iterable[int],
    max_queries: int | None = None,
) -> list[int] | None:
    """All vertices with at least one neighbor in ``s``, by recursive halving.

    Starts from the full vertex set and prunes halves with no edge into ``s``;
    vertices of ``s`` itself are reported when they have a neighbor in ``s``.
    Costs O(sum of degrees over s * log n) queries. When ``max_queries`` is
    given and exhausted the search halts and returns None.
    """
    s_set = set(s)
    start = oracle.ledger.total_queries
    out: list[int] = []

    class _Halt(Exception):
        pass

    def recurse(block: Sequence[int]) -> None:
        if max_queries is not None and oracle.ledger.total_queries - start >= max_queries:
            raise _Halt
        if not has_cross_edge(oracle, s_set, block):
            return
        if len(block) == 1:
            out.append(block[0])
            return
        mid = (len(block) + 1) // 2
        recurse(block[:mid])
        recurse(block[mid:])

    try:
        recurse(list(range(oracle.n)))
    except _Halt:
        return None
    return out


def high_degree_iterations(m: int, delta: float) -> int:
    """Voting rounds used by :func:`find_high_degree`."""
    return math.ceil(200.0 * (math.log(2 * m) + math.log(1.0 / delta)))


def find_high_degree(
    oracle: CcOracle,
    m: int,
    t: float,
    delta: float,
    rng: np.random.Generator,
    c_adj: int = 4,
) -> list[int]:
    """Vertices whose degree is around ``t`` or larger, by repeated sampling.

    Each round samples vertices at rate ``1/t`` and runs a budget-capped
    :func:`find_adjacent_to_set`; a vertex is returned when it was adjacent to
    the sample in at least half the rounds. With probability ``1 - delta``
    every vertex of degree at least ``2t`` is returned and none of degree at
    most ``t/2`` is; degree-0 vertices never appear.

    Args:
        m: upper bound on the hidden edge count.
        t: degree threshold, at least 10.
        delta: failure probability, in (0, 1).
        c_adj: per-recursion-step query constant of the adjacency search,
            fixing the per-round halting cap at ``c_adj * ceil(20m/t) * ceil(log2 n)``.
    """
    if t < 10:
        raise ValueError("degree threshold must be at least 10")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    n = oracle.n
    if m <= 0 or t >= n:
        return []
    rounds = high_degree_iterations(m, delta)
    per_round_cap = c_adj * math.ceil(20.0 * m / t) * math.ceil(math.log2(max(2, n)))
    votes = np.zeros(n, dtype=np.int64)
    rate = 1.0 / t
    for _ in range(rounds):
        sample = np.flatnonzero(rng.random(n) < rate)
        if sample.size == 0:
            continue
        hit = find_adjacent_to_set(oracle, sample.tolist(), max_queries=per_round_cap)
        if hit is not None:
            votes[hit] += 1
    return np.flatnonzero(votes * 2 >= rounds).tolist()


@dataclass(frozen=True)
class ForestBudget:
    """Halting knob for forest reconstruction via simulated edge-count queries.

    ``c_density`` is the constant of the budget
    ``ceil(c_density * max(2, m_u) * log2(|vs|) / log2(max(2, m_u)))``,
    calibrated once against the bundled bipartition reconstructor.
    """

    c_density: float = 16.0

    def __post_init__(self):
        if self.c_density <= 0:
            raise ValueError("c_density must be positive")

    def queries(self, vs_size: int, m_u: int) -> int:
        if vs_size < 2:
            return 0
        mu = max(2, m_u)
        return math.ceil(self.c_density * mu * math.log2(vs_size) / math.log2(mu))


def density_reconstruct(
    vs: Iterable[int],
    known: KnownEdges,
    density_fn: Callable[[list[int]], int],
) -> list[Edge]:
    """All unknown edges inside ``vs`` from exact induced edge counts.

    ``density_fn`` must answer the number of hidden-graph edges inside any
    subset of ``vs``; known edges are subtracted internally. Recursive
    bipartition: the crossing count of a split is ``d(A|B) - d(A) - d(B)``,
    and blocks whose unknown count is zero (or equals every remaining pair)
    resolve without further calls. O(m_u log n + n) calls overall.

    A ``QueryBudgetExceeded`` raised by ``density_fn`` truncates the search;
    the edges located so far are returned.
    """
    order = sorted(set(vs))
    kadj: dict[int, set[int]] = {}
    member_set = set(order)
    for a, b in known:
        if a in member_set and b in member_set:
            kadj.setdefault(a, set()).add(b)
            kadj.setdefault(b, set()).add(a)

    empty: frozenset[int] = frozenset()

    def known_within(block: Sequence[int]) -> int:
        if not kadj:
            return 0
        blk = set(block)
        return sum(len(kadj.get(v, empty) & blk) for v in blk) // 2

    def known_across(a_blk: Sequence[int], b_blk: Sequence[int]) -> int:
        if not kadj:
            return 0
        b_set = set(b_blk)
        return sum(len(kadj.get(v, empty) & b_set) for v in a_blk)

    memo: dict[tuple[int, ...], int] = {}

    def d(block: Sequence[int]) -> int:
        # The cross recursion revisits its fixed side at every split level;
        # answers already paid for are reused instead of requeried.
        if len(block) < 2:
            return 0
        key = tuple(block)
        if key not in memo:
            memo[key] = density_fn(list(block)) - known_within(block)
        return memo[key]

    found: list[Edge] = []

    def emit_all_within(block: Sequence[int]) -> None:
        blk = sorted(block)
        for i, a in enumerate(blk):
            for b in blk[i + 1 :]:
                if b not in kadj.get(a, ()):
                    found.append(edge(a, b))

    def emit_all_across(a_blk: Sequence[int], b_blk: Sequence[int]) -> None:
        for a in a_blk:
            for b in b_blk:
                if b not in kadj.get(a, ()):
                    found.append(edge(a, b))

    def within(block: Sequence[int], du: int) -> None:
        if du <= 0 or len(block) < 2:
            return
        pairs = len(block) * (len(block) - 1) // 2 - known_within(block)
        if du >= pairs:
            emit_all_within(block)
            return
        mid = (len(block) + 1) // 2
        a_blk, b_blk = block[:mid], block[mid:]
        da = d(a_blk)
        db = d(b_blk)
        within(a_blk, da)
        within(b_blk, db)
        across(a_blk, b_blk, du - da - db, db)

    def across(a_blk: Sequence[int], b_blk: Sequence[int], c: int, db: int) -> None:
        if c <= 0:
            return
        pairs = len(a_blk) * len(b_blk) - known_across(a_blk, b_blk)
        if c >= pairs:
            emit_all_across(a_blk, b_blk)
            return
        if len(a_blk) >= len(b_blk):
            mid = (len(a_blk) + 1) // 2
            a1, a2 = a_blk[:mid], a_blk[mid:]
            da1 = d(a1)
            c1 = d(list(a1) + list(b_blk)) - da1 - db
            across(a1, b_blk, c1, db)
            across(a2, b_blk, c - c1, db)
        else:
            mid = (len(b_blk) + 1) // 2
            b1, b2 = b_blk[:mid], b_blk[mid:]
            da = d(a_blk)
            db1 = d(b1)
            c1 = d(list(a_blk) + list(b1)) - da - db1
            across(a_blk, b1, c1, db1)
            if c - c1 > 0:
                across(a_blk, b2, c - c1, d(b2))

    try:
        within(order, d(order))
    except QueryBudgetExceeded:
        pass
    return found


def reconstruct_forest(
    oracle: CcOracle,
    vs: Iterable[int],
    known: KnownEdges,
    budget: ForestBudget = ForestBudget(),
) -> set[Edge]:
    """Unknown edges of ``g[vs]``, exact whenever ``g[vs]`` is a forest.

    Edge counts are simulated through component counts (``|U| - cc(U)``, exact
    on forests), the reconstruction halts at the budget derived from the
    initial unknown-edge estimate, and every candidate is verified with one
    pair query before being output. On non-forests the output is therefore
    still a subset of the true unknown edges, merely possibly incomplete.
    """
    order = sorted(set(vs))
    if len(order) <= 1:
        return set()
    member_set = set(order)
    known_vs = {e for e in known if e[0] in member_set and e[1] in member_set}
    cc_all = oracle.query(order)
    m_hat = len(order) - cc_all - len(known_vs)
    if m_hat <= 0:
        return set()
    cap = budget.queries(len(order), m_hat)
    calls = 0

    def density_fn(block: list[int]) -> int:
        nonlocal calls
        if calls >= cap:
            raise QueryBudgetExceeded(f"forest reconstruction budget {cap} reached")
        calls += 1
        return len(block) - oracle.query(block)

    candidates = density_reconstruct(order, known_vs, density_fn)
    verified: set[Edge] = set()
    for cand in candidates:
        if cand in known_vs:
            break
        if oracle.query(cand) != 1:
            break
        verified.add(cand)
    return verified


def binary_search_reconstruct(
    oracle: CcOracle,
    vs: Iterable[int],
    known: KnownEdges,
) -> set[Edge]:
    """Exactly the unknown edges of ``g[vs]``, by per-vertex halving search.

    For each vertex the candidate partners are those without a known (or
    already found) edge to it; halves with no neighbor are pruned with the
    two-query predicate. Deterministic and exact; splits are ceil/floor over
    the sorted vertex order.
    """
    order = sorted(set(vs))
    kn = set(known)
    found: set[Edge] = set()

    def search(v: int, block: list[int]) -> None:
        if not has_neighbor(oracle, v, block):
            return
        if len(block) == 1:
            found.add(edge(v, block[0]))
            return
        mid = (len(block) + 1) // 2
        search(v, block[:mid])
        search(v, block[mid:])

    for v in order:
        partners = [w for w in order if w != v and edge(v, w) not in kn and edge(v, w) not in found]
        if partners:
            search(v, partners)
    return found


def greedy_color_classes(
    vertices: Iterable[int],
    edges_u: Iterable[Edge],
    d: float,
) -> list[list[int]]:
    """Partition ``vertices`` into independent classes of the given subgraph.

    Greedy coloring over the sorted order uses at most ``d + 1`` colors when
    ``d`` bounds the maximum degree (a larger count raises, flagging a wrong
    bound). For ``d >= 1`` classes longer than ``ceil(|u|/d)`` are split, so
    at most ``2d + 2`` classes come back.
    """
    order = sorted(set(vertices))
    member_set = set(order)
    adj: dict[int, set[int]] = {v: set() for v in order}
    for a, b in edges_u:
        if a in member_set and b in member_set:
            adj[a].add(b)
            adj[b].add(a)
    color: dict[int, int] = {}
    for v in order:
        used = {color[w] for w in adj[v] if w in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    num_colors = max(color.values()) + 1 if color else 0
    if num_colors > d + 1:
        raise ValueError(
            f"coloring needed {num_colors} classes for degree bound {d}; bound was wrong"
        )
    classes = [[] for _ in range(num_colors)]
    for v in order:
        classes[color[v]].append(v)
    if d >= 1:
        chunk = math.ceil(len(order) / d)
        split: list[list[int]] = []
        for cls in classes:
            for i in range(0, len(cls), chunk):
                split.append(cls[i : i + chunk])
        classes = split
    return [cls for cls in classes if cls]


def find_neighbors_in_known_subgraph(
    oracle: CcOracle,
    v: int,
    u: Iterable[int],
    edges_u: Iterable[Edge],
    d: float,
    budget: ForestBudget = ForestBudget(),
) -> set[Edge]:
    """All edges between ``v`` and ``u``, given the edges inside ``u``.

    Requires ``edges_u`` to be exactly the induced edges on ``u`` and ``d`` to
    bound the induced maximum degree. Colors ``g[u]`` for free, then each
    (independent) class plus ``v`` induces a star forest that forest
    reconstruction recovers exactly.
    """
    members = sorted(set(u))
    if v in members:
        raise ValueError(f"vertex {v} must not belong to u")
    found: set[Edge] = set()
    for cls in greedy_color_classes(members, edges_u, d):
        found |= reconstruct_forest(oracle, cls + [v], set(), budget)
    return found
