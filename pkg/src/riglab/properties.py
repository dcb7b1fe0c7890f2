"""Exact decision procedures for the four monitored graph properties.

* ``min_degree >= k`` and k-connectivity (every pair of nodes joined by at
  least k internally node-disjoint paths; complete graphs count as
  (n-1)-connected, a single node as connected),
* near-perfect matching (an independent edge set covering all nodes
  except at most one),
* Hamilton cycle containment (see :mod:`riglab.hamilton`),
* k-robustness: for every non-empty strict subset T of nodes, either some
  node of T has at least k neighbors outside T, or some node outside T
  has at least k neighbors inside T.

k-connectivity uses dedicated linear-time procedures for k=1 (search) and
k=2 (cut vertices) and a unit-capacity max-flow decision for k >= 3; the
exponential checkers (Hamilton, robustness) honor a :class:`DecisionBudget`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import hamilton as _hamilton
from . import matching as _matching
from .errors import BudgetExceeded, ParameterError
from .graphs import Graph, NodeSubset, connected_components, is_connected

MIN_DEGREE = "min_degree"
K_CONNECTED = "k_connected"
NEAR_PERFECT_MATCHING = "near_perfect_matching"
HAMILTON_CYCLE = "hamilton_cycle"
K_ROBUST = "k_robust"

_KINDS = (MIN_DEGREE, K_CONNECTED, NEAR_PERFECT_MATCHING, HAMILTON_CYCLE, K_ROBUST)
_PARAMETRIC = (MIN_DEGREE, K_CONNECTED, K_ROBUST)


@dataclass(frozen=True)
class PropertyKind:
    """One monitored property, with its integer level k where applicable."""

    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown property kind {self.kind!r}")
        if self.k < 1:
            raise ParameterError("k must be a positive integer")
        if self.kind not in _PARAMETRIC and self.k != 1:
            raise ParameterError(f"property {self.kind!r} takes no k")

    @classmethod
    def min_degree_at_least(cls, k: int) -> "PropertyKind":
        return cls(MIN_DEGREE, k)

    @classmethod
    def k_connected(cls, k: int) -> "PropertyKind":
        return cls(K_CONNECTED, k)

    @classmethod
    def near_perfect_matching(cls) -> "PropertyKind":
        return cls(NEAR_PERFECT_MATCHING)

    @classmethod
    def hamilton_cycle(cls) -> "PropertyKind":
        return cls(HAMILTON_CYCLE)

    @classmethod
    def k_robust(cls, k: int) -> "PropertyKind":
        return cls(K_ROBUST, k)

    def label(self) -> str:
        if self.kind in _PARAMETRIC:
            return f"{self.kind}(k={self.k})"
        return self.kind


@dataclass(frozen=True)
class DecisionBudget:
    """Limits for the exponential checkers.

    ``max_enumeration_nodes`` caps subset enumeration (Hamilton DP,
    robustness). ``search_steps``, when set, enables the staged
    certificate-plus-search Hamilton decision above the cap.
    """

    max_enumeration_nodes: int = 24
    search_steps: int | None = None
    dp_state_limit: int = 1 << 21

    def __post_init__(self):
        if self.max_enumeration_nodes < 1:
            raise ParameterError("max_enumeration_nodes must be positive")
        if self.search_steps is not None and self.search_steps < 1:
            raise ParameterError("search_steps must be positive when set")


DEFAULT_BUDGET = DecisionBudget()


# -- k-connectivity ----------------------------------------------------------


def _biconnected(g: Graph) -> bool:
    if g.n < 3:
        return False
    if g.min_degree() < 2 or not is_connected(g):
        return False
    return _hamilton.articulation_free(g.adjacency_lists(), g.n)


def _split_flow_at_least(adj: list[list[int]], n: int, s: int, t: int, k: int) -> bool:
    """Menger decision: >= k internally node-disjoint s-t paths.

    Unit-capacity max-flow on the split digraph (v_in -> v_out per node),
    augmenting BFS stopped as soon as k paths are found.
    """
    # Arc store: to[], cap[], paired reverse arc at index ^1, head lists.
    to: list[int] = []
    cap: list[int] = []
    head: list[list[int]] = [[] for _ in range(2 * n)]

    def add_arc(a: int, b: int, c: int) -> None:
        head[a].append(len(to))
        to.append(b)
        cap.append(c)
        head[b].append(len(to))
        to.append(a)
        cap.append(0)

    for v in range(n):
        if v != s and v != t:
            add_arc(2 * v, 2 * v + 1, 1)
    for u in range(n):
        for v in adj[u]:
            if u < v:
                add_arc(2 * u + 1, 2 * v, 1)
                add_arc(2 * v + 1, 2 * u, 1)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    prev_arc = [-1] * (2 * n)
    while flow < k:
        for i in range(2 * n):
            prev_arc[i] = -1
        prev_arc[source] = -2
        q = deque([source])
        reached = False
        while q and not reached:
            x = q.popleft()
            for aid in head[x]:
                if cap[aid] > 0 and prev_arc[to[aid]] == -1:
                    prev_arc[to[aid]] = aid
                    if to[aid] == sink:
                        reached = True
                        break
                    q.append(to[aid])
        if not reached:
            return False
        x = sink
        while x != source:
            aid = prev_arc[x]
            cap[aid] -= 1
            cap[aid ^ 1] += 1
            x = to[aid ^ 1]
        flow += 1
    return True


def is_k_connected(g: Graph, k: int) -> bool:
    """Vertex connectivity at least k (kappa(K_n) = n-1 by convention)."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    n = g.n
    if k == 1:
        return is_connected(g)
    if n <= k:
        return False  # kappa <= n-1 < k
    if g.is_complete():
        return True  # k <= n-1 checked above
    if g.min_degree() < k:
        return False
    if k == 2:
        return _biconnected(g)
    if not is_connected(g):
        return False
    # Esfahanian-Hakimi: with v of minimum degree it suffices to check
    # local connectivity from v to its non-neighbors and between
    # non-adjacent pairs of its neighbors.
    adj = g.adjacency_lists()
    degs = g.degrees()
    v = int(degs.argmin())
    vset = set(adj[v])
    for w in range(n):
        if w != v and w not in vset:
            if not _split_flow_at_least(adj, n, v, w, k):
                return False
    nbrs = adj[v]
    for i, x in enumerate(nbrs):
        for y in nbrs[i + 1:]:
            if not g.has_edge(x, y):
                if not _split_flow_at_least(adj, n, x, y, k):
                    return False
    return True


# -- matching / hamilton facades --------------------------------------------


def max_matching_size(g: Graph) -> int:
    return _matching.max_matching_size(g)


def maximum_matching(g: Graph) -> list[int]:
    return _matching.maximum_matching(g)


def has_near_perfect_matching(g: Graph) -> bool:
    return _matching.has_near_perfect_matching(g)


def has_hamilton_cycle(g: Graph, budget: DecisionBudget = DEFAULT_BUDGET) -> bool:
    return _hamilton.decide_hamilton(
        g, budget.max_enumeration_nodes, budget.search_steps, budget.dp_state_limit
    )


# -- k-robustness ------------------------------------------------------------


def k_robust_witness(
    g: Graph, k: int, budget: DecisionBudget = DEFAULT_BUDGET
) -> NodeSubset | None:
    """First failing subset T in Gray-code order, or None if k-robust.

    Only subsets containing node 0 are enumerated: the defining condition
    is symmetric under T <-> complement, which halves the work. Cross
    degrees are maintained incrementally along the Gray walk.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    n = g.n
    if n == 1:
        return None  # no non-empty strict subset exists
    if n > budget.max_enumeration_nodes:
        raise BudgetExceeded(
            f"robustness enumeration at n={n} exceeds the cap "
            f"{budget.max_enumeration_nodes}"
        )
    blocks = connected_components(g)
    if len(blocks) > 1:
        return NodeSubset.from_nodes(n, min(blocks, key=len))
    if k >= 2:
        degs = g.degrees()
        v = int(degs.argmin())
        if int(degs[v]) < k:
            return NodeSubset.from_nodes(n, [v])
    adj = g.adjacency_lists()
    deg = [len(a) for a in adj]
    in_t = [False] * n
    in_t[0] = True
    cnt_in = [0] * n  # neighbors inside T, per node
    for w in adj[0]:
        cnt_in[w] = 1
    sat = [False] * n
    satisfied = 0

    def refresh(v: int) -> None:
        nonlocal satisfied
        ok = (deg[v] - cnt_in[v] >= k) if in_t[v] else (cnt_in[v] >= k)
        if ok != sat[v]:
            sat[v] = ok
            satisfied += 1 if ok else -1

    for v in range(n):
        refresh(v)
    full_rest = (1 << (n - 1)) - 1
    gray = 0
    mask = 1  # T as bitmask, always contains node 0
    if satisfied == 0:
        return NodeSubset(n, mask)
    i = 1
    while i <= full_rest:
        bit = (i & -i).bit_length() - 1
        gray ^= 1 << bit
        u = bit + 1
        entering = not in_t[u]
        in_t[u] = entering
        mask ^= 1 << u
        delta = 1 if entering else -1
        for w in adj[u]:
            cnt_in[w] += delta
            refresh(w)
        refresh(u)
        if gray != full_rest and satisfied == 0:
            return NodeSubset(n, mask)
        i += 1
    return None


def is_k_robust(g: Graph, k: int, budget: DecisionBudget = DEFAULT_BUDGET) -> bool:
    return k_robust_witness(g, k, budget) is None


# -- dispatch ----------------------------------------------------------------


def evaluate_property(
    g: Graph, prop: PropertyKind, budget: DecisionBudget = DEFAULT_BUDGET
) -> bool:
    if prop.kind == MIN_DEGREE:
        return g.min_degree() >= prop.k
    if prop.kind == K_CONNECTED:
        return is_k_connected(g, prop.k)
    if prop.kind == NEAR_PERFECT_MATCHING:
        return has_near_perfect_matching(g)
    if prop.kind == HAMILTON_CYCLE:
        return has_hamilton_cycle(g, budget)
    if prop.kind == K_ROBUST:
        return is_k_robust(g, prop.k, budget)
    raise ParameterError(f"unknown property {prop!r}")
