"""Quiver data model: nodes, balance analysis, symmetry prediction,
dimension bookkeeping, and the standard quiver constructors.

A quiver is a graph whose vertices carry classical compact groups.  Gauge
nodes are quotiented out, flavor nodes act as residual global symmetry,
fixed nodes are gauge U(1)s whose magnetic charge has been pinned to zero
(the realization of decoupling a trivially-acting diagonal U(1)).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class QuiverError(ValueError):
    """Base class for quiver-model failures."""


class QuiverValidationError(QuiverError):
    pass


class UnknownNodeError(QuiverError):
    pass


class FlavorNodeHasNoBalanceError(QuiverError):
    pass


class NonIntegralBalanceError(QuiverError):
    pass


class NotAbelianGaugeNodeError(QuiverError):
    pass


class NotAFlavorNodeError(QuiverError):
    pass


class DimensionMismatchError(QuiverError):
    pass


class MultiplyAttachedFlavorError(QuiverError):
    pass


class PartitionSumMismatchError(QuiverError):
    pass


class UnsupportedFamilyError(QuiverError):
    pass


class DecoupledU1UnresolvedError(QuiverError):
    pass


class Family(str, Enum):
    UNITARY = "U"
    ORTHOGONAL = "SO"
    SYMPLECTIC = "USp"


class NodeKind(str, Enum):
    GAUGE = "gauge"
    FLAVOR = "flavor"
    FIXED = "fixed"


@dataclass(frozen=True)
class GaugeGroup:
    """Classical compact group U(n), SO(n) or USp(n) (n even for USp)."""

    family: Family
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise QuiverValidationError(f"group dimension must be >= 1, got {self.n}")
        if self.family is Family.SYMPLECTIC and self.n % 2:
            raise QuiverValidationError(f"USp({self.n}) needs even n")

    @property
    def rank(self) -> int:
        if self.family is Family.UNITARY:
            return self.n
        return self.n // 2

    def __repr__(self):
        return f"{self.family.value}({self.n})"


def U(n: int) -> GaugeGroup:
    return GaugeGroup(Family.UNITARY, n)


def SO(n: int) -> GaugeGroup:
    return GaugeGroup(Family.ORTHOGONAL, n)


def USp(n: int) -> GaugeGroup:
    return GaugeGroup(Family.SYMPLECTIC, n)


@dataclass(frozen=True)
class QuiverNode:
    id: str
    kind: NodeKind
    group: GaugeGroup


def _edge_ok(a: QuiverNode, b: QuiverNode) -> bool:
    fa, fb = a.group.family, b.group.family
    if fa is Family.UNITARY and fb is Family.UNITARY:
        return True
    return {fa, fb} == {Family.ORTHOGONAL, Family.SYMPLECTIC}


class Quiver:
    """Immutable quiver: nodes plus a multiset of unordered edges."""

    __slots__ = ("nodes", "edges", "_by_id")

    def __init__(self, nodes: Iterable[QuiverNode], edges: Iterable[Sequence[str]]):
        nodes = tuple(nodes)
        by_id: dict = {}
        for i, node in enumerate(nodes):
            if node.id in by_id:
                raise QuiverValidationError(f"nodes[{i}]: duplicate node id {node.id!r}")
            by_id[node.id] = node
        canon = []
        for i, e in enumerate(edges):
            a, b = e
            if a not in by_id:
                raise QuiverValidationError(f"edges[{i}]: unknown node {a!r}")
            if b not in by_id:
                raise QuiverValidationError(f"edges[{i}]: unknown node {b!r}")
            if a == b:
                raise QuiverValidationError(
                    f"edges[{i}]: self-loop on {a!r} (adjoint matter unsupported)")
            na, nb = by_id[a], by_id[b]
            if na.kind is NodeKind.FLAVOR and nb.kind is NodeKind.FLAVOR:
                raise QuiverValidationError(
                    f"edges[{i}]: edge {a!r}-{b!r} joins two flavor nodes")
            if not _edge_ok(na, nb):
                raise QuiverValidationError(
                    f"edges[{i}]: edge {a!r}-{b!r} mixes group families "
                    f"{na.group.family.value} and {nb.group.family.value}")
            canon.append(tuple(sorted((a, b))))
        self.nodes = nodes
        self.edges = tuple(sorted(canon))
        self._by_id = by_id

    def node(self, node_id: str) -> QuiverNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNodeError(f"no node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    @property
    def gauge_nodes(self) -> tuple:
        return tuple(n for n in self.nodes if n.kind is NodeKind.GAUGE)

    @property
    def fixed_nodes(self) -> tuple:
        return tuple(n for n in self.nodes if n.kind is NodeKind.FIXED)

    @property
    def flavor_nodes(self) -> tuple:
        return tuple(n for n in self.nodes if n.kind is NodeKind.FLAVOR)

    def neighbors(self, node_id: str) -> list:
        """Neighbor ids with edge multiplicity (repeats per parallel edge)."""
        self.node(node_id)
        out = []
        for a, b in self.edges:
            if a == node_id:
                out.append(b)
            elif b == node_id:
                out.append(a)
        return out

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __repr__(self):
        return f"Quiver(nodes={len(self.nodes)}, edges={len(self.edges)})"


# ---------------------------------------------------------------------------
# balance


def node_balance(q: Quiver, node_id: str) -> int:
    """Excess of a gauge node's matter over the conformal amount.

    Unitary U(N): -2N + sum of adjacent dimensions.  Orthosymplectic nodes
    use the signed deviation from their balancing condition, divided by two
    so that balanced means 0 uniformly: SO(N) gives (S+2)/2 - N and USp(N)
    gives (S-2)/2 - N where S is the adjacent dimension sum.
    """
    node = q.node(node_id)
    if node.kind is NodeKind.FLAVOR:
        raise FlavorNodeHasNoBalanceError(f"flavor node {node_id!r} has no balance")
    s = sum(q.node(other).group.n for other in q.neighbors(node_id))
    fam, n = node.group.family, node.group.n
    if fam is Family.UNITARY:
        return -2 * n + s
    if fam is Family.ORTHOGONAL:
        if (s + 2) % 2:
            raise NonIntegralBalanceError(
                f"node {node_id!r}: adjacent dimension sum {s} violates SO parity")
        return (s + 2) // 2 - n
    if (s - 2) % 2:
        raise NonIntegralBalanceError(
            f"node {node_id!r}: adjacent dimension sum {s} violates USp parity")
    return (s - 2) // 2 - n


@dataclass(frozen=True)
class BalanceReport:
    balances: dict
    balanced_ids: frozenset
    all_balanced: bool
    minimally_unbalanced: bool
    positively_balanced: bool
    has_negative_below_minus_one: bool


def balance_report(q: Quiver) -> BalanceReport:
    balances = {n.id: node_balance(q, n.id) for n in q.gauge_nodes}
    vals = list(balances.values())
    balanced = frozenset(i for i, b in balances.items() if b == 0)
    if not vals:
        return BalanceReport({}, frozenset(), True, False, False, False)
    mn = min(vals)
    return BalanceReport(
        balances=balances,
        balanced_ids=balanced,
        all_balanced=all(b == 0 for b in vals),
        minimally_unbalanced=(mn == -1),
        positively_balanced=(mn >= 0 and any(b > 0 for b in vals)),
        has_negative_below_minus_one=(mn < -1),
    )


# ---------------------------------------------------------------------------
# Dynkin recognition on the balanced subgraph

_E_DIMS = {6: 78, 7: 133, 8: 248}


@dataclass(frozen=True)
class DynkinComponent:
    node_ids: frozenset
    series: str | None   # "A", "D", "E" or None when unrecognized
    rank: int | None
    shape: str

    @property
    def recognized(self) -> bool:
        return self.series is not None

    @property
    def label(self) -> str:
        if self.recognized:
            return f"{self.series}{self.rank}"
        return f"unrecognized[{self.shape}]"

    @property
    def dimension(self) -> int | None:
        """Dimension of the simple group with this simply-laced diagram."""
        if self.series == "A":
            return self.rank * (self.rank + 2)
        if self.series == "D":
            return self.rank * (2 * self.rank - 1)
        if self.series == "E":
            return _E_DIMS[self.rank]
        return None


def _classify_component(ids: list, adjacency: dict, edge_count: int) -> DynkinComponent:
    idset = frozenset(ids)
    n = len(ids)
    degrees = {i: len(adjacency[i]) for i in ids}
    if any(len(set(adjacency[i])) != len(adjacency[i]) for i in ids):
        return DynkinComponent(idset, None, None, "multi-edge")
    if edge_count != n - 1:
        shape = f"cycle({n})" if all(d == 2 for d in degrees.values()) else "non-tree"
        return DynkinComponent(idset, None, None, shape)
    if max(degrees.values(), default=0) <= 2:
        return DynkinComponent(idset, "A", n, f"path({n})")
    centers = [i for i in ids if degrees[i] >= 3]
    if len(centers) > 1:
        return DynkinComponent(idset, None, None, "tree(multiple branch points)")
    center = centers[0]
    # Leg lengths walking away from the single branch point.
    legs = []
    for start in adjacency[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [x for x in adjacency[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    shape = f"star({','.join(map(str, legs))})"
    if len(legs) == 3:
        a, b, c = legs
        if (a, b) == (1, 1):
            return DynkinComponent(idset, "D", c + 3, shape)
        if (a, b) == (1, 2) and c in (2, 3, 4):
            return DynkinComponent(idset, "E", c + 4, shape)
    return DynkinComponent(idset, None, None, shape)


def balanced_subquiver_classification(q: Quiver) -> list:
    """Connected components of the balanced gauge subgraph, ADE-labelled
    by graph isomorphism where the shape is a simply-laced Dynkin graph."""
    balanced = balance_report(q).balanced_ids
    adjacency: dict = {i: [] for i in balanced}
    inner_edges = Counter()
    for a, b in q.edges:
        if a in balanced and b in balanced:
            adjacency[a].append(b)
            adjacency[b].append(a)
            inner_edges[frozenset((a, b))] += 1
    seen: set = set()
    components = []
    for root in sorted(balanced):
        if root in seen:
            continue
        stack, comp = [root], []
        seen.add(root)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nxt in adjacency[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        edge_count = sum(m for pair, m in inner_edges.items() if pair <= set(comp))
        components.append(_classify_component(sorted(comp), adjacency, edge_count))
    components.sort(key=lambda c: sorted(c.node_ids))
    return components


@dataclass(frozen=True)
class SymmetryPrediction:
    factors: tuple            # recognized DynkinComponents
    unrecognized: tuple       # flagged, excluded from the dimension total
    abelian_rank: int
    total_dimension: int


def detect_decoupled_u1(q: Quiver) -> bool:
    """True when the diagonal U(1) acts trivially: an all-unitary gauge
    quiver with no flavor (and no already-fixed) nodes.  The conformal
    dimension is then invariant under the diagonal magnetic shift and the
    monopole sum diverges unless one U(1) is ungauged."""
    gauge = q.gauge_nodes
    if not gauge or q.flavor_nodes or q.fixed_nodes:
        return False
    return all(n.group.family is Family.UNITARY for n in gauge)


def predict_global_symmetry(q: Quiver) -> SymmetryPrediction:
    """Dual-symmetry prediction: balanced components give the semisimple
    part, unbalanced unitary gauge nodes give abelian factors (one fewer
    when a diagonal U(1) decouples).

    Component labels are graph shapes; for orthosymplectic quivers only the
    semisimple report is meaningful and the abelian rule counts unitary
    nodes alone.
    """
    components = balanced_subquiver_classification(q)
    factors = tuple(c for c in components if c.recognized)
    unknown = tuple(c for c in components if not c.recognized)
    report = balance_report(q)
    unbalanced_unitary = sum(
        1 for n in q.gauge_nodes
        if n.group.family is Family.UNITARY and report.balances[n.id] != 0)
    abelian = unbalanced_unitary - (1 if detect_decoupled_u1(q) else 0)
    abelian = max(abelian, 0)
    total = sum(c.dimension for c in factors) + abelian
    return SymmetryPrediction(factors, unknown, abelian, total)


# ---------------------------------------------------------------------------
# ungauging and dimension bookkeeping


def ungauge(q: Quiver, node_id: str) -> Quiver:
    """Pin an abelian gauge node: its charge is fixed to 0 and it loses its
    dressing factor and fugacity, while its edges keep contributing matter."""
    node = q.node(node_id)
    if node.kind is not NodeKind.GAUGE or node.group.family is not Family.UNITARY \
            or node.group.n != 1:
        raise NotAbelianGaugeNodeError(
            f"node {node_id!r} is not a U(1) gauge node")
    nodes = tuple(QuiverNode(n.id, NodeKind.FIXED, n.group) if n.id == node_id else n
                  for n in q.nodes)
    return Quiver(nodes, q.edges)


def gauge_group_rank(q: Quiver) -> int:
    """Total rank of the gauge group; fixed nodes contribute 0."""
    return sum(n.group.rank for n in q.gauge_nodes)


def expected_coulomb_dimension_real(q: Quiver) -> int:
    """4 * rank of the gauge group, the expected real Coulomb dimension."""
    if detect_decoupled_u1(q):
        raise DecoupledU1UnresolvedError(
            "a diagonal U(1) decouples; ungauge one U(1) node first")
    return 4 * gauge_group_rank(q)


def higgs_quaternionic_dimension(q: Quiver, su_convention: bool = False) -> int:
    """Hypermultiplet count minus gauge dimension (quaternionic units).

    With ``su_convention`` the gauge dimension carries an overall
    determinant-one condition (quotient by S(prod U(N_j)), i.e. one less
    than sum N_j^2), matching the special-unitary quotient used for
    implosions; the default is the plain unitary convention of the duals.
    """
    for n in q.nodes:
        if n.group.family is not Family.UNITARY:
            raise UnsupportedFamilyError(
                f"node {n.id!r}: only unitary quivers supported")
    hypers = sum(q.node(a).group.n * q.node(b).group.n for a, b in q.edges)
    gauge_dim = sum(n.group.n ** 2 for n in q.nodes
                    if n.kind in (NodeKind.GAUGE, NodeKind.FIXED))
    if su_convention:
        gauge_dim -= 1
    return hypers - gauge_dim


# ---------------------------------------------------------------------------
# constructors


def build_linear_nilpotent_quiver(n: int) -> Quiver:
    """Gauge chain U(1)-U(2)-...-U(n-1) ending on an n-dimensional flavor
    node; its Coulomb branch is the nilpotent cone of type A_{n-1}."""
    if n < 2:
        raise QuiverValidationError("need n >= 2")
    nodes = [QuiverNode(f"g{i}", NodeKind.GAUGE, U(i)) for i in range(1, n)]
    nodes.append(QuiverNode("f", NodeKind.FLAVOR, U(n)))
    edges = [(f"g{i}", f"g{i+1}") for i in range(1, n - 1)]
    edges.append((f"g{n-1}", "f"))
    return Quiver(nodes, edges)


def bouquet_replace(q: Quiver, flavor_id: str, k: int) -> Quiver:
    """Replace a dimension-k flavor node by a bouquet of k U(1) gauge
    nodes, each attached by one edge to the flavor node's unique neighbor.
    The neighbor's adjacency sum is unchanged, so every surviving gauge
    node keeps its balance."""
    node = q.node(flavor_id)
    if node.kind is not NodeKind.FLAVOR:
        raise NotAFlavorNodeError(f"node {flavor_id!r} is not a flavor node")
    if node.group.n != k:
        raise DimensionMismatchError(
            f"flavor node {flavor_id!r} has dimension {node.group.n}, not {k}")
    attached = q.neighbors(flavor_id)
    if len(attached) != 1:
        raise MultiplyAttachedFlavorError(
            f"flavor node {flavor_id!r} must have exactly one incident edge, "
            f"found {len(attached)}")
    anchor = attached[0]
    prefix = "b"
    if any(q.has_node(f"{prefix}{i}") for i in range(1, k + 1)):
        prefix = f"{flavor_id}_b"
    nodes = [n for n in q.nodes if n.id != flavor_id]
    edges = [e for e in q.edges if flavor_id not in e]
    for i in range(1, k + 1):
        nodes.append(QuiverNode(f"{prefix}{i}", NodeKind.GAUGE, U(1)))
        edges.append((anchor, f"{prefix}{i}"))
    return Quiver(nodes, edges)


def build_bouquet_quiver(n: int) -> Quiver:
    """Nilpotent-cone chain with the flavor node traded for n U(1) leaves."""
    return bouquet_replace(build_linear_nilpotent_quiver(n), "f", n)


def build_partial_implosion_quiver(n: int, partition: Sequence[int]) -> Quiver:
    """Chain U(1)..U(n-1) with one descending leg U(n_i)-...-U(1) per part,
    attached at U(n-1) via the U(n_i) end."""
    parts = list(partition)
    if any(p < 1 for p in parts) or sum(parts) != n:
        raise PartitionSumMismatchError(
            f"partition {parts} does not sum to {n} with positive parts")
    if n < 2:
        raise QuiverValidationError("need n >= 2")
    nodes = [QuiverNode(f"g{i}", NodeKind.GAUGE, U(i)) for i in range(1, n)]
    edges = [(f"g{i}", f"g{i+1}") for i in range(1, n - 1)]
    for leg, p in enumerate(parts, start=1):
        prev = f"g{n-1}"
        for j in range(p, 0, -1):
            nid = f"l{leg}_{j}"
            nodes.append(QuiverNode(nid, NodeKind.GAUGE, U(j)))
            edges.append((prev, nid))
            prev = nid
    return Quiver(nodes, edges)


def build_dn_implosion_quiver(n: int, with_flavor: bool = False) -> Quiver:
    """Alternating chain SO(2)-USp(2)-SO(4)-...-USp(2n-2), terminated either
    by a bouquet of n SO(2) leaves (default) or by an SO(2n) flavor node."""
    if n < 2:
        raise QuiverValidationError("need n >= 2")
    nodes = []
    for k in range(1, 2 * n - 1):
        group = SO(k + 1) if k % 2 else USp(k)
        nodes.append(QuiverNode(f"c{k}", NodeKind.GAUGE, group))
    edges = [(f"c{k}", f"c{k+1}") for k in range(1, 2 * n - 2)]
    tail = f"c{2*n-2}"
    if with_flavor:
        nodes.append(QuiverNode("f", NodeKind.FLAVOR, SO(2 * n)))
        edges.append((tail, "f"))
    else:
        for i in range(1, n + 1):
            nodes.append(QuiverNode(f"b{i}", NodeKind.GAUGE, SO(2)))
            edges.append((tail, f"b{i}"))
    return Quiver(nodes, edges)


# ---------------------------------------------------------------------------
# JSON wire format


def quiver_to_json(q: Quiver) -> dict:
    return {
        "nodes": [{"id": n.id, "kind": n.kind.value,
                   "group": {"family": n.group.family.value, "n": n.group.n}}
                  for n in q.nodes],
        "edges": [list(e) for e in q.edges],
    }


def quiver_from_json(obj: dict) -> Quiver:
    if not isinstance(obj, dict) or "nodes" not in obj:
        raise QuiverValidationError("quiver JSON must be an object with 'nodes'")
    nodes = []
    for i, spec in enumerate(obj.get("nodes", [])):
        try:
            kind = NodeKind(spec["kind"])
            family = Family(spec["group"]["family"])
            group = GaugeGroup(family, int(spec["group"]["n"]))
            nodes.append(QuiverNode(str(spec["id"]), kind, group))
        except QuiverValidationError as exc:
            raise QuiverValidationError(f"nodes[{i}]: {exc}") from None
        except (KeyError, ValueError, TypeError) as exc:
            raise QuiverValidationError(f"nodes[{i}]: malformed node: {exc}") from None
    edges = []
    for i, e in enumerate(obj.get("edges", [])):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise QuiverValidationError(f"edges[{i}]: expected a pair of node ids")
        edges.append((str(e[0]), str(e[1])))
    return Quiver(nodes, edges)


def load_quiver(path: str) -> Quiver:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise QuiverValidationError(f"{path}: invalid JSON: {exc}") from None
    return quiver_from_json(obj)


def save_quiver(q: Quiver, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(quiver_to_json(q), fh, indent=2)
        fh.write("\n")
