"""Construction of chain-of-rhombus consensus networks.

A rhombus block of order n consists of n mutually non-adjacent interior
nodes, each linked to the same two junction nodes.  A chain of m such
blocks shares junctions, giving m + 1 + sum(orders) nodes and
2 * sum(orders) edges.  Edges fall into 2m orbits under the automorphism
group (interior nodes of one block are interchangeable): orbit 2r holds
the edges between junction r and the interiors of block r, orbit 2r + 1
the edges between those interiors and junction r + 1.

Node numbering places junction k at index k + (n_1 + ... + n_k), with the
interiors of block k filling the gap before the next junction.  All indices
are 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple


class InvalidSpecError(ValueError):
    """Chain specification violates the construction rules."""


class InvalidHostError(ValueError):
    """Host graph cannot anchor a branch (disconnected or bad attach node)."""


@dataclass(frozen=True)
class ChainSpec:
    """Orders (n_1, ..., n_m) of the rhombus blocks; m is implied by length."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(n) for n in self.orders)
        if len(orders) == 0:
            raise InvalidSpecError("orders must contain at least one block")
        if any(n < 1 for n in orders):
            raise InvalidSpecError(f"every block order must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def block_count(self) -> int:
        return len(self.orders)

    @property
    def node_count(self) -> int:
        return self.block_count + 1 + sum(self.orders)

    @property
    def edge_count(self) -> int:
        return 2 * sum(self.orders)

    def cumulative_order(self, k: int) -> int:
        """Sum of the first k block orders (0 for k = 0)."""
        return sum(self.orders[:k])

    def junction_index(self, k: int) -> int:
        """Node index of junction k, for k in 0..m."""
        if not 0 <= k <= self.block_count:
            raise IndexError(f"junction {k} out of range for {self.block_count} blocks")
        return k + self.cumulative_order(k)

    @classmethod
    def from_text(cls, text: str) -> "ChainSpec":
        """Parse the canonical comma-separated form, e.g. "3,2,4"."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        try:
            orders = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise InvalidSpecError(f"cannot parse orders from {text!r}") from exc
        return cls(orders)

    def to_text(self) -> str:
        return ",".join(str(n) for n in self.orders)

    def as_dict(self) -> dict:
        return {"orders": list(self.orders)}


class NodeRole(NamedTuple):
    kind: str    # "junction" or "interior"
    index: int   # junction number (0..m) or block number (0..m-1)


@dataclass(frozen=True)
class Topology:
    """Explicit node/edge realization of a chain, with orbit-labelled edges."""

    spec: ChainSpec
    node_count: int
    edges: tuple[tuple[int, int], ...]   # sorted pairs (i, j), i < j
    orbits: tuple[int, ...]              # orbit label per edge, parallel to `edges`
    roles: tuple[NodeRole, ...]          # per node
    junctions: tuple[int, ...]           # node index of junction 0..m
    interiors: tuple[tuple[int, ...], ...]   # interior node indices per block

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def orbit_count(self) -> int:
        return 2 * self.spec.block_count

    def orbit_of(self, edge: tuple[int, int]) -> int:
        i, j = min(edge), max(edge)
        return self.orbits[self.edges.index((i, j))]

    def neighbor_lists(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs

    def as_dict(self) -> dict:
        return {
            "orders": list(self.spec.orders),
            "node_count": self.node_count,
            "edges": [[i, j, orbit] for (i, j), orbit in zip(self.edges, self.orbits)],
            "roles": [{"node": n, "kind": r.kind, "index": r.index}
                      for n, r in enumerate(self.roles)],
        }


def build_chain(spec: ChainSpec | list[int] | tuple[int, ...]) -> Topology:
    """Build the chain topology for a spec, following the junction-numbering rule."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(tuple(spec))
    m = spec.block_count
    junctions = tuple(spec.junction_index(k) for k in range(m + 1))
    interiors = tuple(
        tuple(range(junctions[r] + 1, junctions[r + 1])) for r in range(m)
    )
    edges: list[tuple[int, int]] = []
    orbits: list[int] = []
    for r in range(m):
        for node in interiors[r]:
            edges.append(tuple(sorted((junctions[r], node))))
            orbits.append(2 * r)
        for node in interiors[r]:
            edges.append(tuple(sorted((junctions[r + 1], node))))
            orbits.append(2 * r + 1)

    roles: list[NodeRole] = [NodeRole("junction", 0)] * spec.node_count
    for k, node in enumerate(junctions):
        roles[node] = NodeRole("junction", k)
    for r in range(m):
        for node in interiors[r]:
            roles[node] = NodeRole("interior", r)

    order = sorted(range(len(edges)), key=lambda k: edges[k])
    return Topology(
        spec=spec,
        node_count=spec.node_count,
        edges=tuple(edges[k] for k in order),
        orbits=tuple(orbits[k] for k in order),
        roles=tuple(roles),
        junctions=junctions,
        interiors=interiors,
    )


def automorphism_check(t: Topology) -> bool:
    """True iff every transposition of two interiors of one block preserves the edge set."""
    edge_set = set(t.edges)
    for block in t.interiors:
        for a_pos in range(len(block)):
            for b_pos in range(a_pos + 1, len(block)):
                a, b = block[a_pos], block[b_pos]
                swap = {a: b, b: a}
                for i, j in t.edges:
                    si, sj = swap.get(i, i), swap.get(j, j)
                    if (min(si, sj), max(si, sj)) not in edge_set:
                        return False
    return True


@dataclass(frozen=True)
class HostGraph:
    """Arbitrary connected graph a branch hangs onto (0-based local node ids)."""

    node_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise InvalidHostError("host needs at least one node")
        edges = tuple(
            (min(i, j), max(i, j)) for i, j in self.edges
        )
        for i, j in edges:
            if i == j or not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise InvalidHostError(f"bad host edge ({i}, {j})")
        object.__setattr__(self, "edges", edges)

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        nbrs: dict[int, list[int]] = {i: [] for i in range(self.node_count)}
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        seen = {0}
        stack = [0]
        while stack:
            for nb in nbrs[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == self.node_count


def host_single_node() -> HostGraph:
    return HostGraph(1, ())


def host_triangle() -> HostGraph:
    return HostGraph(3, ((0, 1), (1, 2), (0, 2)))


def host_random_connected(n: int, p: float, seed: int) -> HostGraph:
    """Seeded random connected host: random spanning tree plus Bernoulli(p) extras."""
    if n < 1:
        raise InvalidHostError("host needs at least one node")
    rng = random.Random(seed)
    edges: set[tuple[int, int]] = set()
    nodes = list(range(n))
    rng.shuffle(nodes)
    for k in range(1, n):
        other = nodes[rng.randrange(k)]
        edges.add((min(nodes[k], other), max(nodes[k], other)))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
    return HostGraph(n, tuple(sorted(edges)))


def parse_host(text: str) -> HostGraph:
    """Host mini-language: "node" | "triangle" | "random:<n>:<p>:<seed>"."""
    if text == "node":
        return host_single_node()
    if text == "triangle":
        return host_triangle()
    if text.startswith("random:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise InvalidHostError(f"expected random:<n>:<p>:<seed>, got {text!r}")
        return host_random_connected(int(parts[1]), float(parts[2]), int(parts[3]))
    raise InvalidHostError(f"unknown host spec {text!r}")


@dataclass(frozen=True)
class BranchTopology:
    """A chain joined to a host by a single bridge edge off the far junction.

    Host nodes are renumbered to follow the chain nodes.  Each chain orbit
    keeps its label; the bridge gets parameter slot 2m and each host edge its
    own slot after that, which is the parameterization the branch optimizer
    searches over.
    """

    chain: Topology
    host: HostGraph
    attach: int                      # host-local index the bridge lands on
    node_count: int
    edges: tuple[tuple[int, int], ...]
    bridge: tuple[int, int]
    host_edges: tuple[tuple[int, int], ...]   # in combined numbering

    @property
    def parameter_count(self) -> int:
        return self.chain.orbit_count + 1 + len(self.host_edges)

    def parameter_edges(self) -> list[tuple[int, int, int]]:
        """(i, j, slot) triples covering every edge of the branch."""
        out = [(i, j, orbit) for (i, j), orbit in zip(self.chain.edges, self.chain.orbits)]
        slot = self.chain.orbit_count
        out.append((*self.bridge, slot))
        for k, (i, j) in enumerate(self.host_edges):
            out.append((i, j, slot + 1 + k))
        return out

    def as_dict(self) -> dict:
        return {
            "orders": list(self.chain.spec.orders),
            "node_count": self.node_count,
            "bridge": list(self.bridge),
            "host_node_count": self.host.node_count,
            "edges": [[i, j] for i, j in self.edges],
        }


def build_branch(
    spec: ChainSpec | list[int] | tuple[int, ...],
    host: HostGraph,
    attach: int = 0,
) -> BranchTopology:
    """Attach a host to the chain's far junction through one bridge edge."""
    chain = build_chain(spec if isinstance(spec, ChainSpec) else ChainSpec(tuple(spec)))
    if not 0 <= attach < host.node_count:
        raise InvalidHostError(f"attach node {attach} outside host of {host.node_count}")
    if not host.is_connected():
        raise InvalidHostError("host graph must be connected")
    offset = chain.node_count
    far_junction = chain.junctions[-1]
    bridge = (far_junction, offset + attach)
    host_edges = tuple((offset + i, offset + j) for i, j in host.edges)
    edges = tuple(sorted(chain.edges + (bridge,) + host_edges))
    return BranchTopology(
        chain=chain,
        host=host,
        attach=attach,
        node_count=chain.node_count + host.node_count,
        edges=edges,
        bridge=bridge,
        host_edges=host_edges,
    )
