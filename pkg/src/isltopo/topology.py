"""ISL graph: fixed intra-plane rings plus degree-capped inter-plane links."""
from __future__ import annotations

import numpy as np

from .feasibility import CandidateSet
from .utils import check_positive_int, check_random_state


class Topology:
    """Undirected satellite graph on flat indices ``plane * Ns + index``.

    Intra-plane ring edges are implicit and immutable.  Inter-plane edges
    live in a fixed-width table, one row per satellite, so copies are cheap.
    """

    def __init__(self, num_planes: int, satellites_per_plane: int, max_inter_links: int):
        if satellites_per_plane < 3:
            raise ValueError("rings need at least 3 satellites per plane")
        self.num_planes = int(num_planes)
        self.satellites_per_plane = int(satellites_per_plane)
        self.max_inter_links = int(max_inter_links)
        n = self.num_planes * self.satellites_per_plane
        self.inter = np.full((n, max(self.max_inter_links, 1)), -1, dtype=np.int64)
        self.inter_degree = np.zeros(n, dtype=np.int64)

    @property
    def node_count(self) -> int:
        return self.num_planes * self.satellites_per_plane

    def copy(self) -> "Topology":
        new = Topology.__new__(Topology)
        new.num_planes = self.num_planes
        new.satellites_per_plane = self.satellites_per_plane
        new.max_inter_links = self.max_inter_links
        new.inter = self.inter.copy()
        new.inter_degree = self.inter_degree.copy()
        return new

    def plane_of(self, u: int) -> int:
        return u // self.satellites_per_plane

    def is_intra_pair(self, u: int, v: int) -> bool:
        ns = self.satellites_per_plane
        if u // ns != v // ns:
            return False
        return (u - v) % ns in (1, ns - 1)

    def ring_neighbors(self, u: int) -> tuple[int, int]:
        ns = self.satellites_per_plane
        base = (u // ns) * ns
        j = u - base
        return base + (j - 1) % ns, base + (j + 1) % ns

    def inter_neighbors(self, u: int) -> np.ndarray:
        return self.inter[u, : self.inter_degree[u]]

    def neighbors(self, u: int) -> list[int]:
        return list(self.ring_neighbors(u)) + self.inter_neighbors(u).tolist()

    def has_inter_link(self, u: int, v: int) -> bool:
        return bool(np.any(self.inter_neighbors(u) == v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.is_intra_pair(u, v) or self.has_inter_link(u, v)

    def can_add(self, u: int, v: int, candidates: CandidateSet) -> bool:
        return (
            u != v
            and self.inter_degree[u] < self.max_inter_links
            and self.inter_degree[v] < self.max_inter_links
            and (u, v) in candidates
            and not self.has_inter_link(u, v)
        )

    def add_inter_link(self, u: int, v: int, candidates: CandidateSet) -> bool:
        """Add ``(u, v)`` if it is a candidate, new, and both ends have spare capacity."""
        u, v = int(u), int(v)
        if not self.can_add(u, v, candidates):
            return False
        self.inter[u, self.inter_degree[u]] = v
        self.inter[v, self.inter_degree[v]] = u
        self.inter_degree[u] += 1
        self.inter_degree[v] += 1
        return True

    def _drop(self, u: int, v: int) -> None:
        row = self.inter[u]
        k = int(self.inter_degree[u])
        pos = int(np.flatnonzero(row[:k] == v)[0])
        row[pos:k - 1] = row[pos + 1:k]
        row[k - 1] = -1
        self.inter_degree[u] -= 1

    def remove_inter_link(self, u: int, v: int) -> bool:
        u, v = int(u), int(v)
        if self.is_intra_pair(u, v):
            raise ValueError(f"({u}, {v}) is an intra-plane ring edge and cannot be removed")
        if not self.has_inter_link(u, v):
            return False
        self._drop(u, v)
        self._drop(v, u)
        return True

    def inter_edges(self) -> list[tuple[int, int]]:
        """Canonical ``(min, max)`` pairs, sorted."""
        edges = []
        for u in range(self.node_count):
            for v in self.inter_neighbors(u).tolist():
                if u < v:
                    edges.append((u, v))
        return sorted(edges)

    def inter_edge_array(self) -> np.ndarray:
        k = self.inter.shape[1]
        src = np.repeat(np.arange(self.node_count), k)
        dst = self.inter.reshape(-1)
        keep = (dst >= 0) & (src < dst)
        return np.column_stack([src[keep], dst[keep]])

    def intra_edges(self) -> list[tuple[int, int]]:
        ns = self.satellites_per_plane
        edges = []
        for p in range(self.num_planes):
            for j in range(ns):
                a, b = p * ns + j, p * ns + (j + 1) % ns
                edges.append((min(a, b), max(a, b)))
        return sorted(edges)

    def canonical(self) -> "Topology":
        """Copy with every inter-neighbour row sorted ascending."""
        new = self.copy()
        for u in range(self.node_count):
            k = new.inter_degree[u]
            new.inter[u, :k] = np.sort(new.inter[u, :k])
        return new

    def check_invariants(self, candidates: CandidateSet | None = None) -> None:
        """Raise ``AssertionError`` if any structural invariant is broken."""
        n = self.node_count
        assert np.all(self.inter_degree <= self.max_inter_links), "inter degree above cap"
        assert np.all(self.inter_degree >= 0)
        for u in range(n):
            k = self.inter_degree[u]
            row = self.inter[u]
            assert np.all(row[k:] == -1), f"stale entries in row {u}"
            nbrs = row[:k]
            assert len(set(nbrs.tolist())) == k, f"duplicate inter link at {u}"
            for v in nbrs.tolist():
                assert 0 <= v < n
                assert self.plane_of(u) != self.plane_of(v), f"inter link ({u}, {v}) inside one plane"
                assert u in self.inter_neighbors(v), f"asymmetric link ({u}, {v})"
                if candidates is not None:
                    assert (u, v) in candidates, f"link ({u}, {v}) not a candidate"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            self.num_planes == other.num_planes
            and self.satellites_per_plane == other.satellites_per_plane
            and self.inter_edges() == other.inter_edges()
        )

    def __repr__(self) -> str:
        return (
            f"Topology(num_planes={self.num_planes}, satellites_per_plane={self.satellites_per_plane}, "
            f"max_inter_links={self.max_inter_links}, inter_edges={int(self.inter_degree.sum()) // 2})"
        )


def build_ring_topology(config, max_inter_links: int | None = None) -> Topology:
    """Rings only; ``config`` is a ConstellationConfig (or anything with the same fields)."""
    cap = config.max_inter_links if max_inter_links is None else max_inter_links
    return Topology(config.num_planes, config.satellites_per_plane, cap)


def add_inter_link(topology: Topology, u: int, v: int, candidates: CandidateSet) -> bool:
    return topology.add_inter_link(u, v, candidates)


def remove_inter_link(topology: Topology, u: int, v: int) -> bool:
    return topology.remove_inter_link(u, v)


def far_first_order(neighbors: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Shuffle the far and near halves of a distance-sorted list, far half first.

    With an odd count the extra element goes to the near half.
    """
    k = len(neighbors)
    near = np.array(neighbors[: k - k // 2])
    far = np.array(neighbors[k - k // 2:])
    rng.shuffle(far)
    rng.shuffle(near)
    return np.concatenate([far, near])


def build_initial_topology(candidates: CandidateSet, max_inter_links: int, seed=None, max_passes: int = 10) -> Topology:
    """Greedy degree-balanced construction on top of the rings.

    Each pass visits satellites by ascending inter degree (ties by index)
    and links every under-capacity satellite to the first admissible
    candidates in far-first order.  Stops after a pass that adds nothing.
    """
    max_passes = check_positive_int(max_passes, "max_passes")
    rng = check_random_state(seed)
    topo = Topology(candidates.num_planes, candidates.satellites_per_plane, max_inter_links)
    cap = topo.max_inter_links
    for _ in range(max_passes):
        added = 0
        for u in np.argsort(topo.inter_degree, kind="stable").tolist():
            if topo.inter_degree[u] >= cap:
                continue
            nbrs = candidates.neighbors(u)
            if len(nbrs) == 0:
                continue
            for v in far_first_order(nbrs, rng).tolist():
                if topo.add_inter_link(u, v, candidates):
                    added += 1
                    if topo.inter_degree[u] >= cap:
                        break
        if added == 0:
            break
    return topo
