"""Interfaced dags (idags) and their symmetric monoidal operations.

An idag is an acyclic graph sandwiched between a row of numbered inputs and a
row of numbered outputs. Edge sources are inputs or internal nodes, edge
targets are internal nodes or outputs, and every edge carries a nonzero weight
from the ambient weight system. Idags with matching interfaces compose like
matrices whose entries happen to remember the graph between the borders:
sequential composition (concat) sums weight products over the shared
interface, parallel composition (juxt) stacks.

Equality of Idag values is structural (same interfaces, same node sequence,
same weighted edges). Identity "up to renaming internal nodes" is what
is_isomorphic and canonical_form decide.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    BadEndpoint,
    CycleDetected,
    DuplicateNodeId,
    InterfaceMismatch,
    ModeMismatch,
    NotBijective,
    SearchBudgetExceeded,
)
from .weights import BOOL, WeightSystem

DEFAULT_LABEL = "•"

CANONICAL_SEARCH_BUDGET = 10**6


@dataclass(frozen=True, slots=True)
class In:
    """Edge source: the idag's input with this index."""

    index: int


@dataclass(frozen=True, slots=True)
class Out:
    """Edge target: the idag's output with this index."""

    index: int


@dataclass(frozen=True, slots=True)
class NodeRef:
    """Edge endpoint: the internal node with this id."""

    id: str


Vertex = Union[In, Out, NodeRef]
Edge = tuple[Vertex, Vertex]


@dataclass(frozen=True)
class Idag:
    """An interfaced dag. Build through make_idag or the constructors below;
    instances are immutable and assumed valid.

    Attributes:
        weights: the ambient weight system (BOOL, NAT or INT).
        n_in: number of inputs.
        n_out: number of outputs.
        nodes: internal nodes as an (id, label) sequence; order is
            presentation only and carries no meaning.
        edges: mapping from (source, target) to nonzero weight.
    """

    weights: WeightSystem
    n_in: int
    n_out: int
    nodes: tuple[tuple[str, str], ...]
    edges: Mapping[Edge, int]

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(nid for nid, _ in self.nodes)

    def label_of(self, node_id: str) -> str:
        for nid, lbl in self.nodes:
            if nid == node_id:
                return lbl
        raise KeyError(node_id)

    def weight(self, src: Vertex, dst: Vertex) -> int:
        """Weight of the edge src -> dst, zero if absent."""
        return self.edges.get((src, dst), 0)

    def __rshift__(self, other: "Idag") -> "Idag":
        """self >> other: feed self's outputs into other."""
        return concat(other, self)

    def __matmul__(self, other: "Idag") -> "Idag":
        return juxt(self, other)

    def __repr__(self) -> str:
        return (
            f"Idag({self.weights!r}, {self.n_in}->{self.n_out}, "
            f"nodes={list(self.node_ids)!r}, {len(self.edges)} edges)"
        )


NodeSpec = Union[str, tuple[str, str]]
EdgeSpec = Union[Mapping[Edge, int], Iterable[Union[Edge, tuple[Vertex, Vertex, int]]]]


def make_idag(
    n_in: int,
    n_out: int,
    nodes: Iterable[NodeSpec],
    edges: EdgeSpec,
    mode: WeightSystem = BOOL,
) -> Idag:
    """Validate and build an idag.

    Args:
        n_in, n_out: interface widths.
        nodes: node ids, or (id, label) pairs; a bare id gets the default
            label.
        edges: a {(src, dst): weight} mapping, or an iterable of (src, dst)
            pairs (weight 1) and (src, dst, weight) triples.
        mode: weight system the edge weights live in.

    Raises:
        DuplicateNodeId, BadEndpoint, InvalidWeight (ZeroWeight /
        AntipodeWeight), CycleDetected.
    """
    if n_in < 0 or n_out < 0:
        raise BadEndpoint(f"negative interface width ({n_in}, {n_out})")
    node_seq: list[tuple[str, str]] = []
    for spec in nodes:
        if isinstance(spec, str):
            node_seq.append((spec, DEFAULT_LABEL))
        else:
            nid, lbl = spec
            if not isinstance(nid, str) or not isinstance(lbl, str):
                raise BadEndpoint(f"node ids and labels must be strings: {spec!r}")
            node_seq.append((nid, lbl))
    ids = [nid for nid, _ in node_seq]
    known = set(ids)
    if len(known) != len(ids):
        seen: set[str] = set()
        for nid in ids:
            if nid in seen:
                raise DuplicateNodeId(f"duplicate node id {nid!r}")
            seen.add(nid)

    if isinstance(edges, Mapping):
        items: Iterable[tuple[Vertex, Vertex, int]] = (
            (src, dst, w) for (src, dst), w in edges.items()
        )
    else:
        items = (e if len(e) == 3 else (e[0], e[1], 1) for e in edges)  # type: ignore[misc]

    edge_map: dict[Edge, int] = {}
    for src, dst, w in items:
        if isinstance(src, In):
            if not 0 <= src.index < n_in:
                raise BadEndpoint(f"input index {src.index} out of range 0..{n_in - 1}")
        elif isinstance(src, NodeRef):
            if src.id not in known:
                raise BadEndpoint(f"unknown source node {src.id!r}")
        else:
            raise BadEndpoint(f"edge source cannot be {src!r}")
        if isinstance(dst, Out):
            if not 0 <= dst.index < n_out:
                raise BadEndpoint(f"output index {dst.index} out of range 0..{n_out - 1}")
        elif isinstance(dst, NodeRef):
            if dst.id not in known:
                raise BadEndpoint(f"unknown target node {dst.id!r}")
        else:
            raise BadEndpoint(f"edge target cannot be {dst!r}")
        mode.check_edge_weight(w)
        if (src, dst) in edge_map:
            raise BadEndpoint(f"duplicate edge {src!r} -> {dst!r}")
        edge_map[(src, dst)] = w

    _check_acyclic(known, edge_map)
    return Idag(mode, n_in, n_out, tuple(node_seq), MappingProxyType(edge_map))


def _check_acyclic(ids: set[str], edges: Mapping[Edge, int]) -> None:
    succ: dict[str, list[str]] = {nid: [] for nid in ids}
    indeg = {nid: 0 for nid in ids}
    for src, dst in edges:
        if isinstance(src, NodeRef) and isinstance(dst, NodeRef):
            succ[src.id].append(dst.id)
            indeg[dst.id] += 1
    ready = [nid for nid, d in indeg.items() if d == 0]
    seen = 0
    while ready:
        nid = ready.pop()
        seen += 1
        for nxt in succ[nid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if seen != len(ids):
        cyclic = sorted(nid for nid, d in indeg.items() if d > 0)
        raise CycleDetected(f"cycle through nodes {cyclic}")


def _attach(idag_like_edges: dict[Edge, int]) -> Mapping[Edge, int]:
    return MappingProxyType(idag_like_edges)


def identity(n: int, mode: WeightSystem = BOOL) -> Idag:
    """The (n, n)-idag wiring input i straight to output i."""
    if n < 0:
        raise BadEndpoint(f"negative width {n}")
    return Idag(
        mode, n, n, (), _attach({(In(i), Out(i)): 1 for i in range(n)})
    )


def from_permutation(perm: Sequence[int], mode: WeightSystem = BOOL) -> Idag:
    """The node-free idag sending input i to output perm[i].

    Raises NotBijective if perm is not a permutation of 0..len(perm)-1.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise NotBijective(f"{list(perm)!r} is not a permutation of 0..{n - 1}")
    return Idag(
        mode, n, n, (), _attach({(In(i), Out(perm[i])): 1 for i in range(n)})
    )


def symmetry(n: int, m: int, mode: WeightSystem = BOOL) -> Idag:
    """The (n+m, m+n)-idag crossing the first n wires over the last m."""
    if n < 0 or m < 0:
        raise BadEndpoint(f"negative width in symmetry({n}, {m})")
    perm = [m + i for i in range(n)] + [j for j in range(m)]
    return from_permutation(perm, mode)


def _freshen(taken: set[str], ids: Iterable[str]) -> dict[str, str]:
    # Deterministic clash resolution: append primes until free.
    ren: dict[str, str] = {}
    for nid in ids:
        cand = nid
        while cand in taken:
            cand += "'"
        ren[nid] = cand
        taken.add(cand)
    return ren


def concat(second: Idag, first: Idag) -> Idag:
    """Sequential composite: run first, feed its outputs into second.

    Interface weights multiply along each route through the shared border and
    routes to the same endpoint sum; a sum that cancels to zero drops the
    edge. Node ids of first survive unchanged; clashing ids of second get
    primed.
    """
    if first.weights is not second.weights:
        raise ModeMismatch(f"{first.weights!r} vs {second.weights!r}")
    if first.n_out != second.n_in:
        raise InterfaceMismatch(
            f"cannot feed {first.n_out} outputs into {second.n_in} inputs"
        )
    ws = first.weights
    ren = _freshen(set(first.node_ids), second.node_ids)
    nodes = first.nodes + tuple((ren[nid], lbl) for nid, lbl in second.nodes)

    edges: dict[Edge, int] = {}
    # first's sources keep their edges into first's nodes; edges into the
    # border are collected for routing through second.
    border: dict[Vertex, dict[int, int]] = {}
    for (src, dst), w in first.edges.items():
        if isinstance(dst, NodeRef):
            edges[(src, dst)] = w
        else:
            border.setdefault(src, {})[dst.index] = w
    # second's edges, relabelled; those leaving the border are indexed by
    # border position.
    from_border: dict[int, list[tuple[Vertex, int]]] = {}
    for (src, dst), w in second.edges.items():
        dst2: Vertex = NodeRef(ren[dst.id]) if isinstance(dst, NodeRef) else dst
        if isinstance(src, In):
            from_border.setdefault(src.index, []).append((dst2, w))
        else:
            edges[(NodeRef(ren[src.id]), dst2)] = w
    for src, outs in border.items():
        acc: dict[Vertex, int] = {}
        for j, w1 in outs.items():
            for dst2, w2 in from_border.get(j, ()):
                acc[dst2] = ws.add(acc.get(dst2, ws.zero), ws.mul(w1, w2))
        for dst2, w in acc.items():
            if not ws.is_zero(w):
                edges[(src, dst2)] = w
    return Idag(ws, first.n_in, second.n_out, nodes, _attach(edges))


def juxt(d1: Idag, d2: Idag) -> Idag:
    """Parallel composite: d1's interfaces first, then d2's shifted up."""
    if d1.weights is not d2.weights:
        raise ModeMismatch(f"{d1.weights!r} vs {d2.weights!r}")
    ren = _freshen(set(d1.node_ids), d2.node_ids)
    nodes = d1.nodes + tuple((ren[nid], lbl) for nid, lbl in d2.nodes)
    edges: dict[Edge, int] = dict(d1.edges)

    def shift(v: Vertex) -> Vertex:
        if isinstance(v, In):
            return In(v.index + d1.n_in)
        if isinstance(v, Out):
            return Out(v.index + d1.n_out)
        return NodeRef(ren[v.id])

    for (src, dst), w in d2.edges.items():
        edges[(shift(src), shift(dst))] = w
    return Idag(
        d1.weights, d1.n_in + d2.n_in, d1.n_out + d2.n_out, nodes, _attach(edges)
    )


def edge_sort_key(d: Idag) -> Callable[[Edge], tuple]:
    """Deterministic total order on d's edges: inputs, then nodes by sequence
    position, then outputs; used by serialization and rendering."""
    pos = {nid: k for k, nid in enumerate(d.node_ids)}

    def vkey(v: Vertex) -> tuple[int, int]:
        if isinstance(v, In):
            return (0, v.index)
        if isinstance(v, NodeRef):
            return (1, pos[v.id])
        return (2, v.index)

    def key(e: Edge) -> tuple:
        return (vkey(e[0]), vkey(e[1]))

    return key


# ---------------------------------------------------------------------------
# Isomorphism and canonical form


def _joint_refinement(ds: Sequence[Idag]) -> list[dict[str, int]]:
    """Partition refinement over the nodes of several idags at once.

    Colors start from (label, exact weighted interface profiles) and are
    refined by sorted weighted neighbour-color profiles until stable. Ranks
    are assigned by sorting the structured colors, so they are comparable
    across the supplied idags and invariant under node renaming.
    """
    ins: list[dict[str, list[tuple[int, int]]]] = []
    outs: list[dict[str, list[tuple[int, int]]]] = []
    nbr_in: list[dict[str, list[tuple[str, int]]]] = []
    nbr_out: list[dict[str, list[tuple[str, int]]]] = []
    for d in ds:
        i_prof: dict[str, list[tuple[int, int]]] = {nid: [] for nid in d.node_ids}
        o_prof: dict[str, list[tuple[int, int]]] = {nid: [] for nid in d.node_ids}
        n_in_: dict[str, list[tuple[str, int]]] = {nid: [] for nid in d.node_ids}
        n_out_: dict[str, list[tuple[str, int]]] = {nid: [] for nid in d.node_ids}
        for (src, dst), w in d.edges.items():
            if isinstance(src, In) and isinstance(dst, NodeRef):
                i_prof[dst.id].append((src.index, w))
            elif isinstance(src, NodeRef) and isinstance(dst, Out):
                o_prof[src.id].append((dst.index, w))
            elif isinstance(src, NodeRef) and isinstance(dst, NodeRef):
                n_out_[src.id].append((dst.id, w))
                n_in_[dst.id].append((src.id, w))
        ins.append(i_prof)
        outs.append(o_prof)
        nbr_in.append(n_in_)
        nbr_out.append(n_out_)

    color: list[dict[str, tuple]] = [
        {
            nid: (
                d.label_of(nid),
                tuple(sorted(ins[k][nid])),
                tuple(sorted(outs[k][nid])),
            )
            for nid in d.node_ids
        }
        for k, d in enumerate(ds)
    ]

    def densify(structured: list[dict[str, tuple]]) -> list[dict[str, int]]:
        universe = sorted({c for per in structured for c in per.values()})
        rank = {c: i for i, c in enumerate(universe)}
        return [{nid: rank[c] for nid, c in per.items()} for per in structured]

    ranks = densify(color)
    total = sum(len(d.nodes) for d in ds)
    for _ in range(total + 1):
        new_color = [
            {
                nid: (
                    ranks[k][nid],
                    tuple(sorted((ranks[k][src], w) for src, w in nbr_in[k][nid])),
                    tuple(sorted((ranks[k][dst], w) for dst, w in nbr_out[k][nid])),
                )
                for nid in d.node_ids
            }
            for k, d in enumerate(ds)
        ]
        new_ranks = densify(new_color)
        if new_ranks == ranks:
            break
        ranks = new_ranks
    return ranks


def _basic_signature(d: Idag) -> tuple:
    labels = sorted(lbl for _, lbl in d.nodes)
    return (d.weights.name, d.n_in, d.n_out, len(d.nodes), labels, len(d.edges))


def is_isomorphic(d1: Idag, d2: Idag) -> Optional[dict[str, str]]:
    """A node bijection matching labels and all weighted edges pointwise, or
    None. Interfaces must match exactly (inputs and outputs are never
    permuted)."""
    if _basic_signature(d1) != _basic_signature(d2):
        return None
    # Edges between interface vertices are untouched by any node bijection,
    # so they must coincide exactly.
    io1 = {
        e: w
        for e, w in d1.edges.items()
        if not isinstance(e[0], NodeRef) and not isinstance(e[1], NodeRef)
    }
    io2 = {
        e: w
        for e, w in d2.edges.items()
        if not isinstance(e[0], NodeRef) and not isinstance(e[1], NodeRef)
    }
    if io1 != io2:
        return None
    r1, r2 = _joint_refinement([d1, d2])
    by_rank1: dict[int, list[str]] = {}
    by_rank2: dict[int, list[str]] = {}
    for nid, r in r1.items():
        by_rank1.setdefault(r, []).append(nid)
    for nid, r in r2.items():
        by_rank2.setdefault(r, []).append(nid)
    if set(by_rank1) != set(by_rank2):
        return None
    if any(len(by_rank1[r]) != len(by_rank2[r]) for r in by_rank1):
        return None

    nn1: dict[tuple[str, str], int] = {}
    nn2: dict[tuple[str, str], int] = {}
    for (src, dst), w in d1.edges.items():
        if isinstance(src, NodeRef) and isinstance(dst, NodeRef):
            nn1[(src.id, dst.id)] = w
    for (src, dst), w in d2.edges.items():
        if isinstance(src, NodeRef) and isinstance(dst, NodeRef):
            nn2[(src.id, dst.id)] = w

    # Most-constrained-first: smallest color classes get assigned early.
    order = sorted(d1.node_ids, key=lambda nid: (len(by_rank1[r1[nid]]), nid))
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(a: str, b: str) -> bool:
        for a2, b2 in mapping.items():
            if nn1.get((a, a2), 0) != nn2.get((b, b2), 0):
                return False
            if nn1.get((a2, a), 0) != nn2.get((b2, b), 0):
                return False
        return True

    def assign(k: int) -> bool:
        if k == len(order):
            return True
        a = order[k]
        for b in by_rank2[r1[a]]:
            if b in used or not consistent(a, b):
                continue
            mapping[a] = b
            used.add(b)
            if assign(k + 1):
                return True
            del mapping[a]
            used.remove(b)
        return False

    if assign(0):
        return dict(mapping)
    return None


def _ordering_key(d: Idag, order: Sequence[str]) -> tuple:
    pos = {nid: k for k, nid in enumerate(order)}

    def vkey(v: Vertex) -> tuple[int, int]:
        if isinstance(v, In):
            return (0, v.index)
        if isinstance(v, NodeRef):
            return (1, pos[v.id])
        return (2, v.index)

    labels = tuple(d.label_of(nid) for nid in order)
    edges = tuple(
        sorted((vkey(src), vkey(dst), w) for (src, dst), w in d.edges.items())
    )
    return (labels, edges)


def canonical_form(d: Idag, budget: int = CANONICAL_SEARCH_BUDGET) -> Idag:
    """A canonical representative of d's isomorphism class.

    Nodes are renamed "0".."N-1"; two idags are isomorphic iff their canonical
    forms are equal. Same-color nodes left undistinguished by partition
    refinement are ordered by exhaustive search for the lexicographically
    minimal labelled edge list, counting each candidate node placement against
    the step budget (SearchBudgetExceeded beyond).
    """
    (ranks,) = _joint_refinement([d])
    classes: dict[int, list[str]] = {}
    for nid in d.node_ids:
        classes.setdefault(ranks[nid], []).append(nid)
    class_list = [sorted(classes[r]) for r in sorted(classes)]

    if all(len(c) == 1 for c in class_list):
        best_order = [c[0] for c in class_list]
        best_key = _ordering_key(d, best_order)
    else:
        best_key = None
        best_order = None
        steps = 0
        n = len(d.nodes)
        # itertools.product materializes its argument iterables, so refuse
        # oversized searches before enumerating anything.
        total = n * math.prod(math.factorial(len(c)) for c in class_list)
        if total > budget:
            raise SearchBudgetExceeded(
                f"canonical search exceeded {budget} extension steps"
            )
        for combo in itertools.product(
            *(itertools.permutations(c) for c in class_list)
        ):
            steps += n
            if steps > budget:
                raise SearchBudgetExceeded(
                    f"canonical search exceeded {budget} extension steps"
                )
            order = [nid for group in combo for nid in group]
            key = _ordering_key(d, order)
            if best_key is None or key < best_key:
                best_key = key
                best_order = order
        assert best_order is not None and best_key is not None

    labels, edge_triples = best_key
    nodes = tuple((str(k), lbl) for k, lbl in enumerate(labels))

    def unkey(vk: tuple[int, int]) -> Vertex:
        side, idx = vk
        if side == 0:
            return In(idx)
        if side == 1:
            return NodeRef(str(idx))
        return Out(idx)

    edges = {(unkey(sk), unkey(dk)): w for sk, dk, w in edge_triples}
    return Idag(d.weights, d.n_in, d.n_out, nodes, _attach(edges))


# ---------------------------------------------------------------------------
# BOOL-mode quotients and predicates


def _require_bool(d: Idag, what: str) -> None:
    if d.weights is not BOOL:
        raise ModeMismatch(f"{what} requires bool mode, got {d.weights!r}")


def transitive_closure(d: Idag) -> Idag:
    """Add an edge x -> y for every path from x to y through at least one
    internal node. BOOL mode only."""
    _require_bool(d, "transitive_closure")
    succ_nodes: dict[str, list[str]] = {nid: [] for nid in d.node_ids}
    out_edges: dict[str, list[Vertex]] = {nid: [] for nid in d.node_ids}
    into_nodes: dict[Vertex, list[str]] = {}
    for src, dst in d.edges:
        if isinstance(dst, NodeRef):
            into_nodes.setdefault(src, []).append(dst.id)
            if isinstance(src, NodeRef):
                succ_nodes[src.id].append(dst.id)
        if isinstance(src, NodeRef):
            out_edges[src.id].append(dst)

    reach: dict[str, set[str]] = {}
    for nid in d.node_ids:
        seen = {nid}
        frontier = [nid]
        while frontier:
            cur = frontier.pop()
            for nxt in succ_nodes[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        reach[nid] = seen

    edges: dict[Edge, int] = dict(d.edges)
    for src, firsts in into_nodes.items():
        targets: set[Vertex] = set()
        for first_hop in firsts:
            for mid in reach[first_hop]:
                targets.update(out_edges[mid])
        for dst in targets:
            edges[(src, dst)] = 1
    return Idag(d.weights, d.n_in, d.n_out, d.nodes, _attach(edges))


def prune_dangling(d: Idag) -> Idag:
    """Delete internal nodes with no in-edges or no out-edges, repeatedly,
    until none remain. BOOL mode only. The surviving set does not depend on
    deletion order."""
    _require_bool(d, "prune_dangling")
    nodes = list(d.nodes)
    edges = dict(d.edges)
    while True:
        indeg = {nid: 0 for nid, _ in nodes}
        outdeg = {nid: 0 for nid, _ in nodes}
        for src, dst in edges:
            if isinstance(src, NodeRef):
                outdeg[src.id] += 1
            if isinstance(dst, NodeRef):
                indeg[dst.id] += 1
        doomed = {nid for nid, _ in nodes if indeg[nid] == 0 or outdeg[nid] == 0}
        if not doomed:
            break
        nodes = [(nid, lbl) for nid, lbl in nodes if nid not in doomed]
        edges = {
            (src, dst): w
            for (src, dst), w in edges.items()
            if not (isinstance(src, NodeRef) and src.id in doomed)
            and not (isinstance(dst, NodeRef) and dst.id in doomed)
        }
    return Idag(d.weights, d.n_in, d.n_out, tuple(nodes), _attach(edges))


def is_forest(d: Idag) -> bool:
    """True when every input and every internal node has exactly one outgoing
    edge. BOOL mode only."""
    _require_bool(d, "is_forest")
    outdeg: dict[Vertex, int] = {In(i): 0 for i in range(d.n_in)}
    outdeg.update({NodeRef(nid): 0 for nid in d.node_ids})
    for src, _dst in d.edges:
        outdeg[src] += 1
    return all(c == 1 for c in outdeg.values())
