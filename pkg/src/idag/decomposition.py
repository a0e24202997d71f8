"""Slicing idags into generator expressions, one node per slice.

Fix a topological sorting sigma of an idag d with n inputs. Reading nodes off
in sigma-order turns d into an alternation of plain weight matrices and
single-node boxes: before node k is emitted, the live wires are the n inputs
plus the k nodes already emitted, and the k-th slice is the
(n+k) x (n+k+1) matrix keeping every live wire and adding one column with the
in-weights of node sigma_k; a final (n+|N|) x m matrix routes live wires into
the outputs. decompose() renders each slice with encode_relation and
interleaves node boxes; interpret() skips the syntax and composes the slices
directly in any model. Both exist so tests can play them against each other.

Different sortings yield different expressions with equal value in every
model; transposition_identities() checks the five local identities that drive
that invariance for one adjacent swap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .core import Idag, In, NodeRef, Out
from .errors import (
    IndexOutOfRange,
    NotAdjacentTransposition,
    NotATopologicalSorting,
)
from .models import (
    MatrixModel,
    MatrixMorphism,
    Model,
    matrix_permutation,
)
from .terms import (
    Anti,
    Delta,
    Eps,
    Eta,
    Expression,
    Id,
    Nabla,
    Node,
    Sym,
    Ten,
    seq_all,
    ten_all,
)
from .weights import INT, NAT


@dataclass(frozen=True)
class TopSort:
    """A topological sorting: the idag's node ids, every edge pointing
    forward."""

    order: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.order)


SortLike = Union[TopSort, Sequence[str]]


def _node_succ_pred(d: Idag) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    succ: dict[str, set[str]] = {nid: set() for nid in d.node_ids}
    pred: dict[str, set[str]] = {nid: set() for nid in d.node_ids}
    for src, dst in d.edges:
        if isinstance(src, NodeRef) and isinstance(dst, NodeRef):
            succ[src.id].add(dst.id)
            pred[dst.id].add(src.id)
    return succ, pred


def is_topological_sorting(d: Idag, sort: SortLike) -> bool:
    order = tuple(sort.order if isinstance(sort, TopSort) else sort)
    if sorted(order) != sorted(d.node_ids):
        return False
    pos = {nid: k for k, nid in enumerate(order)}
    for src, dst in d.edges:
        if isinstance(src, NodeRef) and isinstance(dst, NodeRef):
            if pos[src.id] >= pos[dst.id]:
                return False
    return True


def _require_sorting(d: Idag, sort: SortLike) -> TopSort:
    ts = sort if isinstance(sort, TopSort) else TopSort(tuple(sort))
    if not is_topological_sorting(d, ts):
        raise NotATopologicalSorting(f"{list(ts.order)!r} does not sort {d!r}")
    return ts


def topological_sortings(d: Idag) -> Iterator[TopSort]:
    """All topological sortings, lazily, in lexicographic node-id order; the
    first is the deterministic default sorting."""
    succ, pred = _node_succ_pred(d)
    indeg = {nid: len(pred[nid]) for nid in d.node_ids}
    order: list[str] = []
    n = len(d.nodes)

    def rec() -> Iterator[TopSort]:
        if len(order) == n:
            yield TopSort(tuple(order))
            return
        placed = set(order)
        ready = sorted(
            nid for nid, k in indeg.items() if k == 0 and nid not in placed
        )
        for nid in ready:
            order.append(nid)
            for nxt in succ[nid]:
                indeg[nxt] -= 1
            yield from rec()
            for nxt in succ[nid]:
                indeg[nxt] += 1
            order.pop()

    return rec()


def default_sorting(d: Idag) -> TopSort:
    return next(topological_sortings(d))


def count_topological_sortings(d: Idag) -> int:
    _, pred = _node_succ_pred(d)
    memo: dict[frozenset, int] = {}

    def count(remaining: frozenset) -> int:
        if not remaining:
            return 1
        if remaining in memo:
            return memo[remaining]
        total = 0
        for nid in remaining:
            if not (pred[nid] & remaining):
                total += count(remaining - {nid})
        memo[remaining] = total
        return total

    return count(frozenset(d.node_ids))


def sample_topological_sorting(d: Idag, rng: random.Random) -> TopSort:
    """One topological sorting drawn uniformly, by linear-extension
    counting."""
    _, pred = _node_succ_pred(d)
    memo: dict[frozenset, int] = {}

    def count(remaining: frozenset) -> int:
        if not remaining:
            return 1
        if remaining in memo:
            return memo[remaining]
        total = 0
        for nid in remaining:
            if not (pred[nid] & remaining):
                total += count(remaining - {nid})
        memo[remaining] = total
        return total

    order: list[str] = []
    remaining = frozenset(d.node_ids)
    while remaining:
        r = rng.randrange(count(remaining))
        for nid in sorted(remaining):
            if pred[nid] & remaining:
                continue
            c = count(remaining - {nid})
            if r < c:
                order.append(nid)
                remaining = remaining - {nid}
                break
            r -= c
    return TopSort(tuple(order))


# ---------------------------------------------------------------------------
# Layers


def layer(d: Idag, sort: SortLike, k: int) -> MatrixMorphism:
    """The k-th slice of d along the sorting, as a weight matrix.

    For k < |N| the shape is (n+k) x (n+k+1): an identity block carrying the
    live wires plus a last column with the in-weights of node sort[k] (rows
    0..n-1 from the inputs, row n+l from the l-th emitted node). For k = |N|
    the shape is (n+|N|) x m, the weights of edges into the outputs.
    """
    ts = _require_sorting(d, sort)
    n = d.n_in
    total = len(ts.order)
    if not 0 <= k <= total:
        raise IndexOutOfRange(f"layer index {k} not in 0..{total}")
    if k < total:
        new = NodeRef(ts.order[k])
        arr = np.zeros((n + k, n + k + 1), dtype=np.int64)
        for r in range(n + k):
            arr[r, r] = 1
        for i in range(n):
            arr[i, n + k] = d.weight(In(i), new)
        for ell in range(k):
            arr[n + ell, n + k] = d.weight(NodeRef(ts.order[ell]), new)
        return MatrixMorphism(d.weights, arr)
    arr = np.zeros((n + total, d.n_out), dtype=np.int64)
    for j in range(d.n_out):
        for i in range(n):
            arr[i, j] = d.weight(In(i), Out(j))
        for ell in range(total):
            arr[n + ell, j] = d.weight(NodeRef(ts.order[ell]), Out(j))
    return MatrixMorphism(d.weights, arr)


# ---------------------------------------------------------------------------
# Rendering weight matrices as expressions


def _fan_out(r: int) -> Expression:
    if r == 0:
        return Eps()
    if r == 1:
        return Id(1)
    return seq_all([Delta()] + [Ten(Delta(), Id(q)) for q in range(1, r - 1)])


def _fan_in(c: int) -> Expression:
    if c == 0:
        return Eta()
    if c == 1:
        return Id(1)
    return seq_all([Ten(Nabla(), Id(q)) for q in range(c - 2, 0, -1)] + [Nabla()])


def _perm_layers(perm: Sequence[int]) -> list[list[int]]:
    # Odd-even transposition sort; each returned layer lists the left
    # positions of disjoint adjacent swaps.
    cur = list(perm)
    n = len(cur)
    target = list(range(n))
    layers: list[list[int]] = []
    for rnd in range(n):
        if cur == target:
            break
        swaps: list[int] = []
        q = rnd % 2
        while q + 1 < n:
            if cur[q] > cur[q + 1]:
                cur[q], cur[q + 1] = cur[q + 1], cur[q]
                swaps.append(q)
            q += 2
        if swaps:
            layers.append(swaps)
    assert cur == target
    return layers


def permutation_expression(perm: Sequence[int]) -> Expression:
    """An id/sym(1,1) expression routing input s to output perm[s]."""
    n = len(perm)
    layers = _perm_layers(perm)
    if not layers:
        return Id(n)
    parts = []
    for swaps in layers:
        swapset = set(swaps)
        pieces: list[Expression] = []
        q = 0
        while q < n:
            if q in swapset:
                pieces.append(Sym(1, 1))
                q += 2
            else:
                pieces.append(Id(1))
                q += 1
        parts.append(ten_all(pieces))
    return seq_all(parts)


def encode_relation(mat: MatrixMorphism) -> Expression:
    """An expression over copy/discard/merge/unit (plus anti for negative
    entries) and wire crossings whose evaluation in any matrix model is
    exactly mat, and whose free evaluation is the node-free idag with weight
    matrix mat.

    Copies fan out per input (source-major: target index ascending), negative
    copies pass through anti, a routing permutation rearranges copies to
    target-major order, and merges fan in per output. An identity matrix
    encodes as id(n).
    """
    entries = mat.entries
    n, m = mat.n_in, mat.n_out
    copies: list[tuple[int, int]] = []  # (source, target), multiplicity |w|
    negatives: list[bool] = []
    for i in range(n):
        for j in range(m):
            w = entries[i][j]
            for _ in range(abs(w)):
                copies.append((i, j))
                negatives.append(w < 0)
    r = [sum(abs(entries[i][j]) for j in range(m)) for i in range(n)]
    c = [sum(abs(entries[i][j]) for i in range(n)) for j in range(m)]

    parts: list[Expression] = []
    if n > 0 and any(x != 1 for x in r):
        parts.append(ten_all([_fan_out(x) for x in r]))
    if any(negatives):
        parts.append(ten_all([Anti() if neg else Id(1) for neg in negatives]))
    # copies sit in source-major order; rank each by target-major position
    tgt_rank = sorted(range(len(copies)), key=lambda s: (copies[s][1], copies[s][0]))
    perm = [0] * len(copies)
    for t, s in enumerate(tgt_rank):
        perm[s] = t
    if perm != list(range(len(perm))):
        parts.append(permutation_expression(perm))
    if m > 0 and any(x != 1 for x in c):
        parts.append(ten_all([_fan_in(x) for x in c]))
    if not parts:
        return Id(n)
    return seq_all(parts)


# ---------------------------------------------------------------------------
# Decomposition and direct interpretation


def decompose(d: Idag, sort: SortLike) -> Expression:
    """An expression evaluating to d (up to isomorphism in the free model,
    exactly in matrix models): encoded slices interleaved with one node box
    per sorted node."""
    ts = _require_sorting(d, sort)
    n = d.n_in
    parts: list[Expression] = [encode_relation(layer(d, ts, 0))]
    for k, nid in enumerate(ts.order):
        box: Expression = Node(d.label_of(nid))
        if n + k > 0:
            box = Ten(Id(n + k), box)
        parts.append(box)
        parts.append(encode_relation(layer(d, ts, k + 1)))
    return seq_all(parts)


def interpret(d: Idag, sort: SortLike, model: Model):
    """Compose d's slices directly in a model, bypassing expression syntax.

    Independent of decompose(); evaluate(decompose(d, s), model) must agree
    with interpret(d, s, model) in every model, which the tests exercise.
    """
    ts = _require_sorting(d, sort)
    n = d.n_in
    mor = model.relation(layer(d, ts, 0))
    for k, nid in enumerate(ts.order):
        box = model.generator(Node(d.label_of(nid)))
        if n + k > 0:
            box = model.tensor(model.identity(n + k), box)
        mor = model.compose(mor, box)
        mor = model.compose(mor, model.relation(layer(d, ts, k + 1)))
    return mor


# ---------------------------------------------------------------------------
# Adjacent transpositions


@dataclass(frozen=True)
class TranspositionReport:
    """Outcome of the five local identities for one adjacent swap of a
    sorting; all true iff the swap provably preserves every model's value."""

    position: int
    prefix_layers_equal: bool
    swapped_pair_composite_equal: bool
    swap_threads_middle_layers: bool
    swap_absorbed_by_final_layer: bool
    node_box_slides_past_next_layer: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.prefix_layers_equal
            and self.swapped_pair_composite_equal
            and self.swap_threads_middle_layers
            and self.swap_absorbed_by_final_layer
            and self.node_box_slides_past_next_layer
        )


def _default_check_model(d: Idag) -> MatrixModel:
    ws = INT if d.weights is INT else NAT
    labels = sorted({lbl for _, lbl in d.nodes})
    images = {lbl: 2 + k for k, lbl in enumerate(labels)}
    return MatrixModel(ws, images)


def _block_swap(n_prefix: int, n_suffix: int, ws) -> MatrixMorphism:
    perm = list(range(n_prefix)) + [n_prefix + 1, n_prefix] + [
        n_prefix + 2 + t for t in range(n_suffix)
    ]
    return matrix_permutation(perm, ws)


def transposition_identities(
    d: Idag,
    sort_a: SortLike,
    sort_b: SortLike,
    i: int,
    model: Optional[Model] = None,
) -> TranspositionReport:
    """Check the five identities relating the slices of two sortings that
    differ by swapping positions i and i+1.

    The four layer identities are matrix identities over d's own weight
    system; the node-box identity is checked in the given model (default: a
    matrix model with distinct nontrivial images per label).
    """
    sa = _require_sorting(d, sort_a)
    sb = _require_sorting(d, sort_b)
    total = len(sa.order)
    if not 0 <= i <= total - 2:
        raise IndexOutOfRange(f"swap position {i} not in 0..{total - 2}")
    swapped = list(sa.order)
    swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
    if list(sb.order) != swapped:
        raise NotAdjacentTransposition(
            f"{list(sb.order)!r} is not {list(sa.order)!r} with positions "
            f"{i} and {i + 1} swapped"
        )
    n = d.n_in
    ws = d.weights
    la = [layer(d, sa, k) for k in range(total + 1)]
    lb = [layer(d, sb, k) for k in range(total + 1)]

    prefix = all(la[j] == lb[j] for j in range(i))

    pair_a = la[i].then(la[i + 1])
    pair_b = lb[i].then(lb[i + 1]).then(_block_swap(n + i, 0, ws))
    pair_ok = pair_a == pair_b

    middle_ok = True
    for j in range(i + 2, total):
        pre = _block_swap(n + i, j - i - 2, ws)
        post = _block_swap(n + i, j - i - 1, ws)
        if pre.then(la[j]) != lb[j].then(post):
            middle_ok = False
            break

    pre_final = _block_swap(n + i, total - i - 2, ws)
    final_ok = pre_final.then(la[total]) == lb[total]

    check_model = model if model is not None else _default_check_model(d)
    node_ok = True
    for ts in (sa, sb):
        mid = check_model.relation(layer(d, ts, i + 1))
        box = check_model.generator(Node(d.label_of(ts.order[i])))
        left = check_model.compose(
            check_model.tensor(check_model.identity(n + i), box), mid
        )
        right = check_model.compose(
            mid,
            check_model.tensor(
                check_model.tensor(check_model.identity(n + i), box),
                check_model.identity(1),
            ),
        )
        if not check_model.equal(left, right):
            node_ok = False
            break

    return TranspositionReport(
        position=i,
        prefix_layers_equal=prefix,
        swapped_pair_composite_equal=pair_ok,
        swap_threads_middle_layers=middle_ok,
        swap_absorbed_by_final_layer=final_ok,
        node_box_slides_past_next_layer=node_ok,
    )
