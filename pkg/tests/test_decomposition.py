import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from idag.core import In, Out, canonical_form, identity, make_idag
from idag.decomposition import (
    TopSort,
    count_topological_sortings,
    decompose,
    default_sorting,
    encode_relation,
    interpret,
    is_topological_sorting,
    layer,
    sample_topological_sorting,
    topological_sortings,
    transposition_identities,
)
from idag.errors import IndexOutOfRange, NotAdjacentTransposition, NotATopologicalSorting
from idag.models import FreeIdagModel, MatrixModel, evaluate, matrix, matrix_identity
from idag.randgen import random_idag
from idag.terms import Delta, Id, Nabla, Seq, print_expression
from idag.weights import BOOL, INT, NAT


def _sortings_by_filter(d):
    # independent oracle: filter all node permutations by the edge constraints
    out = []
    ids = sorted(d.node_ids)
    from idag.core import NodeRef

    for perm in itertools.permutations(ids):
        pos = {n: i for i, n in enumerate(perm)}
        if all(
            pos[s.id] < pos[t.id]
            for (s, t) in d.edges
            if isinstance(s, NodeRef) and isinstance(t, NodeRef)
        ):
            out.append(tuple(perm))
    return out


def test_five_sortings(dag31):
    got = [s.order for s in topological_sortings(dag31)]
    assert got == [
        ("a", "b", "c", "d"),
        ("a", "c", "b", "d"),
        ("a", "c", "d", "b"),
        ("c", "a", "b", "d"),
        ("c", "a", "d", "b"),
    ]
    assert sorted(got) == sorted(_sortings_by_filter(dag31))
    assert count_topological_sortings(dag31) == 5
    assert default_sorting(dag31).order == ("a", "b", "c", "d")


def test_node_free_has_one_empty_sorting():
    d = make_idag(2, 2, [], [(In(0), Out(1))])
    assert [s.order for s in topological_sortings(d)] == [()]
    assert count_topological_sortings(d) == 1


def test_chain_has_one_sorting():
    from idag.core import NodeRef

    d = make_idag(0, 0, ["p", "q", "r"], [(NodeRef("p"), NodeRef("q")), (NodeRef("q"), NodeRef("r"))])
    assert [s.order for s in topological_sortings(d)] == [("p", "q", "r")]


def test_counting_matches_enumeration(rng):
    for _ in range(30):
        d = random_idag(rng, rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 6), 0.4, BOOL)
        sortings = list(topological_sortings(d))
        assert count_topological_sortings(d) == len(sortings)
        assert len(set(s.order for s in sortings)) == len(sortings)
        assert all(is_topological_sorting(d, s) for s in sortings)


def test_sampling_is_valid_and_covers(dag31, rng):
    seen = set()
    for _ in range(400):
        s = sample_topological_sorting(dag31, rng)
        assert is_topological_sorting(dag31, s)
        seen.add(s.order)
    assert len(seen) == 5


def test_is_topological_sorting_negatives(dag31):
    assert not is_topological_sorting(dag31, TopSort(("b", "a", "c", "d")))
    assert not is_topological_sorting(dag31, TopSort(("a", "b", "c")))
    assert not is_topological_sorting(dag31, TopSort(("a", "b", "c", "z")))
    with pytest.raises(NotATopologicalSorting):
        decompose(dag31, TopSort(("b", "a", "c", "d")))


# ---------------------------------------------------------------------------
# layers


EXPECTED_LAYERS = [
    ((1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)),
    ((1, 0, 0, 0, 1), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 1)),
    (
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 1),
        (0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 1, 0),
    ),
    (
        (1, 0, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 1),
        (0, 0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 0, 1, 1),
    ),
    ((0,), (0,), (0,), (0,), (1,), (0,), (1,)),
]


def test_layer_matrices(dag31):
    s = default_sorting(dag31)
    for k, want in enumerate(EXPECTED_LAYERS):
        assert layer(dag31, s, k).entries == want


def test_layer_bounds(dag31):
    s = default_sorting(dag31)
    with pytest.raises(IndexOutOfRange):
        layer(dag31, s, 5)
    with pytest.raises(IndexOutOfRange):
        layer(dag31, s, -1)
    with pytest.raises(NotATopologicalSorting):
        layer(dag31, TopSort(("b", "a", "c", "d")), 0)


def test_layers_multiply_to_the_relation(dag31):
    # with node images = identity, the plain layer product is the
    # interface reachability relation (BOOL arithmetic saturates)
    s = default_sorting(dag31)
    acc = layer(dag31, s, 0)
    for k in range(1, 5):
        acc = acc.then(layer(dag31, s, k))
    assert acc.entries == ((1,), (1,), (1,))


# ---------------------------------------------------------------------------
# encode_relation


def test_encode_identity():
    assert encode_relation(matrix_identity(3, NAT)) == Id(3)
    assert encode_relation(matrix_identity(0, BOOL)) == Id(0)


def test_encode_single_merge():
    assert encode_relation(matrix([[1], [1]], NAT)) == Nabla()


def test_encode_doubling():
    e = encode_relation(matrix([[2]], NAT))
    assert e == Seq(Delta(), Nabla())
    assert evaluate(e, MatrixModel(NAT)).entries == ((2,),)


def test_encode_discard_and_feed():
    # zero row -> eps; zero column -> eta
    e = encode_relation(matrix([[0], [1]], NAT))
    assert evaluate(e, MatrixModel(NAT)).entries == ((0,), (1,))
    e = encode_relation(matrix([[0, 1]], NAT))
    assert evaluate(e, MatrixModel(NAT)).entries == ((0, 1),)


def test_encode_negative_entries():
    m = matrix([[-2, 1]], INT)
    e = encode_relation(m)
    assert evaluate(e, MatrixModel(INT)) == m


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_encode_inverts_through_eval(seed):
    from idag.randgen import random_matrix

    rng = random.Random(seed)
    ws = (BOOL, NAT, INT)[seed % 3]
    m = random_matrix(rng, rng.randint(0, 6), rng.randint(0, 6), ws)
    assert evaluate(encode_relation(m), MatrixModel(ws)) == m


# ---------------------------------------------------------------------------
# decompose / interpret


def test_decompose_node_free_is_relation_encoding():
    d = make_idag(2, 2, [], {(In(0), Out(1)): 1, (In(1), Out(0)): 1})
    e = decompose(d, TopSort(()))
    assert e == encode_relation(matrix([[0, 1], [1, 0]], BOOL))


def test_decompose_round_trip(dag31):
    s = default_sorting(dag31)
    e = decompose(dag31, s)
    back = evaluate(e, FreeIdagModel(BOOL))
    assert canonical_form(back) == canonical_form(dag31)


def test_decompose_other_sorting_same_value(dag31):
    a = decompose(dag31, TopSort(("a", "b", "c", "d")))
    b = decompose(dag31, TopSort(("a", "c", "b", "d")))
    assert a != b
    assert print_expression(a) != print_expression(b)
    free = FreeIdagModel(BOOL)
    assert canonical_form(evaluate(a, free)) == canonical_form(evaluate(b, free))


def test_interpret_identity():
    for model in (FreeIdagModel(NAT), MatrixModel(NAT)):
        got = interpret(identity(3), TopSort(()), model)
        assert model.equal(got, model.identity(3))


def test_interpret_matches_eval_of_decompose(rng):
    for _ in range(25):
        ws = (BOOL, NAT, INT)[rng.randint(0, 2)]
        d = random_idag(rng, rng.randint(0, 4), rng.randint(0, 4), rng.randint(0, 6), 0.4, ws, labels=("•", "x"))
        s = sample_topological_sorting(d, rng)
        e = decompose(d, s)
        for model in (FreeIdagModel(ws), MatrixModel(ws, {"x": 2 if ws is not BOOL else 0})):
            assert model.equal(interpret(d, s, model), evaluate(e, model))


def test_interpret_worked_example_all_sortings(dag31):
    mm = MatrixModel(NAT)
    values = {interpret(dag31, s, mm).entries for s in topological_sortings(dag31)}
    assert values == {((3,), (2,), (3,))}


# ---------------------------------------------------------------------------
# transpositions


def test_transposition_worked_example(dag31):
    rep = transposition_identities(
        dag31, TopSort(("a", "b", "c", "d")), TopSort(("a", "c", "b", "d")), 1
    )
    assert rep.all_ok
    assert rep.position == 1
    assert rep.prefix_layers_equal
    assert rep.swapped_pair_composite_equal
    assert rep.swap_threads_middle_layers
    assert rep.swap_absorbed_by_final_layer
    assert rep.node_box_slides_past_next_layer


def test_transposition_rejects_equal_sortings(dag31):
    s = default_sorting(dag31)
    with pytest.raises(NotAdjacentTransposition):
        transposition_identities(dag31, s, s, 1)


def test_transposition_rejects_bad_index(dag31):
    a = TopSort(("a", "b", "c", "d"))
    b = TopSort(("a", "c", "b", "d"))
    with pytest.raises(IndexOutOfRange):
        transposition_identities(dag31, a, b, 3)
    with pytest.raises(NotAdjacentTransposition):
        transposition_identities(dag31, a, b, 2)


def test_transposition_rejects_non_sorting(dag31):
    a = TopSort(("a", "b", "c", "d"))
    bad = TopSort(("b", "a", "c", "d"))
    with pytest.raises(NotATopologicalSorting):
        transposition_identities(dag31, bad, a, 0)
