import random

import pytest
from hypothesis import given, settings, strategies as st

import idag.models as models
from idag.core import In, NodeRef, Out, make_idag, transitive_closure
from idag.errors import InterfaceMismatch, ModeMismatch, UnsupportedGenerator
from idag.models import (
    FreeIdagModel,
    LoopsModel,
    MatrixModel,
    evaluate,
    free_generator_image,
    loops_eval,
    loops_identity,
    matrix,
    matrix_identity,
    matrix_permutation,
)
from idag.terms import (
    Anti,
    Delta,
    Eps,
    Eta,
    Id,
    Nabla,
    Node,
    Seq,
    Sym,
    Ten,
    arity_of,
    parse,
    seq_all,
)
from idag.weights import BOOL, INT, NAT


# ---------------------------------------------------------------------------
# generator images in the free model


def test_free_images():
    assert free_generator_image(Eta(), BOOL) == make_idag(0, 1, [], {})
    assert free_generator_image(Nabla(), BOOL) == make_idag(2, 1, [], [(In(0), Out(0)), (In(1), Out(0))])
    assert free_generator_image(Eps(), BOOL) == make_idag(1, 0, [], {})
    assert free_generator_image(Delta(), BOOL) == make_idag(1, 2, [], [(In(0), Out(0)), (In(0), Out(1))])
    node = free_generator_image(Node("x"), NAT)
    assert len(node.nodes) == 1 and node.label_of(node.node_ids[0]) == "x"
    assert node.weight(In(0), NodeRef(node.node_ids[0])) == 1
    anti = free_generator_image(Anti(), INT)
    assert dict(anti.edges) == {(In(0), Out(0)): -1}
    with pytest.raises(UnsupportedGenerator):
        free_generator_image(Anti(), NAT)


# ---------------------------------------------------------------------------
# matrix model


def test_matrix_examples():
    assert evaluate(parse("delta ; nabla"), MatrixModel(NAT)).entries == ((2,),)
    assert evaluate(parse("nabla ; delta"), MatrixModel(NAT)).entries == ((1, 1), (1, 1))
    assert evaluate(parse("delta ; nabla"), MatrixModel(BOOL)).entries == ((1,),)
    hopf = parse("delta ; (anti * id(1)) ; nabla")
    assert evaluate(hopf, MatrixModel(INT)).entries == ((0,),)
    assert evaluate(hopf, MatrixModel(INT)) == evaluate(parse("eps ; eta"), MatrixModel(INT))


def test_matrix_constructors():
    m = matrix([[1, 2], [0, 3]], NAT)
    assert m.n_in == 2 and m.n_out == 2
    assert matrix_identity(3, INT).entries == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert matrix_permutation([1, 0], BOOL).entries == ((0, 1), (1, 0))
    assert matrix([], NAT, n=0, m=2).n_out == 2


def test_matrix_then_errors():
    a = matrix([[1]], NAT)
    b = matrix([[1], [1]], NAT)
    with pytest.raises(InterfaceMismatch):
        a.then(b)
    with pytest.raises(ModeMismatch):
        a.then(matrix([[1]], INT))


def test_matrix_bool_clip():
    fan = matrix([[1, 1]], BOOL)
    merge = matrix([[1], [1]], BOOL)
    assert fan.then(merge).entries == ((1,),)


def test_matrix_json_shape():
    obj = matrix([[1, 2]], NAT).to_json_obj()
    assert obj == {"mode": "nat", "inputs": 1, "outputs": 2, "entries": [[1, 2]]}


def test_matrix_lambda_images():
    mm = MatrixModel(NAT, {"x": 3})
    assert evaluate(Node("x"), mm).entries == ((3,),)
    assert evaluate(Node("unlisted"), mm).entries == ((1,),)
    mm2 = MatrixModel(INT, {"x": matrix([[-2]], INT)})
    assert evaluate(Seq(Node("x"), Node("x")), mm2).entries == ((4,),)


def test_matrix_rejects_anti_without_negatives():
    with pytest.raises(UnsupportedGenerator):
        evaluate(Anti(), MatrixModel(NAT))
    with pytest.raises(UnsupportedGenerator):
        evaluate(Anti(), MatrixModel(BOOL))


# ---------------------------------------------------------------------------
# loops model


def test_loops_examples():
    assert loops_eval(parse("node[x] ; node[y]")) == models.LoopsMorphism((0,), (("y", "x"),))
    assert loops_eval(parse("sym(1,1)")) == models.LoopsMorphism((1, 0), ((), ()))
    assert loops_eval(parse("(node[x] * id(1)) ; sym(1,1)")) == models.LoopsMorphism(
        (1, 0), (("x",), ())
    )
    assert loops_eval(Id(3)) == loops_identity(3)


def test_loops_rejects_structural_generators():
    for e in (Eta(), Nabla(), Eps(), Delta(), Anti()):
        with pytest.raises(UnsupportedGenerator):
            evaluate(e, LoopsModel())


def test_loops_composition_formula():
    a = models.LoopsMorphism((1, 0), (("x",), ()))
    b = models.LoopsMorphism((0, 1), (("u",), ("v",)))
    c = a.then(b)
    assert c.perm == (1, 0)
    # wire 0 passes through a (word x, lands on 1), then picks up b's word at 1
    assert c.words == (("v", "x"), ("u",))


def _free_path_reading(d):
    """Recover (perm, words) from a free-model value of a node/sym expression:
    follow each input's unique path, collecting labels."""
    succ = {}
    for (src, dst), _ in d.edges.items():
        assert src not in succ
        succ[src] = dst
    perm = [None] * d.n_in
    words = []
    for i in range(d.n_in):
        v = succ[In(i)]
        picked = []
        while isinstance(v, NodeRef):
            picked.append(d.label_of(v.id))
            v = succ[v]
        perm[i] = v.index
        words.append(tuple(reversed(picked)))
    return tuple(perm), tuple(words)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_loops_agrees_with_free_model(seed):
    rng = random.Random(seed)
    width = rng.randint(0, 4)
    rows = [_consume_row(rng, width, True) for _ in range(rng.randint(1, 4))]
    e = seq_all(rows)
    got = loops_eval(e)
    d = evaluate(e, FreeIdagModel(BOOL))
    perm, words = _free_path_reading(d)
    assert got.perm == perm
    assert got.words == words


# ---------------------------------------------------------------------------
# PROP laws, uniformly over models


from helpers import consume_row as _consume_row  # noqa: E402


def _models_for(seed):
    ws = (BOOL, NAT, INT)[seed % 3]
    return [
        FreeIdagModel(ws),
        MatrixModel(ws, {"x": 2 if ws is not BOOL else 0, "y": 3 if ws is not BOOL else 1}),
    ]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_model_composition_laws(seed):
    rng = random.Random(seed)
    e1 = _consume_row(rng, rng.randint(0, 4), False)
    n1, m1 = arity_of(e1)
    e2 = _consume_row(rng, m1, False)
    _, m2 = arity_of(e2)
    e3 = _consume_row(rng, m2, False)
    for model in _models_for(seed):
        lhs = evaluate(Seq(Seq(e1, e2), e3), model)
        rhs = evaluate(Seq(e1, Seq(e2, e3)), model)
        assert model.equal(lhs, rhs)
        assert model.equal(evaluate(Seq(e1, Id(m1)), model), evaluate(e1, model))
        assert model.equal(evaluate(Seq(Id(n1), e1), model), evaluate(e1, model))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_model_interchange_and_symmetry(seed):
    rng = random.Random(seed)
    e1 = _consume_row(rng, rng.randint(0, 3), False)
    n1, m1 = arity_of(e1)
    f1 = _consume_row(rng, m1, False)
    e2 = _consume_row(rng, rng.randint(0, 3), False)
    n2, m2 = arity_of(e2)
    f2 = _consume_row(rng, m2, False)
    for model in _models_for(seed):
        lhs = evaluate(Seq(Ten(e1, e2), Ten(f1, f2)), model)
        rhs = evaluate(Ten(Seq(e1, f1), Seq(e2, f2)), model)
        assert model.equal(lhs, rhs)
        nat_l = evaluate(Seq(Ten(e1, e2), Sym(m1, m2)), model)
        nat_r = evaluate(Seq(Sym(n1, n2), Ten(e2, e1)), model)
        assert model.equal(nat_l, nat_r)


# ---------------------------------------------------------------------------
# bridge: BOOL matrix = interface reachability of the free value


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_bool_matrix_is_reachability(seed):
    rng = random.Random(seed)
    e = _consume_row(rng, rng.randint(0, 4), False)
    e = Seq(e, _consume_row(rng, arity_of(e)[1], False))
    mat = evaluate(e, MatrixModel(BOOL))
    d = evaluate(e, FreeIdagModel(BOOL))
    tc = transitive_closure(d)
    for i in range(d.n_in):
        for j in range(d.n_out):
            assert mat.entries[i][j] == tc.weight(In(i), Out(j))


# ---------------------------------------------------------------------------
# deliberate break: swapping the merge/copy images must fail the axiom suite


def test_mutant_images_fail_axioms(monkeypatch):
    import idag.selftest as selftest

    real = models.free_generator_image

    def swapped(gen, mode):
        if isinstance(gen, Nabla):
            d = real(Delta(), mode)
            return d
        if isinstance(gen, Delta):
            return real(Nabla(), mode)
        return real(gen, mode)

    monkeypatch.setattr(models, "free_generator_image", swapped)
    res = selftest.suite_axioms()
    assert res.failures

    lines = []
    monkeypatch.setattr(selftest, "REDUCED", selftest.REDUCED[:1])
    assert selftest.run_selftest(seed=0, out=lines.append) is False
    assert any("axioms" in ln and "FAIL" in ln for ln in lines)


def test_evaluate_type_checks_first():
    from idag.errors import TypeMismatch

    with pytest.raises(TypeMismatch):
        evaluate(Seq(Nabla(), Nabla()), MatrixModel(NAT))
