import pytest

from oracles import random_allen_qcn
from qualadapt.qcn import QCN, Parameter, ParamKind, QualVariable, var
from qualadapt.substitution import (
    AtomicSubstitution,
    Substitution,
    SubstKind,
    apply,
    apply_qcn,
    classify,
    decompose,
    parse_substitution,
)

X = Parameter("x", ParamKind.PLACEHOLDER)
MUSHROOM, CARROT = Parameter("mushroom"), Parameter("carrot")


def test_apply_to_variable():
    s = Substitution.of(("mushroom", "carrot"))
    assert apply(s, var("cook", "mushroom")) == var("cook", "carrot")
    assert apply(s, var("cook", "rice")) == var("cook", "rice")
    assert apply(s, MUSHROOM) == CARROT


def test_empty_chain_is_identity(allen, rng):
    q = random_allen_qcn(rng, allen, 4)
    assert apply(Substitution(), q) == q


def test_chain_applies_left_to_right():
    s = Substitution((AtomicSubstitution(MUSHROOM, X), AtomicSubstitution(X, CARROT)))
    assert apply(s, var("cook", "mushroom")) == var("cook", "carrot")


def test_trivial_atom_rejected():
    with pytest.raises(ValueError):
        AtomicSubstitution(MUSHROOM, MUSHROOM)


@pytest.mark.parametrize("atoms, kind", [
    ([(MUSHROOM, CARROT)], SubstKind.CONCRETE),
    ([(MUSHROOM, X)], SubstKind.ABSTRACTION),
    ([(X, CARROT)], SubstKind.REFINEMENT),
    ([(MUSHROOM, X), (X, CARROT)], SubstKind.MIXED),
    ([], SubstKind.CONCRETE),
])
def test_classify(atoms, kind):
    s = Substitution(tuple(AtomicSubstitution(a, b) for a, b in atoms))
    assert classify(s) is kind


def test_decompose_single():
    alpha, rho = decompose(Substitution.of(("mushroom", "carrot")))
    x1 = Parameter("x1", ParamKind.PLACEHOLDER)
    assert alpha.chain == (AtomicSubstitution(MUSHROOM, x1),)
    assert rho.chain == (AtomicSubstitution(x1, CARROT),)


def test_decompose_empty():
    assert decompose(Substitution()) == (Substitution(), Substitution())


def test_decompose_avoids_taken_names():
    alpha, _ = decompose(Substitution.of(("a", "c"), ("b", "d")), avoid={"x1", "x3"})
    assert [a.new.name for a in alpha.chain] == ["x2", "x4"]


def test_decompose_preconditions():
    with pytest.raises(ValueError):
        decompose(Substitution((AtomicSubstitution(MUSHROOM, X),)))
    with pytest.raises(ValueError):
        decompose(Substitution.of(("a", "b"), ("a", "c")))


def test_decompose_round_trip(allen, rng):
    params = ["a", "b", "c", "d", "e"]
    for _ in range(50):
        olds = rng.sample(params, rng.randint(0, 3))
        s = Substitution.of(*[(p, rng.choice([q for q in params if q != p])) for p in olds])
        alpha, rho = decompose(s)
        assert classify(alpha) in (SubstKind.ABSTRACTION, SubstKind.CONCRETE)
        assert classify(rho) in (SubstKind.REFINEMENT, SubstKind.CONCRETE)
        if s.chain:
            assert classify(alpha) is SubstKind.ABSTRACTION
            assert classify(rho) is SubstKind.REFINEMENT
        variables = [var(f, *rng.sample(params, rng.randint(0, 2))) for f in "fgh"]
        for v in variables:
            assert apply(rho, apply(alpha, v)) == apply(s, v) == apply(alpha.then(rho), v)
        q = QCN(allen, [], [(u, frozenset(rng.sample(allen.relations, 3)), v)
                           for u, v in zip(variables, variables[1:]) if u != v])
        assert apply(rho, apply(alpha, q)) == apply(s, q)


def test_application_keeps_labels_without_collisions(allen):
    q = QCN(allen, [], [(var("cook", "mushroom"), "f", var("cook", "rice"))])
    out, merged = apply_qcn(Substitution.of(("mushroom", "carrot")), q)
    assert merged == []
    assert [c.label for c in out.constraints()] == [c.label for c in q.constraints()]


def test_collision_intersects_labels(allen):
    a, b, r = var("cook", "a"), var("cook", "b"), var("cook", "r")
    q = QCN(allen, [], [(a, {"b", "m"}, r), (b, {"m", "o"}, r), (a, {"eq", "s"}, b)])
    out, merged = apply_qcn(Substitution.of(("a", "c"), ("b", "c")), q)
    assert merged == [(a, b)]
    assert out.label(var("cook", "c"), r) == {"m"}
    assert not out.contradictory
    clash = QCN(allen, [], [(a, "b", b)])
    assert apply(Substitution.of(("a", "c"), ("b", "c")), clash).contradictory


def test_parse_substitution():
    s = parse_substitution("mushroom->carrot, a -> b")
    assert s == Substitution.of(("mushroom", "carrot"), ("a", "b"))
    assert str(s) == "mushroom->carrot,a->b"
    for bad in ("mushroom", "a->", "->b", "a=>b", "a->a"):
        with pytest.raises(ValueError):
            parse_substitution(bad)


def test_decompose_uses_net_images():
    s = Substitution.of(("a", "d"), ("d", "e"))
    alpha, rho = decompose(s)
    assert [str(a) for a in rho.chain] == ["x1->e", "x2->e"]
    assert apply(rho, apply(alpha, var("f", "a", "d"))) == var("f", "e", "e")
    alpha, rho = decompose(Substitution.of(("a", "b"), ("b", "a")))
    assert str(alpha) == "b->x1" and str(rho) == "x1->a"
