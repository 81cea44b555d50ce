from itertools import combinations

import networkx as nx
import pytest

from oracles import (
    ALLEN,
    allen_consistent_scenarios,
    brute_force_revision,
    neighbourhood_graph,
    random_allen_qcn,
    random_consistent_allen_qcn,
)
from qualadapt.qcn import QCN, Scenario, conjoin, satisfies, var
from qualadapt.revision import (
    RevisionError,
    SearchBudgetExceeded,
    lower_bound,
    revise,
    scenario_distance,
)
from qualadapt.solver import enumerate_scenarios, is_consistent_scenario

A, B, C = var("A"), var("B"), var("C")


def rels(s):
    return tuple(r for _, _, (r,) in s.pairs())


def test_scenario_distance_examples(allen):
    s1 = Scenario.from_qcn(QCN(allen, [], [(A, "b", B), (B, "o", C), (A, "b", C)]))
    s2 = Scenario.from_qcn(QCN(allen, [], [(A, "m", B), (B, "o", C), (A, "b", C)]))
    assert scenario_distance(s1, s1) == 0
    assert scenario_distance(s1, s2) == 1


def test_scenario_distance_against_bfs(allen, rng):
    g = neighbourhood_graph("allen")
    lengths = dict(nx.all_pairs_shortest_path_length(g))
    vs = [var(f"v{k}") for k in range(4)]
    pairs = list(combinations(vs, 2))
    for _ in range(100):
        r1 = [rng.choice(ALLEN) for _ in pairs]
        r2 = [rng.choice(ALLEN) for _ in pairs]
        s1 = Scenario.from_qcn(QCN(allen, vs, [(u, r, v) for (u, v), r in zip(pairs, r1)]))
        s2 = Scenario.from_qcn(QCN(allen, vs, [(u, r, v) for (u, v), r in zip(pairs, r2)]))
        assert scenario_distance(s1, s2) == sum(lengths[a][b] for a, b in zip(r1, r2))


def test_scenario_distance_needs_same_variables(allen):
    s1 = Scenario.from_qcn(QCN(allen, [], [(A, "b", B)]))
    s2 = Scenario.from_qcn(QCN(allen, [], [(A, "b", C)]))
    with pytest.raises(ValueError):
        scenario_distance(s1, s2)


def test_lower_bound_basics(allen, rng):
    for _ in range(20):
        q = random_allen_qcn(rng, allen, 4)
        assert lower_bound(q, q) == 0
    s1 = Scenario.from_qcn(QCN(allen, [], [(A, "b", B)]))
    s2 = Scenario.from_qcn(QCN(allen, [], [(A, "bi", B)]))
    assert lower_bound(s1, s2) == scenario_distance(s1, s2) == 8


def test_lower_bound_never_exceeds_true_distance(allen, rng):
    for _ in range(40):
        qa = random_consistent_allen_qcn(rng, allen, 3, max_label=4)
        qb = random_consistent_allen_qcn(rng, allen, 3, max_label=4)
        best, _ = brute_force_revision(qa, qb, allen.distance)
        assert lower_bound(qa, qb) <= best


def test_compatible_inputs_give_distance_zero(allen, rng):
    for _ in range(20):
        psi = random_consistent_allen_qcn(rng, allen, 3, max_label=6)
        mu = random_consistent_allen_qcn(rng, allen, 3, max_label=6)
        both = conjoin(psi, mu)
        expected = allen_consistent_scenarios(both)
        if not expected:
            continue
        res = revise(psi, mu)
        assert res.distance == 0
        assert [rels(s) for s in res.scenarios] == expected


def test_simple_revision(allen):
    psi = QCN(allen, [], [(A, "b", B)])
    mu = QCN(allen, [], [(A, {"mi", "o", "bi"}, B)])
    res = revise(psi, mu)
    assert res.distance == 2
    assert [s.relation(A, B) for s in res.scenarios] == ["o"]


def test_missing_variables_are_unconstrained(allen):
    psi = QCN(allen, [], [(A, "b", B)])
    mu = QCN(allen, [], [(B, "m", C)])
    res = revise(psi, mu)
    assert res.distance == 0
    assert {s.relation(A, C) for s in res.scenarios} == {"b"}
    assert all(s.relation(A, B) == "b" for s in res.scenarios)


def test_against_brute_force(allen, rng):
    for _ in range(60):
        n = rng.randint(2, 4)
        psi = random_consistent_allen_qcn(rng, allen, n)
        mu = random_consistent_allen_qcn(rng, allen, n)
        best, expected = brute_force_revision(psi, mu, allen.distance)
        res = revise(psi, mu)
        assert res.distance == best
        assert {rels(s) for s in res.scenarios} == expected


def test_results_are_consistent_models_of_mu(allen, rng):
    for _ in range(20):
        psi = random_consistent_allen_qcn(rng, allen, 4)
        mu = random_consistent_allen_qcn(rng, allen, 4)
        res = revise(psi, mu)
        assert res.scenarios
        for s in res.scenarios:
            assert is_consistent_scenario(s)
            assert satisfies(s, mu)
        assert [rels(s) for s in res.scenarios] == sorted(
            (rels(s) for s in res.scenarios), key=lambda t: [ALLEN.index(r) for r in t])


def test_adding_constraints_to_mu_never_lowers_distance(allen, rng):
    for _ in range(30):
        psi = random_consistent_allen_qcn(rng, allen, 3)
        mu = random_consistent_allen_qcn(rng, allen, 3, max_label=6, p_full=0.5)
        base = revise(psi, mu).distance
        (u, v, lab), = rng.sample(list(mu.pairs()), 1)
        narrow = mu.with_label(u, v, frozenset(rng.sample(sorted(lab), max(1, len(lab) // 2))))
        if not allen_consistent_scenarios(narrow):
            continue
        assert revise(psi, narrow).distance >= base


def test_inconsistent_inputs_rejected(allen):
    bad = QCN(allen, [], [(A, "b", B), (B, "b", C), (C, "b", A)])
    good = QCN(allen, [A, B, C])
    with pytest.raises(RevisionError):
        revise(bad, good)
    with pytest.raises(RevisionError):
        revise(good, bad)


def test_algebra_mismatch(allen, indu):
    with pytest.raises(RevisionError):
        revise(QCN(allen, [A]), QCN(indu, [A]))


def test_budget(allen):
    D = var("D")
    psi = QCN(allen, [], [(A, "b", B), (B, "b", C), (C, "b", D)])
    mu = QCN(allen, [], [(A, "bi", B), (C, {"bi", "mi", "oi"}, D)])
    needed = revise(psi, mu).expanded
    assert needed > 1
    with pytest.raises(SearchBudgetExceeded) as err:
        revise(psi, mu, max_nodes=needed - 1)
    assert err.value.expanded == needed - 1
    assert revise(psi, mu, max_nodes=needed).expanded == needed


def test_observer_sees_admissible_bounds(allen, rng):
    for _ in range(15):
        psi = random_consistent_allen_qcn(rng, allen, 3)
        mu = random_consistent_allen_qcn(rng, allen, 3, max_label=6)
        seen = []
        revise(psi, mu, observer=lambda node, h: seen.append((node, h)))
        for node, h in seen:
            best, _ = brute_force_revision(psi, node, allen.distance)
            assert h <= best


def test_indu_revision_lp_filters_goals(indu):
    psi = QCN(indu, [], [(A, "m<", B), (B, "m<", C)])
    mu = QCN(indu, [], [(A, indu.expand_shortcut("b?"), C)])
    res = revise(psi, mu)
    assert res.distance == 0
    assert {s.relation(A, C) for s in res.scenarios} == {"b<"}
    for s in res.scenarios:
        assert is_consistent_scenario(s)


def test_determinism(allen, rng):
    psi = random_consistent_allen_qcn(rng, allen, 4)
    mu = random_consistent_allen_qcn(rng, allen, 4)
    a, b = revise(psi, mu), revise(psi, mu)
    assert a.scenarios == b.scenarios and a.expanded == b.expanded
