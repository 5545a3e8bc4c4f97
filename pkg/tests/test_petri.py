import pytest

from colorednets.errors import DomainError, NotEnabled, ResourceLimit
from colorednets.multiset import Multiset
from colorednets.petri import (
    NetMorphism,
    PetriNet,
    check_net_morphism,
    enabled,
    enumerate_firing_sequences,
    fire,
    net_problems,
    reachable,
)
from colorednets.unfolding import unfold_net

M = Multiset


@pytest.fixture
def move():
    return PetriNet(("p", "q"), ("t",), {"t": {"p": 1}}, {"t": {"q": 1}})


@pytest.fixture
def unfolded_vending(vending_net):
    return unfold_net(vending_net)


def test_enabled_examples(move):
    assert enabled(move, M({"p": 1}), M())
    assert enabled(move, M(), M())
    assert enabled(move, M({"p": 1}), M({"t": 1}))
    assert not enabled(move, M({"p": 1}), M({"t": 2}))


def test_enabled_domain_errors(move):
    with pytest.raises(DomainError):
        enabled(move, M({"zz": 1}), M())
    with pytest.raises(DomainError):
        enabled(move, M({"p": 1}), M({"u": 1}))


def test_fire_examples(move, unfolded_vending):
    assert fire(move, M({"p": 2}), M({"t": 1})) == M({"p": 1, "q": 1})
    assert fire(move, M({"q": 4}), M()) == M({"q": 4})
    with pytest.raises(NotEnabled):
        fire(move, M({"q": 1}), M({"t": 1}))
    after = fire(unfolded_vending, M({"coins-in⊙25c": 3}), M({"buy⊙a3": 1}))
    assert after == M({"food⊙apple": 1})


def test_parallel_firing_is_sequential_firing(move):
    m = M({"p": 3})
    both = fire(move, m, M({"t": 2}))
    assert both == fire(move, fire(move, m, M({"t": 1})), M({"t": 1}))


def test_net_problems_reports_undeclared_places():
    net = PetriNet(("p",), ("t",), {"t": {"p": 1, "x": 1}}, {"t": {}})
    assert any("undeclared" in p and "t" in p for p in net_problems(net))


def test_identity_morphism_valid(unfolded_vending):
    assert check_net_morphism(unfolded_vending, unfolded_vending,
                              NetMorphism.identity(unfolded_vending)) == []


def test_collapsing_two_places():
    # t: p -> q over two places, t2: r -> r over one; both arcs land on r
    two = PetriNet(("p", "q"), ("t",), {"t": {"p": 1}}, {"t": {"q": 1}})
    one = PetriNet(("r",), ("t2",), {"t2": {"r": 1}}, {"t2": {"r": 1}})
    phi = NetMorphism({"t": "t2"}, {"p": "r", "q": "r"})
    assert check_net_morphism(two, one, phi) == []


def test_square_violation_named():
    P = PetriNet(("p",), ("t",), {"t": {"p": 1}}, {"t": {}})
    Q = PetriNet(("r",), ("u",), {"u": {"r": 2}}, {"u": {}})
    report = check_net_morphism(P, Q, NetMorphism({"t": "u"}, {"p": "r"}))
    assert len(report) == 1
    v = report[0]
    assert (v.code, v.transition, v.side) == ("base-square", "t", "source")
    assert v.expected == M({"r": 1}) and v.actual == M({"r": 2})


def test_non_total_morphism_reported(move):
    report = check_net_morphism(move, move, NetMorphism({}, {"p": "p", "q": "q"}))
    assert [v.code for v in report] == ["transition-map-not-total"]


def test_morphism_soundness_on_small_instances():
    # collapse p and q: every enabled step stays enabled and firing commutes
    P = PetriNet(("p", "q"), ("t", "u"), {"t": {"p": 1}, "u": {"q": 1}},
                 {"t": {"q": 1}, "u": {"p": 1}})
    Q = PetriNet(("r",), ("v",), {"v": {"r": 1}}, {"v": {"r": 1}})
    phi = NetMorphism({"t": "v", "u": "v"}, {"p": "r", "q": "r"})
    assert check_net_morphism(P, Q, phi) == []
    for m in (M({"p": 1}), M({"p": 1, "q": 2}), M({"q": 3})):
        for steps, _ in enumerate_firing_sequences(P, m, 1, 3):
            for s in steps:
                assert enabled(Q, phi.map_marking(m), phi.map_step(s))
                assert phi.map_marking(fire(P, m, s)) == fire(Q, phi.map_marking(m), phi.map_step(s))


def test_enumerate_max_len_zero(move):
    assert enumerate_firing_sequences(move, M({"p": 1}), 0, 3) == [((), M({"p": 1}))]


def test_enumerate_self_loop():
    loop = PetriNet(("p",), ("t",), {"t": {"p": 1}}, {"t": {"p": 1}})
    runs = enumerate_firing_sequences(loop, M({"p": 1}), 2, 1)
    assert [steps for steps, _ in runs] == [(), (M({"t": 1}),), (M({"t": 1}), M({"t": 1}))]


def test_enumerate_vending_single_steps(unfolded_vending):
    # hand check against the seven modes: a2 needs two 50c, a3 three 25c
    runs = enumerate_firing_sequences(
        unfolded_vending, M({"coins-in⊙25c": 1, "coins-in⊙50c": 1}), 1, 1)
    fired = [next(iter(steps[0])) for steps, _ in runs if steps]
    assert len(runs) == 6
    assert fired == ["buy⊙a1", "buy⊙b1", "buy⊙b2", "buy⊙e1", "buy⊙e2"]


def test_enumerate_order_is_canonical(unfolded_vending):
    runs = enumerate_firing_sequences(unfolded_vending, M({"coins-in⊙25c": 2}), 2, 2)
    keys = [tuple(str(s) for s in steps) for steps, _ in runs]
    assert keys == sorted(keys)


def test_enumerate_budget(unfolded_vending):
    with pytest.raises(ResourceLimit):
        enumerate_firing_sequences(unfolded_vending, M({"coins-in⊙25c": 3}), 3, 2, node_budget=5)


def test_reachable_trivial(move):
    empty = PetriNet(("p",), (), {}, {})
    assert reachable(empty, M({"p": 2}), 5) == (M({"p": 2}),)
    assert set(reachable(move, M({"p": 1}), 1)) == {M({"p": 1}), M({"q": 1})}


def _closure(net, m0, bound):
    states = {m0}
    changed = True
    while changed:
        changed = False
        for m in list(states):
            for t in net.transitions:
                if all(m[p] >= n for p, n in net.source[t].items()):
                    counts = dict(m)
                    for p, n in net.source[t].items():
                        counts[p] -= n
                    for p, n in net.target[t].items():
                        counts[p] = counts.get(p, 0) + n
                    nxt = M(counts)
                    if nxt.total() <= bound and nxt not in states:
                        states.add(nxt)
                        changed = True
    return states


def test_reachable_vending_quarters(unfolded_vending):
    got = set(reachable(unfolded_vending, M({"coins-in⊙25c": 3}), 3))
    assert got == _closure(unfolded_vending, M({"coins-in⊙25c": 3}), 3)
    # k quarters spent on bars/refunds in k+1 ways each, plus one apple
    assert len(got) == 11
    assert M({"food⊙apple": 1}) in got
    assert M({"coins-in⊙25c": 1, "food⊙bar": 1, "change⊙25c": 1}) in got


def test_reachable_is_deterministic(unfolded_vending):
    m0 = M({"coins-in⊙25c": 2, "coins-in⊙50c": 2})
    assert reachable(unfolded_vending, m0, 4) == reachable(unfolded_vending, m0, 4)


def test_reachable_bound_below_initial(move):
    with pytest.raises(ValueError):
        reachable(move, M({"p": 3}), 2)
