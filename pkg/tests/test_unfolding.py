import random

import pytest

from colorednets.colored import ColoredMorphism, ColoredPetriNet, colored_enabled, colored_fire
from colorednets.errors import DomainError, NotFunctionLike, ValidationFailed
from colorednets.generate import GeneratorConfig, random_colored_marking, random_colored_net, random_quotient
from colorednets.multiset import GeneratorMap, Multiset
from colorednets.petri import PetriNet, check_net_morphism, enabled, fire
from colorednets.unfolding import (
    marking_to_unfolded,
    pair_name,
    split_name,
    step_to_unfolded,
    unfold_morphism,
    unfold_net,
    unfolded_to_marking,
    unfolded_to_step,
    verify_unfolding_iso,
)
from helpers import cm, recolored_vending, refund_net, step


def test_vending_unfolding(vending_net):
    U = unfold_net(vending_net)
    assert len(U.places) == 6 and len(U.transitions) == 7
    assert U.source["buy⊙a3"] == Multiset({"coins-in⊙25c": 3})
    assert U.target["buy⊙a2"] == Multiset({"change⊙50c": 1, "food⊙apple": 1})
    assert U.target["buy⊙e1"] == Multiset({"change⊙25c": 1})


def test_cardinalities_on_random_nets():
    for seed in range(50):
        K = random_colored_net(GeneratorConfig(seed=seed))
        U = unfold_net(K)
        assert len(U.places) == sum(len(cs) for cs in K.colors.values())
        assert len(U.transitions) == sum(len(ms) for ms in K.modes.values())


def test_singleton_net_unfolds_to_itself_up_to_names():
    K = ColoredPetriNet.build({"p": ["*"], "q": ["*"]}, {"t": ["*"]},
                              {("p", "t"): {"*": {"*": 2}}}, {("t", "q"): {"*": {"*": 1}}})
    U = unfold_net(K)
    assert U.places == ("p⊙*", "q⊙*")
    assert U.source["t⊙*"] == Multiset({"p⊙*": 2})
    assert U.target["t⊙*"] == Multiset({"q⊙*": 1})


def test_invalid_net_not_unfolded():
    base = PetriNet(("p",), ("t",), {"t": {"p": 1}}, {"t": {}})
    with pytest.raises(ValidationFailed):
        unfold_net(ColoredPetriNet(base, {"p": ["red"]}, {"t": ["m"]}, {}, {}))


def test_names():
    assert pair_name("coins-in", "25c") == "coins-in⊙25c"
    assert split_name("coins-in⊙25c") == ("coins-in", "25c")
    with pytest.raises(DomainError):
        split_name("plain")


def test_marking_and_step_round_trip(vending_net):
    m = cm(coins_in={"25c": 3, "50c": 2}, food={"bar": 1})
    assert unfolded_to_marking(vending_net, marking_to_unfolded(vending_net, m)) == m
    s = step(("buy", "a1"), ("buy", "a1"), ("buy", "e2"))
    assert step_to_unfolded(vending_net, s) == Multiset({"buy⊙a1": 2, "buy⊙e2": 1})
    assert unfolded_to_step(vending_net, step_to_unfolded(vending_net, s)) == s
    with pytest.raises(DomainError):
        unfolded_to_step(vending_net, Multiset({"buy⊙zz": 1}))


def test_token_game_is_preserved_both_ways():
    rng = random.Random(5)
    for seed in range(40):
        K = random_colored_net(GeneratorConfig(seed=seed, max_modes_per_transition=2))
        U = unfold_net(K)
        m = random_colored_marking(K, rng)
        for b in K.bindings():
            s = step(b, b) if rng.random() < 0.3 else step(b)
            ok = colored_enabled(K, m, s)
            assert ok == enabled(U, marking_to_unfolded(K, m), step_to_unfolded(K, s))
            if ok:
                assert marking_to_unfolded(K, colored_fire(K, m, s)) == fire(
                    U, marking_to_unfolded(K, m), step_to_unfolded(K, s))


def test_unfold_identity(vending_net):
    phi = unfold_morphism(ColoredMorphism.identity(vending_net))
    U = unfold_net(vending_net)
    assert check_net_morphism(U, U, phi) == []
    assert all(a == b for a, b in phi.places.items())


def test_unfold_renaming():
    K, K2, psi = recolored_vending()
    phi = unfold_morphism(psi, K, K2)
    assert phi.places["coins-in⊙25c"] == "coins-in⊙q"
    assert phi.places["food⊙bar"] == "food⊙bar"
    assert check_net_morphism(unfold_net(K), unfold_net(K2), phi) == []


def test_unfold_non_function_like(vending_net):
    psi = ColoredMorphism.identity(vending_net)
    places = dict(psi.alpha_places)
    places["food"] = GeneratorMap({"apple": {"apple": 2}, "bar": {"bar": 1}})
    with pytest.raises(NotFunctionLike):
        unfold_morphism(ColoredMorphism(psi.base, places, psi.alpha_transitions))


def test_unfold_is_functorial():
    rng = random.Random(11)
    for seed in range(30):
        K = random_colored_net(GeneratorConfig(seed=seed))
        K2, f = random_quotient(K, rng)
        K3, g = random_quotient(K2, rng, prefix="z")
        lhs = unfold_morphism(f.then(g))
        rhs = unfold_morphism(f).then(unfold_morphism(g))
        assert lhs == rhs


def test_iso_holds_on_vending(vending_net, vending_marking):
    report = verify_unfolding_iso(vending_net, vending_marking, 3, 2, 10)
    assert report.holds, report.summary()
    assert report.object_check["colored"] == report.object_check["unfolded"] == 95
    assert report.morphism_check["colored_per_length"] == {0: 1, 1: 97, 2: 0, 3: 0}


def test_iso_holds_with_dependencies():
    K = refund_net()
    report = verify_unfolding_iso(K, cm(change={"25c": 1, "50c": 1}), 3, 2, 4)
    assert report.holds, report.summary()
    assert report.morphism_check["colored_per_length"][2] > 0


def test_iso_max_len_zero(vending_net, vending_marking):
    report = verify_unfolding_iso(vending_net, vending_marking, 0, 2, 5)
    assert report.holds
    assert report.morphism_check["colored"] == 1


def test_corrupted_unfolding_is_caught(vending_net):
    U = unfold_net(vending_net)
    source = dict(U.source)
    source["buy⊙a3"] = Multiset({"coins-in⊙25c": 2})
    broken = PetriNet(U.places, U.transitions, source, U.target)
    report = verify_unfolding_iso(vending_net, cm(coins_in={"25c": 2}), 2, 1, 4,
                                  unfolded=broken)
    assert not report.holds
    lengths = {c.length for c in report.counterexamples if c.check == "morphisms"}
    assert min(lengths) == 1
    assert "no colored counterpart" in report.summary()
    assert report.to_dict()["holds"] is False
