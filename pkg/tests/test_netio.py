import random

import pytest

from colorednets.colored import ColoredMorphism
from colorednets.errors import DocumentSyntaxError, ReservedSeparator, ValidationFailed
from colorednets.fixtures import load_fixture
from colorednets.generate import GeneratorConfig, random_colored_marking, random_colored_net, random_quotient
from colorednets.multiset import Multiset
from colorednets.netio import NetDocument, emit_document, parse_document, parse_marking, parse_step
from colorednets.petri import PetriNet
from colorednets.unfolding import unfold_net
from helpers import cm

BAD_PLACE = """\
kind: colored
places:
  - id: p
    colors: [red]
transitions:
  - id: t
    modes: [m]
    source: {p: 1}
    target: {ghost: 1}
    inscriptions:
      in:
        p:
          m: {red: 1}
      out:
        ghost:
          m: {}
"""


def round_trip(doc):
    text = emit_document(doc)
    again = parse_document(text)
    assert emit_document(again) == text
    return again


def test_vending_round_trip(vending_net, vending_marking):
    doc = load_fixture("vending")
    assert doc.kind == "colored"
    assert doc.body == vending_net and doc.marking == vending_marking
    assert round_trip(doc).body == vending_net


def test_unfolded_emission(vending_net):
    text = emit_document(NetDocument("ordinary", unfold_net(vending_net), origin="unfolding"))
    assert "places: [change⊙25c, change⊙50c, coins-in⊙25c, coins-in⊙50c, food⊙apple, food⊙bar]" in text
    assert text.count("  - id: buy⊙") == 7
    back = parse_document(text)
    assert back.body == unfold_net(vending_net)


def test_morphism_round_trip(vending_net):
    psi = ColoredMorphism.identity(vending_net)
    assert round_trip(NetDocument("morphism", psi)).body == psi


def test_empty_net():
    doc = NetDocument("ordinary", PetriNet((), (), {}, {}))
    assert emit_document(doc) == "kind: ordinary\nplaces: []\ntransitions: []\n"
    assert round_trip(doc).body == doc.body


def test_undeclared_place_names_transition():
    with pytest.raises(ValidationFailed) as info:
        parse_document(BAD_PLACE)
    assert "t" in str(info.value) and "ghost" in str(info.value)


def test_reserved_separator_rejected():
    with pytest.raises(ReservedSeparator):
        parse_document("kind: ordinary\nplaces: [a⊙b]\ntransitions: []\n")


def test_pair_names_allowed_for_unfoldings():
    doc = parse_document("kind: ordinary\norigin: unfolding\nplaces: [a⊙b]\ntransitions: []\n")
    assert doc.body.places == ("a⊙b",)


@pytest.mark.parametrize("text", [
    "kind: colored\nplaces: [\n",
    "kind: petri\n",
    "kind: ordinary\nplaces: []\ntransitions: []\nextra: 1\n",
    "kind: ordinary\nplaces: [a b]\ntransitions: []\n",
    "kind: ordinary\nplaces: [p]\ntransitions: []\nmarking: {p: -1}\n",
])
def test_syntax_errors(text):
    with pytest.raises(DocumentSyntaxError):
        parse_document(text)


def test_parse_marking_and_step(vending_net):
    assert parse_marking("{coins-in: {25c: 2}}", vending_net) == cm(coins_in={"25c": 2})
    one = Multiset({("buy", "a1"): 1})
    assert parse_step("buy a1", vending_net) == one
    assert parse_step("(buy, a1)", vending_net) == one
    assert parse_step("{(buy, a1): 1, (buy, b1): 2}", vending_net) == Multiset(
        {("buy", "a1"): 1, ("buy", "b1"): 2})
    net = PetriNet(("p",), ("t",), {"t": {"p": 1}}, {"t": {}})
    assert parse_step("t", net) == Multiset({"t": 1})
    assert parse_step("{t: 2}", net) == Multiset({"t": 2})
    with pytest.raises(DocumentSyntaxError):
        parse_step("buy", vending_net)


def test_random_documents_round_trip():
    rng = random.Random(3)
    for seed in range(60):
        K = random_colored_net(GeneratorConfig(seed=seed))
        doc = round_trip(NetDocument("colored", K, marking=random_colored_marking(K, rng)))
        assert doc.body == K
        _, psi = random_quotient(K, rng)
        assert round_trip(NetDocument("morphism", psi)).body == psi
