from colorednets.colored import ColoredMarking, ColoredPetriNet
from colorednets.fixtures import vending
from colorednets.multiset import Multiset


def cm(**places):
    """Colored marking from keyword args; ``coins_in`` means ``coins-in``."""
    return ColoredMarking({p.replace("_", "-"): ms for p, ms in places.items()})


def step(*bindings):
    out = {}
    for b in bindings:
        out[b] = out.get(b, 0) + 1
    return Multiset(out)


def refund_net():
    """Vending plus a transition that feeds returned change back in."""
    K, _ = vending()
    modes = dict(K.modes)
    modes["refund"] = ["r25", "r50"]
    inputs = {arc: gm.assignments for arc, gm in K.inputs.items()}
    outputs = {arc: gm.assignments for arc, gm in K.outputs.items()}
    inputs[("change", "refund")] = {"r25": {"25c": 1}, "r50": {"50c": 1}}
    outputs[("refund", "coins-in")] = {"r25": {"25c": 1}, "r50": {"50c": 1}}
    return ColoredPetriNet.build(dict(K.colors), modes, inputs, outputs)


def recolored_vending():
    """Vending with coins renamed 25c -> q and 50c -> h, and the morphism
    from the original doing that renaming."""
    from colorednets.colored import ColoredMorphism
    from colorednets.multiset import GeneratorMap
    from colorednets.petri import NetMorphism

    K, _ = vending()
    coin = {"25c": "q", "50c": "h"}

    def recolor(p, table):
        if p == "food":
            return dict(table)
        return {k: {coin[c]: n for c, n in img.items()} for k, img in table.items()}

    colors = {p: ([coin[c] for c in cs] if p != "food" else list(cs)) for p, cs in K.colors.items()}
    inputs = {(p, t): recolor(p, gm.assignments) for (p, t), gm in K.inputs.items()}
    outputs = {(t, p): recolor(p, gm.assignments) for (t, p), gm in K.outputs.items()}
    K2 = ColoredPetriNet.build(colors, dict(K.modes), inputs, outputs)
    psi = ColoredMorphism(
        NetMorphism.identity(K.base),
        {"coins-in": GeneratorMap.from_function(coin),
         "change": GeneratorMap.from_function(coin),
         "food": GeneratorMap.identity(K.colors["food"])},
        {"buy": GeneratorMap.identity(K.modes["buy"])},
    )
    return K, K2, psi
