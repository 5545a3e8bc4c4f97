"""Seeded random colored nets, markings, step sequences and morphisms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .colored import ColoredMarking, ColoredMorphism, ColoredPetriNet, colored_enabled_steps, step_effect
from .multiset import GeneratorMap, Multiset
from .petri import NetMorphism
from .semantics import StepSequence

EMPTY_IMAGE_PROBABILITY = 0.25


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    max_places: int = 3
    max_transitions: int = 3
    max_colors_per_place: int = 3
    max_modes_per_transition: int = 3
    max_inscription_size: int = 2

    def __post_init__(self):
        for name in ("max_places", "max_transitions", "max_colors_per_place",
                     "max_modes_per_transition", "max_inscription_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


def random_colored_net(cfg: GeneratorConfig) -> ColoredPetriNet:
    """A valid colored net drawn deterministically from ``cfg.seed``.

    Each arc is present with probability 1/2.  An inscription image is
    empty with probability 1/4, otherwise it holds between 1 and
    ``max_inscription_size`` colors drawn with replacement, so both
    firing and dead modes show up.
    """
    rng = random.Random(cfg.seed)
    colors = {f"p{i}": [f"c{j}" for j in range(rng.randint(1, cfg.max_colors_per_place))]
              for i in range(rng.randint(1, cfg.max_places))}
    modes = {f"t{i}": [f"m{j}" for j in range(rng.randint(1, cfg.max_modes_per_transition))]
             for i in range(rng.randint(1, cfg.max_transitions))}
    inputs, outputs = {}, {}

    def table(t, p):
        out = {}
        for k in modes[t]:
            if rng.random() < EMPTY_IMAGE_PROBABILITY:
                out[k] = {}
            else:
                size = rng.randint(1, cfg.max_inscription_size)
                out[k] = Multiset(rng.choice(colors[p]) for _ in range(size))
        return out

    for t in modes:
        for p in colors:
            if rng.random() < 0.5:
                inputs[(p, t)] = table(t, p)
            if rng.random() < 0.5:
                outputs[(t, p)] = table(t, p)
    return ColoredPetriNet.build(colors, modes, inputs, outputs)


def random_colored_marking(K: ColoredPetriNet, rng: random.Random, max_tokens: int = 4) -> ColoredMarking:
    per_place = {}
    for _ in range(rng.randint(0, max_tokens)):
        p = rng.choice(K.places)
        c = rng.choice(K.colors[p])
        per_place.setdefault(p, {})
        per_place[p][c] = per_place[p].get(c, 0) + 1
    return ColoredMarking(per_place)


def random_sequence(K: ColoredPetriNet, source: ColoredMarking, rng: random.Random,
                    max_len: int = 2, max_step_size: int = 2) -> StepSequence:
    """A random walk of at most ``max_len`` enabled steps from ``source``."""
    layers = []
    m = source
    for _ in range(rng.randint(0, max_len)):
        steps = colored_enabled_steps(K, m, max_step_size)
        if not steps:
            break
        step = rng.choice(steps)
        consumed, produced = step_effect(K, step)
        m = (m - consumed) + produced
        layers.append(step)
    return StepSequence(source, tuple(layers))


def random_quotient(K: ColoredPetriNet, rng: random.Random,
                    prefix: Optional[str] = None) -> tuple[ColoredPetriNet, ColoredMorphism]:
    """A net ``K2`` and a function-like morphism ``K -> K2``.

    Colors are merged by a random function per place, the inscriptions are
    pushed forward along it, and modes whose pushed-forward inscriptions
    coincide may be merged too.  With ``prefix`` every place and transition
    is also renamed.  The span squares commute by construction.
    """
    rename = (lambda x: f"{prefix}{x}") if prefix else (lambda x: x)
    color_maps = {}
    colors2 = {}
    for p in K.places:
        palette = list(K.colors[p])
        k = rng.randint(1, len(palette))
        targets = [f"d{i}" for i in range(k)]
        f = {c: rng.choice(targets) for c in palette}
        color_maps[p] = GeneratorMap.from_function(f)
        colors2[rename(p)] = targets

    def push(p, ms):
        return color_maps[p](ms)

    mode_maps, modes2, inputs2, outputs2 = {}, {}, {}, {}
    for t in K.transitions:
        signature_of = {}
        for k in K.modes[t]:
            consumed, produced = K.effect((t, k))
            sig = (tuple((rename(p), push(p, ms)) for p, ms in consumed.items()),
                   tuple((rename(p), push(p, ms)) for p, ms in produced.items()))
            signature_of[k] = sig
        f = {}
        representatives = {}
        for k in K.modes[t]:
            sig = signature_of[k]
            if sig in representatives and rng.random() < 0.5:
                f[k] = representatives[sig]
            else:
                f[k] = f"n{len(set(f.values()))}"
                representatives.setdefault(sig, f[k])
        mode_maps[t] = GeneratorMap.from_function(f)
        u = rename(t)
        modes2[u] = sorted(set(f.values()))
        first = {}
        for k in K.modes[t]:
            first.setdefault(f[k], k)
        for (p, tt), gm in K.inputs.items():
            if tt == t:
                inputs2[(rename(p), u)] = {j: push(p, gm[k]) for j, k in first.items()}
        for (tt, p), gm in K.outputs.items():
            if tt == t:
                outputs2[(u, rename(p))] = {j: push(p, gm[k]) for j, k in first.items()}
    K2 = ColoredPetriNet.build(colors2, modes2, inputs2, outputs2)
    base = NetMorphism({t: rename(t) for t in K.transitions}, {p: rename(p) for p in K.places})
    return K2, ColoredMorphism(base, color_maps, mode_maps)
