"""Colored Petri nets: color sets, modes, arc inscriptions and their token game.

Markings are stored in canonical form, one color multiset per place.
A binding is a ``(transition, mode)`` tuple and a colored step is a
:class:`Multiset` of bindings.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import DomainError, NotEnabled, UnknownBinding
from .multiset import EMPTY, GeneratorMap, Multiset, format_element, msum
from .petri import (
    DEFAULT_NODE_BUDGET,
    NetMorphism,
    PetriNet,
    SquareViolation,
    bounded_submultisets,
    breadth_first,
    check_net_morphism,
    net_problems,
)


class ColoredMarking(Mapping):
    """An immutable map from places to color multisets.

    Places holding no tokens are not stored, so two markings are equal
    exactly when every place holds the same colors.  Supports ``+``, ``-``
    and ``<=`` placewise.
    """

    __slots__ = ("_places", "_hash")

    def __init__(self, per_place: Optional[Mapping] = None):
        places = {}
        for p, ms in (per_place or {}).items():
            ms = ms if isinstance(ms, Multiset) else Multiset(ms)
            if ms:
                places[p] = ms.with_domain(None) if ms.domain is not None else ms
        self._places = {p: places[p] for p in sorted(places)}
        self._hash = None

    @classmethod
    def _raw(cls, places: dict) -> "ColoredMarking":
        cm = cls.__new__(cls)
        cm._places = {p: places[p] for p in sorted(places)}
        cm._hash = None
        return cm

    def __getitem__(self, p) -> Multiset:
        return self._places.get(p, EMPTY)

    def __iter__(self):
        return iter(self._places)

    def __len__(self):
        return len(self._places)

    def __contains__(self, p):
        return p in self._places

    def __eq__(self, other):
        if isinstance(other, ColoredMarking):
            return self._places == other._places
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._places.items()))
        return self._hash

    def __add__(self, other: "ColoredMarking") -> "ColoredMarking":
        if not isinstance(other, ColoredMarking):
            return NotImplemented
        if not other._places:
            return self
        if not self._places:
            return other
        out = dict(self._places)
        for p, ms in other._places.items():
            out[p] = out[p] + ms if p in out else ms
        return ColoredMarking._raw(out)

    def __sub__(self, other: "ColoredMarking") -> "ColoredMarking":
        if not isinstance(other, ColoredMarking):
            return NotImplemented
        out = dict(self._places)
        for p, ms in other._places.items():
            rest = self[p] - ms
            if rest:
                out[p] = rest
            else:
                out.pop(p, None)
        return ColoredMarking._raw(out)

    def __le__(self, other: "ColoredMarking") -> bool:
        if not isinstance(other, ColoredMarking):
            return NotImplemented
        return all(ms <= other[p] for p, ms in self._places.items())

    def __ge__(self, other):
        return other <= self

    def scale(self, k: int) -> "ColoredMarking":
        if k == 0:
            return EMPTY_MARKING
        return ColoredMarking._raw({p: ms.scale(k) for p, ms in self._places.items()})

    def total(self) -> int:
        return sum(ms.total() for ms in self._places.values())

    def sort_key(self) -> tuple:
        return tuple((p, ms.sort_key()) for p, ms in self._places.items())

    def __str__(self) -> str:
        return "{" + ", ".join(f"{p}: {ms}" for p, ms in self._places.items()) + "}"

    def __repr__(self) -> str:
        return f"ColoredMarking({str(self)})"


EMPTY_MARKING = ColoredMarking()


def cmsum(parts: Iterable[ColoredMarking]) -> ColoredMarking:
    grouped: dict = {}
    for part in parts:
        for p, ms in part.items():
            grouped.setdefault(p, []).append(ms)
    return ColoredMarking._raw({p: msum(v) for p, v in grouped.items()})


@dataclass(frozen=True)
class Problem:
    """One entry of a validation report."""

    code: str
    location: str
    message: str

    def __str__(self):
        return f"{self.code} at {self.location}: {self.message}"


@dataclass(frozen=True, eq=False)
class ColoredPetriNet:
    """A set-like base net decorated with color sets, mode sets and
    per-arc inscriptions.

    ``inputs`` is keyed by ``(place, transition)`` arcs and ``outputs`` by
    ``(transition, place)`` arcs; every inscription maps the transition's
    modes to color multisets of the place.  Nothing is validated on
    construction; see :func:`validate_colored_net`.
    """

    base: PetriNet
    colors: Mapping[str, tuple]
    modes: Mapping[str, tuple]
    inputs: Mapping[tuple, GeneratorMap] = field(repr=False)
    outputs: Mapping[tuple, GeneratorMap] = field(repr=False)
    _effects: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        colors = {p: tuple(sorted(set(cs))) for p, cs in sorted(self.colors.items())}
        modes = {t: tuple(sorted(set(ms))) for t, ms in sorted(self.modes.items())}
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "modes", modes)

        def declare(gm, t, p):
            assignments = gm.assignments if isinstance(gm, GeneratorMap) else gm
            return GeneratorMap(assignments, source=modes.get(t, ()),
                                target=colors.get(p))

        object.__setattr__(self, "inputs", {
            (p, t): declare(gm, t, p) for (p, t), gm in sorted(self.inputs.items())})
        object.__setattr__(self, "outputs", {
            (t, p): declare(gm, t, p) for (t, p), gm in sorted(self.outputs.items())})

    @classmethod
    def build(cls, places: Mapping, transitions: Mapping, inputs: Mapping,
              outputs: Mapping) -> "ColoredPetriNet":
        """Assemble a net from color sets, mode sets and inscriptions alone,
        deriving the set-like base net from the inscribed arcs."""
        source = {t: {} for t in transitions}
        target = {t: {} for t in transitions}
        for p, t in inputs:
            source.setdefault(t, {})[p] = 1
        for t, p in outputs:
            target.setdefault(t, {})[p] = 1
        base = PetriNet(tuple(places), tuple(transitions), source, target)
        return cls(base, places, transitions, inputs, outputs)

    def __eq__(self, other):
        if not isinstance(other, ColoredPetriNet):
            return NotImplemented
        return (self.base == other.base and self.colors == other.colors
                and self.modes == other.modes and self.inputs == other.inputs
                and self.outputs == other.outputs)

    @property
    def places(self) -> tuple:
        return self.base.places

    @property
    def transitions(self) -> tuple:
        return self.base.transitions

    def bindings(self) -> list[tuple]:
        return [(t, k) for t in self.transitions for k in self.modes.get(t, ())]

    def effect(self, binding) -> tuple[ColoredMarking, ColoredMarking]:
        cached = self._effects.get(binding)
        if cached is None:
            cached = self._effects[binding] = _binding_effect(self, binding)
        return cached


def _binding_effect(K: ColoredPetriNet, binding) -> tuple[ColoredMarking, ColoredMarking]:
    try:
        t, k = binding
    except (TypeError, ValueError):
        raise UnknownBinding(f"{binding!r} is not a (transition, mode) pair") from None
    if t not in K.modes or k not in K.modes[t]:
        raise UnknownBinding(f"binding ({t}, {k}) is not declared")
    one = Multiset({k: 1})
    consumed = {p: K.inputs[(p, t)](one) for p in K.base.source[t] if (p, t) in K.inputs}
    produced = {p: K.outputs[(t, p)](one) for p in K.base.target[t] if (t, p) in K.outputs}
    return ColoredMarking(consumed), ColoredMarking(produced)


def validate_colored_net(K: ColoredPetriNet) -> list[Problem]:
    """Audit every structural invariant; an empty list means valid."""
    report = []
    base = K.base
    for msg in net_problems(base):
        report.append(Problem("base-structure", "base", msg))
    for p in base.places:
        if p not in K.colors:
            report.append(Problem("missing-color-set", f"place {p}", "no color set declared"))
        elif not K.colors[p]:
            report.append(Problem("empty-color-set", f"place {p}", "color set is empty"))
    for p in sorted(set(K.colors) - set(base.places)):
        report.append(Problem("undeclared-place", f"place {p}", "color set for an undeclared place"))
    for t in base.transitions:
        if t not in K.modes:
            report.append(Problem("missing-mode-set", f"transition {t}", "no mode set declared"))
        elif not K.modes[t]:
            report.append(Problem("empty-mode-set", f"transition {t}", "mode set is empty"))
    for t in sorted(set(K.modes) - set(base.transitions)):
        report.append(Problem("undeclared-transition", f"transition {t}",
                              "mode set for an undeclared transition"))

    arcs_in, arcs_out = set(), set()
    for t in base.transitions:
        for side, arcs, keyed in (("source", base.source, arcs_in),
                                  ("target", base.target, arcs_out)):
            for p, n in arcs.get(t, EMPTY).items():
                if n > 1:
                    report.append(Problem("arc-multiplicity", f"transition {t}",
                                          f"{side} coefficient of {p} is {n}, must be 0 or 1"))
                keyed.add((p, t) if side == "source" else (t, p))
    for arc in sorted(arcs_in - set(K.inputs)):
        report.append(Problem("missing-inscription", f"arc {arc[0]} -> {arc[1]}",
                              "input arc carries no inscription"))
    for arc in sorted(set(K.inputs) - arcs_in):
        report.append(Problem("extra-inscription", f"arc {arc[0]} -> {arc[1]}",
                              "inscription on a pair that is not an input arc"))
    for arc in sorted(arcs_out - set(K.outputs)):
        report.append(Problem("missing-inscription", f"arc {arc[0]} -> {arc[1]}",
                              "output arc carries no inscription"))
    for arc in sorted(set(K.outputs) - arcs_out):
        report.append(Problem("extra-inscription", f"arc {arc[0]} -> {arc[1]}",
                              "inscription on a pair that is not an output arc"))

    inscribed = [((p, t), f"arc {p} -> {t}", gm) for (p, t), gm in K.inputs.items()]
    inscribed += [((p, t), f"arc {t} -> {p}", gm) for (t, p), gm in K.outputs.items()]
    for (p, t), where, gm in inscribed:
        modes = set(K.modes.get(t, ()))
        missing = sorted(modes - set(gm.assignments))
        if missing:
            report.append(Problem("inscription-not-total", where,
                                  f"no image for mode(s) {', '.join(missing)}"))
        extra = sorted(set(gm.assignments) - modes)
        if extra:
            report.append(Problem("inscription-unknown-mode", where,
                                  f"image given for undeclared mode(s) {', '.join(map(str, extra))}"))
        palette = set(K.colors.get(p, ()))
        for k, img in gm.assignments.items():
            bad = [c for c in img if c not in palette]
            if bad:
                report.append(Problem("color-outside-place", where,
                                      f"mode {k} yields {', '.join(map(str, bad))} "
                                      f"not in the colors of {p}"))
    return report


def check_colored_marking(K: ColoredPetriNet, cm: ColoredMarking) -> None:
    for p, ms in cm.items():
        if p not in K.colors:
            raise DomainError(f"marking names unknown place {p}")
        palette = K.colors[p]
        for c in ms:
            if c not in palette:
                raise DomainError(f"color {format_element(c)} is not a color of place {p}")


def binding_effect(K: ColoredPetriNet, b) -> tuple[ColoredMarking, ColoredMarking]:
    """Tokens consumed from input places and produced on output places by
    firing ``b`` once."""
    return K.effect(b)


def step_effect(K: ColoredPetriNet, step: Multiset) -> tuple[ColoredMarking, ColoredMarking]:
    consumed, produced = [], []
    for b, n in step.items():
        c, p = K.effect(b)
        consumed.append(c.scale(n))
        produced.append(p.scale(n))
    return cmsum(consumed), cmsum(produced)


def colored_enabled(K: ColoredPetriNet, cm: ColoredMarking, step: Multiset) -> bool:
    check_colored_marking(K, cm)
    return step_effect(K, step)[0] <= cm


def colored_fire(K: ColoredPetriNet, cm: ColoredMarking, step: Multiset) -> ColoredMarking:
    check_colored_marking(K, cm)
    consumed, produced = step_effect(K, step)
    if not consumed <= cm:
        raise NotEnabled(f"step {step} needs {consumed} but the marking is {cm}")
    return (cm - consumed) + produced


def colored_enabled_steps(K: ColoredPetriNet, cm: ColoredMarking, max_size: int) -> list[Multiset]:
    steps = bounded_submultisets(K.bindings(), lambda b: K.effect(b)[0], cm, max_size,
                                 EMPTY_MARKING)
    return sorted(steps, key=str)


def colored_reachable(K: ColoredPetriNet, cm0: ColoredMarking, token_bound: int,
                      node_budget: int = DEFAULT_NODE_BUDGET) -> tuple:
    """Colored markings reachable by single-binding firings within
    ``token_bound`` tokens, in breadth-first discovery order."""
    check_colored_marking(K, cm0)
    if token_bound < cm0.total():
        raise ValueError(f"token bound {token_bound} is below the {cm0.total()} initial tokens")

    def successors(cm):
        for b in K.bindings():
            consumed, produced = K.effect(b)
            if consumed <= cm:
                yield (cm - consumed) + produced

    return breadth_first(cm0, successors, lambda cm: cm.total() <= token_bound, node_budget)


@dataclass(frozen=True, eq=False)
class ColoredMorphism:
    """A base net morphism plus color maps on places and mode maps on
    transitions, each an arbitrary generator map."""

    base: NetMorphism
    alpha_places: Mapping[str, GeneratorMap]
    alpha_transitions: Mapping[str, GeneratorMap]

    def __post_init__(self):
        object.__setattr__(self, "alpha_places", dict(sorted(self.alpha_places.items())))
        object.__setattr__(self, "alpha_transitions",
                           dict(sorted(self.alpha_transitions.items())))

    def __eq__(self, other):
        if not isinstance(other, ColoredMorphism):
            return NotImplemented
        return (self.base == other.base and self.alpha_places == other.alpha_places
                and self.alpha_transitions == other.alpha_transitions)

    @classmethod
    def identity(cls, K: ColoredPetriNet) -> "ColoredMorphism":
        return cls(NetMorphism.identity(K.base),
                   {p: GeneratorMap.identity(cs) for p, cs in K.colors.items()},
                   {t: GeneratorMap.identity(ms) for t, ms in K.modes.items()})

    def then(self, other: "ColoredMorphism") -> "ColoredMorphism":
        """Componentwise composite ``other . self``."""
        return ColoredMorphism(
            self.base.then(other.base),
            {p: a.then(other.alpha_places[self.base.places[p]])
             for p, a in self.alpha_places.items()},
            {t: a.then(other.alpha_transitions[self.base.transitions[t]])
             for t, a in self.alpha_transitions.items()},
        )

    def map_marking(self, cm: ColoredMarking) -> ColoredMarking:
        """Apply the color maps placewise and reindex along the place map."""
        return cmsum(ColoredMarking({self.base.places[p]: self.alpha_places[p](ms)})
                     for p, ms in cm.items())

    def map_step(self, step: Multiset) -> Multiset:
        parts = []
        for (t, k), n in step.items():
            u = self.base.transitions[t]
            image = self.alpha_transitions[t][k]
            parts.append(Multiset({(u, j): m * n for j, m in image.items()}))
        return msum(parts)


def check_colored_morphism(K: ColoredPetriNet, K2: ColoredPetriNet,
                           psi: ColoredMorphism) -> list[SquareViolation]:
    """Check the base squares, the codomains of every color/mode map, and
    both span squares for every transition and mode."""
    report = list(check_net_morphism(K.base, K2.base, psi.base))
    if report:
        return report

    for p in K.places:
        alpha = psi.alpha_places.get(p)
        if alpha is None:
            report.append(SquareViolation("alpha-place-not-total", None, None,
                                          detail=f"place {p}"))
            continue
        palette = set(K2.colors.get(psi.base.places[p], ()))
        for c in K.colors.get(p, ()):
            if c not in alpha.assignments:
                report.append(SquareViolation("alpha-place-not-total", None, None,
                                              detail=f"place {p} color {c}"))
                continue
            bad = [x for x in alpha.assignments[c] if x not in palette]
            if bad:
                report.append(SquareViolation(
                    "alpha-place-codomain", None, None,
                    detail=f"place {p} color {c} maps to {', '.join(map(str, bad))} "
                           f"outside the colors of {psi.base.places[p]}"))
    for t in K.transitions:
        alpha = psi.alpha_transitions.get(t)
        if alpha is None:
            report.append(SquareViolation("alpha-transition-not-total", t, None))
            continue
        allowed = set(K2.modes.get(psi.base.transitions[t], ()))
        for k in K.modes.get(t, ()):
            if k not in alpha.assignments:
                report.append(SquareViolation("alpha-transition-not-total", t, None, mode=k))
                continue
            bad = [x for x in alpha.assignments[k] if x not in allowed]
            if bad:
                report.append(SquareViolation(
                    "alpha-transition-codomain", t, None, mode=k,
                    detail=f"maps to {', '.join(map(str, bad))} outside the modes of "
                           f"{psi.base.transitions[t]}"))
    if report:
        return report

    for t in K.transitions:
        u = psi.base.transitions[t]
        for k in K.modes[t]:
            image = psi.alpha_transitions[t][k]
            consumed, produced = K.effect((t, k))
            for side, mine in (("left", consumed), ("right", produced)):
                expected = psi.map_marking(mine)
                legs = [K2.effect((u, j))[0 if side == "left" else 1].scale(n)
                        for j, n in image.items()]
                actual = cmsum(legs)
                if expected != actual:
                    report.append(SquareViolation("span-square", t, side, mode=k,
                                                  expected=expected, actual=actual))
    return report
