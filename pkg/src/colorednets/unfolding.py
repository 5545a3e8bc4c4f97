"""Unfolding colored nets into ordinary nets, on nets and on morphisms,
and a bounded check that the unfolding has the same behaviour."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .colored import (
    ColoredMarking,
    ColoredMorphism,
    ColoredPetriNet,
    check_colored_marking,
    check_colored_morphism,
    colored_reachable,
    validate_colored_net,
)
from .errors import DomainError, NetError, NotFunctionLike, ValidationFailed
from .multiset import Multiset, msum
from .petri import DEFAULT_NODE_BUDGET, NetMorphism, PetriNet, reachable
from .semantics import NormalFormCache, StepSequence, enumerate_step_sequences, foata_normalize

SEPARATOR = "⊙"  # reserved: rejected in user identifiers


def pair_name(base: str, color: str) -> str:
    return f"{base}{SEPARATOR}{color}"


def split_name(name: str) -> tuple[str, str]:
    parts = name.split(SEPARATOR)
    if len(parts) != 2:
        raise DomainError(f"{name!r} is not an unfolded (base, color) name")
    return parts[0], parts[1]


def unfold_net(K: ColoredPetriNet) -> PetriNet:
    """The ordinary net with a place per (place, color) and a transition per
    (transition, mode)."""
    problems = validate_colored_net(K)
    if problems:
        raise ValidationFailed(f"cannot unfold an invalid net: {problems[0]}", problems)
    places = [pair_name(p, c) for p in K.places for c in K.colors[p]]
    source, target = {}, {}
    for t, k in K.bindings():
        consumed, produced = K.effect((t, k))
        source[pair_name(t, k)] = marking_to_unfolded(K, consumed)
        target[pair_name(t, k)] = marking_to_unfolded(K, produced)
    return PetriNet(tuple(places), tuple(source), source, target)


def marking_to_unfolded(K: ColoredPetriNet, cm: ColoredMarking) -> Multiset:
    check_colored_marking(K, cm)
    return msum(ms.map_elements(lambda c, p=p: pair_name(p, c)) for p, ms in cm.items())


def unfolded_to_marking(K: ColoredPetriNet, m: Multiset) -> ColoredMarking:
    per_place: dict = {}
    for name, n in m.items():
        p, c = split_name(name)
        per_place.setdefault(p, {})[c] = n
    cm = ColoredMarking(per_place)
    check_colored_marking(K, cm)
    return cm


def step_to_unfolded(K: ColoredPetriNet, step: Multiset) -> Multiset:
    declared = set(K.bindings())
    for b in step:
        if b not in declared:
            raise DomainError(f"binding {b} is not declared")
    return step.map_elements(lambda b: pair_name(*b))


def unfolded_to_step(K: ColoredPetriNet, step: Multiset) -> Multiset:
    out = step.map_elements(split_name)
    declared = set(K.bindings())
    for b in out:
        if b not in declared:
            raise DomainError(f"binding {b} is not declared")
    return out


def sequence_to_unfolded(K: ColoredPetriNet, s: StepSequence) -> StepSequence:
    return StepSequence(marking_to_unfolded(K, s.source),
                        tuple(step_to_unfolded(K, layer) for layer in s.layers))


def unfold_morphism(psi: ColoredMorphism, K: Optional[ColoredPetriNet] = None,
                    K2: Optional[ColoredPetriNet] = None) -> NetMorphism:
    """The net morphism between unfoldings induced by ``psi``.

    Only defined when every color and mode map sends generators to single
    generators.  When ``K`` and ``K2`` are given, ``psi`` is checked first.
    """
    if K is not None and K2 is not None:
        report = check_colored_morphism(K, K2, psi)
        if report:
            raise ValidationFailed(f"not a colored morphism: {report[0]}", report)
    transitions, places = {}, {}
    for t, alpha in psi.alpha_transitions.items():
        u = psi.base.transitions[t]
        for k in sorted(alpha.source):
            image = alpha[k]
            if image.total() != 1:
                raise NotFunctionLike(f"mode {k} of {t} maps to {image}")
            transitions[pair_name(t, k)] = pair_name(u, next(iter(image)))
    for p, alpha in psi.alpha_places.items():
        q = psi.base.places[p]
        for c in sorted(alpha.source):
            image = alpha[c]
            if image.total() != 1:
                raise NotFunctionLike(f"color {c} of {p} maps to {image}")
            places[pair_name(p, c)] = pair_name(q, next(iter(image)))
    return NetMorphism(transitions, places)


@dataclass
class Counterexample:
    check: str
    length: Optional[int]
    description: str

    def __str__(self):
        size = "" if self.length is None else f" (length {self.length})"
        return f"{self.check}{size}: {self.description}"


@dataclass
class IsoReport:
    """Outcome of :func:`verify_unfolding_iso`."""

    object_check: dict = field(default_factory=dict)
    morphism_check: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return (bool(self.object_check.get("bijective"))
                and bool(self.morphism_check.get("bijective"))
                and not self.counterexamples)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "objects": self.object_check,
            "morphisms": {**self.morphism_check,
                          "colored_per_length": {str(k): v for k, v in
                                                 self.morphism_check.get("colored_per_length", {}).items()},
                          "unfolded_per_length": {str(k): v for k, v in
                                                  self.morphism_check.get("unfolded_per_length", {}).items()}},
            "counterexamples": [str(c) for c in self.counterexamples],
        }

    def summary(self) -> str:
        obj, mor = self.object_check, self.morphism_check
        lines = [
            f"objects: {obj.get('colored')} colored, {obj.get('unfolded')} unfolded, "
            f"bijective={obj.get('bijective')}",
            f"morphisms: bijective={mor.get('bijective')}",
        ]
        lengths = sorted(set(mor.get("colored_per_length", {})) | set(mor.get("unfolded_per_length", {})))
        for n in lengths:
            lines.append(f"  length {n}: {mor['colored_per_length'].get(n, 0)} colored, "
                         f"{mor['unfolded_per_length'].get(n, 0)} unfolded")
        lines += [f"counterexample: {c}" for c in self.counterexamples]
        lines.append("holds" if self.holds else "FAILS")
        return "\n".join(lines)


def verify_unfolding_iso(K: ColoredPetriNet, cm0: ColoredMarking, max_len: int,
                         max_step_size: int, token_bound: int,
                         node_budget: int = DEFAULT_NODE_BUDGET,
                         unfolded: Optional[PetriNet] = None) -> IsoReport:
    """Check, within bounds, that translating markings and steps is a
    bijection between the colored semantics from ``cm0`` and the semantics
    of the unfolding from the translated marking.

    ``unfolded`` overrides the net compared against, which lets tests feed
    a deliberately broken unfolding.
    """
    U = unfold_net(K) if unfolded is None else unfolded
    m0 = marking_to_unfolded(K, cm0)
    report = IsoReport()

    colored_states = colored_reachable(K, cm0, token_bound, node_budget)
    unfolded_states = set(reachable(U, m0, token_bound, node_budget))
    images = [marking_to_unfolded(K, cm) for cm in colored_states]
    injective = len(set(images)) == len(colored_states)
    surjective = set(images) == unfolded_states
    report.object_check = {
        "colored": len(colored_states),
        "unfolded": len(unfolded_states),
        "injective": injective,
        "surjective": surjective,
        "bijective": injective and surjective,
    }
    for cm, image in zip(colored_states, images):
        if image not in unfolded_states:
            report.counterexamples.append(Counterexample(
                "objects", None, f"colored marking {cm} maps to unreachable {image}"))
    for m in sorted(unfolded_states - set(images), key=Multiset.sort_key):
        report.counterexamples.append(Counterexample(
            "objects", None, f"unfolded marking {m} has no colored preimage"))

    colored_forms = enumerate_step_sequences(K, cm0, max_len, max_step_size, node_budget)
    unfolded_forms = enumerate_step_sequences(U, m0, max_len, max_step_size, node_budget)
    targets = set(unfolded_forms)
    cache = NormalFormCache()
    hit = {}
    for form in colored_forms:
        try:
            image = foata_normalize(U, sequence_to_unfolded(K, form), cache)
        except NetError as exc:
            report.counterexamples.append(Counterexample(
                "morphisms", len(form), f"colored sequence [{_inline(form)}] does not "
                                        f"translate: {exc}"))
            continue
        if image not in targets:
            report.counterexamples.append(Counterexample(
                "morphisms", len(form), f"colored sequence [{_inline(form)}] has no "
                                        f"unfolded counterpart"))
        elif image in hit:
            report.counterexamples.append(Counterexample(
                "morphisms", len(form), f"colored sequences [{_inline(hit[image])}] and "
                                        f"[{_inline(form)}] translate to the same morphism"))
        else:
            hit[image] = form
    for form in unfolded_forms:
        if form not in hit:
            report.counterexamples.append(Counterexample(
                "morphisms", len(form), f"unfolded sequence [{_inline(form)}] has no "
                                        f"colored counterpart"))
    colored_counts = Counter(len(f) for f in colored_forms)
    unfolded_counts = Counter(len(f) for f in unfolded_forms)
    injective = len(hit) == len(colored_forms)
    surjective = len(hit) == len(unfolded_forms)
    lengths = sorted(set(range(max_len + 1)) | set(colored_counts) | set(unfolded_counts))
    report.morphism_check = {
        "max_len": max_len,
        "max_step_size": max_step_size,
        "colored": len(colored_forms),
        "unfolded": len(unfolded_forms),
        "colored_per_length": {n: colored_counts.get(n, 0) for n in lengths},
        "unfolded_per_length": {n: unfolded_counts.get(n, 0) for n in lengths},
        "injective": injective,
        "surjective": surjective,
        "bijective": injective and surjective,
    }
    return report


def _inline(s: StepSequence) -> str:
    return "; ".join(str(layer) for layer in s.layers) or "identity"
