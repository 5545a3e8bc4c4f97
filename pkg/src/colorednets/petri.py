"""Ordinary place/transition nets: the token game, morphisms, bounded search."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .errors import DomainError, NotEnabled, ResourceLimit
from .multiset import EMPTY, Multiset, format_element, msum

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class PetriNet:
    """Transitions with a source and target multiset over places.

    Construction sorts the place and transition sets but does not validate;
    use :func:`net_problems` for that.
    """

    places: tuple
    transitions: tuple
    source: Mapping[str, Multiset] = field(repr=False)
    target: Mapping[str, Multiset] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(sorted(set(self.places))))
        object.__setattr__(self, "transitions", tuple(sorted(set(self.transitions))))
        for name in ("source", "target"):
            arcs = {t: (ms if isinstance(ms, Multiset) else Multiset(ms))
                    for t, ms in getattr(self, name).items()}
            object.__setattr__(self, name, arcs)

    def __eq__(self, other):
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (self.places == other.places and self.transitions == other.transitions
                and self.source == other.source and self.target == other.target)

    def marking(self, counts=None) -> Multiset:
        return Multiset(counts or {}, self.places)

    def step(self, counts=None) -> Multiset:
        return Multiset(counts or {}, self.transitions)

    def consumed(self, step: Multiset) -> Multiset:
        _check_step(self, step)
        return msum(self.source[t].scale(n) for t, n in step.items())

    def produced(self, step: Multiset) -> Multiset:
        _check_step(self, step)
        return msum(self.target[t].scale(n) for t, n in step.items())


def net_problems(net: PetriNet) -> list[str]:
    """Structural defects of ``net``; empty when the net is well formed."""
    out = []
    declared = set(net.places)
    for side, arcs in (("source", net.source), ("target", net.target)):
        for t in net.transitions:
            if t not in arcs:
                out.append(f"transition {t}: no {side} multiset")
                continue
            stray = [p for p in arcs[t] if p not in declared]
            if stray:
                out.append(f"transition {t}: {side} uses undeclared place(s) "
                           f"{', '.join(map(str, stray))}")
        extra = sorted(set(arcs) - set(net.transitions))
        if extra:
            out.append(f"{side} given for undeclared transition(s) {', '.join(extra)}")
    return out


def _check_step(net: PetriNet, step: Multiset) -> None:
    if step.domain is not None and step.domain != frozenset(net.transitions):
        raise DomainError("step is not over this net's transitions")
    for t in step:
        if t not in net.source:
            raise DomainError(f"unknown transition {format_element(t)}")


def _check_marking(net: PetriNet, m: Multiset) -> None:
    if m.domain is not None and m.domain != frozenset(net.places):
        raise DomainError("marking is not over this net's places")
    declared = set(net.places)
    for p in m:
        if p not in declared:
            raise DomainError(f"unknown place {format_element(p)}")


def enabled(net: PetriNet, m: Multiset, step: Multiset) -> bool:
    """Whether ``step`` can fire at ``m``; the empty step is always enabled."""
    _check_marking(net, m)
    return net.consumed(step) <= m


def fire(net: PetriNet, m: Multiset, step: Multiset) -> Multiset:
    _check_marking(net, m)
    need = net.consumed(step)
    if not need <= m:
        raise NotEnabled(f"step {step} needs {need} but the marking is {m}")
    return (m - need) + net.produced(step)


@dataclass(frozen=True)
class NetMorphism:
    """A pair of functions on transitions and places."""

    transitions: Mapping[str, str]
    places: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "transitions", dict(sorted(self.transitions.items())))
        object.__setattr__(self, "places", dict(sorted(self.places.items())))

    def __hash__(self):
        return hash((tuple(self.transitions.items()), tuple(self.places.items())))

    @classmethod
    def identity(cls, net: PetriNet) -> "NetMorphism":
        return cls({t: t for t in net.transitions}, {p: p for p in net.places})

    def then(self, other: "NetMorphism") -> "NetMorphism":
        """``other`` after ``self``."""
        return NetMorphism({t: other.transitions[u] for t, u in self.transitions.items()},
                           {p: other.places[q] for p, q in self.places.items()})

    def map_marking(self, m: Multiset) -> Multiset:
        return m.map_elements(self.places.__getitem__)

    def map_step(self, step: Multiset) -> Multiset:
        return step.map_elements(self.transitions.__getitem__)


@dataclass(frozen=True)
class SquareViolation:
    """One failed commuting-square condition of a morphism check.

    ``side`` is ``"source"``/``"target"`` for base squares and
    ``"left"``/``"right"`` for span squares of colored morphisms.
    """

    code: str
    transition: Optional[str]
    side: Optional[str]
    mode: Optional[str] = None
    expected: object = None
    actual: object = None
    detail: str = ""

    def __str__(self) -> str:
        where = [f"transition={self.transition}"] if self.transition is not None else []
        if self.mode is not None:
            where.append(f"mode={self.mode}")
        if self.side is not None:
            where.append(f"side={self.side}")
        text = f"{self.code} " + " ".join(where)
        if self.expected is not None or self.actual is not None:
            text += f" expected={self.expected} actual={self.actual}"
        if self.detail:
            text += f" ({self.detail})"
        return text


def check_net_morphism(P: PetriNet, Q: PetriNet, phi: NetMorphism) -> list[SquareViolation]:
    """Check both commuting squares of ``phi`` for every transition of ``P``."""
    report = []
    for t in P.transitions:
        if t not in phi.transitions:
            report.append(SquareViolation("transition-map-not-total", t, None))
        elif phi.transitions[t] not in Q.source:
            report.append(SquareViolation("transition-image-undeclared", t, None,
                                          detail=f"image {phi.transitions[t]}"))
    for p in P.places:
        if p not in phi.places:
            report.append(SquareViolation("place-map-not-total", None, None, detail=f"place {p}"))
        elif phi.places[p] not in Q.places:
            report.append(SquareViolation("place-image-undeclared", None, None,
                                          detail=f"place {p} maps to {phi.places[p]}"))
    if report:
        return report
    for t in P.transitions:
        u = phi.transitions[t]
        for side, mine, theirs in (("source", P.source, Q.source), ("target", P.target, Q.target)):
            expected = phi.map_marking(mine[t])
            actual = theirs[u]
            if expected != actual:
                report.append(SquareViolation("base-square", t, side,
                                              expected=expected, actual=actual))
    return report


def bounded_submultisets(candidates: Iterable, cost: Callable, capacity, max_size: int,
                         zero) -> Iterator[Multiset]:
    """Yield every nonempty multiset over ``candidates`` of total at most
    ``max_size`` whose summed ``cost`` stays ``<= capacity``.

    ``cost`` values and ``capacity`` only need ``+`` and ``<=``, so the
    same search serves plain markings and colored markings.
    """
    cands = list(candidates)
    costs = [cost(c) for c in cands]

    def rec(i, used, size, chosen):
        if i == len(cands):
            if size:
                yield Multiset({c: n for c, n in chosen})
            return
        yield from rec(i + 1, used, size, chosen)
        acc = used
        for n in range(1, max_size - size + 1):
            acc = acc + costs[i]
            if not acc <= capacity:
                break
            yield from rec(i + 1, acc, size + n, chosen + [(cands[i], n)])

    yield from rec(0, zero, 0, [])


def enabled_steps(net: PetriNet, m: Multiset, max_size: int) -> list[Multiset]:
    """All nonempty enabled steps of total multiplicity ``<= max_size``,
    sorted by their canonical text."""
    steps = bounded_submultisets(net.transitions, lambda t: net.source[t], m, max_size, EMPTY)
    return sorted(steps, key=str)


def enumerate_firing_sequences(net: PetriNet, m0: Multiset, max_len: int, max_step_size: int,
                               node_budget: int = DEFAULT_NODE_BUDGET) -> list[tuple]:
    """Every sequence of nonempty enabled steps up to the given bounds.

    Returns ``(steps, final_marking)`` pairs, the empty sequence first, in
    lexicographic order of the steps' canonical text.
    """
    if max_len < 0 or max_step_size < 0:
        raise ValueError("bounds must be non-negative")
    _check_marking(net, m0)
    out = []
    nodes = 0

    def visit(m, prefix):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimit(f"firing-sequence enumeration exceeded {node_budget} nodes")
        out.append((tuple(prefix), m))
        if len(prefix) == max_len:
            return
        for step in enabled_steps(net, m, max_step_size):
            visit(fire(net, m, step), prefix + [step])

    visit(m0, [])
    return out


def reachable(net: PetriNet, m0: Multiset, token_bound: int,
              node_budget: int = DEFAULT_NODE_BUDGET) -> tuple:
    """Markings reachable from ``m0`` by single firings without ever holding
    more than ``token_bound`` tokens, in breadth-first discovery order."""
    _check_marking(net, m0)
    if token_bound < m0.total():
        raise ValueError(f"token bound {token_bound} is below the {m0.total()} initial tokens")
    return breadth_first(
        m0,
        lambda m: (fire(net, m, Multiset({t: 1})) for t in net.transitions
                   if net.source[t] <= m),
        lambda m: m.total() <= token_bound,
        node_budget,
    )


def breadth_first(start, successors: Callable, keep: Callable, node_budget: int) -> tuple:
    seen = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for nxt in successors(current):
            if nxt in seen or not keep(nxt):
                continue
            if len(seen) >= node_budget:
                raise ResourceLimit(f"reachability exceeded {node_budget} markings")
            seen[nxt] = None
            queue.append(nxt)
    return tuple(seen)
