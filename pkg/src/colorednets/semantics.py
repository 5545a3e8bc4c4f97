"""Step sequences as morphisms of the operational semantics.

A :class:`StepSequence` is a source marking plus a list of layers; each
layer is a step fired with whatever tokens it does not consume left idle.
Two sequences denote the same morphism when they are connected by
interchange rewrites (splitting a layer in two, or merging a binding into
the previous layer when both fit side by side).  :func:`foata_normalize`
picks one canonical greedy layering per equivalence class.

Everything here works for colored nets (steps over bindings, markings as
:class:`ColoredMarking`) and for ordinary nets (steps over transitions,
markings as :class:`Multiset`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from .colored import (
    EMPTY_MARKING,
    ColoredMarking,
    ColoredMorphism,
    ColoredPetriNet,
    check_colored_marking,
    colored_enabled_steps,
)
from .errors import DomainError, IllFormedSequence, NotComposable, ResourceLimit
from .multiset import EMPTY, Multiset
from .petri import DEFAULT_NODE_BUDGET, PetriNet, _check_marking, enabled_steps

Net = Union[ColoredPetriNet, PetriNet]


class _Colored:
    zero = EMPTY_MARKING

    def __init__(self, K: ColoredPetriNet):
        self.net = K
        self.declared = set(K.bindings())

    def pre(self, b):
        return self.net.effect(b)[0]

    def post(self, b):
        return self.net.effect(b)[1]

    def check_marking(self, m):
        if not isinstance(m, ColoredMarking):
            raise DomainError("colored nets take ColoredMarking markings")
        check_colored_marking(self.net, m)

    def steps(self, m, max_size):
        return colored_enabled_steps(self.net, m, max_size)

    @staticmethod
    def flat(m):
        return [((p, c), n) for p, ms in m.items() for c, n in ms.items()]


class _Ordinary:
    zero = EMPTY

    def __init__(self, net: PetriNet):
        self.net = net
        self.declared = set(net.transitions)

    def pre(self, t):
        return self.net.source[t]

    def post(self, t):
        return self.net.target[t]

    def check_marking(self, m):
        if not isinstance(m, Multiset):
            raise DomainError("ordinary nets take Multiset markings")
        _check_marking(self.net, m)

    def steps(self, m, max_size):
        return enabled_steps(self.net, m, max_size)

    @staticmethod
    def flat(m):
        return list(m.items())


def _system(net: Net):
    if isinstance(net, ColoredPetriNet):
        return _Colored(net)
    if isinstance(net, PetriNet):
        return _Ordinary(net)
    raise TypeError(f"expected a PetriNet or ColoredPetriNet, got {type(net).__name__}")


@dataclass(frozen=True)
class StepSequence:
    """A source marking and a tuple of layers (steps).  No layers is the
    identity on the source."""

    source: object
    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(
            layer if isinstance(layer, Multiset) else Multiset(layer) for layer in self.layers))

    def __len__(self):
        return len(self.layers)

    def content(self) -> Multiset:
        """Every binding occurrence of the sequence, ignoring layering."""
        total = EMPTY
        for layer in self.layers:
            total = total + layer
        return total

    def sort_key(self) -> tuple:
        return (len(self.layers), tuple(str(layer) for layer in self.layers))

    def __str__(self) -> str:
        return format_sequence(self)


class FoataForm(StepSequence):
    """A step sequence already in normal form (produced by
    :func:`foata_normalize`)."""


def format_sequence(s: StepSequence) -> str:
    lines = [f"source: {s.source}"]
    lines += [str(layer) for layer in s.layers]
    return "\n".join(lines)


def _layer_pre(sys, layer: Multiset):
    total = sys.zero
    for b, n in layer.items():
        total = total + sys.pre(b).scale(n)
    return total


def _layer_post(sys, layer: Multiset):
    total = sys.zero
    for b, n in layer.items():
        total = total + sys.post(b).scale(n)
    return total


def _check_sequence(sys, s: StepSequence):
    """Validate ``s`` and return the markings before each layer and the target."""
    sys.check_marking(s.source)
    m = s.source
    markings = [m]
    for i, layer in enumerate(s.layers, 1):
        unknown = [b for b in layer if b not in sys.declared]
        if unknown:
            raise DomainError(f"layer {i} uses undeclared binding(s) {unknown}")
        need = _layer_pre(sys, layer)
        if not need <= m:
            raise IllFormedSequence(f"layer {i} {layer} needs {need} but only {m} is available")
        m = (m - need) + _layer_post(sys, layer)
        markings.append(m)
    return markings


def seq_target(K: Net, s: StepSequence):
    """The marking reached after firing every layer of ``s``."""
    return _check_sequence(_system(K), s)[-1]


def identity(source) -> StepSequence:
    return StepSequence(source, ())


def seq_compose(K: Net, s1: StepSequence, s2: StepSequence) -> StepSequence:
    """``s1`` followed by ``s2``."""
    sys = _system(K)
    middle = _check_sequence(sys, s1)[-1]
    _check_sequence(sys, s2)
    if middle != s2.source:
        raise NotComposable(f"first sequence ends at {middle} but the second starts at {s2.source}")
    return StepSequence(s1.source, s1.layers + s2.layers)


def seq_parallel(K: Net, s1: StepSequence, s2: StepSequence) -> StepSequence:
    """Run ``s1`` and ``s2`` side by side; the shorter one idles."""
    sys = _system(K)
    _check_sequence(sys, s1)
    _check_sequence(sys, s2)
    n = max(len(s1.layers), len(s2.layers))
    pad1 = s1.layers + (EMPTY,) * (n - len(s1.layers))
    pad2 = s2.layers + (EMPTY,) * (n - len(s2.layers))
    return StepSequence(s1.source + s2.source, tuple(a + b for a, b in zip(pad1, pad2)))


def _word(s: StepSequence) -> tuple:
    return tuple(b for layer in s.layers for b in layer.elements())


def _vectors(sys, source, word):
    """Integer-vector views of ``source`` and each letter's pre and net
    effect, over the keys any of them touch."""
    letters = sorted(set(word), key=str)
    keys = {k for k, _ in sys.flat(source)}
    for b in letters:
        keys.update(k for k, _ in sys.flat(sys.pre(b)))
        keys.update(k for k, _ in sys.flat(sys.post(b)))
    index = {k: i for i, k in enumerate(sorted(keys, key=str))}

    def vec(m):
        out = [0] * len(index)
        for k, n in sys.flat(m):
            out[index[k]] = n
        return out

    pre = {b: vec(sys.pre(b)) for b in letters}
    delta = {b: [q - p for p, q in zip(pre[b], vec(sys.post(b)))] for b in letters}
    return vec(source), pre, delta


def _swap_class(sys, source, word: tuple, limit: int) -> set:
    """All firing words reachable from ``word`` by swapping adjacent
    occurrences that fit side by side at the marking where they start."""
    start, pre, delta = _vectors(sys, source, word)
    both = {(a, b): [x + y for x, y in zip(pre[a], pre[b])] for a in pre for b in pre}
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        m = start
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a != b and all(x <= y for x, y in zip(both[a, b], m)):
                v = w[:i] + (b, a) + w[i + 2:]
                if v not in seen:
                    if len(seen) >= limit:
                        raise ResourceLimit(f"interchange class exceeded {limit} words")
                    seen.add(v)
                    queue.append(v)
            m = [x + y for x, y in zip(m, delta[a])]
    return seen


def _promote(sys, source, word: tuple) -> tuple:
    """Greedy layering: move single occurrences into the previous layer
    until no such move is possible."""
    layers = [Multiset({b: 1}) for b in word]
    changed = True
    while changed:
        changed = False
        m = source
        for i in range(1, len(layers)):
            prev = layers[i - 1]
            before_prev = m
            prev_pre = _layer_pre(sys, prev)
            for b in layers[i]:
                if prev_pre + sys.pre(b) <= before_prev:
                    layers[i - 1] = prev + Multiset({b: 1})
                    layers[i] = layers[i] - Multiset({b: 1})
                    changed = True
                    break
            if changed:
                break
            m = (m - prev_pre) + _layer_post(sys, prev)
        layers = [layer for layer in layers if layer]
    return tuple(layers)


class NormalFormCache:
    """Memo from firing words to normal forms, for one net and source."""

    def __init__(self, class_limit: int = 200_000):
        self.forms: dict = {}
        self.class_limit = class_limit

    def normal_form(self, sys, source, word: tuple) -> tuple:
        key = (source, word)
        found = self.forms.get(key)
        if found is None:
            members = _swap_class(sys, source, word, self.class_limit)
            found = _promote(sys, source, min(members))
            for w in members:
                self.forms[(source, w)] = found
        return found


def foata_normalize(K: Net, s: StepSequence, cache: Optional[NormalFormCache] = None) -> FoataForm:
    """Canonical greedy layering of the interchange class of ``s``.

    The result has the same source, target and binding content, contains
    no empty layer, and no binding occurrence could be merged into the
    layer before it.
    """
    sys = _system(K)
    _check_sequence(sys, s)
    cache = cache or NormalFormCache()
    return FoataForm(s.source, cache.normal_form(sys, s.source, _word(s)))


def is_greedy(K: Net, s: StepSequence) -> bool:
    """True when no layer is empty and no single occurrence can move into
    the preceding layer."""
    sys = _system(K)
    markings = _check_sequence(sys, s)
    if any(not layer for layer in s.layers):
        return False
    for i in range(1, len(s.layers)):
        prev_pre = _layer_pre(sys, s.layers[i - 1])
        if any(prev_pre + sys.pre(b) <= markings[i - 1] for b in s.layers[i]):
            return False
    return True


def seq_equal(K: Net, s1: StepSequence, s2: StepSequence) -> bool:
    """Whether ``s1`` and ``s2`` denote the same morphism."""
    sys = _system(K)
    _check_sequence(sys, s1)
    _check_sequence(sys, s2)
    if s1.source != s2.source or s1.content() != s2.content():
        return False
    cache = NormalFormCache()
    return foata_normalize(K, s1, cache) == foata_normalize(K, s2, cache)


def enumerate_step_sequences(K: Net, m0, max_len: int, max_step_size: int,
                             node_budget: int = DEFAULT_NODE_BUDGET) -> list[FoataForm]:
    """Normal forms of every morphism out of ``m0`` that has some
    representative with at most ``max_len`` nonempty layers, each of total
    multiplicity at most ``max_step_size``.

    The identity comes first; the rest are ordered by layer count and then
    by the canonical text of their layers.
    """
    if max_len < 0 or max_step_size < 0:
        raise ValueError("bounds must be non-negative")
    sys = _system(K)
    sys.check_marking(m0)
    cache = NormalFormCache()
    forms = set()
    nodes = 0

    def visit(m, word, depth):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimit(f"step-sequence enumeration exceeded {node_budget} nodes")
        forms.add(cache.normal_form(sys, m0, word))
        if depth == max_len:
            return
        for step in sys.steps(m, max_step_size):
            nxt = (m - _layer_pre(sys, step)) + _layer_post(sys, step)
            visit(nxt, word + tuple(step.elements()), depth + 1)

    visit(m0, (), 0)
    out = [FoataForm(m0, layers) for layers in forms]
    out.sort(key=StepSequence.sort_key)
    return out


def map_sequence(psi: ColoredMorphism, s: StepSequence) -> StepSequence:
    """Image of a colored step sequence under a colored morphism."""
    return StepSequence(psi.map_marking(s.source), tuple(psi.map_step(layer) for layer in s.layers))
