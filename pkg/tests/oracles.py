"""Brute-force oracles kept apart from the code paths they check.

Nothing here uses the normal-form machinery: equivalence of step
sequences is decided by exploring the graph of layer split/merge
rewrites directly, and firing goes through the colored token game only.
"""

from __future__ import annotations

from collections import deque
from itertools import product

from colorednets.colored import colored_enabled, colored_fire, step_effect
from colorednets.multiset import Multiset


def sub_multisets(ms: Multiset):
    """Every sub-multiset of ``ms``, including empty and ``ms`` itself."""
    items = list(ms.items())
    for counts in product(*(range(n + 1) for _, n in items)):
        yield Multiset({e: c for (e, _), c in zip(items, counts) if c})


def _consumed(K, layer):
    return step_effect(K, layer)[0]


def _markings(K, source, layers):
    out = [source]
    m = source
    for layer in layers:
        m = colored_fire(K, m, layer)
        out.append(m)
    return out


def rewrite_neighbours(K, source, layers: tuple):
    """Layerings one interchange rewrite away: split a layer into two
    sequential parts (either order), or merge two adjacent layers that fit
    side by side."""
    markings = _markings(K, source, layers)
    for i, layer in enumerate(layers):
        for part in sub_multisets(layer):
            if not part or part == layer:
                continue
            rest = layer - part
            yield layers[:i] + (part, rest) + layers[i + 1:]
    for i in range(len(layers) - 1):
        merged = layers[i] + layers[i + 1]
        if _consumed(K, layers[i]) + _consumed(K, layers[i + 1]) <= markings[i]:
            yield layers[:i] + (merged,) + layers[i + 2:]


def strip(layers) -> tuple:
    return tuple(layer for layer in layers if layer)


def rewrite_class(K, source, layers, limit: int = 200_000) -> frozenset:
    start = strip(layers)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in rewrite_neighbours(K, source, cur):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > limit:
                    raise RuntimeError("rewrite class too large for the oracle")
                queue.append(nxt)
    return frozenset(seen)


def oracle_equal(K, s1, s2) -> bool:
    if s1.source != s2.source:
        return False
    return strip(s2.layers) in rewrite_class(K, s1.source, s1.layers)


def raw_sequences(K, source, max_len: int, max_step_size: int):
    """All layerings from ``source`` with at most ``max_len`` nonempty
    layers of size at most ``max_step_size``, found by trying every
    multiset of bindings against :func:`colored_enabled`."""
    bindings = K.bindings()
    candidate_steps = []
    for counts in product(range(max_step_size + 1), repeat=len(bindings)):
        if 0 < sum(counts) <= max_step_size:
            candidate_steps.append(Multiset({b: c for b, c in zip(bindings, counts) if c}))
    out = [()]

    def walk(m, prefix):
        if len(prefix) == max_len:
            return
        for s in candidate_steps:
            if colored_enabled(K, m, s):
                seq = prefix + (s,)
                out.append(seq)
                walk(colored_fire(K, m, s), seq)

    walk(source, ())
    return out


def morphism_classes(K, source, max_len: int, max_step_size: int) -> list[frozenset]:
    """Distinct morphisms out of ``source`` having a representative within
    the bounds, each given as its full rewrite class."""
    classes = []
    owner = {}
    for layers in raw_sequences(K, source, max_len, max_step_size):
        if layers in owner:
            continue
        cls = rewrite_class(K, source, layers)
        for member in cls:
            owner[member] = len(classes)
        classes.append(cls)
    return classes


def colored_reach_closure(K, cm0, token_bound):
    """Fixpoint closure of single-binding firings, without a queue."""
    states = {cm0}
    while True:
        new = set()
        for m in states:
            for b in K.bindings():
                s = Multiset({b: 1})
                if colored_enabled(K, m, s):
                    n = colored_fire(K, m, s)
                    if n.total() <= token_bound and n not in states:
                        new.add(n)
        if not new:
            return states
        states |= new
