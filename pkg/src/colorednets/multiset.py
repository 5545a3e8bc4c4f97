"""Finite multisets, i.e. elements of the free commutative monoid N[X].

Elements are identifiers: strings, or tuples of strings for compound
elements such as (transition, mode) bindings.  Iteration is always in
sorted identifier order so equal multisets print identically.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from typing import Hashable, Optional

from .errors import CountOverflow, DomainError, NotSubMultiset

MAX_COUNT = 2**63 - 1

Element = Hashable


def _checked(n: int) -> int:
    if n > MAX_COUNT:
        raise CountOverflow(f"count {n} exceeds {MAX_COUNT}")
    return n


def _join_domains(a: Optional[frozenset], b: Optional[frozenset]) -> Optional[frozenset]:
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise DomainError("multisets live over different domains")


def format_element(e) -> str:
    if isinstance(e, tuple):
        return "(" + ", ".join(format_element(x) for x in e) + ")"
    return str(e)


class Multiset(Mapping):
    """An immutable finitely supported map from elements to positive counts.

    ``domain`` optionally pins the set of admissible elements.  Operations
    between two pinned multisets with different domains raise
    :class:`DomainError`; an unpinned multiset is compatible with anything.
    Equality and hashing only look at the counts.
    """

    __slots__ = ("_counts", "_domain", "_hash", "_total")

    def __init__(self, counts=None, domain: Optional[Iterable] = None):
        items: dict = {}
        if counts is None:
            pass
        elif isinstance(counts, Mapping):
            for e, n in counts.items():
                if isinstance(n, bool) or not isinstance(n, int):
                    raise TypeError(f"count for {e!r} must be an int, got {n!r}")
                if n < 0:
                    raise ValueError(f"negative count {n} for {e!r}")
                if n:
                    items[e] = _checked(items.get(e, 0) + n)
        else:
            for e in counts:
                items[e] = _checked(items.get(e, 0) + 1)
        self._domain = None if domain is None else frozenset(domain)
        if self._domain is not None:
            stray = [e for e in items if e not in self._domain]
            if stray:
                raise DomainError(f"elements {sorted(stray)} outside the declared domain")
        self._counts = {e: items[e] for e in sorted(items)}
        self._hash = None
        self._total = None

    @classmethod
    def _raw(cls, counts: dict, domain) -> "Multiset":
        # counts must already be positive, checked and sorted
        ms = cls.__new__(cls)
        ms._counts = counts
        ms._domain = domain
        ms._hash = None
        ms._total = None
        return ms

    @classmethod
    def of(cls, *elements) -> "Multiset":
        return cls(elements)

    # Mapping protocol; missing elements have count zero.
    def __getitem__(self, e) -> int:
        return self._counts.get(e, 0)

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, e) -> bool:
        return e in self._counts

    @property
    def domain(self) -> Optional[frozenset]:
        return self._domain

    def with_domain(self, domain: Optional[Iterable]) -> "Multiset":
        return Multiset(self._counts, domain)

    def total(self) -> int:
        """Number of elements counted with multiplicity."""
        if self._total is None:
            self._total = sum(self._counts.values())
        return self._total

    def support(self) -> tuple:
        return tuple(self._counts)

    def is_empty(self) -> bool:
        return not self._counts

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __eq__(self, other) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == {e: n for e, n in other.items() if n}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._counts.items()))
        return self._hash

    def __add__(self, other: "Multiset") -> "Multiset":
        if not isinstance(other, Multiset):
            return NotImplemented
        domain = _join_domains(self._domain, other._domain)
        if not other._counts:
            return self if domain is self._domain else Multiset._raw(self._counts, domain)
        if not self._counts:
            return other if domain is other._domain else Multiset._raw(other._counts, domain)
        merged = dict(self._counts)
        for e, n in other._counts.items():
            merged[e] = _checked(merged.get(e, 0) + n)
        return Multiset._raw({e: merged[e] for e in sorted(merged)}, domain)

    def __sub__(self, other: "Multiset") -> "Multiset":
        if not isinstance(other, Multiset):
            return NotImplemented
        domain = _join_domains(self._domain, other._domain)
        result = dict(self._counts)
        for e, n in other._counts.items():
            have = result.get(e, 0)
            if n > have:
                raise NotSubMultiset(
                    f"cannot remove {n} x {format_element(e)} from {self}")
            if n == have:
                del result[e]
            else:
                result[e] = have - n
        return Multiset._raw(result, domain)

    def __le__(self, other: "Multiset") -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        _join_domains(self._domain, other._domain)
        theirs = other._counts
        return all(n <= theirs.get(e, 0) for e, n in self._counts.items())

    def __ge__(self, other: "Multiset") -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return other <= self

    def __lt__(self, other):
        raise TypeError("multisets are only partially ordered; use <=")

    __gt__ = __lt__

    def scale(self, k: int) -> "Multiset":
        if k < 0:
            raise ValueError("negative scale factor")
        if k == 0:
            return Multiset._raw({}, self._domain)
        return Multiset._raw({e: _checked(n * k) for e, n in self._counts.items()}, self._domain)

    def __mul__(self, k: int) -> "Multiset":
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def map_elements(self, f) -> "Multiset":
        """Reindex along a function on elements (the action of N[f])."""
        out: dict = {}
        for e, n in self._counts.items():
            img = f(e)
            out[img] = _checked(out.get(img, 0) + n)
        return Multiset(out)

    def elements(self):
        """Iterate over elements repeated by their count."""
        for e, n in self._counts.items():
            for _ in range(n):
                yield e

    def sort_key(self) -> tuple:
        return tuple(self._counts.items())

    def __str__(self) -> str:
        body = ", ".join(f"{format_element(e)}: {n}" for e, n in self._counts.items())
        return "{" + body + "}"

    def __repr__(self) -> str:
        return f"Multiset({self._counts!r})"


EMPTY = Multiset()


def msum(parts: Iterable[Multiset], start: Multiset = EMPTY) -> Multiset:
    """Sum an iterable of multisets, merging counts in one pass."""
    acc: dict = dict(start)
    domain = start.domain
    for part in parts:
        domain = _join_domains(domain, part.domain)
        for e, n in part.items():
            acc[e] = _checked(acc.get(e, 0) + n)
    return Multiset._raw({e: acc[e] for e in sorted(acc)}, domain)


class GeneratorMap:
    """A homomorphism N[X] -> N[Y] presented by its values on generators.

    ``source`` defaults to the keys of ``assignments``.  Construction never
    rejects images outside ``target``; call :meth:`problems` to audit.
    """

    __slots__ = ("assignments", "source", "target")

    def __init__(self, assignments: Mapping, source: Optional[Iterable] = None,
                 target: Optional[Iterable] = None):
        self.assignments = {
            k: (v if isinstance(v, Multiset) else Multiset(v))
            for k, v in sorted(assignments.items())
        }
        self.source = frozenset(self.assignments) if source is None else frozenset(source)
        self.target = None if target is None else frozenset(target)

    @classmethod
    def identity(cls, domain: Iterable) -> "GeneratorMap":
        domain = frozenset(domain)
        return cls({e: Multiset({e: 1}) for e in domain}, domain, domain)

    @classmethod
    def from_function(cls, f: Mapping, target: Optional[Iterable] = None) -> "GeneratorMap":
        return cls({k: Multiset({v: 1}) for k, v in f.items()}, target=target)

    def __getitem__(self, e) -> Multiset:
        if e not in self.source:
            raise DomainError(f"{format_element(e)} is outside the source domain")
        return self.assignments.get(e, EMPTY)

    def __call__(self, ms: Multiset) -> Multiset:
        return ms_apply(self, ms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneratorMap):
            return NotImplemented
        return self.source == other.source and all(
            self.assignments.get(e, EMPTY) == other.assignments.get(e, EMPTY)
            for e in self.source)

    def __hash__(self):
        return hash((self.source, tuple(
            (e, self.assignments[e]) for e in sorted(self.assignments) if self.assignments[e])))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_element(k)}: {v}" for k, v in self.assignments.items())
        return "GeneratorMap({" + body + "})"

    def then(self, other: "GeneratorMap") -> "GeneratorMap":
        """The composite ``other . self`` restricted to generators."""
        return GeneratorMap({e: other(self[e]) for e in self.source}, self.source, other.target)

    def problems(self) -> list[str]:
        out = []
        missing = sorted(self.source - set(self.assignments))
        if missing:
            out.append(f"not total: no image for {', '.join(map(format_element, missing))}")
        extra = sorted(set(self.assignments) - self.source)
        if extra:
            out.append(f"images given outside the source: {', '.join(map(format_element, extra))}")
        if self.target is not None:
            for e, img in self.assignments.items():
                bad = [x for x in img if x not in self.target]
                if bad:
                    out.append(f"image of {format_element(e)} uses "
                               f"{', '.join(map(format_element, bad))} outside the target")
        return out

    def is_function_like(self) -> bool:
        return all(self[e].total() == 1 for e in self.source)

    def as_function(self) -> dict:
        """The underlying function on generators; only for function-like maps."""
        out = {}
        for e in sorted(self.source):
            img = self[e]
            if img.total() != 1:
                raise ValueError(f"image of {format_element(e)} is {img}, not a single generator")
            out[e] = next(iter(img))
        return out


def ms_add(a: Multiset, b: Multiset) -> Multiset:
    return a + b


def ms_subtract(a: Multiset, b: Multiset) -> Multiset:
    return a - b


def ms_leq(a: Multiset, b: Multiset) -> bool:
    return a <= b


def ms_apply(h: GeneratorMap, a: Multiset) -> Multiset:
    """Free extension of ``h``: sum of ``count_a(e) * h(e)``."""
    if a.domain is not None and not a.domain <= h.source:
        raise DomainError("multiset domain is not contained in the map's source")
    acc: dict = {}
    for e, n in a.items():
        for x, k in h[e].items():
            acc[x] = _checked(acc.get(x, 0) + _checked(n * k))
    return Multiset._raw({x: acc[x] for x in sorted(acc)}, h.target)
