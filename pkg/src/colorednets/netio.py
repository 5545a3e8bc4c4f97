"""Reading and writing net documents.

Documents are a small YAML subset: block maps and lists at the top,
flow maps ``{a: 1, b: 2}`` for multisets.  Emission is canonical (sorted
keys, fixed indentation), so ``emit(parse(text))`` is a normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

import yaml

from .colored import (
    ColoredMarking,
    ColoredMorphism,
    ColoredPetriNet,
    check_colored_marking,
    validate_colored_net,
)
from .errors import DocumentSyntaxError, DomainError, ReservedSeparator, ValidationFailed
from .multiset import GeneratorMap, Multiset
from .petri import NetMorphism, PetriNet, _check_marking, net_problems
from .unfolding import SEPARATOR

_IDENT = re.compile(r"^[\w.$¢€£][\w.$¢€£+\-]*$")
_PAIR_IDENT = re.compile(rf"^[\w.$¢€£][\w.$¢€£+\-]*{SEPARATOR}[\w.$¢€£][\w.$¢€£+\-]*$")

KINDS = ("ordinary", "colored", "morphism")


@dataclass
class NetDocument:
    kind: str
    body: Union[PetriNet, ColoredPetriNet, ColoredMorphism]
    marking: Optional[Union[Multiset, ColoredMarking]] = None
    origin: Optional[str] = None


def _load(text: str, what: str = "document"):
    try:
        return yaml.load(text, Loader=yaml.BaseLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else what
        problem = getattr(exc, "problem", None) or str(exc)
        raise DocumentSyntaxError(problem, where) from None


def _ident(value, where: str, allow_pairs: bool = False) -> str:
    if not isinstance(value, str):
        raise DocumentSyntaxError(f"expected an identifier, got {type(value).__name__}", where)
    if SEPARATOR in value and not (allow_pairs and _PAIR_IDENT.match(value)):
        raise ReservedSeparator(f"identifier {value!r} contains the reserved {SEPARATOR!r}", where)
    if SEPARATOR not in value and not _IDENT.match(value):
        raise DocumentSyntaxError(f"malformed identifier {value!r}", where)
    return value


def _map(value, where: str) -> dict:
    if value is None or value == "":
        return {}
    if not isinstance(value, dict):
        raise DocumentSyntaxError("expected a map", where)
    return value


def _list(value, where: str) -> list:
    if value is None or value == "":
        return []
    if not isinstance(value, list):
        raise DocumentSyntaxError("expected a list", where)
    return value


def _count(value, where: str) -> int:
    if not isinstance(value, str) or not re.fullmatch(r"\d+", value):
        raise DocumentSyntaxError(f"expected a non-negative integer count, got {value!r}", where)
    return int(value)


def _multiset(value, where: str, allow_pairs: bool = False) -> Multiset:
    counts = {}
    for key, n in _map(value, where).items():
        counts[_ident(key, f"{where}.{key}", allow_pairs)] = _count(n, f"{where}.{key}")
    return Multiset(counts)


def _ident_list(value, where: str, allow_pairs: bool = False) -> list:
    items = [_ident(x, f"{where}[{i}]", allow_pairs) for i, x in enumerate(_list(value, where))]
    dupes = sorted({x for x in items if items.count(x) > 1})
    if dupes:
        raise DocumentSyntaxError(f"duplicate entries {', '.join(dupes)}", where)
    return items


def _entry_id(entry, where: str, allow_pairs: bool = False) -> str:
    entry = _map(entry, where)
    if "id" not in entry:
        raise DocumentSyntaxError("entry has no id", where)
    return _ident(entry["id"], f"{where}.id", allow_pairs)


def parse_document(text: str) -> NetDocument:
    """Parse and validate a net or morphism document."""
    data = _map(_load(text), "document")
    kind = data.get("kind")
    if kind not in KINDS:
        raise DocumentSyntaxError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}", "kind")
    known = {"ordinary": {"kind", "origin", "places", "transitions", "marking"},
             "colored": {"kind", "places", "transitions", "marking"},
             "morphism": {"kind", "places", "transitions", "alpha-places", "alpha-transitions"}}
    extra = sorted(set(data) - known[kind])
    if extra:
        raise DocumentSyntaxError(f"unknown field(s) {', '.join(extra)}", "document")
    if kind == "ordinary":
        return _parse_ordinary(data)
    if kind == "colored":
        return _parse_colored(data)
    return _parse_morphism(data)


def _parse_ordinary(data: dict) -> NetDocument:
    origin = data.get("origin")
    if origin not in (None, "unfolding"):
        raise DocumentSyntaxError(f"unknown origin {origin!r}", "origin")
    pairs = origin == "unfolding"
    places = _ident_list(data.get("places"), "places", pairs)
    source, target, order = {}, {}, []
    for i, entry in enumerate(_list(data.get("transitions"), "transitions")):
        where = f"transitions[{i}]"
        t = _entry_id(entry, where, pairs)
        if t in source:
            raise DocumentSyntaxError(f"duplicate transition {t}", where)
        extra = sorted(set(entry) - {"id", "source", "target"})
        if extra:
            raise DocumentSyntaxError(f"unknown field(s) {', '.join(extra)}", where)
        source[t] = _multiset(entry.get("source"), f"{where}.source", pairs)
        target[t] = _multiset(entry.get("target"), f"{where}.target", pairs)
        order.append(t)
    net = PetriNet(tuple(places), tuple(order), source, target)
    problems = net_problems(net)
    if problems:
        raise ValidationFailed("; ".join(problems), problems)
    marking = None
    if "marking" in data:
        marking = _multiset(data["marking"], "marking", pairs)
        try:
            _check_marking(net, marking)
        except DomainError as exc:
            raise ValidationFailed(f"marking: {exc}", [str(exc)]) from None
    return NetDocument("ordinary", net, marking, origin)


def _parse_colored(data: dict) -> NetDocument:
    colors, modes = {}, {}
    for i, entry in enumerate(_list(data.get("places"), "places")):
        where = f"places[{i}]"
        p = _entry_id(entry, where)
        if p in colors:
            raise DocumentSyntaxError(f"duplicate place {p}", where)
        extra = sorted(set(entry) - {"id", "colors"})
        if extra:
            raise DocumentSyntaxError(f"unknown field(s) {', '.join(extra)}", where)
        colors[p] = _ident_list(entry.get("colors"), f"{where}.colors")
    source, target, inputs, outputs = {}, {}, {}, {}
    for i, entry in enumerate(_list(data.get("transitions"), "transitions")):
        where = f"transitions[{i}]"
        t = _entry_id(entry, where)
        if t in modes:
            raise DocumentSyntaxError(f"duplicate transition {t}", where)
        extra = sorted(set(entry) - {"id", "modes", "source", "target", "inscriptions"})
        if extra:
            raise DocumentSyntaxError(f"unknown field(s) {', '.join(extra)}", where)
        modes[t] = _ident_list(entry.get("modes"), f"{where}.modes")
        source[t] = _multiset(entry.get("source"), f"{where}.source")
        target[t] = _multiset(entry.get("target"), f"{where}.target")
        inscriptions = _map(entry.get("inscriptions"), f"{where}.inscriptions")
        extra = sorted(set(inscriptions) - {"in", "out"})
        if extra:
            raise DocumentSyntaxError(f"unknown field(s) {', '.join(extra)}", f"{where}.inscriptions")
        for direction, store in (("in", inputs), ("out", outputs)):
            arcs = _map(inscriptions.get(direction), f"{where}.inscriptions.{direction}")
            for p, table in arcs.items():
                here = f"{where}.inscriptions.{direction}.{p}"
                p = _ident(p, here)
                images = {_ident(k, f"{here}.{k}"): _multiset(img, f"{here}.{k}")
                          for k, img in _map(table, here).items()}
                store[(p, t) if direction == "in" else (t, p)] = GeneratorMap(images)
    base = PetriNet(tuple(colors), tuple(modes), source, target)
    K = ColoredPetriNet(base, colors, modes, inputs, outputs)
    problems = validate_colored_net(K)
    if problems:
        raise ValidationFailed("; ".join(map(str, problems)), problems)
    marking = None
    if "marking" in data:
        marking = parse_colored_marking_data(data["marking"], "marking")
        try:
            check_colored_marking(K, marking)
        except DomainError as exc:
            raise ValidationFailed(f"marking: {exc}", [str(exc)]) from None
    return NetDocument("colored", K, marking)


def parse_colored_marking_data(value, where: str) -> ColoredMarking:
    return ColoredMarking({_ident(p, f"{where}.{p}"): _multiset(ms, f"{where}.{p}")
                           for p, ms in _map(value, where).items()})


def _parse_morphism(data: dict) -> NetDocument:
    def function(value, where):
        return {_ident(k, f"{where}.{k}"): _ident(v, f"{where}.{k}")
                for k, v in _map(value, where).items()}

    def alphas(value, where):
        out = {}
        for owner, table in _map(value, where).items():
            here = f"{where}.{owner}"
            out[_ident(owner, here)] = GeneratorMap(
                {_ident(g, f"{here}.{g}"): _multiset(img, f"{here}.{g}")
                 for g, img in _map(table, here).items()})
        return out

    psi = ColoredMorphism(
        NetMorphism(function(data.get("transitions"), "transitions"),
                    function(data.get("places"), "places")),
        alphas(data.get("alpha-places"), "alpha-places"),
        alphas(data.get("alpha-transitions"), "alpha-transitions"),
    )
    return NetDocument("morphism", psi)


def parse_marking(text: str, net: Union[PetriNet, ColoredPetriNet]):
    """Parse a marking given inline, e.g. ``{coins-in: {25c: 3}}`` for a
    colored net or ``{p: 2}`` for an ordinary one."""
    data = _load(text, "marking")
    if isinstance(net, ColoredPetriNet):
        cm = parse_colored_marking_data(data, "marking")
        check_colored_marking(net, cm)
        return cm
    m = _multiset(data, "marking", allow_pairs=True)
    _check_marking(net, m)
    return m


def parse_step(text: str, net: Union[PetriNet, ColoredPetriNet]) -> Multiset:
    """Parse one step: ``t`` or ``t mode`` for a single firing, or a flow
    map such as ``{(buy, a1): 1, (buy, b1): 2}`` / ``{t: 2}``."""
    text = text.strip()
    if isinstance(net, ColoredPetriNet):
        if text.startswith("{"):
            inner = text[1:-1].strip() if text.endswith("}") else None
            if inner is None:
                raise DocumentSyntaxError(f"unterminated step {text!r}", "step")
            counts = {}
            for m in re.finditer(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*:\s*(\d+)", inner):
                counts[(m.group(1), m.group(2))] = counts.get((m.group(1), m.group(2)), 0) + int(m.group(3))
            leftover = re.sub(r"\(\s*[^,()\s]+\s*,\s*[^,()\s]+\s*\)\s*:\s*\d+", "", inner)
            if leftover.replace(",", "").strip():
                raise DocumentSyntaxError(f"cannot read step {text!r}", "step")
            return Multiset(counts)
        parts = text.replace("(", " ").replace(")", " ").replace(",", " ").split()
        if len(parts) != 2:
            raise DocumentSyntaxError(f"expected 'transition mode', got {text!r}", "step")
        return Multiset({(parts[0], parts[1]): 1})
    if text.startswith("{"):
        return _multiset(_load(text, "step"), "step", allow_pairs=True)
    return Multiset({text: 1})


# --- emission ---------------------------------------------------------------

def _flow(ms) -> str:
    return str(ms)


def _flow_list(items) -> str:
    return "[" + ", ".join(items) + "]"


def emit_document(doc: NetDocument) -> str:
    """Canonical text for ``doc``; stable across runs and platforms."""
    if doc.kind == "ordinary":
        lines = _emit_ordinary(doc)
    elif doc.kind == "colored":
        lines = _emit_colored(doc)
    elif doc.kind == "morphism":
        lines = _emit_morphism(doc.body)
    else:
        raise ValueError(f"unknown document kind {doc.kind!r}")
    return "\n".join(lines) + "\n"


def _emit_ordinary(doc: NetDocument) -> list[str]:
    net: PetriNet = doc.body
    lines = ["kind: ordinary"]
    if doc.origin:
        lines.append(f"origin: {doc.origin}")
    lines.append(f"places: {_flow_list(net.places)}")
    if net.transitions:
        lines.append("transitions:")
        for t in net.transitions:
            lines += [f"  - id: {t}",
                      f"    source: {_flow(net.source[t])}",
                      f"    target: {_flow(net.target[t])}"]
    else:
        lines.append("transitions: []")
    if doc.marking is not None:
        lines.append(f"marking: {_flow(doc.marking)}")
    return lines


def _emit_colored(doc: NetDocument) -> list[str]:
    K: ColoredPetriNet = doc.body
    lines = ["kind: colored"]
    if K.places:
        lines.append("places:")
        for p in K.places:
            lines += [f"  - id: {p}", f"    colors: {_flow_list(K.colors[p])}"]
    else:
        lines.append("places: []")
    if K.transitions:
        lines.append("transitions:")
    else:
        lines.append("transitions: []")
    for t in K.transitions:
        lines += [f"  - id: {t}",
                  f"    modes: {_flow_list(K.modes[t])}",
                  f"    source: {_flow(K.base.source[t])}",
                  f"    target: {_flow(K.base.target[t])}"]
        ins = [(p, K.inputs[(p, u)]) for (p, u) in K.inputs if u == t]
        outs = [(p, K.outputs[(u, p)]) for (u, p) in K.outputs if u == t]
        if not ins and not outs:
            continue
        lines.append("    inscriptions:")
        for direction, arcs in (("in", ins), ("out", outs)):
            if not arcs:
                continue
            lines.append(f"      {direction}:")
            for p, gm in arcs:
                lines.append(f"        {p}:")
                for k in sorted(gm.assignments):
                    lines.append(f"          {k}: {_flow(gm.assignments[k])}")
    if doc.marking is not None:
        lines.append("marking:")
        for p, ms in doc.marking.items():
            lines.append(f"  {p}: {_flow(ms)}")
        if not doc.marking:
            lines[-1] = "marking: {}"
    return lines


def _emit_morphism(psi: ColoredMorphism) -> list[str]:
    def function(f):
        return "{" + ", ".join(f"{k}: {v}" for k, v in f.items()) + "}"

    lines = ["kind: morphism",
             f"transitions: {function(psi.base.transitions)}",
             f"places: {function(psi.base.places)}"]
    for name, table in (("alpha-places", psi.alpha_places),
                        ("alpha-transitions", psi.alpha_transitions)):
        if not table:
            lines.append(f"{name}: {{}}")
            continue
        lines.append(f"{name}:")
        for owner, gm in table.items():
            lines.append(f"  {owner}:")
            for g in sorted(gm.assignments):
                lines.append(f"    {g}: {_flow(gm.assignments[g])}")
    return lines
