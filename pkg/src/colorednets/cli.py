"""Command-line interface.

Exit codes: 0 success (or the checked property holds), 1 property
violated or invalid input, 2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys

from .colored import ColoredPetriNet, check_colored_morphism, colored_enabled, colored_fire, colored_reachable
from .errors import (
    DocumentSyntaxError,
    DomainError,
    NetError,
    NotEnabled,
    ResourceLimit,
    ValidationFailed,
)
from .generate import GeneratorConfig, random_colored_net
from .netio import NetDocument, emit_document, parse_document, parse_marking, parse_step
from .petri import DEFAULT_NODE_BUDGET, enumerate_firing_sequences, fire, reachable
from .semantics import enumerate_step_sequences
from .unfolding import unfold_net, verify_unfolding_iso

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Out:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def __call__(self, text: str = "") -> None:
        print(text)

    def info(self, text: str) -> None:
        if not self.quiet:
            print(text, file=sys.stderr)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(path: str, kind: str | None = None) -> NetDocument:
    doc = parse_document(_read(path))
    if kind and doc.kind != kind:
        raise DocumentSyntaxError(f"expected a {kind} document, got {doc.kind}", path)
    return doc


def _initial_marking(doc: NetDocument, text: str | None):
    if text is not None:
        return parse_marking(text, doc.body)
    if doc.marking is None:
        raise DocumentSyntaxError("no --marking given and the document has none", "marking")
    return doc.marking


def _net_doc(args) -> NetDocument:
    if getattr(args, "colored_net", None):
        return _load(args.colored_net, "colored")
    return _load(args.net, "ordinary")


def cmd_unfold(args, out) -> int:
    doc = _load(args.colored_net, "colored")
    U = unfold_net(doc.body)
    _write(args.out, emit_document(NetDocument("ordinary", U, origin="unfolding")))
    out.info(f"unfolded: {len(U.places)} places, {len(U.transitions)} transitions")
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    doc = _net_doc(args)
    m0 = _initial_marking(doc, args.marking)
    if doc.kind == "colored":
        forms = enumerate_step_sequences(doc.body, m0, args.max_len, args.max_step_size,
                                         args.node_budget)
        if args.count_only:
            out(str(len(forms)))
            return EXIT_OK
        for i, form in enumerate(forms):
            if i:
                out("")
            out(f"# sequence {i}: {len(form)} layer(s)")
            for layer in form.layers:
                out(str(layer))
        return EXIT_OK
    runs = enumerate_firing_sequences(doc.body, m0, args.max_len, args.max_step_size,
                                      args.node_budget)
    if args.count_only:
        out(str(len(runs)))
        return EXIT_OK
    for steps, final in runs:
        body = "; ".join(str(s) for s in steps) or "identity"
        out(f"{body} -> {final}")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    doc = _load(args.colored_net, "colored")
    cm0 = _initial_marking(doc, args.marking)
    report = verify_unfolding_iso(doc.body, cm0, args.max_len, args.max_step_size,
                                  args.token_bound, args.node_budget)
    if args.report:
        _write(args.report, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    if not args.quiet:
        out(report.summary())
    return EXIT_OK if report.holds else EXIT_FAILED


def cmd_check_morphism(args, out) -> int:
    K = _load(args.source, "colored").body
    K2 = _load(args.target, "colored").body
    psi = _load(args.morphism, "morphism").body
    report = check_colored_morphism(K, K2, psi)
    for violation in report:
        out(str(violation))
    if not report:
        out.info("morphism is valid")
    return EXIT_FAILED if report else EXIT_OK


def cmd_reachable(args, out) -> int:
    doc = _net_doc(args)
    m0 = _initial_marking(doc, args.marking)
    if doc.kind == "colored":
        states = colored_reachable(doc.body, m0, args.token_bound, args.node_budget)
    else:
        states = reachable(doc.body, m0, args.token_bound, args.node_budget)
    for m in states:
        out(str(m))
    out.info(f"{len(states)} marking(s)")
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    doc = _net_doc(args)
    m = _initial_marking(doc, args.marking)
    colored = isinstance(doc.body, ColoredPetriNet)
    out(str(m))
    for lineno, line in enumerate(sys.stdin, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        step = parse_step(line, doc.body)
        try:
            if colored:
                if not colored_enabled(doc.body, m, step):
                    raise NotEnabled(f"step {step} is not enabled at {m}")
                m = colored_fire(doc.body, m, step)
            else:
                m = fire(doc.body, m, step)
        except NotEnabled as exc:
            print(f"line {lineno}: {exc}", file=sys.stderr)
            return EXIT_FAILED
        out(str(m))
    return EXIT_OK


def cmd_generate(args, out) -> int:
    cfg = GeneratorConfig(args.seed, args.max_places, args.max_transitions, args.max_colors,
                          args.max_modes, args.max_inscription_size)
    _write(args.out, emit_document(NetDocument("colored", random_colored_net(cfg))))
    return EXIT_OK


def cmd_fmt(args, out) -> int:
    doc = _load(args.file)
    _write(args.out, emit_document(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorednets",
                                     description="Colored Petri nets, their semantics and unfolding.")
    parser.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET,
                        help="abort enumerations after this many search nodes")
    parser.add_argument("--quiet", action="store_true", help="suppress summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    def nets(p, ordinary=True):
        group = p.add_mutually_exclusive_group(required=True)
        if ordinary:
            group.add_argument("--net", metavar="FILE", help="ordinary net document")
        group.add_argument("--colored-net", metavar="FILE", help="colored net document")

    p = sub.add_parser("unfold", help="unfold a colored net into an ordinary net")
    p.add_argument("--colored-net", required=True, metavar="FILE")
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("enumerate", help="list firing sequences or normal-form step sequences")
    nets(p)
    p.add_argument("--marking", metavar="M")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--max-step-size", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-unfolding", help="check the unfolding bijection within bounds")
    p.add_argument("--colored-net", required=True, metavar="FILE")
    p.add_argument("--marking", metavar="M")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--max-step-size", type=int, required=True)
    p.add_argument("--token-bound", type=int, required=True)
    p.add_argument("--report", metavar="FILE", help="write a JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-morphism", help="check a colored net morphism")
    p.add_argument("--from", dest="source", required=True, metavar="FILE")
    p.add_argument("--to", dest="target", required=True, metavar="FILE")
    p.add_argument("--morphism", required=True, metavar="FILE")
    p.set_defaults(func=cmd_check_morphism)

    p = sub.add_parser("reachable", help="bounded reachability set")
    nets(p)
    p.add_argument("--marking", metavar="M")
    p.add_argument("--token-bound", type=int, required=True)
    p.set_defaults(func=cmd_reachable)

    p = sub.add_parser("simulate", help="fire steps read line by line from stdin")
    nets(p)
    p.add_argument("--marking", metavar="M")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="emit a random colored net")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-places", type=int, default=3)
    p.add_argument("--max-transitions", type=int, default=3)
    p.add_argument("--max-colors", type=int, default=3)
    p.add_argument("--max-modes", type=int, default=3)
    p.add_argument("--max-inscription-size", type=int, default=2)
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fmt", help="rewrite a document in canonical form")
    p.add_argument("file", metavar="FILE")
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=cmd_fmt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.quiet)
    try:
        return args.func(args, out)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValidationFailed as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (DocumentSyntaxError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
