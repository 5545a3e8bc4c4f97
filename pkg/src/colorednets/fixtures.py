"""Bundled example nets."""

from importlib import resources

from .netio import NetDocument, parse_document


def load_fixture(name: str) -> NetDocument:
    text = resources.files("colorednets").joinpath("data", f"{name}.yaml").read_text("utf-8")
    return parse_document(text)


def vending():
    """The candy-bar/apple vending machine and its marking {25c: 3, 50c: 2}."""
    doc = load_fixture("vending")
    return doc.body, doc.marking
