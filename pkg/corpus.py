# corpus.py - Versioned probe corpus and the net grammar used by the CLI
"""
Universal claims ("for every u") are checked over the fixed families below.
Reports name CORPUS_VERSION so a result can always be tied to its inputs.

Net grammar (valuation command):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' factor)?
    atom   := number | 'eps' | func '(' expr ')' | '(' expr ')' | 'sup:' name
    func   := exp | log | sin | cos | sqrt | abs

``sup:name`` is the global sup net of a named corpus entry.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from asymptotics import EpsNet
from genfun import DEFAULT_NUMERICS, GenFunction, Numerics, global_sup_net
from smoothrep import (Affine, Constant, Cosine, Cutoff, EpsParam, Exponential, Gaussian, Polynomial1D,
                       Product, Reciprocal, Scaled, Sine)

CORPUS_VERSION = "probe-corpus-v1"

PROBE_SCALES = (0.1, 0.25, 0.5)
PROBE_TRANSLATIONS = 5


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    function: GenFunction

    def to_dict(self):
        return {"name": self.name, "label": self.function.label, "tag": self.function.space_tag.value}


def flat_factor(power=1.0):
    """[(exp(-eps^-power))]: smaller than every eps^q."""
    return EpsParam(lambda e: math.exp(-e ** (-power)), f"exp(-eps^-{power:g})")


def regular_corpus(numerics: Numerics = DEFAULT_NUMERICS) -> list[CorpusEntry]:
    """Ten smooth eps-free functions on R."""
    reps = [
        ("cos", Cosine()),
        ("sin", Sine()),
        ("one", Constant(1.0)),
        ("square", Polynomial1D([0.0, 0.0, 1.0])),
        ("exp-third", Exponential(1.0 / 3.0)),
        ("gauss", Gaussian()),
        ("cos-exp", Product(Cosine(), Exponential(1.0 / 3.0))),
        ("lorentz", Reciprocal(Polynomial1D([1.0, 0.0, 1.0]))),
        ("cubic", Polynomial1D([0.0, -2.0, 0.0, 1.0])),
        ("sin3-gauss", Product(Sine(3.0), Gaussian(0.5))),
    ]
    return [CorpusEntry(name, GenFunction(rep, numerics=numerics, label=name)) for name, rep in reps]


def probe_family(lo=-1.0, hi=1.0, numerics: Numerics = DEFAULT_NUMERICS) -> list[CorpusEntry]:
    """Bumps, Gaussian-cut and polynomial-cut bumps at 3 scales and 5 translations in [lo, hi]."""
    entries = []
    centers = [lo + (hi - lo) * (i + 0.5) / PROBE_TRANSLATIONS for i in range(PROBE_TRANSLATIONS)]
    for kind, s in zip(("bump", "gauss-cut", "poly-cut"), PROBE_SCALES):
        for c in centers:
            bump = Cutoff(c - s, c + s, s)
            if kind == "bump":
                rep = bump
            elif kind == "gauss-cut":
                rep = Product(bump, Affine(Gaussian(), 1.0 / s, c))
            else:
                rep = Product(bump, Polynomial1D([1.0 - c, 1.0]))
            name = f"{kind}@{c:g}"
            entries.append(CorpusEntry(name, GenFunction(rep, numerics=numerics, label=name)))
    return entries


def ideal_corpus(numerics: Numerics = DEFAULT_NUMERICS) -> list[CorpusEntry]:
    """Five S-moderate nets for the zeroth-order ideal tests, one of them not negligible."""
    inv = EpsParam(lambda e: 1.0 / e, "1/eps")
    reps = [
        ("flat-sin-gauss", Scaled(Product(Affine(Sine(), inv), Gaussian()), flat_factor())),
        ("flat-gauss", Scaled(Gaussian(), flat_factor())),
        ("flat-poly-gauss", Scaled(Product(Polynomial1D([1.0, 0.0, 1.0]), Gaussian(0.5)), flat_factor())),
        ("flat2-x-gauss", Scaled(Product(Polynomial1D([0.0, 1.0]), Gaussian()), flat_factor(2.0))),
        ("eps2-gauss", Scaled(Gaussian(), EpsParam(lambda e: e * e, "eps^2"))),
    ]
    return [CorpusEntry(name, GenFunction(rep, numerics=numerics, label=name)) for name, rep in reps]


def named_entries(numerics: Numerics = DEFAULT_NUMERICS) -> dict[str, CorpusEntry]:
    out = {}
    for entry in regular_corpus(numerics) + ideal_corpus(numerics) + probe_family(numerics=numerics):
        out[entry.name] = entry
    return out


# --- net grammar -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)|(sup:[A-Za-z0-9@.\-]+)"
                    r"|([A-Za-z_]+)|(\S))")

_FUNCS = {
    "exp": math.exp,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
    "abs": abs,
}


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot read net spec at {text[pos:]!r}")
        number, named, word, op = m.groups()
        if number is not None:
            tokens.append(("num", float(number)))
        elif named is not None:
            tokens.append(("sup", named[4:]))
        elif word is not None:
            tokens.append(("word", word))
        else:
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, numerics):
        self.tokens = tokens
        self.i = 0
        self.numerics = numerics

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ValueError(f"expected {op!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            left, right = node, self.term()
            node = (lambda e, a=left, b=right: a(e) + b(e)) if op == "+" else \
                   (lambda e, a=left, b=right: a(e) - b(e))
        return node

    def term(self):
        node = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            left, right = node, self.factor()
            node = (lambda e, a=left, b=right: a(e) * b(e)) if op == "*" else \
                   (lambda e, a=left, b=right: a(e) / b(e))
        return node

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.factor()
            return lambda e: -inner(e)
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exponent = self.factor()
            return lambda e: base(e) ** exponent(e)
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            return lambda e, v=value: v
        if kind == "sup":
            entries = named_entries(self.numerics)
            if value not in entries:
                raise ValueError(f"unknown corpus entry {value!r}")
            net = global_sup_net(entries[value].function, 0, certify=False)
            return net
        if kind == "word":
            if value == "eps":
                return lambda e: e
            if value in _FUNCS:
                func = _FUNCS[value]
                self.take("(")
                inner = self.expr()
                self.take(")")
                return lambda e: func(inner(e))
            raise ValueError(f"unknown name {value!r}")
        if (kind, value) == ("op", "("):
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError(f"unexpected {value!r}")


def parse_net(text: str, numerics: Numerics = DEFAULT_NUMERICS) -> EpsNet:
    """Build an EpsNet from a spec such as ``eps^2``, ``3*eps^-1 + eps`` or ``exp(-1/eps)``."""
    parser = _Parser(_tokenize(text), numerics)
    if not parser.tokens:
        raise ValueError("empty net spec")
    func = parser.expr()
    if parser.i != len(parser.tokens):
        raise ValueError(f"trailing input after position {parser.i}: {parser.peek()[1]!r}")

    def safe(e):
        try:
            return func(e)
        except OverflowError:
            return math.inf

    return EpsNet(safe, label=text.strip())
