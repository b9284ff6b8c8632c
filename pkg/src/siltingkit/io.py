"""Plain-text algebra files and JSON for complexes.

Algebra file directives, one per line (``#`` starts a comment)::

    field Q                      # or Fp:7
    vertices 4
    arrow x 1 2                  # label, source, target
    relation 1: x*x              # start vertex, then signed terms
    relation 1: x*y - y*x
    automorphism eps: x=y y=x    # label swap at every vertex
    module E: 1 / y              # e_1 A modulo the listed generators
    option length_cap 12

A term is an optional coefficient followed by a path word of arrow
labels joined by ``*``; the word is read from the given start vertex.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .algebra import Algebra, AlgebraAutomorphism, Arrow, Quiver, Relation, build_algebra
from .complexes import ProjComplex
from .linalg import Field
from .modules import Module, quotient_of_projective

OPTION_KEYS = ("length_cap", "seed", "budget")
_NUMBER = re.compile(r"^-?\d+(/\d+)?$")
_WORD = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\*[A-Za-z_][A-Za-z0-9_]*)*$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)


@dataclass
class Term:
    coef: Fraction
    word: tuple


@dataclass
class AlgebraFile:
    field: str = "Q"
    vertices: int = 0
    arrows: list = dc_field(default_factory=list)          # (label, source, target)
    relations: list = dc_field(default_factory=list)       # (start, [Term])
    automorphisms: dict = dc_field(default_factory=dict)   # name -> {label: label}
    modules: dict = dc_field(default_factory=dict)         # name -> (vertex, [[Term]])
    options: dict = dc_field(default_factory=dict)

    # --- building ---
    def quiver(self) -> Quiver:
        return Quiver(self.vertices, tuple(Arrow(i, lab, s, t) for i, (lab, s, t) in enumerate(self.arrows)))

    def build(self, field_override: Optional[str] = None) -> Algebra:
        F = Field.parse(field_override or self.field)
        q = self.quiver()
        rels = []
        for start, terms in self.relations:
            rels.append(Relation(tuple((F(t.coef), q.path(start, list(t.word))) for t in terms)))
        cap = self.options.get("length_cap")
        return build_algebra(q, rels, length_cap=int(cap) if cap is not None else None, field=F)

    def automorphism(self, name: str, A: Algebra) -> AlgebraAutomorphism:
        if name not in self.automorphisms:
            raise KeyError(f"no automorphism named {name!r}")
        swap = self.automorphisms[name]
        q = A.quiver
        m = {}
        for a in q.arrows:
            lab = swap.get(a.label, a.label)
            m[a.id] = q.arrow_by_label(lab, a.source).id
        return AlgebraAutomorphism(A, m, name)

    def all_automorphisms(self, A: Algebra) -> list[AlgebraAutomorphism]:
        return [self.automorphism(n, A) for n in self.automorphisms]

    def module(self, name: str, A: Algebra) -> Module:
        if name not in self.modules:
            raise KeyError(f"no module named {name!r}")
        v, gens = self.modules[name]
        F = A.field
        elems = []
        for terms in gens:
            elems.append(A.reduce_combination((F(t.coef), A.quiver.path(v, list(t.word))) for t in terms))
        return quotient_of_projective(A, v, elems, name=name)

    # --- writing ---
    def to_text(self) -> str:
        lines = [f"field {self.field}", f"vertices {self.vertices}"]
        for lab, s, t in self.arrows:
            lines.append(f"arrow {lab} {s} {t}")
        for start, terms in self.relations:
            lines.append(f"relation {start}: {_format_terms(terms)}")
        for name, swap in self.automorphisms.items():
            lines.append(f"automorphism {name}: " + " ".join(f"{a}={b}" for a, b in swap.items()))
        for name, (v, gens) in self.modules.items():
            lines.append(f"module {name}: {v} / " + ", ".join(_format_terms(g) for g in gens))
        for k, val in self.options.items():
            lines.append(f"option {k} {val}")
        return "\n".join(lines) + "\n"


def _format_terms(terms) -> str:
    out = []
    for i, t in enumerate(terms):
        c = t.coef
        word = "*".join(t.word)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        body = word if c == 1 else f"{c} {word}"
        if i == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def _tokens(text: str, offset: int):
    return [(m.group(), m.start() + offset + 1) for m in re.finditer(r"\S+", text)]


def _parse_terms(tokens, lineno: int) -> list[Term]:
    terms = []
    sign = 1
    coef = None
    expect_term = True
    for tok, col in tokens:
        if tok in ("+", "-"):
            if coef is not None:
                raise ParseError(f"coefficient without a path word before {tok!r}", lineno, col)
            if not expect_term and terms:
                sign = 1 if tok == "+" else -1
                expect_term = True
                continue
            if not terms:
                sign = 1 if tok == "+" else -1
                continue
            raise ParseError(f"unexpected {tok!r}", lineno, col)
        if _NUMBER.match(tok):
            if coef is not None or not expect_term:
                raise ParseError(f"unexpected coefficient {tok!r}", lineno, col)
            coef = Fraction(tok)
            continue
        if _WORD.match(tok):
            if not expect_term:
                raise ParseError(f"missing + or - before {tok!r}", lineno, col)
            c = sign * (coef if coef is not None else 1)
            terms.append(Term(Fraction(c), tuple(tok.split("*"))))
            sign, coef, expect_term = 1, None, False
            continue
        raise ParseError(f"bad token {tok!r} in path expression", lineno, col)
    if coef is not None or expect_term:
        col = tokens[-1][1] if tokens else 0
        raise ParseError("expression ends without a path word", lineno, col)
    return terms


def _int(tok, lineno, col, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {tok!r}", lineno, col) from None


def _check_word(af: AlgebraFile, start: int, word, lineno: int, col: int):
    q = af.quiver()
    try:
        q.path(start, list(word))
    except (KeyError, ValueError) as e:
        msg = e.args[0] if e.args else str(e)
        raise ParseError(f"path {'*'.join(word)!r} from vertex {start}: {msg}", lineno, col) from None


def parse_algebra_text(text: str) -> AlgebraFile:
    af = AlgebraFile()
    seen_vertices = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line, 0)
        if not toks:
            continue
        key, kcol = toks[0]
        rest = toks[1:]
        if key == "field":
            if len(rest) != 1:
                raise ParseError("field takes one value", lineno, kcol)
            try:
                Field.parse(rest[0][0])
            except ValueError as e:
                raise ParseError(str(e), lineno, rest[0][1]) from None
            af.field = rest[0][0]
        elif key == "vertices":
            if len(rest) != 1:
                raise ParseError("vertices takes one value", lineno, kcol)
            af.vertices = _int(rest[0][0], lineno, rest[0][1], "vertex count")
            if af.vertices < 1:
                raise ParseError("vertex count must be positive", lineno, rest[0][1])
            seen_vertices = True
        elif key == "arrow":
            if not seen_vertices:
                raise ParseError("arrow before vertices", lineno, kcol)
            if len(rest) != 3:
                raise ParseError("arrow takes LABEL SOURCE TARGET", lineno, kcol)
            lab = rest[0][0]
            if not _NAME.match(lab):
                raise ParseError(f"bad arrow label {lab!r}", lineno, rest[0][1])
            s = _int(rest[1][0], lineno, rest[1][1], "source")
            t = _int(rest[2][0], lineno, rest[2][1], "target")
            for v, (tok, col) in ((s, rest[1]), (t, rest[2])):
                if not 1 <= v <= af.vertices:
                    raise ParseError(f"vertex {v} out of range", lineno, col)
            if any(a[0] == lab and a[1] == s for a in af.arrows):
                raise ParseError(f"two arrows labelled {lab!r} leave vertex {s}", lineno, rest[0][1])
            af.arrows.append((lab, s, t))
        elif key in ("relation", "module", "automorphism"):
            if ":" not in line:
                raise ParseError(f"{key} needs a ':'", lineno, kcol)
            head, body = line.split(":", 1)
            htoks = _tokens(head, 0)[1:]
            btoks = _tokens(body, len(head) + 1)
            if len(htoks) != 1:
                raise ParseError(f"{key} needs exactly one name or start vertex before ':'", lineno, kcol)
            htok, hcol = htoks[0]
            if key == "relation":
                start = _int(htok, lineno, hcol, "start vertex")
                if not 1 <= start <= af.vertices:
                    raise ParseError(f"vertex {start} out of range", lineno, hcol)
                terms = _parse_terms(btoks, lineno)
                for t, (tok, col) in zip(terms, [b for b in btoks if _WORD.match(b[0])]):
                    _check_word(af, start, t.word, lineno, col)
                af.relations.append((start, terms))
            elif key == "automorphism":
                if not _NAME.match(htok):
                    raise ParseError(f"bad automorphism name {htok!r}", lineno, hcol)
                swap = {}
                for tok, col in btoks:
                    if tok.count("=") != 1:
                        raise ParseError(f"expected LABEL=LABEL, got {tok!r}", lineno, col)
                    a, b = tok.split("=")
                    labels = {x[0] for x in af.arrows}
                    for lab in (a, b):
                        if lab not in labels:
                            raise ParseError(f"unknown arrow label {lab!r}", lineno, col)
                    swap[a] = b
                af.automorphisms[htok] = swap
            else:
                if not _NAME.match(htok):
                    raise ParseError(f"bad module name {htok!r}", lineno, hcol)
                if "/" not in body:
                    raise ParseError("module needs 'VERTEX / generators'", lineno, kcol)
                vpart, gpart = body.split("/", 1)
                vt = _tokens(vpart, len(head) + 1)
                if len(vt) != 1:
                    raise ParseError("module needs one vertex before '/'", lineno, kcol)
                v = _int(vt[0][0], lineno, vt[0][1], "vertex")
                if not 1 <= v <= af.vertices:
                    raise ParseError(f"vertex {v} out of range", lineno, vt[0][1])
                gens = []
                base = len(head) + 1 + len(vpart) + 1
                for chunk in _split_keep_offsets(gpart, ",", base):
                    gt = _tokens(chunk[0], chunk[1])
                    if not gt:
                        continue
                    terms = _parse_terms(gt, lineno)
                    for t, (tok, col) in zip(terms, [b for b in gt if _WORD.match(b[0])]):
                        _check_word(af, v, t.word, lineno, col)
                    gens.append(terms)
                af.modules[htok] = (v, gens)
        elif key == "option":
            if len(rest) != 2:
                raise ParseError("option takes KEY VALUE", lineno, kcol)
            k, kc = rest[0]
            if k not in OPTION_KEYS:
                raise ParseError(f"unknown option {k!r}", lineno, kc)
            af.options[k] = _int(rest[1][0], lineno, rest[1][1], k)
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, kcol)
    if not seen_vertices:
        raise ParseError("missing 'vertices' directive")
    return af


def _split_keep_offsets(text: str, sep: str, base: int):
    out, start = [], 0
    for i, ch in enumerate(text):
        if ch == sep:
            out.append((text[start:i], base + start))
            start = i + 1
    out.append((text[start:], base + start))
    return out


# ---------------------------------------------------------------------------
# built-in presentations

def dihedral_file(n: int, wrap: bool = False) -> AlgebraFile:
    """Text presentation of A_n (or, with ``wrap``, of its trivial extension
    for even n) with the swap automorphism and the modules E, aE."""
    af = AlgebraFile(vertices=n)
    for i in range(1, n):
        af.arrows += [("x", i, i + 1), ("y", i, i + 1)]
    if wrap:
        af.arrows += [("x", n, 1), ("y", n, 1)]
    for lab, s, t in af.arrows:
        if any(b[0] == lab and b[1] == t for b in af.arrows):
            af.relations.append((s, [Term(Fraction(1), (lab, lab))]))
    if wrap:
        for v in range(1, n + 1):
            wx = tuple("x" if k % 2 == 0 else "y" for k in range(n))
            wy = tuple("y" if k % 2 == 0 else "x" for k in range(n))
            af.relations.append((v, [Term(Fraction(1), wx), Term(Fraction(-1), wy)]))
    af.automorphisms["eps"] = {"x": "y", "y": "x"}
    af.modules["E"] = (1, [[Term(Fraction(1), ("y",))]])
    af.modules["aE"] = (1, [[Term(Fraction(1), ("x",))]])
    return af


def kronecker_file() -> AlgebraFile:
    af = AlgebraFile(vertices=2, arrows=[("x", 1, 2), ("y", 1, 2)])
    af.automorphisms["eps"] = {"x": "y", "y": "x"}
    return af


def builtin(name: str) -> AlgebraFile:
    m = re.fullmatch(r"([AT])(\d+)", name)
    if m:
        n = int(m.group(2))
        if m.group(1) == "T" and n % 2:
            raise ParseError("builtin T(A_n) needs even n")
        if n < 1:
            raise ParseError("builtin needs n >= 1")
        return dihedral_file(n, wrap=m.group(1) == "T")
    if name == "kronecker":
        return kronecker_file()
    raise ParseError(f"unknown builtin {name!r}")


def load_algebra_file(spec: str) -> AlgebraFile:
    if spec.startswith("builtin:"):
        return builtin(spec[len("builtin:"):])
    with open(spec) as fh:
        return parse_algebra_text(fh.read())


# ---------------------------------------------------------------------------
# complex JSON

COMPLEX_FORMAT = "siltingkit-complex"


def _runs(vs):
    out = []
    for v in vs:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return out


def complex_to_dict(X: ProjComplex) -> dict:
    A = X.algebra
    F = A.field
    terms = {str(k): _runs(vs) for k, vs in sorted(X.terms.items())}
    diffs = {}
    for k, d in sorted(X.diffs.items()):
        diffs[str(k)] = [[[F.to_str(a.get(b, 0)) for b in range(A.dim)] for a in r] for r in d]
    return {"format": COMPLEX_FORMAT, "version": 1, "field": repr(F), "basis": list(A.names),
            "lo": X.lo, "hi": X.hi, "terms": terms, "differentials": diffs}


def complex_to_json(X: ProjComplex) -> str:
    return json.dumps(complex_to_dict(X), sort_keys=True, separators=(",", ":"))


def complex_from_dict(data: dict, A: Algebra) -> ProjComplex:
    if data.get("format") != COMPLEX_FORMAT:
        raise ValueError("not a complex document")
    if data.get("version") != 1:
        raise ValueError(f"unsupported complex format version {data.get('version')}")
    if list(data["basis"]) != list(A.names):
        raise ValueError("complex was written over a different path basis")
    F = A.field
    if data["field"] != repr(F):
        raise ValueError(f"complex field {data['field']} does not match {F!r}")
    terms = {}
    for k, runs in data["terms"].items():
        vs = []
        for v, m in runs:
            vs.extend([int(v)] * int(m))
        terms[int(k)] = tuple(vs)
    diffs = {}
    for k, rows in data["differentials"].items():
        diffs[int(k)] = [[{b: F(c) for b, c in enumerate(vec) if F(c)} for vec in r] for r in rows]
    return ProjComplex(A, terms, diffs)


def complex_from_json(text: str, A: Algebra) -> ProjComplex:
    return complex_from_dict(json.loads(text), A)
