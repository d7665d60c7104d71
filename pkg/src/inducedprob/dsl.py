"""Reader and writer for ``.psc`` scenario files.

Grammar (``#`` starts a comment, newlines are insignificant)::

    scenario <name>
    space <Name> [uniform] { o1, o2, ... }
    map <name> : <Dom> -> <Cod> { o -> o', ... }
    event <name> on <Space> = { o, ... }
    chain <name> { prior <Space|map>; ...; child <Space>; cpt (p1,...) -> { c: p/q, ... }; ... }
    query <name> := P(<atoms> [| <atoms>]) [in <model>] [expect p/q]

Outcomes are identifiers, integers or parenthesised tuples of outcomes.
``<atoms>`` is one or more event names or outcome literals joined by ``&``.
A ``prior`` naming a map uses the distribution the map induces on its
codomain.
"""

from __future__ import annotations

import re
import textwrap
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .core import (
    Chain,
    Distribution,
    Outcome,
    ProbabilityError,
    RuleMap,
    SampleSpace,
    format_outcome,
    induced_distribution,
    uniform_distribution,
)
from .scenarios import Query, Scenario, resolve_atom, resolve_model

__all__ = [
    "Diagnostic",
    "ScenarioParseError",
    "parse",
    "parse_file",
    "parse_with_diagnostics",
    "parse_outcome",
    "render",
    "KEYWORDS",
]

KEYWORDS = ("scenario", "space", "map", "event", "chain", "query")
MAX_NESTING = 32

# diagnostic codes
LEXICAL = "E001"
SYNTAX = "E002"
UNKNOWN = "E003"
NOT_TOTAL = "E004"
DUPLICATE_OUTCOME = "E005"
QUERY_MISMATCH = "E006"
DUPLICATE_NAME = "E007"
BAD_PROBABILITY = "E008"
INCOMPLETE_TABLE = "E009"
BAD_IMAGE = "E010"
BAD_MEMBER = "E011"
CONFLICTING_ARM = "E012"
BAD_SPACE = "E013"
INTERNAL = "E999"
REPEATED_ARM = "W001"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    message: str
    code: str = SYNTAX
    hint: str | None = None

    def format(self, path: str = "<input>") -> str:
        s = f"{path}:{self.line}:{self.column}: {self.severity}: {self.message} [{self.code}]"
        if self.hint:
            s += f"\n  hint: {self.hint}"
        return s


class ScenarioParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic], path: str = "<input>"):
        self.diagnostics = diagnostics
        self.path = path
        super().__init__("\n".join(d.format(path) for d in diagnostics))


# --------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<define>:=)
  | (?P<ident>[A-Za-z_](?:[A-Za-z0-9_]|-(?!>))*)
  | (?P<number>[0-9]+)
  | (?P<punct>[{}(),;:=&|/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, punct, arrow, define, eof
    text: str
    line: int
    col: int
    first_on_line: bool = False


class _Lex:
    def __init__(self, text: str):
        self.tokens: list[Token] = []
        self.errors: list[Diagnostic] = []
        pos, line, line_start = 0, 1, 0
        last_line = 0
        n = len(text)
        while pos < n:
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                ch = text[pos]
                self.errors.append(
                    Diagnostic("error", line, pos - line_start + 1, f"unexpected character {ch!r}", LEXICAL)
                )
                pos += 1
                continue
            kind = m.lastgroup
            chunk = m.group()
            if kind in ("ws", "comment"):
                nl = chunk.count("\n")
                if nl:
                    line += nl
                    line_start = pos + chunk.rfind("\n") + 1
            else:
                kind = "punct" if kind in ("punct",) else kind
                self.tokens.append(
                    Token(kind, chunk, line, pos - line_start + 1, line != last_line)
                )
                last_line = line
            pos = m.end()
        self.tokens.append(Token("eof", "", line, pos - line_start + 1, True))


# --------------------------------------------------------------------------
# syntax tree


@dataclass
class _Node:
    line: int
    col: int


@dataclass
class _OutcomeLit(_Node):
    value: Outcome = ""


@dataclass
class _Frac(_Node):
    num: int = 0
    den: int = 1


@dataclass
class _Space(_Node):
    name: str = ""
    uniform: bool = False
    outcomes: list[_OutcomeLit] = field(default_factory=list)


@dataclass
class _Map(_Node):
    name: str = ""
    dom: tuple[str, int, int] = ("", 0, 0)
    cod: tuple[str, int, int] = ("", 0, 0)
    arms: list[tuple[_OutcomeLit, _OutcomeLit]] = field(default_factory=list)


@dataclass
class _EventDecl(_Node):
    name: str = ""
    space: tuple[str, int, int] = ("", 0, 0)
    members: list[_OutcomeLit] = field(default_factory=list)


@dataclass
class _Chain(_Node):
    name: str = ""
    priors: list[tuple[str, int, int]] = field(default_factory=list)
    child: tuple[str, int, int] | None = None
    rows: list[tuple[_OutcomeLit, list[tuple[_OutcomeLit, _Frac]]]] = field(default_factory=list)


@dataclass
class _QueryDecl(_Node):
    name: str = ""
    target: list[tuple[str, int, int]] = field(default_factory=list)
    given: list[tuple[str, int, int]] = field(default_factory=list)
    model: tuple[str, int, int] | None = None
    expect: _Frac | None = None


class _Syntax(Exception):
    def __init__(self, tok: Token, message: str, hint: str | None = None):
        self.diag = Diagnostic("error", tok.line, tok.col, message, SYNTAX, hint)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.errors: list[Diagnostic] = []
        self.name: tuple[str, int, int] | None = None
        self.decls: list[_Node] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def expect(self, text: str, what: str | None = None) -> Token:
        if not self.at(text):
            raise _Syntax(self.tok, f"expected '{text}'{' ' + what if what else ''}, found {self._desc(self.tok)}")
        return self.advance()

    def ident(self, what: str) -> tuple[str, int, int]:
        t = self.tok
        if t.kind != "ident":
            raise _Syntax(t, f"expected {what}, found {self._desc(t)}")
        self.advance()
        return (t.text, t.line, t.col)

    @staticmethod
    def _desc(t: Token) -> str:
        return "end of file" if t.kind == "eof" else f"'{t.text}'"

    def run(self) -> None:
        while self.tok.kind != "eof":
            t = self.tok
            try:
                if t.kind == "ident" and t.text in KEYWORDS:
                    self.advance()
                    getattr(self, "_" + t.text)(t)
                else:
                    raise _Syntax(
                        t,
                        f"expected a declaration, found {self._desc(t)}",
                        "declarations start with " + ", ".join(KEYWORDS),
                    )
            except _Syntax as e:
                self.errors.append(e.diag)
                self._recover()

    def _recover(self) -> None:
        self.advance()
        while self.tok.kind != "eof":
            t = self.tok
            if t.first_on_line and t.kind == "ident" and t.text in KEYWORDS:
                return
            self.advance()

    # -- pieces

    def outcome(self, depth: int = 0) -> _OutcomeLit:
        t = self.tok
        if t.kind in ("ident", "number"):
            self.advance()
            return _OutcomeLit(t.line, t.col, t.text)
        if self.at("("):
            if depth >= MAX_NESTING:
                raise _Syntax(t, "outcome tuples nested too deeply")
            self.advance()
            parts = [self.outcome(depth + 1).value]
            while self.at(","):
                self.advance()
                parts.append(self.outcome(depth + 1).value)
            self.expect(")", "to close the tuple")
            return _OutcomeLit(t.line, t.col, tuple(parts))
        raise _Syntax(t, f"expected an outcome, found {self._desc(t)}")

    def frac(self) -> _Frac:
        t = self.tok
        if t.kind != "number":
            raise _Syntax(t, f"expected a fraction p/q, found {self._desc(t)}", "probabilities are written as integer fractions, e.g. 1/4")
        self.advance()
        num, den = int(t.text), 1
        if self.at("/"):
            self.advance()
            d = self.tok
            if d.kind != "number":
                raise _Syntax(d, f"expected a denominator, found {self._desc(d)}")
            self.advance()
            den = int(d.text)
        return _Frac(t.line, t.col, num, den)

    def outcome_list(self, close: str = "}") -> list[_OutcomeLit]:
        items = []
        if self.at(close):
            return items
        items.append(self.outcome())
        while self.at(","):
            self.advance()
            if self.at(close):
                break
            items.append(self.outcome())
        return items

    # -- statements

    def _scenario(self, kw: Token) -> None:
        name = self.ident("a scenario name")
        if self.name is not None:
            self.errors.append(
                Diagnostic("error", name[1], name[2], "scenario name given twice", DUPLICATE_NAME)
            )
        self.name = name

    def _space(self, kw: Token) -> None:
        name = self.ident("a space name")
        uniform = False
        if self.at("uniform"):
            self.advance()
            uniform = True
        self.expect("{", "to open the outcome list")
        outcomes = self.outcome_list()
        self.expect("}", "to close the outcome list")
        self.decls.append(_Space(kw.line, kw.col, name[0], uniform, outcomes))

    def _map(self, kw: Token) -> None:
        name = self.ident("a map name")
        self.expect(":")
        dom = self.ident("the domain space")
        self.expect("->")
        cod = self.ident("the codomain space")
        self.expect("{", "to open the map body")
        arms = []
        while not self.at("}"):
            src = self.outcome()
            self.expect("->", "between an outcome and its image")
            dst = self.outcome()
            arms.append((src, dst))
            if self.at(","):
                self.advance()
            elif not self.at("}"):
                raise _Syntax(self.tok, f"expected ',' or '}}', found {self._desc(self.tok)}")
        self.expect("}")
        self.decls.append(_Map(kw.line, kw.col, name[0], dom, cod, arms))

    def _event(self, kw: Token) -> None:
        name = self.ident("an event name")
        self.expect("on")
        space = self.ident("a space name")
        self.expect("=")
        self.expect("{")
        members = self.outcome_list()
        self.expect("}")
        self.decls.append(_EventDecl(kw.line, kw.col, name[0], space, members))

    def _chain(self, kw: Token) -> None:
        name = self.ident("a chain name")
        node = _Chain(kw.line, kw.col, name[0])
        self.expect("{")
        while not self.at("}"):
            t = self.tok
            if self.at("prior"):
                self.advance()
                node.priors.append(self.ident("a prior space or map"))
            elif self.at("child"):
                self.advance()
                if node.child is not None:
                    raise _Syntax(t, "chain has more than one child")
                node.child = self.ident("the child space")
            elif self.at("cpt"):
                self.advance()
                if not self.at("("):
                    raise _Syntax(self.tok, f"expected '(' to open the parent tuple, found {self._desc(self.tok)}")
                key = self.outcome()
                self.expect("->")
                self.expect("{")
                entries = []
                while not self.at("}"):
                    o = self.outcome()
                    self.expect(":")
                    entries.append((o, self.frac()))
                    if self.at(","):
                        self.advance()
                    elif not self.at("}"):
                        raise _Syntax(self.tok, f"expected ',' or '}}', found {self._desc(self.tok)}")
                self.expect("}")
                node.rows.append((key, entries))
            else:
                raise _Syntax(t, f"expected 'prior', 'child' or 'cpt', found {self._desc(t)}")
            if self.at(";"):
                self.advance()
            elif not self.at("}"):
                raise _Syntax(self.tok, f"expected ';' or '}}', found {self._desc(self.tok)}")
        self.expect("}")
        if node.child is None:
            raise _Syntax(kw, f"chain {node.name} declares no child")
        self.decls.append(node)

    def _atom(self) -> tuple[str, int, int]:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return (t.text, t.line, t.col)
        lit = self.outcome()
        return (format_outcome(lit.value), lit.line, lit.col)

    def _conj(self) -> list[tuple[str, int, int]]:
        atoms = [self._atom()]
        while self.at("&"):
            self.advance()
            atoms.append(self._atom())
        return atoms

    def _query(self, kw: Token) -> None:
        name = self.ident("a query name")
        self.expect(":=")
        p = self.tok
        if not (p.kind == "ident" and p.text == "P"):
            raise _Syntax(p, f"expected 'P(', found {self._desc(p)}")
        self.advance()
        self.expect("(")
        node = _QueryDecl(kw.line, kw.col, name[0])
        node.target = self._conj()
        if self.at("|"):
            self.advance()
            node.given = self._conj()
        self.expect(")", "to close P(...)")
        if self.at("in"):
            self.advance()
            node.model = self.ident("a map or chain name")
        if self.at("expect"):
            self.advance()
            node.expect = self.frac()
        self.decls.append(node)


# --------------------------------------------------------------------------
# semantic phase


class _Builder:
    def __init__(self, parser: _Parser):
        self.p = parser
        self.diags: list[Diagnostic] = []
        name = parser.name[0] if parser.name else "scenario"
        self.sc = Scenario(name)
        self.names: dict[str, str] = {}

    def err(self, node_or_pos, message: str, code: str, hint: str | None = None, severity: str = "error") -> None:
        if isinstance(node_or_pos, tuple):
            line, col = node_or_pos[1], node_or_pos[2]
        else:
            line, col = node_or_pos.line, node_or_pos.col
        self.diags.append(Diagnostic(severity, line, col, message, code, hint))

    def declare(self, name: str, kind: str, node) -> bool:
        if name in self.names or name in self.sc.queries:
            prev = self.names.get(name, "query")
            self.err(node, f"{kind} {name} is already declared as a {prev}", DUPLICATE_NAME)
            return False
        self.names[name] = kind
        return True

    def space(self, ref: tuple[str, int, int]) -> SampleSpace | None:
        s = self.sc.spaces.get(ref[0])
        if s is None:
            kind = self.names.get(ref[0])
            msg = f"unknown space {ref[0]}" if kind is None else f"{ref[0]} is a {kind}, not a space"
            self.err(ref, msg, UNKNOWN)
        return s

    def run(self) -> Scenario:
        for d in self.p.decls:
            getattr(self, "_" + type(d).__name__.lstrip("_").lower())(d)
        return self.sc

    def _space(self, d: _Space) -> None:
        if not self.declare(d.name, "space", d):
            return
        seen: dict[Outcome, _OutcomeLit] = {}
        ok = True
        for o in d.outcomes:
            if o.value in seen:
                self.err(o, f"duplicate outcome {format_outcome(o.value)} in space {d.name}", DUPLICATE_OUTCOME)
                ok = False
            seen.setdefault(o.value, o)
        if not d.outcomes:
            self.err(d, f"space {d.name} has no outcomes", BAD_SPACE)
            ok = False
        if ok:
            try:
                self.sc.spaces[d.name] = SampleSpace(d.name, tuple(seen), d.uniform)
            except ProbabilityError as e:
                self.err(d, str(e), BAD_SPACE)

    def _map(self, d: _Map) -> None:
        if not self.declare(d.name, "map", d):
            return
        dom, cod = self.space(d.dom), self.space(d.cod)
        if dom is None or cod is None:
            return
        assignment: dict[Outcome, Outcome] = {}
        ok = True
        for src, dst in d.arms:
            if src.value not in dom:
                self.err(src, f"{format_outcome(src.value)} is not an outcome of {dom.name}", BAD_MEMBER)
                ok = False
                continue
            if dst.value not in cod:
                self.err(dst, f"image {format_outcome(dst.value)} is not an outcome of {cod.name}", BAD_IMAGE)
                ok = False
                continue
            prev = assignment.get(src.value)
            if prev is not None:
                if prev != dst.value:
                    self.err(src, f"map {d.name} sends {format_outcome(src.value)} to two images", CONFLICTING_ARM)
                    ok = False
                else:
                    self.err(src, f"repeated arm for {format_outcome(src.value)}", REPEATED_ARM, severity="warning")
                continue
            assignment[src.value] = dst.value
        missing = [o for o in dom.outcomes if o not in assignment]
        if missing and ok:
            shown = ", ".join(format_outcome(o) for o in missing[:3]) + (", ..." if len(missing) > 3 else "")
            self.err(d, f"map {d.name} is not total over {dom.name}", NOT_TOTAL, f"no image for {shown}")
            ok = False
        if ok:
            self.sc.maps[d.name] = RuleMap(d.name, dom, cod, assignment)

    def _eventdecl(self, d: _EventDecl) -> None:
        if not self.declare(d.name, "event", d):
            return
        space = self.space(d.space)
        if space is None:
            return
        ok = True
        for m in d.members:
            if m.value not in space:
                self.err(m, f"{format_outcome(m.value)} is not an outcome of {space.name}", BAD_MEMBER)
                ok = False
        if ok:
            self.sc.events[d.name] = space.event(m.value for m in d.members)

    def _prior(self, ref: tuple[str, int, int]) -> Distribution | None:
        name = ref[0]
        if name in self.sc.spaces:
            s = self.sc.spaces[name]
            if not s.uniform:
                self.err(ref, f"prior space {name} is not uniform", BAD_PROBABILITY, "declare it 'uniform' or give a map")
                return None
            return uniform_distribution(s)
        if name in self.sc.maps:
            m = self.sc.maps[name]
            if not m.domain.uniform:
                self.err(ref, f"prior map {name} has a non-uniform domain", BAD_PROBABILITY)
                return None
            return induced_distribution(m)
        self.err(ref, f"unknown space or map {name}", UNKNOWN)
        return None

    def _frac(self, f: _Frac) -> Fraction | None:
        if f.den == 0:
            self.err(f, "zero denominator", BAD_PROBABILITY)
            return None
        v = Fraction(f.num, f.den)
        if v > 1:
            self.err(f, f"probability {v} exceeds 1", BAD_PROBABILITY)
            return None
        return v

    def _chain(self, d: _Chain) -> None:
        if not self.declare(d.name, "chain", d):
            return
        priors = [self._prior(r) for r in d.priors]
        child = self.space(d.child) if d.child else None
        if not d.priors:
            self.err(d, f"chain {d.name} has no prior", INCOMPLETE_TABLE)
            return
        if child is None or any(p is None for p in priors):
            return
        parents = [p.space for p in priors]
        if len(set(parents + [child])) != len(parents) + 1:
            self.err(d, f"chain {d.name} uses the same space twice", BAD_SPACE)
            return
        cpt: dict[tuple[Outcome, ...], Distribution] = {}
        ok = True
        for key, entries in d.rows:
            kv = key.value
            if not isinstance(kv, tuple) or len(kv) != len(parents):
                self.err(key, f"row key {format_outcome(kv)} needs {len(parents)} parent outcome(s)", INCOMPLETE_TABLE)
                ok = False
                continue
            bad = [o for o, s in zip(kv, parents) if o not in s]
            if bad:
                self.err(key, f"{format_outcome(bad[0])} is not a parent outcome in chain {d.name}", BAD_MEMBER)
                ok = False
                continue
            if kv in cpt:
                self.err(key, f"duplicate row {format_outcome(kv)}", INCOMPLETE_TABLE)
                ok = False
                continue
            weights: dict[Outcome, Fraction] = {}
            row_ok = True
            for o, f in entries:
                v = self._frac(f)
                if v is None:
                    row_ok = False
                    continue
                if o.value not in child:
                    self.err(o, f"{format_outcome(o.value)} is not an outcome of {child.name}", BAD_MEMBER)
                    row_ok = False
                    continue
                if o.value in weights:
                    self.err(o, f"{format_outcome(o.value)} weighted twice", BAD_PROBABILITY)
                    row_ok = False
                    continue
                weights[o.value] = v
            if row_ok and sum(weights.values()) != 1:
                self.err(key, f"row {format_outcome(kv)} sums to {sum(weights.values())}, not 1", BAD_PROBABILITY)
                row_ok = False
            if row_ok:
                cpt[kv] = Distribution(child, weights)
            ok = ok and row_ok
        if not ok:
            return
        try:
            self.sc.chains[d.name] = Chain(d.name, tuple(priors), child, cpt)
        except ProbabilityError as e:
            self.err(d, str(e), INCOMPLETE_TABLE)

    def _querydecl(self, d: _QueryDecl) -> None:
        if d.name in self.names or d.name in self.sc.queries:
            self.err(d, f"query {d.name} is already declared", DUPLICATE_NAME)
            return
        expected = None
        if d.expect is not None:
            expected = self._frac(d.expect)
            if expected is None:
                return
        model = d.model[0] if d.model else None
        q = Query(d.name, tuple(a[0] for a in d.target), tuple(a[0] for a in d.given), model, expected)
        if model is not None and model not in self.sc.maps and model not in self.sc.chains:
            self.err(d.model, f"unknown map or chain {model}", UNKNOWN)
            return
        for a in d.target + d.given:
            if a[0] in self.names and self.names[a[0]] != "event":
                self.err(a, f"{a[0]} is a {self.names[a[0]]}, not an event", QUERY_MISMATCH)
                return
            try:
                resolve_atom(self.sc, a[0])
            except ProbabilityError as e:
                if "unknown" in str(e):
                    self.err(a, str(e), UNKNOWN)
                    return
        try:
            m = resolve_model(self.sc, q)
        except ProbabilityError as e:
            self.err(d.model or d, str(e), QUERY_MISMATCH)
            return
        from .scenarios import _model_spaces

        spaces = (m,) if isinstance(m, SampleSpace) else _model_spaces(m)
        for a in d.target + d.given:
            try:
                ev = resolve_atom(self.sc, a[0], spaces)
            except ProbabilityError as e:
                code = UNKNOWN if "unknown" in str(e) else QUERY_MISMATCH
                self.err(a, str(e), code)
                return
            if ev.space not in spaces:
                where = m.name
                self.err(a, f"event {a[0]} on {ev.space.name} cannot be used in {where}", QUERY_MISMATCH)
                return
        self.sc.queries[d.name] = q


def parse_with_diagnostics(text: str) -> tuple[Scenario | None, list[Diagnostic]]:
    """Parse ``text``; the scenario is None whenever any error was reported."""
    try:
        if text.startswith("\ufeff"):
            text = text[1:]
        text = text.replace("\r\n", "\n")
        lex = _Lex(text)
        parser = _Parser(lex.tokens)
        parser.run()
        diags = lex.errors + parser.errors
        if diags:
            return None, sorted(diags, key=lambda d: (d.line, d.column))
        builder = _Builder(parser)
        sc = builder.run()
        diags = builder.diags
    except RecursionError:
        return None, [Diagnostic("error", 1, 1, "input nested too deeply", SYNTAX)]
    except Exception as e:  # pragma: no cover - fuzz backstop
        return None, [Diagnostic("error", 1, 1, f"internal error: {type(e).__name__}: {e}", INTERNAL)]
    if any(d.severity == "error" for d in diags):
        return None, diags
    sc.notes = _leading_comment(text)
    return sc, diags


def _leading_comment(text: str) -> str:
    """Comment block at the top of a file, read back as the scenario notes."""
    words = []
    for line in text.split("\n"):
        line = line.strip()
        if not line.startswith("#"):
            break
        words.append(line[1:].strip())
    return " ".join(w for w in words if w)


def parse(text: str, path: str = "<input>") -> Scenario:
    sc, diags = parse_with_diagnostics(text)
    if sc is None:
        raise ScenarioParseError([d for d in diags if d.severity == "error"], path)
    return sc


def parse_file(path: str | Path) -> Scenario:
    p = Path(path)
    return parse(p.read_text(encoding="utf-8"), str(p))


def parse_outcome(text: str) -> Outcome:
    """Parse a single outcome literal such as ``H``, ``12`` or ``(H,Mo)``."""
    lex = _Lex(text)
    if lex.errors:
        raise ValueError(f"not an outcome: {text!r}")
    p = _Parser(lex.tokens)
    try:
        lit = p.outcome()
    except _Syntax:
        raise ValueError(f"not an outcome: {text!r}") from None
    if p.tok.kind != "eof":
        raise ValueError(f"not an outcome: {text!r}")
    return lit.value


# --------------------------------------------------------------------------
# writer

_WIDTH = 88


def _wrapped(head: str, items: list[str], tail: str) -> list[str]:
    line = head + " " + ", ".join(items) + " " + tail if items else head + " " + tail
    if len(line) <= _WIDTH:
        return [line]
    out = [head]
    cur = "    "
    for i, it in enumerate(items):
        piece = it + ("," if i < len(items) - 1 else "")
        if len(cur) + len(piece) + 1 > _WIDTH and cur.strip():
            out.append(cur.rstrip())
            cur = "    "
        cur += piece + " "
    out.append(cur.rstrip())
    out.append(tail)
    return out


def _fmt_frac(v: Fraction) -> str:
    return str(v)


def _check_label(o: Outcome) -> None:
    if isinstance(o, tuple):
        for x in o:
            _check_label(x)
    elif not re.fullmatch(r"[A-Za-z_](?:[A-Za-z0-9_]|-(?!>))*|[0-9]+", o) or o in KEYWORDS:
        raise ValueError(f"outcome {o!r} cannot be written in scenario syntax")


def render(sc: Scenario) -> str:
    """Scenario as ``.psc`` text; parsing it back gives the same query values."""
    out: list[str] = []
    if sc.notes:
        out.extend("# " + line for line in textwrap.wrap(sc.notes, _WIDTH - 2))
    out.append(f"scenario {sc.name}")
    out.append("")
    for s in sc.spaces.values():
        for o in s.outcomes:
            _check_label(o)
        head = f"space {s.name}{' uniform' if s.uniform else ''} {{"
        out.extend(_wrapped(head, [format_outcome(o) for o in s.outcomes], "}"))
    if sc.maps:
        out.append("")
    for m in sc.maps.values():
        arms = [f"{format_outcome(k)} -> {format_outcome(v)}" for k, v in m.assignment.items()]
        out.extend(_wrapped(f"map {m.name} : {m.domain.name} -> {m.codomain.name} {{", arms, "}"))
    for c in sc.chains.values():
        out.append("")
        out.append(f"chain {c.name} {{")
        for prior in c.priors:
            out.append(f"    prior {_prior_name(sc, prior)};")
        out.append(f"    child {c.child.name};")
        for key, row in c.cpt.items():
            cells = ", ".join(f"{format_outcome(o)}: {_fmt_frac(w)}" for o, w in row.items())
            out.append(f"    cpt {format_outcome(tuple(key))} -> {{ {cells} }};")
        out.append("}")
    if sc.events:
        out.append("")
    for name, ev in sc.events.items():
        members = [format_outcome(o) for o in ev.ordered()]
        out.extend(_wrapped(f"event {name} on {ev.space.name} = {{", members, "}"))
    if sc.queries:
        out.append("")
    for q in sc.queries.values():
        model = q.model
        if model is None:
            resolved = resolve_model(sc, q)
            if not isinstance(resolved, SampleSpace):
                model = resolved.name
        line = f"query {q.name} := {q.describe()}"
        if model is not None:
            line += f" in {model}"
        if q.expected is not None:
            line += f" expect {_fmt_frac(q.expected)}"
        out.append(line)
    return "\n".join(out) + "\n"


def _prior_name(sc: Scenario, prior: Distribution) -> str:
    for s in sc.spaces.values():
        if s == prior.space and s.uniform and prior == uniform_distribution(s):
            return s.name
    for m in sc.maps.values():
        if m.codomain == prior.space and m.domain.uniform and prior == induced_distribution(m):
            return m.name
    raise ValueError(
        f"prior over {prior.space.name!r} is neither uniform nor induced by a declared map"
    )


def iter_psc(directory: str | Path) -> Iterator[Path]:
    yield from sorted(Path(directory).glob("*.psc"))
