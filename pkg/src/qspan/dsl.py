"""
The declarative input language: declarations of groups, G-sets, maps and
spans, plus verification commands, one statement per line.

    group S3 = perm 3 gens (0 1), (0 1 2)
    gset X = points 3 on S3 act (0 1)->[1,0,2], (0 1 2)->[1,2,0]
    map f : X -> X = [0,1,2]
    span D = (f, f)
    check cardinality X//S3
    hecke verify A2 q=2

Parsing is total: any malformed input raises ParseError with a located
diagnostic and the expected-token set, never an unhandled crash.  The
pretty-printer emits a canonical form whose re-parse is an identical
Program (spans of source positions are excluded from equality).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .groups import cycles_str, is_perm


@dataclass(frozen=True)
class SourceSpan:
    "Half-open byte range with 1-based line and column of its start."
    line: int
    col: int
    start: int
    end: int

    def describe(self) -> str:
        return "line %d, column %d" % (self.line, self.col)


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected=()):
        self.message = message
        self.span = span
        self.expected = tuple(sorted(expected))
        text = "%s at %s" % (message, span.describe())
        if self.expected:
            text += " (expected %s)" % ", ".join(self.expected)
        super().__init__(text)


TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<arrow>->)
  | (?P<dslash>//)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*)
  | (?P<sym>[()\[\],=:])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def tokenize(text: str):
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
            raise ParseError("unexpected character %r" % text[pos], span)
        kind = m.lastgroup
        tok_text = m.group()
        span = SourceSpan(line, m.start() - line_start + 1, m.start(), m.end())
        if kind == "newline":
            tokens.append(Token("newline", tok_text, span))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, tok_text, span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, n - line_start + 1, n, n)))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class GroupDecl:
    name: str
    degree: int
    gens: tuple
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "group %s = perm %d gens %s" % (
            self.name, self.degree, ", ".join(cycles_str(g) for g in self.gens))


@dataclass(frozen=True)
class GSetDecl:
    name: str
    size: int
    group: str
    mappings: tuple     # ((generator perm, images tuple), ..)
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        parts = ", ".join("%s->[%s]" % (cycles_str(g), ",".join(map(str, imgs)))
                          for g, imgs in self.mappings)
        return "gset %s = points %d on %s act %s" % (
            self.name, self.size, self.group, parts)


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "map %s : %s -> %s = [%s]" % (
            self.name, self.source, self.target, ",".join(map(str, self.images)))


@dataclass(frozen=True)
class SpanDecl:
    name: str
    left: str
    right: str
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "span %s = (%s, %s)" % (self.name, self.left, self.right)


@dataclass(frozen=True)
class CheckCardinality:
    gset: str
    group: str
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "check cardinality %s//%s" % (self.gset, self.group)


@dataclass(frozen=True)
class DegroupSpan:
    span_name: str
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "degroup span %s" % self.span_name


@dataclass(frozen=True)
class Compose:
    outer: str
    inner: str
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "compose %s %s" % (self.outer, self.inner)


@dataclass(frozen=True)
class Iso:
    first: str
    second: str
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "iso %s %s" % (self.first, self.second)


@dataclass(frozen=True)
class HeckeVerify:
    rank: int
    q: int
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "hecke verify A%d q=%d" % (self.rank, self.q)


@dataclass(frozen=True)
class MainClaim:
    rank: int | None
    q: int | None
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        if self.rank is None:
            return "main-claim"
        return "main-claim A%d q=%d" % (self.rank, self.q)


@dataclass(frozen=True)
class Zamolodchikov:
    rank: int
    q: int
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        return "zamolodchikov A%d q=%d" % (self.rank, self.q)


@dataclass(frozen=True)
class GrothendieckRoundtrip:
    span_name: str | None
    rank: int | None
    q: int | None
    span: SourceSpan = field(compare=False)

    def pretty(self) -> str:
        if self.span_name is not None:
            return "grothendieck roundtrip %s" % self.span_name
        if self.rank is not None:
            return "grothendieck roundtrip A%d q=%d" % (self.rank, self.q)
        return "grothendieck roundtrip"


DECLS = (GroupDecl, GSetDecl, MapDecl, SpanDecl)


@dataclass(frozen=True)
class Program:
    statements: tuple

    def pretty(self) -> str:
        return "\n".join(s.pretty() for s in self.statements) + "\n" \
            if self.statements else ""


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, message, expected=()):
        raise ParseError(message, self.peek().span, expected)

    def expect(self, kind, text=None, what=None):
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = what or (repr(text) if text else kind)
            self.fail("unexpected %s" % (repr(t.text) if t.text else "end of input"),
                      expected=(want,))
        return self.advance()

    def expect_keyword(self, word):
        return self.expect("name", word, what="'%s'" % word)

    def expect_int(self, what="an integer") -> int:
        t = self.expect("int", what=what)
        return int(t.text)

    def expect_name(self, what="a name") -> str:
        t = self.expect("name", what=what)
        return t.text

    def at_line_end(self) -> bool:
        return self.peek().kind in ("newline", "eof")

    def skip_newlines(self):
        while self.peek().kind == "newline":
            self.advance()

    # -- pieces ---------------------------------------------------------------

    def parse_cycles(self, degree: int):
        "One or more cycles like (0 1)(2 3); returns the permutation."
        images = list(range(degree))
        seen = set()
        start = self.peek()
        if start.kind != "sym" or start.text != "(":
            self.fail("unexpected %r" % start.text, expected=("'('",))
        while self.peek().kind == "sym" and self.peek().text == "(":
            self.advance()
            pts = []
            while self.peek().kind == "int":
                pts.append(int(self.advance().text))
            self.expect("sym", ")", what="')'")
            if not pts:
                raise ParseError("empty cycle", start.span)
            for p in pts:
                if p >= degree:
                    raise ParseError(
                        "point %d out of range for degree %d" % (p, degree),
                        start.span)
                if p in seen:
                    raise ParseError("point %d repeated in cycles" % p, start.span)
                seen.add(p)
            for k, p in enumerate(pts):
                images[p] = pts[(k + 1) % len(pts)]
        return tuple(images)

    def parse_intlist(self):
        self.expect("sym", "[", what="'['")
        out = []
        if self.peek().kind == "int":
            out.append(int(self.advance().text))
            while self.peek().kind == "sym" and self.peek().text == ",":
                self.advance()
                out.append(self.expect_int())
        self.expect("sym", "]", what="']'")
        return tuple(out)

    def parse_axis(self):
        "A Dynkin label like A2; returns the rank."
        t = self.expect("name", what="a Dynkin label like A2")
        m = re.fullmatch(r"A(\d+)", t.text)
        if not m:
            raise ParseError("expected a type-A label like A2, got %r" % t.text,
                             t.span)
        return int(m.group(1))

    def parse_q(self):
        self.expect_keyword("q")
        self.expect("sym", "=", what="'='")
        return self.expect_int("a prime")

    # -- statements -------------------------------------------------------------

    def parse_statement(self):
        t = self.peek()
        if t.kind != "name":
            self.fail("unexpected %r" % t.text,
                      expected=("a declaration or command keyword",))
        word = t.text
        handlers = {
            "group": self.parse_group,
            "gset": self.parse_gset,
            "map": self.parse_map,
            "span": self.parse_span,
            "check": self.parse_check,
            "degroup": self.parse_degroup,
            "compose": self.parse_compose,
            "iso": self.parse_iso,
            "hecke": self.parse_hecke,
            "main-claim": self.parse_main_claim,
            "zamolodchikov": self.parse_zamolodchikov,
            "grothendieck": self.parse_grothendieck,
        }
        if word not in handlers:
            self.fail("unknown statement %r" % word,
                      expected=sorted("'%s'" % h for h in handlers))
        return handlers[word]()

    def parse_group(self):
        start = self.advance().span
        name = self.expect_name("a group name")
        self.expect("sym", "=", what="'='")
        self.expect_keyword("perm")
        degree = self.expect_int("the degree")
        self.expect_keyword("gens")
        gens = [self.parse_cycles(degree)]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            gens.append(self.parse_cycles(degree))
        return GroupDecl(name, degree, tuple(gens), start)

    def parse_gset(self):
        start = self.advance().span
        name = self.expect_name("a gset name")
        self.expect("sym", "=", what="'='")
        self.expect_keyword("points")
        size = self.expect_int("the number of points")
        self.expect_keyword("on")
        group = self.expect_name("a group name")
        self.expect_keyword("act")
        mappings = []

        def one_mapping():
            g = self.parse_cycles_any()
            self.expect("arrow", what="'->'")
            images = self.parse_intlist()
            if len(images) != size or not is_perm(images):
                raise ParseError(
                    "action images must be a permutation of %d points" % size,
                    start)
            mappings.append((g, images))

        one_mapping()
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            one_mapping()
        return GSetDecl(name, size, group, tuple(mappings), start)

    def parse_cycles_any(self):
        "Cycles whose degree is resolved later (against the group)."
        start = self.peek()
        pts_all = []
        cycles = []
        if start.kind != "sym" or start.text != "(":
            self.fail("unexpected %r" % start.text, expected=("'('",))
        while self.peek().kind == "sym" and self.peek().text == "(":
            self.advance()
            pts = []
            while self.peek().kind == "int":
                pts.append(int(self.advance().text))
            self.expect("sym", ")", what="')'")
            if not pts:
                raise ParseError("empty cycle", start.span)
            for p in pts:
                if p in pts_all:
                    raise ParseError("point %d repeated in cycles" % p, start.span)
            pts_all.extend(pts)
            cycles.append(tuple(pts))
        degree = max(pts_all) + 1
        images = list(range(degree))
        for cyc in cycles:
            for k, p in enumerate(cyc):
                images[p] = cyc[(k + 1) % len(cyc)]
        return tuple(images)

    def parse_map(self):
        start = self.advance().span
        name = self.expect_name("a map name")
        self.expect("sym", ":", what="':'")
        source = self.expect_name("a source gset")
        self.expect("arrow", what="'->'")
        target = self.expect_name("a target gset")
        self.expect("sym", "=", what="'='")
        images = self.parse_intlist()
        return MapDecl(name, source, target, images, start)

    def parse_span(self):
        start = self.advance().span
        name = self.expect_name("a span name")
        self.expect("sym", "=", what="'='")
        self.expect("sym", "(", what="'('")
        left = self.expect_name("the left-leg map")
        self.expect("sym", ",", what="','")
        right = self.expect_name("the right-leg map")
        self.expect("sym", ")", what="')'")
        return SpanDecl(name, left, right, start)

    def parse_check(self):
        start = self.advance().span
        self.expect_keyword("cardinality")
        gset = self.expect_name("a gset name")
        self.expect("dslash", what="'//'")
        group = self.expect_name("a group name")
        return CheckCardinality(gset, group, start)

    def parse_degroup(self):
        start = self.advance().span
        self.expect_keyword("span")
        name = self.expect_name("a span name")
        return DegroupSpan(name, start)

    def parse_compose(self):
        start = self.advance().span
        outer = self.expect_name("a span name")
        inner = self.expect_name("a span name")
        return Compose(outer, inner, start)

    def parse_iso(self):
        start = self.advance().span
        a = self.expect_name("a span name")
        b = self.expect_name("a span name")
        return Iso(a, b, start)

    def parse_hecke(self):
        start = self.advance().span
        self.expect_keyword("verify")
        rank = self.parse_axis()
        q = self.parse_q()
        return HeckeVerify(rank, q, start)

    def parse_main_claim(self):
        start = self.advance().span
        if self.at_line_end():
            return MainClaim(None, None, start)
        rank = self.parse_axis()
        q = self.parse_q()
        return MainClaim(rank, q, start)

    def parse_zamolodchikov(self):
        start = self.advance().span
        rank = self.parse_axis()
        q = self.parse_q()
        return Zamolodchikov(rank, q, start)

    def parse_grothendieck(self):
        start = self.advance().span
        self.expect_keyword("roundtrip")
        if self.at_line_end():
            return GrothendieckRoundtrip(None, None, None, start)
        t = self.peek()
        if t.kind == "name" and re.fullmatch(r"A\d+", t.text):
            rank = self.parse_axis()
            q = self.parse_q()
            return GrothendieckRoundtrip(None, rank, q, start)
        name = self.expect_name("a span name or instance label")
        return GrothendieckRoundtrip(name, None, None, start)


def _resolve(statements):
    """Name uniqueness and reference resolution, with located diagnostics.

    Statements execute in source order, so names must be declared before
    they are referenced.
    """
    names = {}

    def need(name, kinds, span, what):
        decl = names.get(name)
        if decl is None:
            raise ParseError("unresolved reference %r" % name, span)
        if not isinstance(decl, kinds):
            raise ParseError("%r is not %s" % (name, what), span)
        return decl

    for st in statements:
        if isinstance(st, DECLS):
            if st.name in names:
                raise ParseError("duplicate name %r" % st.name, st.span)
        if isinstance(st, GSetDecl):
            grp = need(st.group, GroupDecl, st.span, "a group")
            gen_perms = {g for g in grp.gens}
            covered = set()
            for g, _ in st.mappings:
                padded = tuple(g) + tuple(range(len(g), grp.degree))
                if len(g) > grp.degree or padded not in gen_perms:
                    raise ParseError(
                        "cycles %s do not match a generator of %r"
                        % (cycles_str(g), st.group), st.span)
                if padded in covered:
                    raise ParseError(
                        "generator %s mapped twice" % cycles_str(padded), st.span)
                covered.add(padded)
            if covered != gen_perms:
                raise ParseError(
                    "action must cover every generator of %r" % st.group, st.span)
        elif isinstance(st, MapDecl):
            src = need(st.source, GSetDecl, st.span, "a gset")
            tgt = need(st.target, GSetDecl, st.span, "a gset")
            if src.group != tgt.group:
                raise ParseError("map between gsets of different groups", st.span)
            if len(st.images) != src.size:
                raise ParseError(
                    "map needs %d images, got %d" % (src.size, len(st.images)),
                    st.span)
            if st.images and max(st.images) >= tgt.size:
                raise ParseError("map image out of range", st.span)
        elif isinstance(st, SpanDecl):
            l = need(st.left, MapDecl, st.span, "a map")
            r = need(st.right, MapDecl, st.span, "a map")
            if l.source != r.source:
                raise ParseError(
                    "span legs must share their source gset (the apex)", st.span)
        elif isinstance(st, CheckCardinality):
            gs = need(st.gset, GSetDecl, st.span, "a gset")
            need(st.group, GroupDecl, st.span, "a group")
            if gs.group != st.group:
                raise ParseError(
                    "%r is not an action of %r" % (st.gset, st.group), st.span)
        elif isinstance(st, DegroupSpan):
            need(st.span_name, SpanDecl, st.span, "a span")
        elif isinstance(st, Compose):
            need(st.outer, SpanDecl, st.span, "a span")
            need(st.inner, SpanDecl, st.span, "a span")
        elif isinstance(st, Iso):
            need(st.first, SpanDecl, st.span, "a span")
            need(st.second, SpanDecl, st.span, "a span")
        elif isinstance(st, GrothendieckRoundtrip):
            if st.span_name is not None:
                need(st.span_name, SpanDecl, st.span, "a span")
        if isinstance(st, DECLS):
            names[st.name] = st


def parse(text: str) -> Program:
    "Parse a whole program; total (raises ParseError, never crashes)."
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("input is not valid UTF-8",
                             SourceSpan(1, 1, 0, 1)) from e
    tokens = tokenize(text)
    parser = _Parser(tokens)
    statements = []
    parser.skip_newlines()
    while parser.peek().kind != "eof":
        statements.append(parser.parse_statement())
        if not parser.at_line_end():
            parser.fail("unexpected %r after a complete statement"
                        % parser.peek().text, expected=("end of line",))
        parser.skip_newlines()
    _resolve(statements)
    return Program(tuple(statements))


def pretty(program: Program) -> str:
    return program.pretty()
