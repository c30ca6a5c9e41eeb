"""Turtle reader and writer for the subset the knowledge-graph files use.

Supported grammar: ``@prefix`` directives, IRIs in angle brackets, prefixed
names (including the empty prefix ``:name``), the ``a`` keyword, predicate
lists with ``;``, object lists with ``,``, string literals with optional
``@lang`` or ``^^datatype``, labelled blank nodes ``_:x``, comments, and the
statement-terminating ``.``.

Deliberately out of scope (each rejected with a diagnostic naming the
construct): collections ``( )``, anonymous blank nodes ``[ ]``, numeric and
boolean literal shorthand, ``@base``, and triple-quoted strings. The
knowledge-graph files need none of them.

Errors carry a :class:`ParseDiagnostic` with a 1-based line and column into
the source text. A failed parse never returns a partial graph.

Blank-node labels are document-scoped: the parser assigns fresh graph-scoped
labels (``b0``, ``b1``, ...) in order of first appearance, so parsing is
deterministic and re-parsing serializer output yields an isomorphic graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple, NoReturn

from ontobot.graph import (
    IRI,
    LITERAL,
    Graph,
    Term,
    Triple,
    blank,
    iri,
    literal,
)
from ontobot.namespaces import RDF


@dataclass(frozen=True)
class ParseDiagnostic:
    """Location and description of a problem in a source text."""

    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class TurtleParseError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class Token(NamedTuple):
    kind: str
    value: object
    line: int
    column: int


_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}

_PNAME_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_\-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_\-.]*)?")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_\-]*)")
_LANGTAG_RE = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


class Scanner:
    """Shared lexical layer for the Turtle and query parsers."""

    error_class: type[Exception] = TurtleParseError

    def __init__(self, text: str):
        if text.startswith("﻿"):
            text = text[1:]
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def fail(self, message: str, line: int | None = None, column: int | None = None) -> NoReturn:
        diag = ParseDiagnostic(line or self.line, column or self.column, message)
        raise self.error_class(diag)

    def _advance(self, n: int) -> None:
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.column = n - chunk.rfind("\n")
        else:
            self.column += n
        self.pos += n

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_trivia(self) -> None:
        while not self.at_end():
            c = self.text[self.pos]
            if c in " \t\r\n":
                self._advance(1)
            elif c == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def _unescape(self, raw: str, line: int, column: int, iri_mode: bool) -> str:
        out: list[str] = []
        i = 0
        while i < len(raw):
            c = raw[i]
            if c != "\\":
                out.append(c)
                i += 1
                continue
            if i + 1 >= len(raw):
                self.fail("dangling escape", line, column)
            e = raw[i + 1]
            if e in ("u", "U"):
                width = 4 if e == "u" else 8
                hexdigits = raw[i + 2 : i + 2 + width]
                if len(hexdigits) != width or any(h not in "0123456789abcdefABCDEF" for h in hexdigits):
                    self.fail(f"invalid \\{e} escape", line, column)
                out.append(chr(int(hexdigits, 16)))
                i += 2 + width
            elif not iri_mode and e in _ESCAPES:
                out.append(_ESCAPES[e])
                i += 2
            else:
                self.fail(f"unknown escape sequence: \\{e}", line, column)
        return "".join(out)

    def scan_iriref(self) -> Token:
        line, column = self.line, self.column
        end = self.pos + 1
        while True:
            if end >= len(self.text):
                self.fail("unterminated IRI", line, column)
            c = self.text[end]
            if c == ">":
                break
            if c in ' "<{}|^`\n':
                self.fail(f"invalid character in IRI: {c!r}", line, column)
            end += 1
        raw = self.text[self.pos + 1 : end]
        self._advance(end - self.pos + 1)
        return Token("iriref", self._unescape(raw, line, column, iri_mode=True), line, column)

    def scan_string(self) -> Token:
        line, column = self.line, self.column
        if self.text.startswith('"""', self.pos):
            self.fail("unsupported construct: triple-quoted string", line, column)
        end = self.pos + 1
        while True:
            if end >= len(self.text) or self.text[end] == "\n":
                self.fail("unterminated string literal", line, column)
            c = self.text[end]
            if c == "\\":
                end += 2
                continue
            if c == '"':
                break
            end += 1
        raw = self.text[self.pos + 1 : end]
        self._advance(end - self.pos + 1)
        return Token("string", self._unescape(raw, line, column, iri_mode=False), line, column)

    def scan_blank(self) -> Token:
        line, column = self.line, self.column
        m = _BLANK_RE.match(self.text, self.pos)
        if m is None:
            self.fail("malformed blank node label", line, column)
        self._advance(m.end() - self.pos)
        return Token("blank", m.group(1), line, column)

    def scan_pname_or_word(self) -> Token:
        """A prefixed name, the `a` keyword, or a bare word."""
        line, column = self.line, self.column
        m = _PNAME_RE.match(self.text, self.pos)
        if m is not None:
            raw = m.group(0)
            # PN_LOCAL may contain dots but not end with one; give trailing
            # dots back to the stream as statement terminators.
            while raw.endswith("."):
                raw = raw[:-1]
            prefix, _, local = raw.partition(":")
            self._advance(len(raw))
            return Token("pname", (prefix, local), line, column)
        m = _WORD_RE.match(self.text, self.pos)
        if m is None:
            self.fail(f"unexpected character: {self.peek()!r}", line, column)
        word = m.group(0)
        self._advance(len(word))
        if word == "a":
            return Token("kw_a", "a", line, column)
        if word in ("true", "false"):
            return Token("boolean", word, line, column)
        return Token("word", word, line, column)

    def scan_at_directive(self) -> Token:
        line, column = self.line, self.column
        m = _LANGTAG_RE.match(self.text, self.pos)
        if m is None:
            self.fail("malformed '@' directive or language tag", line, column)
        word = m.group(1)
        self._advance(m.end() - self.pos)
        if word == "prefix":
            return Token("prefix_directive", word, line, column)
        if word == "base":
            return Token("base_directive", word, line, column)
        return Token("langtag", word, line, column)

    def scan_number(self) -> Token:
        line, column = self.line, self.column
        m = _NUMBER_RE.match(self.text, self.pos)
        assert m is not None
        self._advance(m.end() - self.pos)
        return Token("number", m.group(0), line, column)


def _tokenize_turtle(text: str) -> list[Token]:
    scanner = Scanner(text)
    tokens: list[Token] = []
    while True:
        scanner.skip_trivia()
        if scanner.at_end():
            tokens.append(Token("eof", None, scanner.line, scanner.column))
            return tokens
        c = scanner.peek()
        if c == "<":
            tokens.append(scanner.scan_iriref())
        elif c == '"':
            tokens.append(scanner.scan_string())
        elif c == "@":
            tokens.append(scanner.scan_at_directive())
        elif c == "^":
            line, column = scanner.line, scanner.column
            if scanner.text.startswith("^^", scanner.pos):
                scanner._advance(2)
                tokens.append(Token("dtype_sep", "^^", line, column))
            else:
                scanner.fail("expected '^^'", line, column)
        elif c == "_":
            tokens.append(scanner.scan_blank())
        elif c in ".;,":
            nxt = scanner.text[scanner.pos + 1 : scanner.pos + 2]
            if c == "." and nxt.isdigit():
                tokens.append(scanner.scan_number())
            else:
                kinds = {".": "dot", ";": "semi", ",": "comma"}
                tokens.append(Token(kinds[c], c, scanner.line, scanner.column))
                scanner._advance(1)
        elif c.isdigit() or (c in "+-" and scanner.text[scanner.pos + 1 : scanner.pos + 2].isdigit()):
            tokens.append(scanner.scan_number())
        elif c in "()[]{}":
            tokens.append(Token("punct", c, scanner.line, scanner.column))
            scanner._advance(1)
        else:
            tokens.append(scanner.scan_pname_or_word())


_UNSUPPORTED_PUNCT = {
    "(": "collection",
    ")": "collection",
    "[": "anonymous blank node",
    "]": "anonymous blank node",
}


class _TurtleParser:
    def __init__(self, text: str):
        self.tokens = _tokenize_turtle(text)
        self.index = 0
        self.graph = Graph()
        self.blank_labels: dict[str, Term] = {}

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        tok = self.tokens[self.index]
        if tok.kind != "eof":
            self.index += 1
        return tok

    def fail(self, message: str, tok: Token) -> NoReturn:
        raise TurtleParseError(ParseDiagnostic(tok.line, tok.column, message))

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            self.fail(f"expected {what}", tok)
        return tok

    def parse(self) -> Graph:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "prefix_directive":
                self.next()
                self.parse_prefix()
            elif tok.kind == "base_directive":
                self.fail("unsupported construct: @base", tok)
            else:
                self.parse_statement()
        return self.graph.freeze()

    def parse_prefix(self) -> None:
        name_tok = self.expect("pname", "a prefix name ending in ':'")
        prefix, local = name_tok.value
        if local:
            self.fail("prefix declaration must end in ':'", name_tok)
        iri_tok = self.expect("iriref", "a namespace IRI in angle brackets")
        self.expect("dot", "'.' after prefix declaration")
        self.graph.add_prefix(prefix, iri_tok.value)

    def resolve_pname(self, tok: Token) -> Term:
        prefix, local = tok.value
        namespace = self.graph.prefixes.get(prefix)
        if namespace is None:
            self.fail(f"undeclared prefix: {prefix!r}", tok)
        return iri(namespace + local)

    def resolve_blank(self, tok: Token) -> Term:
        label = tok.value
        term = self.blank_labels.get(label)
        if term is None:
            term = blank(f"b{len(self.blank_labels)}")
            self.blank_labels[label] = term
        return term

    def parse_term(self, position: str) -> Term:
        tok = self.next()
        if tok.kind == "iriref":
            return iri(tok.value)
        if tok.kind == "pname":
            return self.resolve_pname(tok)
        if tok.kind == "blank":
            if position == "predicate":
                self.fail("blank node not allowed in predicate position", tok)
            return self.resolve_blank(tok)
        if tok.kind == "kw_a":
            if position != "predicate":
                self.fail("keyword 'a' is only valid as a predicate", tok)
            return RDF.type
        if tok.kind == "string":
            if position != "object":
                self.fail(f"literal not allowed in {position} position", tok)
            return self.finish_literal(tok)
        if tok.kind == "number":
            self.fail("unsupported construct: numeric literal", tok)
        if tok.kind == "boolean":
            self.fail("unsupported construct: boolean literal", tok)
        if tok.kind == "punct":
            construct = _UNSUPPORTED_PUNCT.get(tok.value)
            if construct:
                self.fail(f"unsupported construct: {construct} {tok.value!r}", tok)
            self.fail(f"unexpected {tok.value!r}", tok)
        self.fail(f"expected a {position}, found {tok.value!r}", tok)

    def finish_literal(self, string_tok: Token) -> Term:
        nxt = self.peek()
        if nxt.kind == "langtag":
            self.next()
            return literal(string_tok.value, lang=nxt.value)
        if nxt.kind == "dtype_sep":
            self.next()
            dt_tok = self.next()
            if dt_tok.kind == "iriref":
                return literal(string_tok.value, datatype=dt_tok.value)
            if dt_tok.kind == "pname":
                return literal(string_tok.value, datatype=self.resolve_pname(dt_tok).value)
            self.fail("expected a datatype IRI after '^^'", dt_tok)
        return literal(string_tok.value)

    def parse_statement(self) -> None:
        subject = self.parse_term("subject")
        self.parse_predicate_object_list(subject)
        self.expect("dot", "'.' at end of statement")

    def parse_predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self.parse_term("predicate")
            while True:
                obj = self.parse_term("object")
                self.graph.insert(Triple(subject, predicate, obj))
                if self.peek().kind == "comma":
                    self.next()
                    continue
                break
            if self.peek().kind == "semi":
                self.next()
                # Tolerate trailing ';' before the closing '.'
                while self.peek().kind == "semi":
                    self.next()
                if self.peek().kind in ("dot", "eof"):
                    return
                continue
            return


def parse_turtle(text: str) -> Graph:
    """Parse a Turtle document into a frozen :class:`Graph`."""
    return _TurtleParser(text).parse()


def parse_turtle_file(path) -> Graph:
    """Read and parse a UTF-8 ``.ttl`` file."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_turtle(handle.read())


_SAFE_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*\Z")
_SAFE_PREFIX_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_\-]*)?\Z")


def prefixed_name(value: str, prefixes: Mapping[str, str]) -> str | None:
    """Compact a full IRI to ``prefix:local`` when a safe split exists."""
    best: tuple[int, str, str] | None = None
    for name, namespace in prefixes.items():
        if not value.startswith(namespace) or not namespace:
            continue
        local = value[len(namespace) :]
        if not _SAFE_LOCAL_RE.match(local) or not _SAFE_PREFIX_RE.match(name):
            continue
        if best is None or len(namespace) > best[0]:
            best = (len(namespace), name, local)
    if best is None:
        return None
    return f"{best[1]}:{best[2]}"


def term_to_text(term: Term, prefixes: Mapping[str, str]) -> str:
    """Turtle text for one term, preferring prefixed names for IRIs."""
    if term.kind == IRI:
        compact = prefixed_name(term.value, prefixes)
        return compact if compact is not None else f"<{term.value}>"
    if term.kind == LITERAL and term.datatype is not None:
        compact = prefixed_name(term.datatype, prefixes)
        if compact is not None:
            return term.n3().rsplit("^^", 1)[0] + "^^" + compact
    return term.n3()


def serialize_turtle(graph: Graph) -> str:
    """Write a graph as Turtle; re-parsing yields an isomorphic graph."""
    lines: list[str] = []
    for name in sorted(graph.prefixes):
        lines.append(f"@prefix {name}: <{graph.prefixes[name]}> .")
    if lines:
        lines.append("")

    by_subject: dict[Term, list[Triple]] = {}
    for t in graph:
        by_subject.setdefault(t.s, []).append(t)

    for subject in sorted(by_subject, key=Term.sort_key):
        by_predicate: dict[Term, list[Term]] = {}
        for t in by_subject[subject]:
            by_predicate.setdefault(t.p, []).append(t.o)
        predicates = sorted(
            by_predicate,
            key=lambda p: (p != RDF.type, term_to_text(p, graph.prefixes)),
        )
        parts: list[str] = []
        for predicate in predicates:
            objects = sorted(by_predicate[predicate], key=Term.sort_key)
            p_text = "a" if predicate == RDF.type else term_to_text(predicate, graph.prefixes)
            o_text = " , ".join(term_to_text(o, graph.prefixes) for o in objects)
            parts.append(f"{p_text} {o_text}")
        subject_text = term_to_text(subject, graph.prefixes)
        joined = " ;\n    ".join(parts)
        lines.append(f"{subject_text} {joined} .")
    return "\n".join(lines) + "\n"
