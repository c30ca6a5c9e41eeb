"""SELECT-DISTINCT queries over basic graph patterns.

The grammar covers exactly what the competency-question queries need:
``PREFIX``/``@prefix`` declarations, ``SELECT [DISTINCT] ?var ...``,
and a ``WHERE { ... }`` block of triple patterns with ``;`` and ``,``
lists, the ``a`` keyword, and string literals.

Anything beyond that subset (FILTER, OPTIONAL, UNION, GROUP BY, HAVING,
ORDER BY, ...) raises :class:`UnsupportedFeatureError` naming the feature,
distinct from plain syntax errors so callers can report it separately.

Evaluation is a left-deep nested index join: patterns are greedily
reordered by bound-term count (preferring patterns connected to already
bound variables), each level probing the graph's positional indexes.
Results are deduplicated on the projected bindings when DISTINCT is set
and returned sorted by the projected terms' lexical forms, so evaluation
is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, NoReturn, Union

from ontobot.graph import Graph, Term, iri, literal
from ontobot.namespaces import RDF
from ontobot.turtle import ParseDiagnostic, Scanner, Token, _UNSUPPORTED_PUNCT


class QueryParseError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class UnsupportedFeatureError(Exception):
    """The query uses a SPARQL feature outside the supported subset."""

    def __init__(self, feature: str, line: int = 0, column: int = 0):
        super().__init__(f"unsupported feature: {feature}")
        self.feature = feature
        self.line = line
        self.column = column


class Var(NamedTuple):
    name: str


PatternTerm = Union[Term, Var]


class TriplePattern(NamedTuple):
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm


@dataclass
class Query:
    prefixes: dict[str, str]
    projection: list[str]
    distinct: bool
    pattern: list[TriplePattern]


class Solution(dict):
    """One result row: variable name -> bound term. Treat as immutable."""

    def __hash__(self) -> int:  # type: ignore[override]
        return hash(frozenset(self.items()))


_UNSUPPORTED_KEYWORDS = {
    "FILTER",
    "OPTIONAL",
    "UNION",
    "GROUP",
    "HAVING",
    "ORDER",
    "LIMIT",
    "OFFSET",
    "BIND",
    "VALUES",
    "MINUS",
    "SERVICE",
    "GRAPH",
    "ASK",
    "CONSTRUCT",
    "DESCRIBE",
    "EXISTS",
    "NOT",
    "FROM",
    "REDUCED",
}


class _QueryScanner(Scanner):
    error_class = QueryParseError


def _next_query_token(scanner: _QueryScanner) -> Token:
    """One token from the source; tokens past an unsupported clause are
    never demanded, so e.g. ``HAVING (?y > 1)`` reports HAVING rather than
    a lexical error on '>'."""
    scanner.skip_trivia()
    if scanner.at_end():
        return Token("eof", None, scanner.line, scanner.column)
    c = scanner.peek()
    if c == "?" or c == "$":
        line, column = scanner.line, scanner.column
        scanner._advance(1)
        start = scanner.pos
        while not scanner.at_end() and (scanner.peek().isalnum() or scanner.peek() == "_"):
            scanner._advance(1)
        name = scanner.text[start : scanner.pos]
        if not name:
            scanner.fail("empty variable name", line, column)
        return Token("var", name, line, column)
    if c == "<":
        return scanner.scan_iriref()
    if c == '"':
        return scanner.scan_string()
    if c == "@":
        return scanner.scan_at_directive()
    if c == "^":
        line, column = scanner.line, scanner.column
        if scanner.text.startswith("^^", scanner.pos):
            scanner._advance(2)
            return Token("dtype_sep", "^^", line, column)
        scanner.fail("expected '^^'", line, column)
    if c == "_":
        return scanner.scan_blank()
    if c in ".;,":
        kinds = {".": "dot", ";": "semi", ",": "comma"}
        token = Token(kinds[c], c, scanner.line, scanner.column)
        scanner._advance(1)
        return token
    if c in "{}()[]*":
        token = Token("punct", c, scanner.line, scanner.column)
        scanner._advance(1)
        return token
    if c.isdigit() or (c in "+-" and scanner.text[scanner.pos + 1 : scanner.pos + 2].isdigit()):
        return scanner.scan_number()
    return scanner.scan_pname_or_word()


class _QueryParser:
    def __init__(self, text: str):
        self.scanner = _QueryScanner(text)
        self._buffer: list[Token] = []
        self.prefixes: dict[str, str] = {}

    def peek(self) -> Token:
        if not self._buffer:
            self._buffer.append(_next_query_token(self.scanner))
        return self._buffer[0]

    def next(self) -> Token:
        if self._buffer:
            return self._buffer.pop(0)
        return _next_query_token(self.scanner)

    def fail(self, message: str, tok: Token) -> NoReturn:
        raise QueryParseError(ParseDiagnostic(tok.line, tok.column, message))

    def check_unsupported(self, tok: Token) -> None:
        if tok.kind == "word" and tok.value.upper() in _UNSUPPORTED_KEYWORDS:
            feature = tok.value.upper()
            if feature in ("GROUP", "ORDER", "NOT"):
                follower = self.peek()
                if follower.kind == "word":
                    feature = f"{feature} {follower.value.upper()}"
            raise UnsupportedFeatureError(feature, tok.line, tok.column)

    def keyword(self, tok: Token) -> str:
        return tok.value.upper() if tok.kind == "word" else ""

    def parse(self) -> Query:
        self.parse_prologue()
        tok = self.next()
        self.check_unsupported(tok)
        if self.keyword(tok) != "SELECT":
            self.fail("expected SELECT", tok)
        distinct = False
        if self.keyword(self.peek()) == "DISTINCT":
            self.next()
            distinct = True
        projection: list[str] = []
        while self.peek().kind == "var":
            var_tok = self.next()
            if var_tok.value in projection:
                self.fail(f"duplicate variable in projection: ?{var_tok.value}", var_tok)
            projection.append(var_tok.value)
        if not projection:
            tok = self.next()
            if tok.kind == "punct" and tok.value == "*":
                self.fail("projection '*' is not supported; list the variables", tok)
            self.check_unsupported(tok)
            self.fail("expected at least one projected variable", tok)
        tok = self.next()
        if self.keyword(tok) == "WHERE":
            tok = self.next()
        if not (tok.kind == "punct" and tok.value == "{"):
            self.check_unsupported(tok)
            self.fail("expected '{' opening the graph pattern", tok)
        pattern = self.parse_group(tok)
        tok = self.next()
        self.check_unsupported(tok)
        if tok.kind != "eof":
            self.fail(f"unexpected content after '}}': {tok.value!r}", tok)
        pattern_vars = {
            t.name for pat in pattern for t in (pat.s, pat.p, pat.o) if isinstance(t, Var)
        }
        for name in projection:
            if name not in pattern_vars:
                self.fail(f"projected variable ?{name} does not occur in the pattern", tok)
        return Query(prefixes=self.prefixes, projection=projection, distinct=distinct, pattern=pattern)

    def parse_prologue(self) -> None:
        while True:
            tok = self.peek()
            if self.keyword(tok) == "PREFIX" or tok.kind == "prefix_directive":
                self.next()
                name_tok = self.next()
                if name_tok.kind != "pname" or name_tok.value[1]:
                    self.fail("expected a prefix name ending in ':'", name_tok)
                iri_tok = self.next()
                if iri_tok.kind != "iriref":
                    self.fail("expected a namespace IRI in angle brackets", iri_tok)
                self.prefixes[name_tok.value[0]] = iri_tok.value
                if self.peek().kind == "dot":
                    self.next()
            elif tok.kind == "base_directive":
                self.fail("unsupported construct: @base", tok)
            else:
                return

    def parse_group(self, open_tok: Token) -> list[TriplePattern]:
        pattern: list[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value == "}":
                self.next()
                break
            if tok.kind == "eof":
                self.fail("unterminated graph pattern (missing '}')", open_tok)
            subject = self.parse_pattern_term("subject")
            self.parse_predicate_object_list(subject, pattern)
            if self.peek().kind == "dot":
                self.next()
        if not pattern:
            self.fail("empty graph pattern", open_tok)
        return pattern

    def parse_predicate_object_list(self, subject: PatternTerm, pattern: list[TriplePattern]) -> None:
        while True:
            predicate = self.parse_pattern_term("predicate")
            while True:
                obj = self.parse_pattern_term("object")
                pattern.append(TriplePattern(subject, predicate, obj))
                if self.peek().kind == "comma":
                    self.next()
                    continue
                break
            if self.peek().kind == "semi":
                self.next()
                while self.peek().kind == "semi":
                    self.next()
                nxt = self.peek()
                if nxt.kind == "dot" or (nxt.kind == "punct" and nxt.value == "}"):
                    return
                continue
            return

    def parse_pattern_term(self, position: str) -> PatternTerm:
        tok = self.next()
        self.check_unsupported(tok)
        if tok.kind == "var":
            return Var(tok.value)
        if tok.kind == "iriref":
            return iri(tok.value)
        if tok.kind == "pname":
            prefix, local = tok.value
            namespace = self.prefixes.get(prefix)
            if namespace is None:
                self.fail(f"undeclared prefix: {prefix!r}", tok)
            return iri(namespace + local)
        if tok.kind == "kw_a":
            if position != "predicate":
                self.fail("keyword 'a' is only valid as a predicate", tok)
            return RDF.type
        if tok.kind == "string":
            if position != "object":
                self.fail(f"literal not allowed in {position} position", tok)
            return self.finish_literal(tok)
        if tok.kind == "blank":
            self.fail("blank nodes are not supported in query patterns", tok)
        if tok.kind == "number":
            self.fail("numeric literals are not supported in query patterns", tok)
        if tok.kind == "boolean":
            self.fail("boolean literals are not supported in query patterns", tok)
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
                prefix, local = dt_tok.value
                namespace = self.prefixes.get(prefix)
                if namespace is None:
                    self.fail(f"undeclared prefix: {prefix!r}", dt_tok)
                return literal(string_tok.value, datatype=namespace + local)
            self.fail("expected a datatype IRI after '^^'", dt_tok)
        return literal(string_tok.value)


def parse_query(text: str) -> Query:
    """Parse a query text into a :class:`Query`."""
    return _QueryParser(text).parse()


def parse_query_file(path) -> Query:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_query(handle.read())


def _order_patterns(patterns: list[TriplePattern]) -> list[TriplePattern]:
    remaining = list(enumerate(patterns))
    ordered: list[TriplePattern] = []
    bound: set[str] = set()
    while remaining:
        def score(item: tuple[int, TriplePattern]) -> tuple:
            index, pat = item
            terms = (pat.s, pat.p, pat.o)
            bound_count = sum(
                1 for t in terms if not isinstance(t, Var) or t.name in bound
            )
            connected = not ordered or any(
                isinstance(t, Var) and t.name in bound for t in terms
            )
            return (connected, bound_count, -index)

        best = max(remaining, key=score)
        remaining.remove(best)
        ordered.append(best[1])
        bound.update(t.name for t in best[1] if isinstance(t, Var))
    return ordered


def _match_pattern(graph: Graph, pat: TriplePattern, binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
    def resolved(t: PatternTerm) -> Term | None:
        if isinstance(t, Var):
            return binding.get(t.name)
        return t

    for triple in graph.match(resolved(pat.s), resolved(pat.p), resolved(pat.o)):
        extended = binding
        ok = True
        for slot, value in zip(pat, triple):
            if not isinstance(slot, Var):
                continue
            current = extended.get(slot.name)
            if current is None:
                if extended is binding:
                    extended = dict(binding)
                extended[slot.name] = value
            elif current != value:
                ok = False
                break
        if ok:
            yield extended if extended is not binding else dict(binding)


def _join(graph: Graph, patterns: list[TriplePattern], binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
    if not patterns:
        yield binding
        return
    head, tail = patterns[0], patterns[1:]
    for extended in _match_pattern(graph, head, binding):
        yield from _join(graph, tail, extended)


def evaluate(query: Query, graph: Graph) -> list[Solution]:
    """All solutions of the query over the graph, deterministically ordered.

    Rows are sorted by the projected terms' lexical forms; with DISTINCT
    set, each projected row appears exactly once.
    """
    ordered = _order_patterns(query.pattern)
    rows: list[tuple[Term, ...]] = []
    seen: set[tuple[Term, ...]] = set()
    for binding in _join(graph, ordered, {}):
        row = tuple(binding[name] for name in query.projection)
        if query.distinct:
            if row in seen:
                continue
            seen.add(row)
        rows.append(row)
    rows.sort(key=lambda row: tuple(term.sort_key() for term in row))
    return [Solution(zip(query.projection, row)) for row in rows]
