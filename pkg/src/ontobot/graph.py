"""In-memory triple store: terms, triples, and an index-backed graph.

Graphs are append-only while a document loads and are then frozen, after
which they are immutable and safe for concurrent readers. Every triple is
reachable through three positional indexes (by subject, by predicate, by
object); ``match`` dispatches to the most selective index available for
the bound positions of a pattern.

Terms are interned through the ``iri`` / ``blank`` / ``literal`` factories:
building the same term twice yields the same object, so equality is usually
a single pointer comparison and terms work as set and dict keys.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

_KIND_ORDER = {IRI: 0, BLANK: 1, LITERAL: 2}


class GraphError(ValueError):
    """A structural problem with a term, triple, or graph operation."""


class UndeclaredPrefixError(GraphError):
    """A prefixed name used a prefix that was never declared."""

    def __init__(self, prefix: str):
        super().__init__(f"undeclared prefix: {prefix!r}")
        self.prefix = prefix


class Term:
    """An IRI, blank node, or literal; the atomic element of a graph.

    ``value`` holds the full IRI, the blank-node label, or the lexical form
    of a literal. Only literals may carry ``lang`` or ``datatype`` (never
    both). Instances are immutable by convention; mutating one breaks the
    intern table.
    """

    __slots__ = ("kind", "value", "lang", "datatype", "_hash")

    def __init__(self, kind: str, value: str, lang: str | None = None, datatype: str | None = None):
        if kind not in _KIND_ORDER:
            raise GraphError(f"unknown term kind: {kind!r}")
        if kind != LITERAL and (lang is not None or datatype is not None):
            raise GraphError("only literals carry a language tag or datatype")
        if lang is not None and datatype is not None:
            raise GraphError("a literal cannot have both a language tag and a datatype")
        self.kind = kind
        self.value = value
        self.lang = lang
        self.datatype = datatype
        self._hash = hash((kind, value, lang, datatype))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.kind == other.kind
            and self.value == other.value
            and self.lang == other.lang
            and self.datatype == other.datatype
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Term") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.value, self.lang or "", self.datatype or "")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def is_blank(self) -> bool:
        return self.kind == BLANK

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    def n3(self) -> str:
        """Full (unprefixed) Turtle-style text form of the term."""
        if self.kind == IRI:
            return f"<{self.value}>"
        if self.kind == BLANK:
            return f"_:{self.value}"
        escaped = (
            self.value.replace("\\", "\\\\")
            .replace('"', '\\"')
            .replace("\n", "\\n")
            .replace("\r", "\\r")
            .replace("\t", "\\t")
        )
        if self.lang is not None:
            return f'"{escaped}"@{self.lang}'
        if self.datatype is not None:
            return f'"{escaped}"^^<{self.datatype}>'
        return f'"{escaped}"'

    def __repr__(self) -> str:
        return f"Term({self.n3()})"


_interned: dict[tuple, Term] = {}


def _intern(kind: str, value: str, lang: str | None, datatype: str | None) -> Term:
    key = (kind, value, lang, datatype)
    term = _interned.get(key)
    if term is None:
        term = Term(kind, value, lang, datatype)
        _interned[key] = term
    return term


def iri(value: str) -> Term:
    return _intern(IRI, value, None, None)


def blank(label: str) -> Term:
    return _intern(BLANK, label, None, None)


def literal(value: str, lang: str | None = None, datatype: str | None = None) -> Term:
    return _intern(LITERAL, value, lang, datatype)


class Triple(NamedTuple):
    """A subject-predicate-object statement."""

    s: Term
    p: Term
    o: Term

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."


def _check_triple(t: Triple) -> None:
    if t.s.kind == LITERAL:
        raise GraphError("literal not allowed in subject position")
    if t.p.kind != IRI:
        raise GraphError(f"{t.p.kind} not allowed in predicate position")


def expand(prefixes: Mapping[str, str], qname: str) -> Term:
    """Expand a prefixed name such as ``pko:hasStep`` against a prefix table.

    Raises :class:`UndeclaredPrefixError` when the prefix is unknown.
    """
    prefix, sep, local = qname.partition(":")
    if not sep:
        raise GraphError(f"not a prefixed name (missing ':'): {qname!r}")
    namespace = prefixes.get(prefix)
    if namespace is None:
        raise UndeclaredPrefixError(prefix)
    return iri(namespace + local)


class Graph:
    """A set of triples with a prefix table and three positional indexes.

    Insertion order is preserved, so iteration and ``match`` results are
    deterministic for a given build sequence. After :meth:`freeze` the graph
    rejects further inserts.
    """

    __slots__ = ("_triples", "_by_s", "_by_p", "_by_o", "prefixes", "_frozen")

    def __init__(self, prefixes: Mapping[str, str] | None = None):
        self._triples: dict[Triple, None] = {}
        self._by_s: dict[Term, list[Triple]] = {}
        self._by_p: dict[Term, list[Triple]] = {}
        self._by_o: dict[Term, list[Triple]] = {}
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self._frozen = False

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    def insert(self, t: Triple) -> None:
        """Add one triple. Re-inserting an existing triple is a no-op."""
        if self._frozen:
            raise GraphError("graph is frozen; no further inserts allowed")
        _check_triple(t)
        if t in self._triples:
            return
        self._triples[t] = None
        self._by_s.setdefault(t.s, []).append(t)
        self._by_p.setdefault(t.p, []).append(t)
        self._by_o.setdefault(t.o, []).append(t)

    def insert_all(self, triples: Iterable[Triple]) -> None:
        for t in triples:
            self.insert(t)

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
        """All triples matching the bound positions; ``None`` is a wildcard."""
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            return [t] if t in self._triples else []
        best: list[Triple] | None = None
        for term, index in ((s, self._by_s), (p, self._by_p), (o, self._by_o)):
            if term is None:
                continue
            bucket = index.get(term)
            if bucket is None:
                return []
            if best is None or len(bucket) < len(best):
                best = bucket
        if best is None:
            return list(self._triples)
        return [
            t
            for t in best
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        ]

    def subjects(self, p: Term | None = None, o: Term | None = None) -> list[Term]:
        seen: dict[Term, None] = {}
        for t in self.match(None, p, o):
            seen.setdefault(t.s)
        return list(seen)

    def objects(self, s: Term | None = None, p: Term | None = None) -> list[Term]:
        seen: dict[Term, None] = {}
        for t in self.match(s, p, None):
            seen.setdefault(t.o)
        return list(seen)

    def add_prefix(self, name: str, namespace: str) -> None:
        if self._frozen:
            raise GraphError("graph is frozen; no further prefix declarations allowed")
        self.prefixes[name] = namespace

    def expand(self, qname: str) -> Term:
        return expand(self.prefixes, qname)

    def copy(self) -> "Graph":
        """An unfrozen copy with the same triples and prefixes."""
        out = Graph(self.prefixes)
        for t in self._triples:
            out._triples[t] = None
            out._by_s.setdefault(t.s, []).append(t)
            out._by_p.setdefault(t.p, []).append(t)
            out._by_o.setdefault(t.o, []).append(t)
        return out

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def __repr__(self) -> str:
        state = "frozen" if self._frozen else "loading"
        return f"<Graph {len(self._triples)} triples, {len(self.prefixes)} prefixes, {state}>"


def merge_graphs(graphs: Iterable[Graph]) -> Graph:
    """Union several graphs into a fresh unfrozen graph.

    Blank nodes are relabelled per source graph so labels from different
    documents can never collide. Prefix collisions keep the first binding.
    """
    out = Graph()
    counter = 0
    for g in graphs:
        for name, namespace in g.prefixes.items():
            out.prefixes.setdefault(name, namespace)
        relabel: dict[Term, Term] = {}

        def fresh(term: Term) -> Term:
            nonlocal counter
            if term.kind != BLANK:
                return term
            mapped = relabel.get(term)
            if mapped is None:
                mapped = blank(f"m{counter}")
                counter += 1
                relabel[term] = mapped
            return mapped

        for t in g:
            out.insert(Triple(fresh(t.s), fresh(t.p), fresh(t.o)))
    return out


def _has_blank(t: Triple) -> bool:
    return t.s.kind == BLANK or t.o.kind == BLANK


def isomorphic(a: Graph, b: Graph) -> bool:
    """True when the graphs are equal up to a bijective blank-node renaming.

    Brute-force with signature pruning; intended for test-sized graphs
    (a handful of blank nodes), not for adversarial inputs.
    """
    if len(a) != len(b):
        return False
    a_ground = {t for t in a if not _has_blank(t)}
    b_ground = {t for t in b if not _has_blank(t)}
    if a_ground != b_ground:
        return False
    a_blank_triples = [t for t in a if _has_blank(t)]
    b_blank_triples = {t for t in b if _has_blank(t)}

    def blanks_of(triples: Iterable[Triple]) -> list[Term]:
        seen: dict[Term, None] = {}
        for t in triples:
            if t.s.kind == BLANK:
                seen.setdefault(t.s)
            if t.o.kind == BLANK:
                seen.setdefault(t.o)
        return list(seen)

    a_blanks = blanks_of(a_blank_triples)
    b_blanks = blanks_of(b_blank_triples)
    if len(a_blanks) != len(b_blanks):
        return False

    def signature(node: Term, g: Graph) -> tuple:
        out_preds = sorted(t.p.value for t in g.match(s=node))
        in_preds = sorted(t.p.value for t in g.match(o=node))
        return (tuple(out_preds), tuple(in_preds))

    a_sigs = {n: signature(n, a) for n in a_blanks}
    b_sigs = {n: signature(n, b) for n in b_blanks}
    candidates = {n: [m for m in b_blanks if b_sigs[m] == a_sigs[n]] for n in a_blanks}
    if any(not opts for opts in candidates.values()):
        return False
    order = sorted(a_blanks, key=lambda n: len(candidates[n]))

    def rename(t: Triple, mapping: dict[Term, Term]) -> Triple:
        s = mapping.get(t.s, t.s) if t.s.kind == BLANK else t.s
        o = mapping.get(t.o, t.o) if t.o.kind == BLANK else t.o
        return Triple(s, t.p, o)

    def assign(i: int, mapping: dict[Term, Term], used: set[Term]) -> bool:
        if i == len(order):
            return all(rename(t, mapping) in b_blank_triples for t in a_blank_triples)
        node = order[i]
        for target in candidates[node]:
            if target in used:
                continue
            mapping[node] = target
            used.add(target)
            if assign(i + 1, mapping, used):
                return True
            del mapping[node]
            used.discard(target)
        return False

    return assign(0, {}, set())
