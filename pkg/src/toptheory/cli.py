"""Command line front end: parse instance descriptions, run checks, report.

Input is a sequence of declarations, separated by newlines or ``;``, with
``#`` comments::

    quantale Q = builtin lawvere-chain 4
    quantale P = table { elements 0 1; unit 1; leq 0 1;
                         tensor 0 0 = 0; tensor 0 1 = 0; tensor 1 0 = 0; tensor 1 1 = 1 }
    tcategory X over Q theory identity { objects a b; default = inf; hom a a = 0; hom b b = 0 }
    tcategory Y over Q theory identity { objects a b; row a = 0 1; row b = 2 0 }
    tfunctor f : X -> X { a -> a; b -> a }
    frame F = omega X

Exit status is 0 when every verdict is ``holds`` or ``unknown``, 1 when some
law fails, and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

import numpy as np

from . import quantale as qmod
from .cauchy import cauchy_completion, is_cauchy_complete
from .duality import (DEFAULT_INDEX_BOUND, FrameError, TFrame, frm_conditions,
                      finite_sup_equivalence, eta, main_thm, omega, pt, reconstruction,
                      vfunctors_into_v)
from .quantale import Quantale, QuantaleError
from .report import Check, Report, Verdict
from .tcat import (TCategory, TCategoryError, enumerate_tcategories, is_compact,
                   is_tfunctor, sup_is_graph_morphism)
from .theory import Theory, TheoryError, make_theory, validate_theory
from .vcat import is_complete

SCHEMA = "toptheory-report/1"
COMMANDS = ("validate", "omega", "points", "eta", "cauchy", "main-thm", "compact",
            "frm-check", "sweep")
THEORIES = ("identity", "finite-ultrafilter")


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line, self.column = line, column


# tokens ----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|"
                    r"(?P<arrow>->)|(?P<punct>[{};=:])|(?P<word>[^\s{};=:#]+)")


@dataclass(frozen=True)
class Token:
    kind: str          # "word", "sep", or the punctuation itself
    text: str
    line: int
    column: int


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    out, line, start = [], 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("sep", "\n", line, col))
            line, start = line + 1, m.end()
        elif kind == "punct" and m.group() == ";":
            out.append(Token("sep", ";", line, col))
        elif kind == "punct":
            out.append(Token(m.group(), m.group(), line, col))
        elif kind == "arrow":
            out.append(Token("->", "->", line, col))
        elif kind == "word":
            out.append(Token("word", m.group(), line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# workspace -------------------------------------------------------------------

@dataclass
class Entity:
    name: str
    kind: str
    value: Any
    line: int
    depends: tuple[str, ...] = ()


@dataclass
class Workspace:
    source: str = "<input>"
    entities: dict[str, Entity] = field(default_factory=dict)

    def of_kind(self, kind: str) -> list[Entity]:
        return [e for e in self.entities.values() if e.kind == kind]

    def add(self, ent: Entity, tok: Token):
        if ent.name in self.entities:
            raise ParseError(f"duplicate name {ent.name!r}", tok.line, tok.column, self.source)
        self.entities[ent.name] = ent


class _Parser:
    def __init__(self, text: str, source: str):
        self.toks = tokenize(text, source)
        self.pos = 0
        self.source = source
        self.ws = Workspace(source)
        self.theories: dict[tuple[str, int], Theory] = {}

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column, self.source)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise self.error(f"expected {want!r}, found {tok.text or tok.kind!r}", tok)
        return tok

    def word(self) -> Token:
        return self.expect("word")

    def skip_seps(self):
        while self.peek().kind == "sep":
            self.pos += 1

    def end_statement(self):
        tok = self.peek()
        if tok.kind not in ("sep", "eof", "}"):
            raise self.error(f"unexpected {tok.text!r} at end of statement")

    def block(self) -> Iterator[list[Token]]:
        """Yield the token list of each statement inside ``{ ... }``."""
        self.expect("{")
        while True:
            self.skip_seps()
            if self.peek().kind == "}":
                self.next()
                return
            if self.peek().kind == "eof":
                raise self.error("unterminated block")
            stmt = []
            while self.peek().kind not in ("sep", "}", "eof"):
                stmt.append(self.next())
            yield stmt

    def lookup(self, tok: Token, kind: str) -> Entity:
        ent = self.ws.entities.get(tok.text)
        if ent is None:
            raise self.error(f"undefined {kind} {tok.text!r}", tok)
        if ent.kind != kind:
            raise self.error(f"{tok.text!r} is a {ent.kind}, not a {kind}", tok)
        return ent

    # statements
    def parse(self) -> Workspace:
        while True:
            self.skip_seps()
            tok = self.peek()
            if tok.kind == "eof":
                return self.ws
            handler = {"quantale": self.quantale, "tcategory": self.tcategory,
                       "tfunctor": self.tfunctor, "frame": self.frame}.get(tok.text)
            if tok.kind != "word" or handler is None:
                raise self.error(f"unknown declaration {tok.text!r}")
            self.next()
            handler(tok)
            self.end_statement()

    def quantale(self, head: Token):
        name = self.word()
        self.expect("=")
        how = self.word()
        if how.text == "builtin":
            Q, deps = self._builtin()
        elif how.text == "table":
            Q, deps = self._table(name.text), ()
        else:
            raise self.error("expected 'builtin' or 'table'", how)
        self.ws.add(Entity(name.text, "quantale", Q, head.line, deps), name)

    def _builtin(self) -> tuple[Quantale, tuple[str, ...]]:
        kind = self.word()
        if kind.text == "two":
            return qmod.two(), ()
        if kind.text in ("goedel-chain", "lawvere-chain"):
            size = self.word()
            if not size.text.isdigit() or int(size.text) < 2:
                raise self.error("chain length must be an integer >= 2", size)
            build = qmod.goedel_chain if kind.text == "goedel-chain" else qmod.lawvere_chain
            return build(int(size.text)), ()
        if kind.text == "product":
            a, b = self.word(), self.word()
            qa, qb = self.lookup(a, "quantale"), self.lookup(b, "quantale")
            return qmod.product(qa.value, qb.value), (a.text, b.text)
        raise self.error(f"unknown builtin quantale {kind.text!r}", kind)

    def _table(self, name: str) -> Quantale:
        elements, unit, leq, tensor = None, None, [], {}
        head = self.peek()
        for stmt in self.block():
            words = [t.text for t in stmt]
            key = stmt[0]
            if key.text == "elements":
                elements = words[1:]
            elif key.text == "unit" and len(stmt) == 2:
                unit = stmt[1]
            elif key.text == "leq" and len(stmt) == 3:
                leq.append((stmt[1], stmt[2]))
            elif key.text == "tensor" and len(stmt) == 5 and stmt[3].kind == "=":
                tensor[(stmt[1], stmt[2])] = stmt[4]
            else:
                raise self.error(f"malformed table entry {' '.join(words)!r}", key)
        if not elements:
            raise self.error("table quantale needs an 'elements' line", head)
        if unit is None:
            raise self.error("table quantale needs a 'unit' line", head)
        known = set(elements)
        for tok in [unit, *(t for p in leq for t in p),
                    *(t for p in tensor for t in p), *tensor.values()]:
            if tok.text not in known:
                raise self.error(f"unknown element {tok.text!r}", tok)
        ix = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        order = np.eye(n, dtype=bool)
        for x, y in leq:
            order[ix[x.text], ix[y.text]] = True
        table = np.full((n, n), -1, dtype=np.int64)
        for (x, y), z in tensor.items():
            table[ix[x.text], ix[y.text]] = ix[z.text]
        for x in elements:
            for y in elements:
                if table[ix[x], ix[y]] < 0:
                    raise self.error(f"totality: missing 'tensor {x} {y} = ...'", head)
        return Quantale(elements, order, table, ix[unit.text], name=name, check=False)

    def tcategory(self, head: Token):
        name = self.word()
        self.expect("word", "over")
        q = self.lookup(self.word(), "quantale")
        self.expect("word", "theory")
        theory_tok = self.word()
        if theory_tok.text not in THEORIES + ("ultrafilter",):
            raise self.error(f"unknown theory {theory_tok.text!r}", theory_tok)
        objects, default, entries, rows_given = None, None, {}, []
        start = self.peek()
        Q: Quantale = q.value
        for stmt in self.block():
            key = stmt[0]
            if key.text == "objects":
                objects = [t.text for t in stmt[1:]]
                if len(set(objects)) != len(objects):
                    raise self.error("duplicate object name", key)
            elif key.text == "default" and len(stmt) == 3 and stmt[1].kind == "=":
                default = self._element(Q, stmt[2])
            elif key.text == "hom" and len(stmt) == 5 and stmt[3].kind == "=":
                entries[(stmt[1], stmt[2])] = self._element(Q, stmt[4])
            elif key.text == "row" and len(stmt) >= 3 and stmt[2].kind == "=":
                rows_given.append((stmt[1], [self._element(Q, t) for t in stmt[3:]], key))
            else:
                raise self.error("malformed tcategory entry", key)
        if objects is None:
            raise self.error("tcategory needs an 'objects' line", start)
        theory = self._theory(theory_tok.text, Q)
        n = len(objects)
        tl = theory.tlabels(objects)
        rows = {t: i for i, t in enumerate(tl)}
        unit = theory.unit(n)
        for i, o in enumerate(objects):
            rows.setdefault(o, unit[i])
        cols = {o: i for i, o in enumerate(objects)}
        m = np.full((len(tl), n), -1 if default is None else default, dtype=np.int64)
        for t, values, key in rows_given:
            if t.text not in rows:
                raise self.error(f"unknown source {t.text!r}", t)
            if len(values) != n:
                raise self.error(f"row needs {n} entries, got {len(values)}", key)
            m[rows[t.text], :] = values
        for (t, x), v in entries.items():
            if t.text not in rows:
                raise self.error(f"unknown source {t.text!r}", t)
            if x.text not in cols:
                raise self.error(f"unknown object {x.text!r}", x)
            m[rows[t.text], cols[x.text]] = v
        missing = np.argwhere(m < 0)
        if len(missing):
            t, x = missing[0]
            raise self.error(f"totality: missing 'hom {tl[t]} {objects[x]} = ...'", start)
        X = TCategory(theory, n, m, objects, check=False)
        self.ws.add(Entity(name.text, "tcategory", X, head.line, (q.name,)), name)

    def _element(self, Q: Quantale, tok: Token) -> int:
        try:
            return Q.el(tok.text)
        except (KeyError, ValueError):
            raise self.error(f"{tok.text!r} is not an element of {Q.name}", tok) from None

    def _theory(self, name: str, Q: Quantale) -> Theory:
        key = (name, id(Q))
        if key not in self.theories:
            self.theories[key] = make_theory(name, Q)
        return self.theories[key]

    def tfunctor(self, head: Token):
        name = self.word()
        self.expect(":")
        src = self.lookup(self.word(), "tcategory")
        self.expect("->")
        dst = self.lookup(self.word(), "tcategory")
        X, Y = src.value, dst.value
        images: dict[int, int] = {}
        start = self.peek()
        for stmt in self.block():
            if len(stmt) != 3 or stmt[1].kind != "->":
                raise self.error("expected 'object -> object'", stmt[0])
            a, b = stmt[0], stmt[2]
            if a.text not in X.labels:
                raise self.error(f"unknown object {a.text!r} of {src.name}", a)
            if b.text not in Y.labels:
                raise self.error(f"unknown object {b.text!r} of {dst.name}", b)
            images[X.labels.index(a.text)] = Y.labels.index(b.text)
        for x in range(X.size):
            if x not in images:
                raise self.error(f"totality: no image for {X.labels[x]!r}", start)
        f = tuple(images[x] for x in range(X.size))
        self.ws.add(Entity(name.text, "tfunctor", (f, src.name, dst.name), head.line,
                           (src.name, dst.name)), name)

    def frame(self, head: Token):
        name = self.word()
        self.expect("=")
        self.expect("word", "omega")
        X = self.lookup(self.word(), "tcategory")
        self.ws.add(Entity(name.text, "frame", X.name, head.line, (X.name,)), name)


def parse(text: str, source: str = "<input>") -> Workspace:
    """Build a workspace from the declarative format; raises ParseError."""
    return _Parser(text, source).parse()


# reports ---------------------------------------------------------------------

@dataclass
class Options:
    max_objects: int = 2
    max_index: int = DEFAULT_INDEX_BOUND
    theory: str | None = None
    quantale: str = "two"
    oracle: bool = False
    seed: int = 0
    target: str | None = None


class Output:
    """Ordered list of verdict entries plus per-entity data."""

    def __init__(self, command: str, opts: Options, source: str | None):
        self.command, self.opts, self.source = command, opts, source
        self.entries: list[dict] = []
        self.data: dict[str, Any] = {}

    def add(self, entity: str, check: Check, **extra):
        d = {"entity": entity, **check.to_dict(), **extra}
        self.entries.append(d)

    def add_report(self, entity: str, rep: Report):
        for c in rep.checks:
            self.add(entity, c)
        if rep.data:
            self.data.setdefault(entity, {}).update(Report("", data=rep.data).to_dict()["data"])

    def note(self, entity: str, **values):
        self.data.setdefault(entity, {}).update(values)

    @property
    def violations(self) -> int:
        return sum(e["verdict"] == Verdict.FAILS.value for e in self.entries)

    def document(self) -> dict:
        counts = {v.value: sum(e["verdict"] == v.value for e in self.entries) for v in Verdict}
        flags = {"max-objects": self.opts.max_objects, "max-index": self.opts.max_index,
                 "theory": self.opts.theory, "quantale": self.opts.quantale,
                 "oracle": self.opts.oracle, "seed": self.opts.seed,
                 "target": self.opts.target}
        return {"schema": SCHEMA, "command": self.command, "input": self.source,
                "flags": flags, "entries": self.entries, "data": self.data,
                "summary": counts, "status": "violation" if self.violations else "ok"}

    def render(self, fmt: str) -> str:
        doc = self.document()
        if fmt == "json":
            return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        lines = [f"{SCHEMA}  {self.command}  {doc['status']}"]
        for e in self.entries:
            line = f"  {e['verdict']:<8} {e['entity']:<24} {e['law']}"
            if "witness" in e:
                line += "  " + json.dumps(e["witness"], sort_keys=True, ensure_ascii=False)
            lines.append(line)
        for name in sorted(self.data):
            lines.append(f"  data {name}: " + json.dumps(self.data[name], sort_keys=True,
                                                       ensure_ascii=False))
        s = doc["summary"]
        lines.append(f"holds {s['holds']}  fails {s['fails']}  unknown {s['unknown']}")
        return "\n".join(lines) + "\n"


# load-time validation --------------------------------------------------------

def _entity_checks(ws: Workspace, opts: Options, out: Output) -> set[str]:
    """Validate every entity in declaration order; return the names that failed
    (directly or through a dependency)."""
    bad: set[str] = set()
    theories_done: set[tuple[str, int]] = set()
    for ent in ws.entities.values():
        broken = [d for d in ent.depends if d in bad]
        if broken:
            _record(out, opts, ent.name,
                    Check.unknown("validate", {"invalid-dependency": broken[0]}))
            bad.add(ent.name)
            continue
        if ent.kind == "quantale":
            rep = qmod.validate(ent.value)
        elif ent.kind == "tcategory":
            X: TCategory = ent.value
            key = (X.theory.name, id(X.quantale))
            if key not in theories_done:
                theories_done.add(key)
                th_rep = validate_theory(X.theory, seed=opts.seed)
                for c in th_rep.checks:
                    _record(out, opts, f"{X.theory.name}({X.quantale.name})", c,
                            kind="theory", line=ent.line)
                if not th_rep.ok:
                    bad.add(ent.name)
            rep = X.validate()
        elif ent.kind == "tfunctor":
            f, src, dst = ent.value
            rep = Report(ent.name)
            rep.add(is_tfunctor(f, ws.entities[src].value, ws.entities[dst].value))
        else:
            rep = Report(ent.name)
            try:
                F = omega(ws.entities[ent.value].value)
                rep.add(is_complete(F.underlying))
                ent.value = F
            except FrameError as exc:
                rep.add(Check.fails("complete", str(exc)))
        for c in rep.checks:
            _record(out, opts, ent.name, c, kind=ent.kind, line=ent.line)
        if not rep.ok:
            bad.add(ent.name)
    return bad


def _record(out: Output, opts: Options, entity: str, check: Check, **extra):
    # outside `validate`, passing load checks are implied and left out
    if out.command == "validate" or check.verdict is not Verdict.HOLDS:
        out.add(entity, check, **extra)


def _targets(ws: Workspace, kind: str, opts: Options, bad: set[str]) -> list[Entity]:
    found = [e for e in ws.of_kind(kind) if e.name not in bad]
    if opts.target is not None:
        found = [e for e in found if e.name == opts.target]
    return found


def _frame_of(ws: Workspace, ent: Entity) -> TFrame:
    if ent.kind == "frame":
        return ent.value
    return omega(ent.value)


# commands --------------------------------------------------------------------

def _labels(Q: Quantale, row) -> list[str]:
    return [Q.label(int(v)) for v in row]


def cmd_validate(ws, opts, out, bad):
    pass  # entity checks already recorded


def cmd_omega(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad):
        X = ent.value
        F = omega(X)
        failed = next((c for c in (reconstruction(X, row) for row in F.functions) if not c), None)
        out.add(ent.name, failed or Check.holds("reconstruction"))
        out.add(ent.name, is_complete(F.underlying))
        out.note(ent.name, omega=[dict(zip(X.labels, _labels(X.quantale, r)))
                                  for r in F.functions])


def cmd_points(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad) + _targets(ws, "frame", opts, bad):
        F = _frame_of(ws, ent)
        P = pt(F, "auto", opts.max_index)
        if opts.oracle and F.provenance == "omega":
            Pex = pt(F, "exhaustive", opts.max_index)
            out.add(ent.name, Check.of("points-strategies-agree",
                                       np.array_equal(Pex.homs, P.homs),
                                       {"generators": len(P.homs), "exhaustive": len(Pex.homs)}))
        out.add(ent.name, Check.holds("points-form-tcategory"))
        out.note(ent.name, points={lab: dict(zip(F.labels, _labels(F.quantale, h)))
                                   for lab, h in zip(P.labels, P.homs)})


def cmd_eta(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad):
        X = ent.value
        F = omega(X)
        P = pt(F, "auto", opts.max_index)
        e, c = eta(X, F, P)
        out.add(ent.name, c)
        if e is not None:
            out.note(ent.name, eta={X.labels[x]: P.labels[i] for x, i in enumerate(e)},
                     injective=len(set(e)) == len(e),
                     surjective=set(e) == set(range(P.size)))


def cmd_cauchy(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad):
        X = ent.value
        out.add(ent.name, is_cauchy_complete(X))
        tilde, y, pairs = cauchy_completion(X)
        out.note(ent.name, completion=list(tilde.labels),
                 adjoints=[p.to_dict(X) for p in pairs])


def cmd_main_thm(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad):
        out.add_report(ent.name, main_thm(ent.value, opts.oracle, opts.max_index))


def cmd_compact(ws, opts, out, bad):
    for ent in _targets(ws, "tcategory", opts, bad):
        X = ent.value
        a, b = is_compact(X), sup_is_graph_morphism(X)
        out.add(ent.name, Check.of("compact-agreement", bool(a) == bool(b),
                                   {"compact": a.verdict.value, "sup-graph-morphism": b.verdict.value}))
        out.note(ent.name, compact=bool(a))


def _frm_summary(F: TFrame, bound: int) -> tuple[Check, dict, Check]:
    P = vfunctors_into_v(F)
    res = frm_conditions(F, P, bound)
    ci, cii, ciii = res["condition-i"], res["condition-ii"], res["condition-iii"]
    disagree = np.flatnonzero((ci != cii) | (cii != ciii))
    witness = None
    if len(disagree):
        j = int(disagree[0])
        witness = {"phi": _labels(F.quantale, P[j]),
                   "conditions": [bool(ci[j]), bool(cii[j]), bool(ciii[j])]}
    agree = Check.of("frame-hom-conditions-agree", not len(disagree), witness)
    data = {"candidates": int(len(P)), "homomorphisms": int(res["frame-hom"].sum()),
            "condition-ii": int(cii.sum())}
    ts, fs = res["preserves-t-suprema"][0], res["preserves-finite-suprema"][0]
    probe = finite_sup_equivalence(P[0], F, bound) if len(P) else None
    if probe is None or probe.checks[0].verdict is Verdict.UNKNOWN:
        fin = Check.unknown("t-suprema-iff-finite-suprema", "inapplicable")
    else:
        premises = (res["preserves-infima"][0] & res["preserves-tensors"][0]
                    & res["preserves-cotensors"][0] & res["v-functor"][0])
        bad = np.flatnonzero(premises & (ts != fs))
        fin = Check.of("t-suprema-iff-finite-suprema", not len(bad),
                       {"phi": _labels(F.quantale, P[bad[0]])} if len(bad) else None)
    return agree, data, fin


def cmd_frm_check(ws, opts, out, bad):
    for ent in _targets(ws, "frame", opts, bad):
        agree, data, fin = _frm_summary(ent.value, opts.max_index)
        out.add(ent.name, agree)
        out.add(ent.name, fin)
        out.note(ent.name, **data)


def cmd_sweep(ws, opts, out, bad):
    Q = _builtin_by_name(opts.quantale)
    theories = [opts.theory] if opts.theory else list(THEORIES)
    for name in theories:
        th = make_theory(name, Q)
        rep = validate_theory(th, seed=opts.seed)
        out.add(f"theory {name}({Q.name})", Check.of("theory-valid", rep.ok,
                                                    [c.to_dict() for c in rep.failures()][:1]))
        if not rep.ok:
            continue
        for n in range(opts.max_objects + 1):
            cats = enumerate_tcategories(th, n)
            tally: dict[str, dict[str, int]] = {}
            for X in cats:
                rep = main_thm(X, opts.oracle, opts.max_index)
                rep.add(is_cauchy_complete(X))
                a, b = is_compact(X), sup_is_graph_morphism(X)
                rep.add(Check.of("compact-agreement", bool(a) == bool(b)))
                for c in rep.checks:
                    per = tally.setdefault(c.law, {v.value: 0 for v in Verdict})
                    per[c.verdict.value] += 1
                    if c.verdict is Verdict.FAILS:
                        out.add(f"{name}/{Q.name}/n={n}", c,
                                instance=X.entries.tolist())
            entity = f"{name}/{Q.name}/n={n}"
            for law in sorted(tally):
                per = tally[law]
                verdict = (Verdict.FAILS if per["fails"] else
                           Verdict.UNKNOWN if per["unknown"] else Verdict.HOLDS)
                out.add(entity, Check(law, verdict, None), instances=per)
            out.note(entity, tcategories=len(cats))


def _builtin_by_name(text: str) -> Quantale:
    """``two``, ``goedel-chain:3`` / ``goedel-chain(3)``, ``lawvere-chain:4``."""
    match = re.fullmatch(r"([a-z-]+)(?:[:(](\d+)\)?)?", text)
    if match is None or match.group(1) not in ("two", "goedel-chain", "lawvere-chain"):
        raise ValueError(f"unknown quantale {text!r}")
    size = match.group(2)
    return qmod.make_builtin(match.group(1), int(size) if size else None)


HANDLERS: dict[str, Callable] = {
    "validate": cmd_validate, "omega": cmd_omega, "points": cmd_points, "eta": cmd_eta,
    "cauchy": cmd_cauchy, "main-thm": cmd_main_thm, "compact": cmd_compact,
    "frm-check": cmd_frm_check, "sweep": cmd_sweep,
}


def run(ws: Workspace | None, command: str, opts: Options) -> Output:
    """Validate the workspace, then run ``command``; never raises on law failures."""
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    out = Output(command, opts, ws.source if ws else None)
    ws = ws or Workspace()
    bad = _entity_checks(ws, opts, out)
    try:
        HANDLERS[command](ws, opts, out, bad)
    except (TCategoryError, QuantaleError) as exc:
        for c in exc.report.failures():
            out.add(exc.report.subject, c)
    except FrameError as exc:
        out.add(command, Check.fails("frame", str(exc)))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toptheory",
                                description="Check laws and duality results on finite instances.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="instance file ('-' for stdin); optional for sweep")
    p.add_argument("--max-objects", type=int, default=2,
                   help="largest carrier enumerated by sweep (default 2)")
    p.add_argument("--max-index", type=int, default=DEFAULT_INDEX_BOUND,
                   help="largest index set for T-diagrams (default %(default)s)")
    p.add_argument("--theory", choices=THEORIES, help="restrict sweep to one theory")
    p.add_argument("--quantale", default="two",
                   help="sweep quantale: two, goedel-chain:N, lawvere-chain:N")
    p.add_argument("--oracle", action="store_true", help="cross-check with slow oracles")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled theory-law checks (default 0)")
    p.add_argument("--target", help="restrict to one named entity")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    opts = Options(args.max_objects, args.max_index, args.theory, args.quantale,
                   args.oracle, args.seed, args.target)
    ws = None
    try:
        if args.input is not None:
            if args.input == "-":
                ws = parse(sys.stdin.read(), "<stdin>")
            else:
                with open(args.input, encoding="utf-8") as fh:
                    ws = parse(fh.read(), args.input)
        elif args.command != "sweep":
            parser.print_usage(sys.stderr)
            print(f"toptheory: {args.command} needs an input file", file=sys.stderr)
            return 2
        if args.command == "sweep":
            _builtin_by_name(opts.quantale)
        if opts.target is not None and (ws is None or opts.target not in ws.entities):
            raise ValueError(f"unknown target {opts.target!r}")
    except (ParseError, OSError, ValueError, TheoryError) as exc:
        print(f"toptheory: {exc}", file=sys.stderr)
        return 2
    out = run(ws, args.command, opts)
    sys.stdout.write(out.render(args.format))
    return 1 if out.violations else 0


if __name__ == "__main__":
    sys.exit(main())
