"""Line-based instance and definition files.

Instance grammar (``#`` starts a comment)::

    clause <lit>*            lit = name | -name
    xor <name>+ = 0|1
    eq <name> <name>
    rel <Name> <arity> : <bitstring>*
    app <Name> <name>*
    var <name>+              declare variables that occur in no atom
    hyp <name>+
    man <name>+
    query <name>
    k <nat>

Definition files add blocks of the form::

    def <Name>(<free>+ ; <exist>*) {
        <atom lines>
    }

Relation names in ``app``/``def`` may be declared with ``rel`` or be one of
the reserved syntactic names (``or_pnp``, ``xor3_0``, ``eq``, ``pos``, ...).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import (EQUALITY, AbductionInstance, Atom, DivInstance, FacetInstance,
                   Formula, Kind, NAME_RE, canonical_relation, clause_rel, table_rel,
                   xor_rel)
from .errors import ParseError, ScopeError

_TOKEN = re.compile(r"\s*(?:(-?[A-Za-z_][A-Za-z0-9_]*)|(\d+)|([=:;(){}]))")
_KEYWORDS = {"clause", "xor", "eq", "rel", "app", "var", "hyp", "man", "query", "k", "def"}


def _tokenize(line: str, lineno: int):
    tokens = []
    pos = 0
    text = line.split("#", 1)[0].rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", lineno, col)
        col = m.start(m.lastindex) + 1
        tokens.append((m.group(m.lastindex), col))
        pos = m.end()
    return tokens


@dataclass
class Document:
    """Everything a file declares; ``instance()`` builds the typed view."""

    atoms: list = field(default_factory=list)
    extra_vars: list = field(default_factory=list)
    hyps: list = field(default_factory=list)
    mans: list = field(default_factory=list)
    query: str | None = None
    k: int | None = None
    relations: dict = field(default_factory=dict)
    definitions: dict = field(default_factory=dict)

    def abduction(self) -> AbductionInstance:
        kb = Formula(tuple(self.atoms), tuple(dict.fromkeys(
            [v for a in self.atoms for v in a.args] + self.extra_vars)))
        return AbductionInstance(kb, tuple(self.hyps), tuple(self.mans))

    def instance(self):
        base = self.abduction()
        if self.query is not None:
            return FacetInstance(base, self.query)
        if self.k is not None:
            return DivInstance(base, self.k)
        return base


class _Parser:
    def __init__(self, text: str, relations=None):
        self.doc = Document(relations=dict(relations or {}))
        self.lines = text.splitlines()

    def fail(self, msg, lineno, col=None):
        raise ParseError(msg, lineno, col)

    def name(self, tok, lineno):
        value, col = tok
        if not NAME_RE.match(value) or value.startswith("-"):
            self.fail(f"expected a name, got {value!r}", lineno, col)
        return value

    def relation(self, tok, lineno):
        value, col = tok
        rel = self.doc.relations.get(value) or canonical_relation(value)
        if rel is None:
            self.fail(f"unknown relation {value!r}", lineno, col)
        return rel

    def atom(self, head, toks, lineno, end_col):
        """Parse an atom line (clause/xor/eq/app); returns Atom."""
        word = head[0]
        if word == "clause":
            pairs = []
            for value, col in toks:
                if not NAME_RE.match(value.lstrip("-")) or value.startswith("--"):
                    self.fail(f"bad literal {value!r}", lineno, col)
                pairs.append((value.lstrip("-"), not value.startswith("-")))
            return Atom(clause_rel(s for _, s in pairs), tuple(v for v, _ in pairs))
        if word == "xor":
            if len(toks) < 3 or toks[-2][0] != "=" or toks[-1][0] not in ("0", "1"):
                self.fail("xor expects '<name>+ = 0|1'", lineno, head[1])
            names = [self.name(t, lineno) for t in toks[:-2]]
            return Atom(xor_rel(len(names), int(toks[-1][0])), tuple(names))
        if word == "eq":
            if len(toks) != 2:
                self.fail("eq expects exactly two names", lineno, head[1])
            return Atom(EQUALITY, tuple(self.name(t, lineno) for t in toks))
        if word == "app":
            if not toks:
                self.fail("app expects a relation name", lineno, end_col)
            rel = self.relation(toks[0], lineno)
            args = tuple(self.name(t, lineno) for t in toks[1:])
            if len(args) != rel.arity:
                self.fail(f"{rel.name} has arity {rel.arity}, got {len(args)} arguments",
                          lineno, toks[0][1])
            return Atom(rel, args)
        return None

    def rel_decl(self, toks, lineno, head_col):
        if len(toks) < 3 or toks[2][0] != ":":
            self.fail("rel expects '<Name> <arity> : <bitstring>*'", lineno, head_col)
        name = self.name(toks[0], lineno)
        if canonical_relation(name) is not None:
            self.fail(f"{name!r} is a reserved relation name", lineno, toks[0][1])
        if not toks[1][0].isdigit():
            self.fail("arity must be a natural number", lineno, toks[1][1])
        arity = int(toks[1][0])
        rows = []
        for value, col in toks[3:]:
            if not re.fullmatch(r"[01]+", value) or len(value) != arity:
                self.fail(f"bitstring {value!r} does not have length {arity}", lineno, col)
            rows.append(tuple(int(c) for c in value))
        if name in self.doc.relations:
            self.fail(f"relation {name!r} declared twice", lineno, toks[0][1])
        self.doc.relations[name] = table_rel(name, arity, rows)

    def definition(self, toks, lineno, head_col, i):
        from .reduce import EfppDefinition

        words = [t[0] for t in toks]
        try:
            lp, semi, rp, brace = (words.index("("), words.index(";"),
                                   words.index(")"), words.index("{"))
        except ValueError:
            self.fail("def expects '<Name>(<free>+ ; <exist>*) {'", lineno, head_col)
        if not (lp == 1 and lp < semi < rp < brace):
            self.fail("def expects '<Name>(<free>+ ; <exist>*) {'", lineno, head_col)
        target = self.relation(toks[0], lineno)
        free = tuple(self.name(t, lineno) for t in toks[lp + 1:semi])
        exist = tuple(self.name(t, lineno) for t in toks[semi + 1:rp])
        body_lines = []
        rest = self.lines[i - 1].split("{", 1)[1]
        pending = [(rest, lineno)]
        j = i
        closed = False
        while True:
            text, ln = pending.pop() if pending else (None, None)
            if text is None:
                if j >= len(self.lines):
                    break
                text, ln = self.lines[j], j + 1
                j += 1
            stripped = text.split("#", 1)[0].strip()
            if stripped.endswith("}"):
                stripped = stripped[:-1]
                closed = True
            if stripped.strip():
                body_lines.append((stripped, ln))
            if closed:
                break
        if not closed:
            self.fail(f"unterminated definition of {target.name}", lineno, head_col)
        atoms = []
        for text, ln in body_lines:
            btoks = _tokenize(text, ln)
            a = self.atom(btoks[0], btoks[1:], ln, len(text))
            if a is None:
                self.fail(f"definition bodies hold atom lines, got {btoks[0][0]!r}",
                          ln, btoks[0][1])
            atoms.append(a)
        body = Formula(tuple(atoms), free + exist)
        self.doc.definitions[target] = EfppDefinition(target, free, exist, body)
        return j

    def run(self):
        doc = self.doc
        i = 0
        while i < len(self.lines):
            lineno = i + 1
            toks = _tokenize(self.lines[i], lineno)
            i += 1
            if not toks:
                continue
            (word, col), args = toks[0], toks[1:]
            if word not in _KEYWORDS:
                self.fail(f"unknown statement {word!r}", lineno, col)
            atom = self.atom(toks[0], args, lineno, len(self.lines[i - 1]) + 1)
            if atom is not None:
                doc.atoms.append(atom)
            elif word == "rel":
                self.rel_decl(args, lineno, col)
            elif word == "def":
                i = self.definition(args, lineno, col, i)
            elif word in ("hyp", "man", "var"):
                if not args:
                    self.fail(f"{word} expects at least one name", lineno, col)
                names = [self.name(t, lineno) for t in args]
                {"hyp": doc.hyps, "man": doc.mans, "var": doc.extra_vars}[word].extend(names)
            elif word == "query":
                if len(args) != 1:
                    self.fail("query expects one name", lineno, col)
                if doc.query is not None:
                    self.fail("query given twice", lineno, col)
                doc.query = self.name(args[0], lineno)
            elif word == "k":
                if len(args) != 1 or not args[0][0].isdigit():
                    self.fail("k expects a natural number", lineno, col)
                doc.k = int(args[0][0])
        return doc


def parse_document(text: str, relations=None) -> Document:
    return _Parser(text, relations).run()


def parse_instance(text: str):
    """Parse instance text into an AbductionInstance, FacetInstance or DivInstance."""
    doc = parse_document(text)
    try:
        return doc.instance()
    except ScopeError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_definitions(text: str, relations=None) -> dict:
    return parse_document(text, relations).definitions


def _bits(t):
    return "".join(str(b) for b in t)


def _table_names(atoms):
    """Give each distinct TABLE relation a unique declared name."""
    names, used = {}, set()
    for a in atoms:
        rel = a.relation
        if rel.kind is not Kind.TABLE or rel in names:
            continue
        base = rel.name if canonical_relation(rel.name) is None else rel.name + "_t"
        name, n = base, 1
        while name in used:
            n += 1
            name = f"{base}_{n}"
        used.add(name)
        names[rel] = name
    return names


def render_atom(atom: Atom, names=None) -> str:
    rel = atom.relation
    if rel.kind in (Kind.CLAUSE, Kind.UNIT):
        return " ".join(["clause"] + [v if s else "-" + v for v, s in atom.literals()])
    if rel.kind is Kind.XOR:
        return " ".join(["xor", *atom.args, "=", str(rel.parity)])
    if rel.kind is Kind.EQUALITY:
        return f"eq {atom.args[0]} {atom.args[1]}"
    name = (names or {}).get(rel, rel.name)
    return " ".join(["app", name, *atom.args])


def render(inst) -> str:
    """Inverse of ``parse_instance`` up to comments and whitespace."""
    query = k = None
    if isinstance(inst, FacetInstance):
        query, inst = inst.query, inst.base
    elif isinstance(inst, DivInstance):
        k, inst = inst.k, inst.base
    kb = inst.kb
    names = _table_names(kb.atoms)
    out = []
    for rel, name in names.items():
        rows = " ".join(_bits(t) for t in sorted(rel.tuples))
        out.append(f"rel {name} {rel.arity} :" + (" " + rows if rows else ""))
    out.extend(render_atom(a, names) for a in kb.atoms)
    loose = [v for v in kb.vars if v not in kb.atom_vars]
    if loose:
        out.append("var " + " ".join(loose))
    if inst.hyps:
        out.append("hyp " + " ".join(inst.hyps))
    if inst.mans:
        out.append("man " + " ".join(inst.mans))
    if query is not None:
        out.append(f"query {query}")
    if k is not None:
        out.append(f"k {k}")
    return "\n".join(out) + "\n"


def render_definitions(defs) -> str:
    out = []
    for d in defs.values():
        out.append(f"def {d.target.name}({' '.join(d.free)} ; {' '.join(d.exist)}) {{")
        out.extend("    " + render_atom(a) for a in d.body.atoms)
        out.append("}")
    return "\n".join(out) + "\n"
