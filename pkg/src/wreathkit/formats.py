"""Text formats for power words, knapsack expressions, periodic functions,
DNF formulas and group programs.  Parsers raise GroupError with the line
number of the offending input."""
from __future__ import annotations

import re
from typing import Iterable

from .groups import GroupError, format_word, make_group, parse_word
from .hardness import DNF, SYM5, GProgram, Instruction, Literal
from .knapsack import KnapsackExpression
from .periodic import PeriodicFunction
from .powerword import parse_powerword

_COMMENT = re.compile(r"#.*$")
_HEADER = re.compile(r"(\w+)\s*:\s*(.*)")
_ATOM = re.compile(r"\(([^()]*(?:\([^()]*\)[^()]*)*)\)(?:\s*\^\s*([A-Za-z_]\w*))?")

GRAMMAR = """\
file formats (blank lines and '#' comments are ignored everywhere)

  letters   g<level>.<index>[^-1] | x<i>[^-1] (FS groups) | t[^-1] (wrZ groups)
            | cycle notation such as (12)(345)[^-1] (symmetric groups)
  groups    Z^r  W(m,r)  FS(d,r)  Sym(n)  Cyc(n)  UT3  Dih(n)  wrZ(<inner>)

  .pw       group: <descriptor>
            (<letters>) ^ <signed integer>        one factor per line
  .kn       group: <descriptor>
            vars: x1 x2 ...
            (<letters>)  or  (<letters>)^<var>    atoms, any number per line
  .per      one periodic function per line: comma-separated element literals
            (integers for Cyc(n), cycles for Sym(n), a:b:c for UT3, r:s for Dih(n))
  .dnf      exists: X1 X2 ...
            forall: Y1 ...
            X1 !Y2                                one term per line; 'true' is the empty term
  .gp       exists: ... / forall: ...             as for .dnf
            <var> <a-element> <b-element>         one instruction per line, Sym(5) cycles
"""


def _lines(source) -> list[str]:
    if isinstance(source, str):
        return source.splitlines()
    return list(source)


def _headers(lines: Iterable[str], names: set) -> tuple[dict, list]:
    heads: dict = {}
    body: list = []
    for no, raw in enumerate(lines, 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        m = _HEADER.fullmatch(line)
        if m and m.group(1) in names:
            heads[m.group(1)] = m.group(2).strip()
        else:
            body.append((no, line))
    return heads, body


# ---------------------------------------------------------------- power words

def read_powerword(source, group=None) -> tuple:
    """(group, power word) from .pw text; ``group`` overrides the header."""
    lines = _lines(source)
    heads, body = _headers(lines, {"group"})
    desc = group or heads.get("group")
    if desc is None:
        raise GroupError("line 1: missing 'group:' header")
    g = make_group(desc)
    pw = []
    for no, line in body:
        try:
            pw.extend(parse_powerword(g, [line]))
        except GroupError as exc:
            raise GroupError(str(exc).replace("line 1", f"line {no}", 1)) from None
    return g, tuple(pw)


def write_powerword(group, pw) -> str:
    g = make_group(group)
    out = [f"group: {g.descriptor}"]
    out.extend(f"({format_word(g, u)}) ^ {k}" for u, k in pw)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- knapsack

def read_knapsack(source, group=None) -> KnapsackExpression:
    lines = _lines(source)
    heads, body = _headers(lines, {"group", "vars"})
    desc = group or heads.get("group")
    if desc is None:
        raise GroupError("line 1: missing 'group:' header")
    g = make_group(desc)
    declared = heads.get("vars", "").split() if "vars" in heads else None
    atoms: list = []
    for no, line in body:
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _ATOM.match(line, pos)
            if not m:
                raise GroupError(f"line {no}, column {pos + 1}: expected '(<letters>)' or '(<letters>)^<var>'")
            try:
                word = parse_word(g, m.group(1))
            except GroupError as exc:
                raise GroupError(f"line {no}: {exc}") from None
            var = m.group(2)
            if var is not None:
                if declared is not None and var not in declared:
                    raise GroupError(f"line {no}: variable {var} not declared in 'vars:'")
                atoms.append((word, var))
            else:
                atoms.append(word)
            pos = m.end()
    return KnapsackExpression.from_atoms(g, atoms)


def write_knapsack(E: KnapsackExpression) -> str:
    out = [f"group: {E.group.descriptor}", "vars: " + " ".join(E.variables)]
    for a in E.atoms():
        if isinstance(a[-1], str):
            out.append(f"({format_word(E.group, a[0])})^{a[1]}")
        else:
            out.append(f"({format_word(E.group, a)})")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- periodic

def read_periodic(source, group) -> list[PeriodicFunction]:
    g = make_group(group)
    out = []
    for no, raw in enumerate(_lines(source), 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        values = []
        for lit in (p.strip() for p in line.split(",")):
            try:
                values.append(g.parse_element(lit))
            except (GroupError, ValueError) as exc:
                raise GroupError(f"line {no}: bad element {lit!r}: {exc}") from None
        out.append(PeriodicFunction(tuple(values)))
    if not out:
        raise GroupError("no periodic functions given")
    return out


def write_periodic(group, fs) -> str:
    g = make_group(group)
    return "".join(", ".join(g.format_element(v) for v in f.values) + "\n" for f in fs)


# ---------------------------------------------------------------- formulas and programs

def _quantifiers(heads: dict) -> tuple[tuple, tuple]:
    ex = tuple(heads.get("exists", "").split())
    fa = tuple(heads.get("forall", "").split())
    if set(ex) & set(fa):
        raise GroupError("a variable is both existential and universal")
    return ex, fa


def read_dnf(source) -> DNF:
    heads, body = _headers(_lines(source), {"exists", "forall"})
    ex, fa = _quantifiers(heads)
    known = set(ex) | set(fa)
    terms = []
    for no, line in body:
        if line == "true":
            terms.append(())
            continue
        term = []
        for lit in line.split():
            neg = lit.startswith("!")
            name = lit[1:] if neg else lit
            if not re.fullmatch(r"[A-Za-z_]\w*", name):
                raise GroupError(f"line {no}: bad literal {lit!r}")
            if name not in known:
                raise GroupError(f"line {no}: variable {name} has no quantifier")
            term.append(Literal(name, not neg))
        terms.append(tuple(term))
    if not terms:
        raise GroupError("empty formula")
    return DNF(tuple(terms), ex, fa)


def write_dnf(F: DNF) -> str:
    out = [f"exists: {' '.join(F.exists)}", f"forall: {' '.join(F.forall)}"]
    for term in F.terms:
        out.append(" ".join(("" if l.positive else "!") + l.var for l in term) or "true")
    return "\n".join(out) + "\n"


def read_gprogram(source) -> GProgram:
    heads, body = _headers(_lines(source), {"exists", "forall"})
    ex, fa = _quantifiers(heads)
    instrs = []
    for no, line in body:
        fields = line.split()
        if len(fields) != 3:
            raise GroupError(f"line {no}: expected '<var> <a-element> <b-element>'")
        var, a, b = fields
        try:
            instrs.append(Instruction(var, SYM5.parse_element(a), SYM5.parse_element(b)))
        except (GroupError, ValueError) as exc:
            raise GroupError(f"line {no}: {exc}") from None
    try:
        return GProgram(tuple(instrs), ex, fa)
    except ValueError as exc:
        raise GroupError(str(exc)) from None


def write_gprogram(P: GProgram) -> str:
    out = [f"exists: {' '.join(P.exists)}", f"forall: {' '.join(P.forall)}"]
    compact = lambda p: SYM5.format_element(p).replace(" ", "")
    out.extend(f"{i.var} {compact(i.a)} {compact(i.b)}" for i in P.instructions)
    return "\n".join(out) + "\n"
