"""Group programs over Sym(5), nested-commutator witnesses, and the
reductions from quantified boolean formulas to knapsack and power word
instances over G wr Z."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .groups import (
    GroupError,
    SymmetricGroup,
    Token,
    WreathProduct,
    embed_gd_word,
    format_cycles,
    gd_wreath,
    make_group,
)
from .knapsack import KnapsackExpression

SYM5 = SymmetricGroup(5)
IDENTITY = SYM5.identity()
#: the nontrivial element used for pebbles
PEBBLE = (1, 0, 2, 3, 4)


def commutator(g, x, y):
    """[x, y] = x^-1 y^-1 x y."""
    return g.mul(g.mul(g.mul(g.inv(x), g.inv(y)), x), y)


def _is_five_cycle(p) -> bool:
    x, n = 0, 0
    while True:
        x = p[x]
        n += 1
        if x == 0:
            return n == 5


@lru_cache(maxsize=None)
def five_cycles() -> tuple:
    return tuple(p for p in SYM5.elements() if _is_five_cycle(p))


@lru_cache(maxsize=None)
def commutator_pair(c) -> tuple:
    """The first pair of 5-cycles (in enumeration order) whose commutator is c."""
    for x in five_cycles():
        for y in five_cycles():
            if commutator(SYM5, x, y) == c:
                return x, y
    raise GroupError(f"{format_cycles(c)} is not a commutator of 5-cycles")


ROOT_CYCLE = (1, 2, 3, 4, 0)  # (12345)


# ---------------------------------------------------------------- programs

class Instruction(NamedTuple):
    var: str
    a: tuple  # used when the variable is 1
    b: tuple  # used when the variable is 0


@dataclass(frozen=True)
class GProgram:
    instructions: tuple
    exists: tuple = ()
    forall: tuple = ()

    def __post_init__(self):
        if set(self.exists) & set(self.forall):
            raise ValueError("existential and universal variables overlap")
        known = set(self.exists) | set(self.forall)
        for ins in self.instructions:
            if ins.var not in known:
                raise ValueError(f"instruction variable {ins.var} is not declared")

    def __len__(self):
        return len(self.instructions)

    @property
    def variables(self) -> tuple:
        return tuple(self.exists) + tuple(self.forall)


def gprogram_eval(P: GProgram, assignment: dict, group=SYM5):
    missing = [v for v in P.variables if v not in assignment]
    if missing:
        raise ValueError(f"assignment misses {', '.join(missing)}")
    acc = group.identity()
    for ins in P.instructions:
        acc = group.mul(acc, ins.a if assignment[ins.var] else ins.b)
    return acc


def _inverse_program(instrs: list) -> list:
    return [Instruction(i.var, SYM5.inv(i.a), SYM5.inv(i.b)) for i in reversed(instrs)]


# ---------------------------------------------------------------- nested commutators

@dataclass(frozen=True)
class SENSWitness:
    depth: int
    words: dict  # binary string -> word over Sym(5) tokens

    def root(self) -> tuple:
        return self.words[""]


def _letter(p, sign: int = 1) -> Token:
    return Token(0, SYM5.token_for(p).index, sign)


def _word_commutator(u: tuple, v: tuple) -> tuple:
    inv = lambda w: tuple(Token(t.level, t.index, -t.sign) for t in reversed(w))
    return inv(u) + inv(v) + u + v


def sens_witness(d: int) -> SENSWitness:
    """Words w_v for binary strings |v| <= d with w_v = [w_v0, w_v1] and
    w_eps a 5-cycle.  Leaves are single letters, so all leaves share one
    length."""
    if d < 0:
        raise ValueError("depth must be nonnegative")
    targets = {"": ROOT_CYCLE}
    for level in range(d):
        for v in [v for v in targets if len(v) == level]:
            x, y = commutator_pair(targets[v])
            targets[v + "0"], targets[v + "1"] = x, y
    words: dict = {}
    for v in sorted(targets, key=len, reverse=True):
        if len(v) == d:
            words[v] = (_letter(targets[v]),)
        else:
            words[v] = _word_commutator(words[v + "0"], words[v + "1"])
    root = SYM5.eval_word(words[""])
    if root == IDENTITY:
        raise AssertionError("nested commutator collapsed")
    return SENSWitness(d, words)


# ---------------------------------------------------------------- formulas

class Literal(NamedTuple):
    var: str
    positive: bool = True


@dataclass(frozen=True)
class DNF:
    """Disjunction of terms; a term is a tuple of literals (empty = true)."""

    terms: tuple
    exists: tuple = ()
    forall: tuple = ()

    def __call__(self, assignment: dict) -> bool:
        return any(all(bool(assignment[l.var]) == l.positive for l in term) for term in self.terms)

    @property
    def variables(self) -> tuple:
        return tuple(self.exists) + tuple(self.forall)


def exists_forall(F, exists: Sequence[str], forall: Sequence[str], holds=None) -> bool:
    """Brute force: is there alpha with F(alpha, beta) for every beta?"""
    holds = holds or (lambda asg: F(asg))
    for xs in itertools.product((0, 1), repeat=len(exists)):
        alpha = dict(zip(exists, xs))
        if all(holds({**alpha, **dict(zip(forall, ys))}) for ys in itertools.product((0, 1), repeat=len(forall))):
            return True
    return False


def _compile(node, target, anchor: str) -> list:
    """Program evaluating to ``target`` when ``node`` is true and to the
    identity otherwise.  Nodes: ('lit', Literal), ('true',), ('false',),
    ('not', n), ('and', [n...])."""
    kind = node[0]
    if kind == "lit":
        lit = node[1]
        return [Instruction(lit.var, target, IDENTITY) if lit.positive else Instruction(lit.var, IDENTITY, target)]
    if kind == "true":
        return [Instruction(anchor, target, target)]
    if kind == "false":
        return []
    if kind == "not":
        inner = _compile(node[1], SYM5.inv(target), anchor)
        return inner + [Instruction(anchor, target, target)]
    if kind == "and":
        kids = node[1]
        if not kids:
            return _compile(("true",), target, anchor)
        if len(kids) == 1:
            return _compile(kids[0], target, anchor)
        mid = (len(kids) + 1) // 2
        x, y = commutator_pair(target)
        left = _compile(("and", kids[:mid]), x, anchor)
        right = _compile(("and", kids[mid:]), y, anchor)
        return _inverse_program(left) + _inverse_program(right) + left + right
    raise ValueError(f"unknown node {kind}")


def _merge_constants(instrs: list) -> list:
    """Fold instructions with a = b into a neighbour."""
    out: list = []
    pending = IDENTITY
    for ins in instrs:
        if ins.a == ins.b:
            if out:
                last = out[-1]
                out[-1] = Instruction(last.var, SYM5.mul(last.a, ins.a), SYM5.mul(last.b, ins.a))
            else:
                pending = SYM5.mul(pending, ins.a)
            continue
        if pending != IDENTITY:
            ins = Instruction(ins.var, SYM5.mul(pending, ins.a), SYM5.mul(pending, ins.b))
            pending = IDENTITY
        out.append(ins)
    if pending != IDENTITY:
        return instrs  # everything constant: keep the unmerged program
    return out


def compile_formula(F: DNF) -> GProgram:
    """A program P over Sym(5) with P(gamma) = 1 exactly when F(gamma) holds."""
    if not F.terms:
        raise GroupError("empty formula")
    if any(len(t) == 0 for t in F.terms):
        return GProgram((), tuple(F.exists), tuple(F.forall))
    anchor = F.terms[0][0].var
    # not F = AND over terms of (not term)
    node = ("and", [("not", ("and", [("lit", l) for l in term])) for term in F.terms])
    instrs = _merge_constants(_compile(node, ROOT_CYCLE, anchor))
    P = GProgram(tuple(instrs), tuple(F.exists), tuple(F.forall))
    return P


# ---------------------------------------------------------------- reductions

def first_primes(k: int) -> list[int]:
    out: list[int] = []
    n = 2
    while len(out) < k:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out


class _SparseWord(NamedTuple):
    letters: tuple  # (offset, copy, element) for non-identity letters, in order
    step: int


def _sparse(group: WreathProduct, word, copies: bool) -> _SparseWord:
    """Letters of a word over (G or G^D) wr Z with their cursor offsets."""
    A = group.A
    pos = 0
    out = []
    for tok in word:
        if tok.level == 0:
            pos += tok.sign
            continue
        if copies:
            copy, inner = A.split_token(Token(0, tok.index, tok.sign))
            base = A.base
        else:
            copy, inner, base = 0, Token(0, tok.index, tok.sign), A
        e = base.token_element(inner)
        if e != base.identity():
            out.append((pos, copy, e))
    return _SparseWord(tuple(out), pos)


def sparse_eval(group: WreathProduct, E: KnapsackExpression, nu: dict, only=None, cache=None) -> tuple[dict, int]:
    """Evaluate E over G wr Z or G^D wr Z letter by letter, keeping only
    non-identity letters.  Returns ({(copy, position): element}, cursor).
    ``only`` restricts to a set of coordinates."""
    copies = group.A is not None and hasattr(group.A, "split_token")
    base = group.A.base if copies else group.A
    mul, one = base.mul, base.identity()
    sparse = cache if cache is not None else {}
    acc: dict = {}
    cur = 0

    def put(word, k):
        nonlocal cur
        sw = sparse.get(word)
        if sw is None:
            sw = _sparse(group, word, copies)
            sparse[word] = sw
        letters = sw.letters if only is None else [l for l in sw.letters if l[1] in only]
        if letters:
            for j in range(k):
                c0 = cur + j * sw.step
                for off, copy, e in letters:
                    key = (copy, c0 + off)
                    v = acc.get(key)
                    nv = e if v is None else mul(v, e)
                    if nv == one:
                        acc.pop(key, None)
                    else:
                        acc[key] = nv
        cur += k * sw.step

    for r, (u, x) in enumerate(E.powers):
        put(E.constants[r], 1)
        k = nu[x]
        if k < 0:
            raise ValueError("valuations are nonnegative")
        put(u, k)
    put(E.constants[-1], 1)
    return acc, cur


@dataclass
class QBF2Reduction:
    """Knapsack instance for the exists-forall question of a program.

    ``lifted`` lives in G^D wr Z with D = 2*len(P) + 2: coordinates
    0..2l hold pebbles, coordinate 2l+1 the program letters.
    ``expression`` is its image in G wr Z."""

    program: GProgram
    primes: dict
    M: int
    D: int
    lifted: KnapsackExpression
    expression: KnapsackExpression
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def program_copy(self) -> int:
        return self.D - 1

    def intended_valuation(self, alpha: dict, M_prime: int | None = None) -> dict:
        P = self.program
        Mp = self.M if M_prime is None else M_prime
        if Mp % self.M:
            raise ValueError("M' must be a multiple of M")
        nu: dict = {"z": Mp - 1, "zp": Mp - 1}
        for i, ins in enumerate(P.instructions, 1):
            q = self.primes[ins.var]
            nu[f"z{i}"] = Mp - 1
            if ins.var in P.forall:
                nu[f"y{i}"] = Mp // q
            elif alpha[ins.var]:
                nu[f"x{i}"], nu[f"xp{i}"] = Mp // q, 0
            else:
                nu[f"x{i}"], nu[f"xp{i}"] = 0, Mp // q
        for X in self._used_exists():
            nu[f"Xt_{X}"], nu[f"Xtp_{X}"] = (1, 0) if alpha[X] else (0, 1)
        return {x: nu[x] for x in self.lifted.variables}

    def _used_exists(self) -> list:
        used = {ins.var for ins in self.program.instructions}
        return [X for X in self.program.exists if X in used]

    def evaluate_lifted(self, nu: dict, only=None) -> tuple[dict, int]:
        return sparse_eval(self.lifted.group, self.lifted, nu, only, self._cache.setdefault("lifted", {}))

    def evaluate_embedded(self, nu: dict) -> tuple[dict, int]:
        return sparse_eval(self.expression.group, self.expression, nu, None, self._cache.setdefault("embedded", {}))

    def is_solution(self, nu: dict) -> bool:
        acc, cur = self.evaluate_lifted(nu)
        return cur == 0 and not acc

    def structured_search(self, multipliers: Iterable[int] = (1, 2)) -> dict | None:
        """Search valuations obeying the linear side conditions: every z
        equals M'-1, each power walks exactly M', one existential power per
        instruction consistently per variable, and pebble exponents in {0, 1}."""
        ex = list(self.program.exists)
        used = self._used_exists()
        pebbles = set(range(self.D - 1))
        prog = {self.program_copy}
        for k in multipliers:
            Mp = k * self.M
            for bits in itertools.product((0, 1), repeat=len(ex)):
                alpha = dict(zip(ex, bits))
                base = self.intended_valuation(alpha, Mp)
                acc, cur = self.evaluate_lifted(base, prog)
                if acc or cur:
                    continue
                for peb in itertools.product((0, 1), repeat=2 * len(used)):
                    nu = dict(base)
                    for j, X in enumerate(used):
                        nu[f"Xt_{X}"], nu[f"Xtp_{X}"] = peb[2 * j], peb[2 * j + 1]
                    acc, cur = self.evaluate_lifted(nu, pebbles)
                    if not acc and not cur:
                        return nu
        return None


def _free_reduce(word) -> tuple:
    out: list = []
    for tok in word:
        if out and out[-1].level == tok.level and out[-1].index == tok.index and out[-1].sign == -tok.sign:
            out.pop()
        else:
            out.append(tok)
    return tuple(out)


def _copy_letter(A, copy: int, p, sign: int = 1) -> Token:
    t = A.coordinate_token(copy, SYM5.token_for(p))
    return Token(1, t.index, sign)


def reduce_qbf2(P: GProgram) -> QBF2Reduction:
    if not P.instructions:
        raise GroupError("empty program")
    l = len(P.instructions)
    D = 2 * l + 2
    lifted_group = gd_wreath(SYM5, D)
    A = lifted_group.A
    T, Ti = Token(0, 1, 1), Token(0, 1, -1)
    pc = D - 1
    primes = dict(zip(P.variables, first_primes(len(P.variables))))
    M = 1
    for q in primes.values():
        M *= q
    g = lambda i, s=1: _copy_letter(A, i, PEBBLE, s)
    letter = lambda p: _copy_letter(A, pc, p)
    used = {ins.var for ins in P.instructions}
    groups_of = {X: [i for i, ins in enumerate(P.instructions, 1) if ins.var == X] for X in P.exists if X in used}

    atoms: list = []
    atoms.append(tuple(g(i) for i in range(l + 1)))
    for X, idx in groups_of.items():
        atoms.append((tuple(g(l + i) for i in idx), f"Xtp_{X}"))
    atoms.append((T,))
    atoms.append(((T,), "z"))
    atoms.append(tuple(g(i) for i in range(1, l + 1)))
    for X, idx in groups_of.items():
        atoms.append((tuple(g(l + i) for i in idx), f"Xt_{X}"))
    atoms.append((Ti,))
    atoms.append(((Ti,), "zp"))
    atoms.append((g(0, -1),))
    for i, ins in enumerate(P.instructions, 1):
        q = primes[ins.var]
        a, b = letter(ins.a), letter(ins.b)
        if ins.var in P.exists:
            atoms.append(((a, T) * q, f"x{i}"))
            atoms.append((g(l + i, -1),))
            atoms.append(((b, T) * q, f"xp{i}"))
        else:
            atoms.append(((a, T) + (b, T) * (q - 1), f"y{i}"))
        atoms.append((g(i, -1), Ti))
        atoms.append(((Ti,), f"z{i}"))
        atoms.append((g(i, -1),))
    lifted = KnapsackExpression.from_atoms(lifted_group, atoms)
    base = make_group("wrZ(Sym(5))")
    emb = lambda w: _free_reduce(embed_gd_word(lifted_group, w))
    emb_atoms = [(emb(a[0]), a[1]) if isinstance(a[-1], str) else emb(a) for a in atoms]
    expression = KnapsackExpression.from_atoms(base, emb_atoms)
    return QBF2Reduction(P, primes, M, D, lifted, expression)


def reduce_forall_powerword(P: GProgram) -> tuple:
    """Power word over Sym(5) wr Z that is trivial iff P(beta) = 1 for every
    assignment beta of the (universal) variables.

    Factor i writes a_i at the positions s in [0, M) divisible by q_i and
    b_i at the others, then returns to the origin."""
    if P.exists:
        raise GroupError("all variables must be universal")
    primes = dict(zip(P.variables, first_primes(len(P.variables))))
    M = 1
    for q in primes.values():
        M *= q
    T, Ti = Token(0, 1, 1), Token(0, 1, -1)
    letter = lambda p: Token(1, SYM5.token_for(p).index, 1)
    pw = []
    for ins in P.instructions:
        q = primes[ins.var]
        w = (letter(ins.a), T) + (letter(ins.b), T) * (q - 1)
        pw.append((w, M // q))
        pw.append(((Ti,), M))
    return tuple(pw)


def forall_holds(P: GProgram) -> bool:
    """Brute force: P(beta) = 1 for all assignments."""
    names = P.variables
    for bits in itertools.product((0, 1), repeat=len(names)):
        if gprogram_eval(P, dict(zip(names, bits))) != IDENTITY:
            return False
    return True
