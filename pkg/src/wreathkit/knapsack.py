"""Knapsack and exponent expressions: evaluation, bounded solving,
normalization, parallel classes and decomposition certificates."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .groups import (
    FreeAbelian,
    Group,
    GroupError,
    Token,
    WreathProduct,
    element_word,
    format_word,
    invert_word,
    make_group,
    parse_word,
)
from .powerword import (
    element_commensurate,
    element_power_root,
    solver_for,
)
from .progressions import ArithmeticProgression, interval_partition, progression_sum_support


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class KnapsackExpression:
    """v0 u1^x1 v1 ... ud^xd vd.  ``constants`` holds v0..vd, ``powers``
    the pairs (u_r, x_r)."""

    group: Group
    constants: tuple
    powers: tuple

    def __post_init__(self):
        if len(self.constants) != len(self.powers) + 1:
            raise ValueError("need exactly one more constant than powers")
        if not self.powers:
            raise ValueError("an expression needs at least one power")
        for u, _ in self.powers:
            if not u:
                raise ValueError("periods must be nonempty")

    @classmethod
    def from_atoms(cls, group, atoms: Iterable) -> "KnapsackExpression":
        """Build from a sequence of words (constants) and (word, variable)
        pairs; neighbouring constants are concatenated."""
        group = make_group(group)
        constants: list = [()]
        powers: list = []
        for atom in atoms:
            if isinstance(atom, tuple) and len(atom) == 2 and isinstance(atom[1], str):
                powers.append((tuple(atom[0]), atom[1]))
                constants.append(())
            else:
                constants[-1] = constants[-1] + tuple(atom)
        return cls(group, tuple(constants), tuple(powers))

    @property
    def d(self) -> int:
        return len(self.powers)

    @property
    def variables(self) -> tuple:
        return tuple(dict.fromkeys(x for _, x in self.powers))

    @property
    def is_knapsack(self) -> bool:
        return len(self.variables) == self.d

    @property
    def size(self) -> int:
        return sum(len(u) for u, _ in self.powers) + sum(len(v) for v in self.constants)

    def atoms(self) -> list:
        out: list = []
        for i, (u, x) in enumerate(self.powers):
            if self.constants[i]:
                out.append(self.constants[i])
            out.append((u, x))
        if self.constants[-1]:
            out.append(self.constants[-1])
        return out

    def format(self) -> str:
        g = self.group
        parts = []
        for a in self.atoms():
            if isinstance(a[-1], str):
                parts.append(f"({format_word(g, a[0])})^{a[1]}")
            else:
                parts.append(f"({format_word(g, a)})")
        return " ".join(parts)


class _Evaluator:
    """Caches word values and powers for repeated evaluation."""

    def __init__(self, E: KnapsackExpression):
        g = E.group
        self.E = E
        self.consts = [g.eval_word(v) for v in E.constants]
        self.periods = [g.eval_word(u) for u, _ in E.powers]
        self._pows: dict = {}
        wr = isinstance(g, WreathProduct)
        self.wreath = wr
        if wr:
            self.sconsts = [c.cursor for c in self.consts]
            self.speriods = [p.cursor for p in self.periods]
            self._spows: dict = {}

    def power(self, r: int, k: int):
        key = (r, k)
        v = self._pows.get(key)
        if v is None:
            v = self.E.group.pow(self.periods[r], k)
            self._pows[key] = v
        return v

    def spower(self, r: int, k: int):
        key = (r, k)
        v = self._spows.get(key)
        if v is None:
            v = self.E.group.H.pow(self.speriods[r], k)
            self._spows[key] = v
        return v

    def value(self, nu) -> object:
        g = self.E.group
        acc = self.consts[0]
        for r, (_, x) in enumerate(self.E.powers):
            acc = g.mul(g.mul(acc, self.power(r, nu[x])), self.consts[r + 1])
        return acc

    def sigma_trivial(self, nu) -> bool:
        if not self.wreath:
            return True
        H = self.E.group.H
        acc = self.sconsts[0]
        for r, (_, x) in enumerate(self.E.powers):
            acc = H.mul(H.mul(acc, self.spower(r, nu[x])), self.sconsts[r + 1])
        return H.is_identity(acc)

    def is_solution(self, nu) -> bool:
        return self.sigma_trivial(nu) and self.E.group.is_identity(self.value(nu))


def evaluate(E: KnapsackExpression, nu) -> object:
    missing = [x for x in E.variables if x not in nu]
    if missing:
        raise ValueError(f"valuation misses {', '.join(missing)}")
    if any(nu[x] < 0 for x in E.variables):
        raise ValueError("valuations are nonnegative")
    return _Evaluator(E).value(nu)


def is_solution(E: KnapsackExpression, nu) -> bool:
    return E.group.is_identity(evaluate(E, nu))


def solve_box(system: Sequence[KnapsackExpression] | KnapsackExpression, box: int, fixed: dict | None = None) -> list[dict]:
    """All valuations with values in [0, box] solving every expression.

    ``fixed`` pins some variables.  Enumeration is in mixed-radix order and
    each candidate is screened by its sigma-projection first.
    """
    if isinstance(system, KnapsackExpression):
        system = [system]
    if box < 0:
        raise ValueError("box must be nonnegative")
    fixed = dict(fixed or {})
    names = list(dict.fromkeys(x for E in system for x in E.variables))
    free = [x for x in names if x not in fixed]
    evs = [_Evaluator(E) for E in system]
    out = []
    for values in itertools.product(range(box + 1), repeat=len(free)):
        nu = dict(fixed)
        nu.update(zip(free, values))
        if all(ev.sigma_trivial(nu) for ev in evs) and all(ev.is_solution(nu) for ev in evs):
            out.append({x: nu[x] for x in names})
    return out


# ---------------------------------------------------------------- normalization

def _split_blocks(group: WreathProduct, word):
    """Leading H-word and blocks (A-letters, following H-letters)."""
    s = group.shift
    head: list = []
    blocks: list = []
    for tok in word:
        if tok.level >= s:
            if not blocks or blocks[-1][1]:
                blocks.append([[], []])
            blocks[-1][0].append(tok)
        elif blocks:
            blocks[-1][1].append(tok)
        else:
            head.append(tok)
    return tuple(head), [(tuple(a), tuple(h)) for a, h in blocks]


def in_AH(group: WreathProduct, word) -> bool:
    head, blocks = _split_blocks(group, word)
    return not blocks or (not head and len(blocks) == 1)


def is_normalized_expression(E: KnapsackExpression) -> bool:
    g = E.group
    if not isinstance(g, WreathProduct):
        return False
    s = g.shift
    return (
        not E.constants[0]
        and all(in_AH(g, u) for u, _ in E.powers)
        and all(t.level < s for v in E.constants for t in v)
    )


def _fresh(names, base: str = "y") -> str:
    if base not in names:
        return base
    for i in itertools.count(1):
        if f"{base}{i}" not in names:
            return f"{base}{i}"


def normalize_expression(E: KnapsackExpression) -> tuple[KnapsackExpression, str]:
    """An equivalent normalized expression and the name of the variable that
    must be pinned to 1.  Solutions of E are exactly the restrictions of the
    solutions of the result with that variable equal to 1."""
    g = E.group
    if not isinstance(g, WreathProduct) or not isinstance(g.A, FreeAbelian):
        raise GroupError("normalize_expression needs a wreath product with free abelian left factor")
    y = _fresh(set(E.variables))
    atoms: list = []

    def constant(word):
        head, blocks = _split_blocks(g, word)
        if head:
            atoms.append(head)
        for a, h in blocks:
            atoms.append((a, y))
            if h:
                atoms.append(h)

    for i, (u, x) in enumerate(E.powers):
        constant(E.constants[i])
        if in_AH(g, u):
            atoms.append((u, x))
            continue
        head, blocks = _split_blocks(g, u)
        su = g.sigma_word(u)
        before = head
        for j, (a, h) in enumerate(blocks):
            after = tuple(t for _, hh in blocks[j + 1:] for t in hh)
            if before:
                atoms.append(before)
            atoms.append((a + h + after + before, x))
            if before:
                atoms.append(invert_word(before))
            if su:
                atoms.append((invert_word(su), x))
            before = before + h
        if su:
            atoms.append((su, x))
    constant(E.constants[-1])
    # conjugate the leading constant to the end
    lead: tuple = ()
    while atoms and not isinstance(atoms[0][-1], str):
        lead = lead + atoms.pop(0)
    if lead:
        atoms.append(lead)
    return KnapsackExpression.from_atoms(g, atoms), y


# ---------------------------------------------------------------- parallel classes

@dataclass(frozen=True)
class ParallelClassData:
    members: tuple  # 1-based atom indices
    h: object  # generator h_C as an element of H
    h_word: tuple  # power word prod sigma(u_r)^alpha_r
    alpha: dict
    beta: dict


def _bezout(p: int, q: int) -> tuple[int, int]:
    """(k, l) with k*p + l*q = 1 for coprime p, q."""
    if abs(q) == 1:
        return 0, q
    k = pow(p, -1, abs(q))
    return k, (1 - k * p) // q


def parallel_classes(E: KnapsackExpression) -> list[ParallelClassData]:
    g = E.group
    if not isinstance(g, WreathProduct):
        raise GroupError("parallel classes need a wreath product")
    H = g.H
    hsolver = solver_for(H)
    sw = [g.sigma_word(u) for u, _ in E.powers]
    se = [H.eval_word(w) for w in sw]
    R = [r for r in range(E.d) if not H.is_identity(se[r])]
    classes: list[list[int]] = []
    for r in R:
        for cls in classes:
            if hsolver.commensurate(sw[cls[0]], sw[r]) is not None:
                cls.append(r)
                break
        else:
            classes.append([r])
    out = []
    for cls in classes:
        first = cls[0]
        h = se[first]
        alpha, beta = {first: 1}, {first: 1}
        for r in cls[1:]:
            p, q = element_commensurate(H, h, se[r])  # h^p = sigma_r^q
            k, l = _bezout(p, q)
            h = H.mul(H.pow(h, l), H.pow(se[r], k))
            for m in alpha:
                alpha[m] *= l
                beta[m] *= q
            alpha[r], beta[r] = k, p
        if beta[first] < 0:
            h = H.inv(h)
            alpha = {m: -a for m, a in alpha.items()}
            beta = {m: -b for m, b in beta.items()}
        # the defining identities, rechecked
        acc = H.identity()
        for m in cls:
            acc = H.mul(acc, H.pow(se[m], alpha[m]))
            if H.pow(h, beta[m]) != se[m]:
                raise AssertionError("class generator does not reproduce a period")
        if acc != h:
            raise AssertionError("class generator is not the stated product")
        out.append(ParallelClassData(
            tuple(m + 1 for m in cls),
            h,
            tuple((sw[m], alpha[m]) for m in cls),
            {m + 1: alpha[m] for m in cls},
            {m + 1: beta[m] for m in cls},
        ))
    return out


# ---------------------------------------------------------------- certificates

class Triple(NamedTuple):
    r: int  # 1-based power index
    s: int
    t: int


@dataclass(frozen=True)
class Stacking:
    position: object
    triples: tuple


@dataclass(frozen=True)
class Packed:
    cls: int  # index into parallel_classes(E)
    offset: object  # first element of the guide ray
    length: int  # guide ray is offset * h^j for 0 <= j <= length
    triples: tuple
    gammas: tuple  # remainder per triple


@dataclass(frozen=True)
class DecompositionCertificate:
    bundles: tuple

    @property
    def triples(self) -> list:
        return [t for b in self.bundles for t in b.triples]


class CertificateCheck(NamedTuple):
    valid: bool
    malformed: bool
    reason: str


class _Layout:
    """Occurrence positions sigma_nu(r, k) and A-values of a normalized
    expression under a valuation."""

    def __init__(self, E: KnapsackExpression, nu):
        if not is_normalized_expression(E):
            raise GroupError("expression is not normalized")
        g = E.group
        H, A = g.H, g.A
        self.E, self.nu, self.H, self.A = E, nu, H, A
        self.count = [nu[x] for _, x in E.powers]
        self.value = []
        self.step = []
        self.base = []
        cur = H.eval_word(E.constants[0])
        for r, (u, x) in enumerate(E.powers):
            e = g.eval_word(u)
            self.value.append(e.support.get(H.identity(), A.identity()))
            self.step.append(e.cursor)
            self.base.append(cur)
            cur = H.mul(H.mul(cur, H.pow(e.cursor, nu[x])), H.eval_word(E.constants[r + 1]))
        self.final = cur

    def position(self, r: int, k: int):
        """sigma_nu(r, k) for the 1-based power index r."""
        H = self.H
        return H.mul(self.base[r - 1], H.pow(self.step[r - 1], k))

    def moving(self, r: int) -> bool:
        return not self.H.is_identity(self.step[r - 1])


def nu_decompose(E: KnapsackExpression, nu) -> DecompositionCertificate:
    """A certificate that ``nu`` solves the normalized expression E: the
    occurrences are cut into ranges and grouped into bundles that are
    stacking or packed into a guide ray of their parallel class, each with
    vanishing A-sum."""
    if not is_solution(E, nu):
        raise ValueError("valuation is not a solution")
    L = _Layout(E, nu)
    H = L.H
    d = E.d
    pos = {r: [L.position(r, k) for k in range(L.count[r - 1])] for r in range(1, d + 1)}
    prog = [r for r in range(1, d + 1) if pos[r]]
    supports = {r: set(pos[r]) for r in prog}

    # points where two progressions meet in exactly one element
    S = set()
    for i, p in enumerate(prog):
        for q in prog[i:]:
            common = supports[p] & supports[q]
            if len(common) == 1:
                S |= common

    pieces = []  # (r, s, t, point or None)
    for r in prog:
        start = 0
        seq = pos[r]
        for k in range(1, len(seq) + 1):
            if k == len(seq) or (seq[k] in S) != (seq[start] in S) or (seq[start] in S and seq[k] != seq[start]):
                pieces.append((r, start, k - 1, seq[start] if seq[start] in S else None))
                start = k
    n_prog = len(prog)
    if len(pieces) > n_prog * (2 * n_prog * n_prog + 1):
        raise AssertionError("refinement exceeds its size bound")

    stacks: dict = {}
    for r, s, t, point in pieces:
        if point is not None:
            stacks.setdefault(point, []).append(Triple(r, s, t))

    classes = parallel_classes(E)
    cls_of = {m: c for c, data in enumerate(classes) for m in data.members}
    packed: list = []
    n_free = 0
    for c, data in enumerate(classes):
        free = [(r, s, t) for r, s, t, point in pieces if point is None and r in cls_of and cls_of[r] == c]
        n_free += len(free)
        h = data.h
        cosets: list = []  # (rep, [(r, s, t, j_first)])
        for r, s, t in free:
            x = pos[r][s]
            for rep, items in cosets:
                j = element_power_root(H, h, H.mul(H.inv(rep), x))
                if j is not None:
                    items.append((r, s, t, j))
                    break
            else:
                cosets.append((x, [(r, s, t, 0)]))
        for rep, items in cosets:
            ranges = []
            for r, s, t, j in items:
                j_last = j + data.beta[r] * (t - s)
                ranges.append((min(j, j_last), max(j, j_last)))
            for lo, hi, members in interval_partition(ranges):
                chosen = []
                for m in members:
                    r, s, t, j = items[m]
                    b = data.beta[r]
                    # occurrence indices k in [s, t] with j + b (k - s) in [lo, hi]
                    if b > 0:
                        k0, k1 = s + -((j - lo) // b), s + (hi - j) // b
                    else:
                        k0, k1 = s + -((hi - j) // -b), s + (j - lo) // -b
                    k0, k1 = max(k0, s), min(k1, t)
                    if k0 <= k1:
                        gamma = (j + b * (k0 - s) - lo) % abs(b)
                        chosen.append((Triple(r, k0, k1), gamma))
                if not chosen:
                    continue
                offset = H.mul(rep, H.pow(h, lo))
                if lo == hi:
                    stacks.setdefault(offset, []).extend(t for t, _ in chosen)
                else:
                    packed.append(Packed(c, offset, hi - lo, tuple(t for t, _ in chosen), tuple(gm for _, gm in chosen)))
    unassigned = sum(1 for p in pieces if p[3] is None) - n_free
    if unassigned:
        raise AssertionError("a ray piece has no parallel class")
    bundles = [Stacking(p, tuple(sorted(ts))) for p, ts in sorted(stacks.items(), key=lambda kv: H.key(kv[0]))]
    bundles += packed
    n_q = len(pieces)
    if sum(len(b.triples) for b in bundles) > n_q * (2 * n_q + 1):
        raise AssertionError("packed refinement exceeds its size bound")
    return DecompositionCertificate(tuple(bundles))


def check_certificate(E: KnapsackExpression, nu, cert: DecompositionCertificate) -> CertificateCheck:
    def bad(reason):
        return CertificateCheck(False, False, reason)

    def malformed(reason):
        return CertificateCheck(False, True, reason)

    try:
        L = _Layout(E, nu)
    except (GroupError, KeyError) as exc:
        return malformed(str(exc))
    H, A = L.H, L.A
    d = E.d
    # ranges must tile [0, nu(x_r) - 1] for every r
    cover: dict = {r: [] for r in range(1, d + 1)}
    for tr in cert.triples:
        if not (1 <= tr.r <= d) or not (0 <= tr.s <= tr.t):
            return malformed(f"triple {tuple(tr)} is out of range")
        cover[tr.r].append((tr.s, tr.t))
    for r, ranges in cover.items():
        nxt = 0
        for s, t in sorted(ranges):
            if s != nxt:
                return malformed(f"occurrences of power {r} are not partitioned")
            nxt = t + 1
        if nxt != L.count[r - 1]:
            return malformed(f"occurrences of power {r} are not partitioned")
    if not H.is_identity(L.final):
        return bad("sigma-projection is not trivial")
    classes = None
    zero = A.identity()
    for b in cert.bundles:
        if isinstance(b, Stacking):
            total = zero
            for tr in b.triples:
                if L.position(tr.r, tr.s) != b.position or L.position(tr.r, tr.t) != b.position:
                    return bad("stacking bundle is not at a single position")
                total = A.mul(total, A.pow(L.value[tr.r - 1], tr.t - tr.s + 1))
            if not A.is_identity(total):
                return bad("stacking bundle has nonzero sum")
        elif isinstance(b, Packed):
            if classes is None:
                classes = parallel_classes(E)
            if not 0 <= b.cls < len(classes) or len(b.gammas) != len(b.triples) or b.length < 0:
                return malformed("packed bundle is malformed")
            data = classes[b.cls]
            h = data.h
            inv_off = H.inv(b.offset)

            def coord(x):
                return element_power_root(H, h, H.mul(inv_off, x))

            M = []
            for tr, gamma in zip(b.triples, b.gammas):
                if tr.r not in data.beta:
                    return bad("triple outside the bundle's class")
                beta = data.beta[tr.r]
                step = L.step[tr.r - 1]
                first, last = L.position(tr.r, tr.s), L.position(tr.r, tr.t)
                j0, j1 = coord(first), coord(last)
                if j0 is None or j1 is None or not (0 <= j0 <= b.length and 0 <= j1 <= b.length):
                    return bad("ray endpoint outside the guide ray")
                jb = coord(H.mul(first, H.inv(step)))
                ja = coord(H.mul(last, step))
                if jb is None or ja is None or 0 <= jb <= b.length or 0 <= ja <= b.length:
                    return bad("ray is not maximal in the guide ray")
                if not (0 <= gamma < abs(beta)) or j0 % abs(beta) != gamma:
                    return bad("remainder does not match")
                count = (b.length - gamma) // abs(beta) + 1
                M.append((ArithmeticProgression(gamma, abs(beta), count), L.value[tr.r - 1]))
            if progression_sum_support(M, 1):
                return bad("packed bundle has nonzero sum")
        else:
            return malformed("unknown bundle kind")
    return CertificateCheck(True, False, "ok")


def verify_certificate(E: KnapsackExpression, nu, cert: DecompositionCertificate) -> bool:
    return check_certificate(E, nu, cert).valid


def format_certificate(E: KnapsackExpression, cert: DecompositionCertificate) -> str:
    H = E.group.H
    lines = ["certificate"]
    for b in cert.bundles:
        w = format_word(H, element_word(H, b.position if isinstance(b, Stacking) else b.offset))
        if isinstance(b, Stacking):
            lines.append(f"  stacking ({w})")
            lines.extend(f"    triple {t.r} {t.s} {t.t}" for t in b.triples)
        else:
            lines.append(f"  packed class {b.cls} offset ({w}) length {b.length}")
            lines.extend(f"    triple {t.r} {t.s} {t.t} gamma {g}" for t, g in zip(b.triples, b.gammas))
    lines.append("end")
    return "\n".join(lines)


def parse_certificate(E: KnapsackExpression, text: str) -> DecompositionCertificate:
    import re

    H = E.group.H
    bundles: list = []
    cur = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line in ("certificate", "end"):
            continue
        m = re.fullmatch(r"stacking \((.*)\)", line)
        if m:
            cur = ["s", H.eval_word(parse_word(H, m.group(1))), [], []]
            bundles.append(cur)
            continue
        m = re.fullmatch(r"packed class (\d+) offset \((.*)\) length (\d+)", line)
        if m:
            cur = ["p", (int(m.group(1)), H.eval_word(parse_word(H, m.group(2))), int(m.group(3))), [], []]
            bundles.append(cur)
            continue
        m = re.fullmatch(r"triple (\d+) (\d+) (\d+)(?: gamma (\d+))?", line)
        if m and cur is not None:
            cur[2].append(Triple(int(m.group(1)), int(m.group(2)), int(m.group(3))))
            if m.group(4) is not None:
                cur[3].append(int(m.group(4)))
            continue
        raise GroupError(f"certificate line {no}: cannot parse {line!r}")
    out = []
    for kind, head, triples, gammas in bundles:
        if kind == "s":
            out.append(Stacking(head, tuple(triples)))
        else:
            out.append(Packed(head[0], head[1], head[2], tuple(triples), tuple(gammas)))
    return DecompositionCertificate(tuple(out))


# ---------------------------------------------------------------- two variables

@dataclass(frozen=True)
class Coset:
    """base + integer span of ``generators``."""

    base: tuple
    generators: tuple

    @property
    def degenerate(self) -> bool:
        return len(self.generators) == 2


class _Empty:
    def __repr__(self):
        return "Empty"


Empty = _Empty()


def two_variable_lattice(group, g1, g2, h, search: int = 64):
    """All (x, y) in Z^2 with g1^x g2^y = h, for torsion-free groups with
    concrete power roots (Z^r and iterated wreath products).

    When g1, g2 are not commensurable the solution is unique if it exists
    and is searched for with |x| <= ``search``.
    """
    group = make_group(group)
    ev = lambda w: group.eval_word(w) if isinstance(w, tuple) and (not w or isinstance(w[0], Token)) else w
    g1, g2, h = ev(g1), ev(g2), ev(h)
    t1, t2 = group.is_identity(g1), group.is_identity(g2)
    if t1 and t2:
        return Coset((0, 0), ((1, 0), (0, 1))) if group.is_identity(h) else Empty
    if t1:
        y = element_power_root(group, g2, h)
        return Empty if y is None else Coset((0, y), ((1, 0),))
    if t2:
        x = element_power_root(group, g1, h)
        return Empty if x is None else Coset((x, 0), ((0, 1),))
    w = element_commensurate(group, g1, g2)
    if w is not None:
        s, t = w
        gen = (s, -t)
        span = range(-(abs(s) - 1), abs(s))
    else:
        gen = None
        span = range(-search, search + 1)
    inv1 = group.inv(g1)
    for x in sorted(span, key=lambda v: (abs(v), v)):
        y = element_power_root(group, g2, group.mul(group.pow(inv1, x), h))
        if y is not None:
            return Coset((x, y), (gen,) if gen else ())
    return Empty


# ---------------------------------------------------------------- bounds

def cap_bound(s: int, k: int, d: int) -> int:
    """Magnitude bound for an intersection of k semilinear sets of
    magnitude s in dimension d, constants taken as 1."""
    if k == 1:
        return s
    return (s * k * d + 1) ** (k * d)


@dataclass
class MagnitudeReport:
    size: int
    variables: int
    equations: int
    abelian_bound: int
    threshold: int
    box: int | None
    warnings: list = field(default_factory=list)


def magnitude_bounds(system, box: int | None = None) -> MagnitudeReport:
    """Informational bound formulas with every hidden constant set to 1.
    Warns when ``box`` is below the resulting threshold."""
    if isinstance(system, KnapsackExpression):
        system = [system]
    n = max(E.size for E in system)
    d = len({x for E in system for x in E.variables})
    k = len(system)
    s = 2 ** n
    threshold = cap_bound(s, k, d)
    rep = MagnitudeReport(n, d, k, s, threshold, box)
    if box is not None and box < threshold:
        digits = len(str(threshold))
        shown = str(threshold) if digits <= 30 else f"~10^{digits - 1}"
        rep.warnings.append(f"box {box} is below the informational bound {shown}; results are complete only inside the box")
    return rep
