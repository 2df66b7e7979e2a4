"""Power words over wreath products and the deciders built on them.

A power word is a tuple of (word, exponent) pairs.  The solvers below work
level by level: :class:`AbelianSolver` handles Z^r, and
:class:`WreathSolver` handles Z^r wr H given a solver for H.  Every solver
offers the same three questions about power words over its group: is it
trivial, which power of a word is it, and are two words commensurable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .groups import (
    FreeAbelian,
    FreeSolvable,
    Group,
    GroupError,
    IteratedWreath,
    Token,
    WreathProduct,
    invert_word,
    iterated_wreath,
    make_group,
    parse_word,
)
from .periodic import PeriodicFunction, periodic_check_any
from .progressions import ArithmeticProgression, Overflow, interval_partition, progression_sum_support

PowerWord = tuple  # tuple[tuple[Word, int], ...]

DEFAULT_GUARD = 10 ** 6


class GuardExceeded(RuntimeError):
    pass


class NotParallel(ValueError):
    pass


# ---------------------------------------------------------------- basics

def as_powerword(pw) -> tuple:
    return tuple((tuple(u), int(k)) for u, k in pw)


def pw_inverse(pw) -> tuple:
    return tuple((u, -k) for u, k in reversed(pw))


def pw_letters(pw) -> int:
    return sum(abs(k) * len(u) for u, k in pw)


def pw_reduce(pw) -> tuple:
    """Merge neighbouring powers of the same word (or its inverse) and drop
    trivial factors.  Purely syntactic, so the denotation is unchanged."""
    out: list = []
    for u, k in pw:
        if k == 0 or not u:
            continue
        while out:
            w, j = out[-1]
            if w == u:
                k += j
            elif w == invert_word(u):
                k = j - k
                u = w
            else:
                break
            out.pop()
            if k == 0:
                break
        if k:
            out.append((u, k))
    return tuple(out)


def expand(pw) -> tuple:
    out: list = []
    for u, k in pw:
        out.extend((u if k > 0 else invert_word(u)) * abs(k))
    return tuple(out)


def naive_eval(group, pw, guard: int = DEFAULT_GUARD):
    """Evaluate by full expansion.  Raises GuardExceeded above ``guard`` letters."""
    group = make_group(group)
    pw = as_powerword(pw)
    n = pw_letters(pw)
    if n > guard:
        raise GuardExceeded(f"{n} letters exceed the guard of {guard}")
    return group.eval_word(expand(pw))


def parse_powerword(group: Group, lines: Iterable[str]) -> tuple:
    """Parse lines ``(<tokens>) ^ <int>``; blank lines and # comments skipped."""
    import re

    out = []
    for no, line in enumerate(lines, 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        m = re.fullmatch(r"\((.*)\)\s*(?:\^\s*([+-]?\d+))?", s)
        if not m:
            raise GroupError(f"line {no}: expected '(<tokens>) ^ <int>'")
        try:
            word = parse_word(group, m.group(1))
        except GroupError as exc:
            raise GroupError(f"line {no}: {exc}") from None
        out.append((word, int(m.group(2)) if m.group(2) is not None else 1))
    return tuple(out)


@dataclass(frozen=True)
class PowerCompressedRay:
    """The sequence offset * period^i for 0 <= i <= length."""

    offset: tuple
    period: tuple
    length: int


def lattice_pair(a: Sequence[int], b: Sequence[int]):
    """Coprime (s, t), s > 0, with s*a = t*b generating all integer
    solutions of x*a = y*b, or None when only (0, 0) solves it.
    Both vectors must be nonzero."""
    i = next(i for i, x in enumerate(a) if x)
    if not b[i]:
        return None
    g = math.gcd(a[i], b[i])
    s, t = b[i] // g, a[i] // g
    if s < 0:
        s, t = -s, -t
    if all(s * x == t * y for x, y in zip(a, b)):
        return s, t
    return None


def divide_vectors(u: Sequence[int], v: Sequence[int]):
    """z with z*u = v, or None.  u = 0 gives 0 when v = 0."""
    if not any(u):
        return 0 if not any(v) else None
    i = next(i for i, x in enumerate(u) if x)
    if v[i] % u[i]:
        return None
    z = v[i] // u[i]
    return z if all(z * x == y for x, y in zip(u, v)) else None


# ---------------------------------------------------------------- solvers

class Solver:
    """Shared machinery; subclasses implement the group-specific questions."""

    group: Group

    def is_trivial(self, pw) -> bool:
        raise NotImplementedError

    def power_root(self, u, v):
        raise NotImplementedError

    def commensurate(self, u, v):
        raise NotImplementedError

    def element(self, word):
        raise NotImplementedError

    def is_trivial_word(self, word) -> bool:
        return self.group.is_identity(self.element(word))

    def ray_intersection(self, p: PowerCompressedRay, q: PowerCompressedRay):
        """Indices i with p_i in supp(q), as an ArithmeticProgression or None."""
        if p == q:
            return ArithmeticProgression(0, 1, p.length + 1)
        w = self.commensurate(p.period, q.period)
        if w is None:
            raise NotParallel("rays are not parallel")
        s, t = w
        if t < 0:
            s, t = -s, -t
        head = pw_inverse(p.offset) + tuple(q.offset)
        for t0 in range(t):
            s0 = self.power_root(p.period, pw_reduce(head + ((q.period, t0),)))
            if s0 is None:
                continue
            # indices s0 + s*y with 0 <= t0 + t*y <= len(q) and 0 <= i <= len(p)
            lo, hi = 0, (q.length - t0) // t
            if s > 0:
                lo = max(lo, -(s0 // s))
                hi = min(hi, (p.length - s0) // s)
            else:
                lo = max(lo, -((p.length - s0) // -s))
                hi = min(hi, s0 // -s)
            if lo > hi:
                return None
            first, last = s0 + s * lo, s0 + s * hi
            return ArithmeticProgression(min(first, last), abs(s), hi - lo + 1)
        return None


class AbelianSolver(Solver):
    def __init__(self, r: int):
        self.r = r
        self.group = FreeAbelian(r)
        self._vec: dict = {}

    def element(self, word):
        v = self._vec.get(word)
        if v is None:
            acc = [0] * self.r
            for tok in word:
                acc[tok.index - 1] += tok.sign
            v = tuple(acc)
            self._vec[word] = v
        return v

    def value(self, pw) -> tuple:
        acc = [0] * self.r
        for u, k in pw:
            if k:
                for i, x in enumerate(self.element(u)):
                    acc[i] += k * x
        return tuple(acc)

    def is_trivial(self, pw) -> bool:
        return not any(self.value(pw))

    def power_root(self, u, v):
        return divide_vectors(self.element(u), self.value(v))

    def commensurate(self, u, v):
        a, b = self.element(u), self.element(v)
        if not any(a) or not any(b):
            raise ValueError("commensurate needs nontrivial elements")
        return lattice_pair(a, b)


class ActiveRay(NamedTuple):
    value: tuple  # element of A
    offset: tuple  # power word over H
    period: tuple  # word over H
    count: int  # number of occurrences (>= 1)


class WreathSolver(Solver):
    """Z^r wr H, given a solver for the torsion-free group H."""

    def __init__(self, group: WreathProduct, inner: Solver):
        if not isinstance(group.A, FreeAbelian):
            raise GroupError("left factor must be free abelian")
        self.group = group
        self.inner = inner
        self.r = group.A.r
        self.shift = group.shift
        self._elem: dict = {}
        self._trivial: dict = {}
        self._root: dict = {}
        self._comm: dict = {}

    # plain words are short, so they are evaluated concretely
    def element(self, word):
        e = self._elem.get(word)
        if e is None:
            e = self.group.eval_word(word)
            self._elem[word] = e
        return e

    def sigma(self, word) -> tuple:
        s = self.shift
        return tuple(t for t in word if t.level < s)

    def sigma_pw(self, pw) -> tuple:
        return pw_reduce(tuple((self.sigma(u), k) for u, k in pw))

    def _blocks(self, word):
        """Split into the leading H-word and blocks (a, h): a run of A-letters
        summed to a vector, followed by the H-letters up to the next A-letter."""
        s = self.shift
        head: list = []
        blocks: list = []
        for tok in word:
            if tok.level >= s:
                if not blocks or blocks[-1][1]:
                    blocks.append([[0] * self.r, []])
                blocks[-1][0][tok.index - 1] += tok.sign
            elif blocks:
                blocks[-1][1].append(tok)
            else:
                head.append(tok)
        return tuple(head), [(tuple(a), tuple(h)) for a, h in blocks]

    def active_rays(self, pw) -> list[ActiveRay]:
        """Rays of positions at which the powers place nonzero A-values.

        For u^k with u = g0 g1 ... gl (g0 in H, gi in AH) the i-th block
        writes a_i at sigma(prefix) * s_{0,i-1} * (s_{i,l} s_{0,i-1})^j,
        0 <= j < k, where s_{x,y} = sigma(g_x ... g_y).
        """
        rays = []
        prefix: list = []
        for u, k in pw:
            if k == 0 or not u:
                continue
            if k < 0:
                u, k = invert_word(u), -k
            head, blocks = self._blocks(u)
            su = self.sigma(u)
            before = head
            for i, (a, h) in enumerate(blocks):
                after = tuple(t for _, hh in blocks[i + 1:] for t in hh)
                if any(a):
                    rays.append(ActiveRay(a, pw_reduce(tuple(prefix) + ((before, 1),)), h + after + before, k))
                before = before + h
            prefix.append((su, k))
        return rays

    def tau_at(self, rays: Sequence[ActiveRay], position) -> tuple:
        """tau of the power word at the H-position given as a power word."""
        acc = [0] * self.r
        inner = self.inner
        for ray in rays:
            rel = pw_reduce(pw_inverse(ray.offset) + tuple(position))
            if inner.is_trivial_word(ray.period):
                if inner.is_trivial(rel):
                    for i, x in enumerate(ray.value):
                        acc[i] += ray.count * x
            else:
                x = inner.power_root(ray.period, rel)
                if x is not None and 0 <= x < ray.count:
                    for i, y in enumerate(ray.value):
                        acc[i] += y
        return tuple(acc)

    def _classes(self, idx: list[int], rays) -> list[list[int]]:
        classes: list[list[int]] = []
        for i in idx:
            for cls in classes:
                if self._commensurate_h(rays[cls[0]].period, rays[i].period) is not None:
                    cls.append(i)
                    break
            else:
                classes.append([i])
        return classes

    def _commensurate_h(self, u, v):
        key = (u, v)
        if key not in self._comm:
            self._comm[key] = self.inner.commensurate(u, v)
        return self._comm[key]

    def is_trivial(self, pw) -> bool:
        pw = pw_reduce(as_powerword(pw))
        if not pw:
            return True
        hit = self._trivial.get(pw)
        if hit is not None:
            return hit
        res = self._decide(pw)
        self._trivial[pw] = res
        return res

    def _decide(self, pw) -> bool:
        inner = self.inner
        if not inner.is_trivial(self.sigma_pw(pw)):
            return False
        rays = self.active_rays(pw)
        if not rays:
            return True
        bound = len(rays) + 1
        moving = [i for i, ray in enumerate(rays) if not inner.is_trivial_word(ray.period)]
        moving_set = set(moving)
        hrays = [PowerCompressedRay(r.offset, r.period, r.count - 1) for r in rays]
        for cls in self._classes(moving, rays):
            for i in cls:
                M = []
                for j in cls:
                    ap = inner.ray_intersection(hrays[i], hrays[j])
                    if ap is not None:
                        M.append((ap, rays[j].value))
                T = progression_sum_support(M, bound)
                if T is Overflow:
                    # at most len(rays) - 1 other rays can cross ray i, each
                    # in at most one point, so some nonzero point survives
                    return False
                for t in T:
                    pos = rays[i].offset + ((rays[i].period, t),)
                    if any(self.tau_at(rays, pos)):
                        return False
        for i, ray in enumerate(rays):
            if i not in moving_set and any(self.tau_at(rays, ray.offset)):
                return False
        return True

    def tau_words(self, word) -> list[tuple[tuple, tuple]]:
        """Nonzero values of tau(word) with a representative H-word per point."""
        s = self.shift
        buckets: dict = {}
        prefix: list = []
        for tok in word:
            if tok.level < s:
                prefix.append(tok)
                continue
            w = tuple(prefix)
            h = self.inner.element(w)
            entry = buckets.setdefault(h, [w, [0] * self.r])
            entry[1][tok.index - 1] += tok.sign
        return [(w, tuple(v)) for w, v in buckets.values() if any(v)]

    def power_root(self, u, v):
        u = tuple(u)
        v = pw_reduce(as_powerword(v))
        key = (u, v)
        if key in self._root:
            return self._root[key]
        res = self._power_root(u, v)
        self._root[key] = res
        return res

    def _power_root(self, u, v):
        inner = self.inner
        su = self.sigma(u)
        if not inner.is_trivial_word(su):
            z = inner.power_root(su, self.sigma_pw(v))
            if z is None:
                return None
            return z if self.is_trivial(v + ((u, -z),)) else None
        if not inner.is_trivial(self.sigma_pw(v)):
            return None
        tu = self.tau_words(u)
        if not tu:
            return 0 if self.is_trivial(v) else None
        w, a = tu[0]
        b = self.tau_at(self.active_rays(v), ((w, 1),))
        z = divide_vectors(a, b)
        if z is None:
            return None
        return z if self.is_trivial(v + ((u, -z),)) else None

    def commensurate(self, u, v):
        u, v = tuple(u), tuple(v)
        if self.is_trivial_word(u) or self.is_trivial_word(v):
            raise ValueError("commensurate needs nontrivial elements")
        inner = self.inner
        su, sv = self.sigma(u), self.sigma(v)
        tu, tv = inner.is_trivial_word(su), inner.is_trivial_word(sv)
        if tu != tv:
            return None
        if not tu:
            w = inner.commensurate(su, sv)
            if w is None:
                return None
            s, t = w
            return (s, t) if self.is_trivial(((u, s), (v, -t))) else None
        fu = self.element(u).support
        fv = self.element(v).support
        keys = list(set(fu) | set(fv))
        zero = (0,) * self.r
        a = [x for h in keys for x in fu.get(h, zero)]
        b = [x for h in keys for x in fv.get(h, zero)]
        return lattice_pair(a, b)


def solver_for(group) -> Solver:
    group = make_group(group)
    if isinstance(group, FreeSolvable):
        group = group.ambient
    if isinstance(group, FreeAbelian):
        return AbelianSolver(group.r)
    if isinstance(group, WreathProduct) and isinstance(group.A, FreeAbelian):
        return WreathSolver(group, solver_for(group.H))
    raise GroupError(f"no power word solver for {group.descriptor}")


# ---------------------------------------------------------------- public API

def _words(group: Group, w) -> tuple:
    return parse_word(group, w) if isinstance(w, str) else tuple(w)


def powerpp_zr(r: int, u, v):
    """z with u^z = v in Z^r (v a power word), or None."""
    solver = AbelianSolver(r)
    return solver.power_root(_words(solver.group, u), as_powerword(v))


def commensurate(group, u, v):
    """(s, t) generating all (x, y) with u^x = v^y, or None."""
    solver = solver_for(group)
    return solver.commensurate(_words(solver.group, u), _words(solver.group, v))


def ray_intersection(group, p: PowerCompressedRay, q: PowerCompressedRay):
    """Int(p, q) for parallel rays p, q in ``group``."""
    return solver_for(group).ray_intersection(p, q)


def tau_eval(group, u, v) -> tuple:
    """tau(u)(v) for a power word u over Z^r wr H and a power word v over H."""
    solver = solver_for(group)
    if not isinstance(solver, WreathSolver):
        raise GroupError("tau_eval needs a wreath product")
    return solver.tau_at(solver.active_rays(as_powerword(u)), as_powerword(v))


def normalize_powerword(group, pw) -> tuple:
    """An equivalent power word whose periods each lie in A*H.

    Each u^k with u = g0 g1 ... gl becomes
    prod_i [ s_{0,i-1} (g_i s_{i+1,l} s_{0,i-1})^k s_{0,i-1}^-1 sigma(u)^-k ] sigma(u)^k.
    """
    group = make_group(group)
    if not isinstance(group, WreathProduct):
        raise GroupError("normalize_powerword needs a wreath product")
    s = group.shift
    out: list = []
    for u, k in as_powerword(pw):
        if k == 0 or not u:
            continue
        if k < 0:
            u, k = invert_word(u), -k
        head: list = []
        blocks: list = []
        for tok in u:
            if tok.level >= s:
                if not blocks or blocks[-1][1]:
                    blocks.append([[], []])
                blocks[-1][0].append(tok)
            elif blocks:
                blocks[-1][1].append(tok)
            else:
                head.append(tok)
        su = tuple(t for t in u if t.level < s)
        if not blocks or (not head and len(blocks) == 1):
            out.append((u, k))
            continue
        before = tuple(head)
        for i, (a, h) in enumerate(blocks):
            after = tuple(t for _, hh in blocks[i + 1:] for t in hh)
            out.append((before, 1))
            out.append((tuple(a) + tuple(h) + after + before, k))
            out.append((invert_word(before), 1))
            out.append((invert_word(su), k))
            before = before + tuple(h)
        out.append((su, k))
    return tuple((w, e) for w, e in out if w and e)


def is_normalized(group: WreathProduct, pw) -> bool:
    """Every period is a block of A-letters followed by H-letters."""
    s = group.shift
    for u, _ in pw:
        seen_h = False
        for tok in u:
            if tok.level < s:
                seen_h = True
            elif seen_h:
                return False
    return True


def powerwp_wreath_abelian(group, pw) -> bool:
    solver = solver_for(group)
    return solver.is_trivial(as_powerword(pw))


def powerpp_wreath(group, u, v):
    solver = solver_for(group)
    return solver.power_root(_words(solver.group, u), as_powerword(v))


def decide_powerword(group, pw, oracle: bool = False) -> bool:
    """Is the power word trivial?  Dispatches on the group type;
    ``oracle`` forces letter-by-letter evaluation."""
    group = make_group(group)
    pw = as_powerword(pw)
    if oracle:
        return group.is_identity(naive_eval(group, pw))
    if isinstance(group, FreeSolvable):
        ambient = group.ambient
        return solver_for(ambient).is_trivial(magnus_powerword(group.d, group.r, pw))
    if isinstance(group, FreeAbelian) or (isinstance(group, WreathProduct) and isinstance(group.A, FreeAbelian)):
        return solver_for(group).is_trivial(pw)
    if isinstance(group, WreathProduct) and isinstance(group.H, FreeAbelian) and group.H.r == 1:
        return powerwp_gwrz(group, pw)
    if group.finite:
        return group.is_identity(naive_eval(group, pw))
    raise GroupError(f"no power word procedure for {group.descriptor}")


def powerwp_iterated(m: int, r: int, pw) -> bool:
    if m == 0:
        return AbelianSolver(r).is_trivial(as_powerword(pw))
    return solver_for(iterated_wreath(m, r)).is_trivial(as_powerword(pw))


def powerpp_iterated(m: int, r: int, u, v):
    solver = AbelianSolver(r) if m == 0 else solver_for(iterated_wreath(m, r))
    return solver.power_root(_words(solver.group, u), as_powerword(v))


def magnus_powerword(d: int, r: int, pw) -> tuple:
    """Power word over W_{d-1,r} for a power word over the free generators."""
    fs = FreeSolvable(d, r)
    return tuple((fs.embed_word(u), k) for u, k in as_powerword(pw))


# ---------------------------------------------------------------- G wr Z

class _Power(NamedTuple):
    start: int  # cursor before the power
    step: int  # sigma(u) in Z
    values: dict  # tau(u) as position -> element of G
    count: int


def _power_value(A: Group, p: _Power, x: int):
    """tau(u^count)(x - start): ordered product over the copies hitting x."""
    rel = x - p.start
    if p.step == 0:
        v = p.values.get(rel)
        return A.identity() if v is None else A.pow(v, p.count)
    hits = []
    for y in p.values:
        q, r = divmod(rel - y, p.step)
        if r == 0 and 0 <= q < p.count:
            hits.append(q)
    acc = A.identity()
    for j in sorted(hits):
        acc = A.mul(acc, p.values[rel - j * p.step])
    return acc


def _middle_table(A: Group, p: _Power) -> list:
    """Value of a power in its periodic middle stretch, by residue mod |step|."""
    e = abs(p.step)
    table = []
    for res in range(e):
        ys = [y for y in p.values if (y - res) % e == 0]
        # copy index j = (rel - y)/step grows as y moves against the step
        ys.sort(reverse=p.step > 0)
        acc = A.identity()
        for y in ys:
            acc = A.mul(acc, p.values[y])
        table.append(acc)
    return table


def powerwp_gwrz(group, pw) -> bool:
    """Power word problem in G wr Z for finite G or G = UT(3,Z).

    Positions are cut into intervals on which every power is either absent,
    irregular (its short ends) or periodic with period |sigma(u_i)|;
    irregular pieces are checked pointwise and periodic ones with the
    periodic-words checker.
    """
    group = make_group(group)
    if not (isinstance(group, WreathProduct) and isinstance(group.H, FreeAbelian) and group.H.r == 1):
        raise GroupError("powerwp_gwrz needs a group of the form G wr Z")
    A = group.A
    if not (A.finite or A.nilpotency_class is not None):
        raise GroupError(f"unsupported left factor {A.descriptor}")
    powers: list[_Power] = []
    cursor = 0
    for u, k in pw_reduce(as_powerword(pw)):
        if k < 0:
            u, k = invert_word(u), -k
        e = group.eval_word(u)
        step = e.cursor[0]
        if e.support:
            powers.append(_Power(cursor, step, {p[0]: v for p, v in e.support.items()}, k))
        cursor += step * k
    if cursor != 0:
        return False
    if not powers:
        return True
    ranges = []  # (lo, hi) intervals fed to the partitioner
    kinds = []  # (power index, 'occ' | 'mid')
    for idx, p in enumerate(powers):
        lo, hi = min(p.values), max(p.values)
        span = (p.count - 1) * p.step
        if p.step == 0:
            for y in p.values:
                ranges.append((p.start + y, p.start + y))
                kinds.append((idx, "occ"))
            continue
        if p.step > 0:
            occ, mid = (lo, hi + span), (hi, lo + span)
        else:
            occ, mid = (lo + span, hi), (hi + span, lo)
        ranges.append((p.start + occ[0], p.start + occ[1]))
        kinds.append((idx, "occ"))
        if mid[0] <= mid[1]:
            ranges.append((p.start + mid[0], p.start + mid[1]))
            kinds.append((idx, "mid"))
    tables: dict = {}
    for lo, hi, members in interval_partition(ranges):
        occ = sorted({kinds[m][0] for m in members if kinds[m][1] == "occ"})
        mid = {kinds[m][0] for m in members if kinds[m][1] == "mid"}
        if all(i in mid for i in occ):
            fs = []
            for i in occ:
                p = powers[i]
                if i not in tables:
                    tables[i] = _middle_table(A, p)
                e = abs(p.step)
                tab = tables[i]
                fs.append(PeriodicFunction(tuple(tab[(lo + j - p.start) % e] for j in range(e))))
            if not periodic_check_any(A, fs, hi - lo):
                return False
        else:
            for x in range(lo, hi + 1):
                acc = A.identity()
                for i in occ:
                    acc = A.mul(acc, _power_value(A, powers[i], x))
                if not A.is_identity(acc):
                    return False
    return True


# ---------------------------------------------------------------- concrete elements

def element_power_root(group: Group, u, v):
    """z with u^z = v for concrete elements of Z^r or an iterated wreath
    product over it, or None."""
    if isinstance(group, FreeAbelian):
        return divide_vectors(u, v)
    if not isinstance(group, WreathProduct) or not isinstance(group.A, FreeAbelian):
        raise GroupError(f"no concrete power root for {group.descriptor}")
    H = group.H
    if not H.is_identity(u.cursor):
        z = element_power_root(H, u.cursor, v.cursor)
    elif not H.is_identity(v.cursor):
        return None
    elif not u.support:
        return 0 if not v.support else None
    else:
        p, a = next(iter(u.support.items()))
        z = divide_vectors(a, v.support.get(p, group.A.identity()))
    if z is None:
        return None
    return z if group.pow(u, z) == v else None


def element_commensurate(group: Group, u, v):
    """Concrete counterpart of :meth:`Solver.commensurate`."""
    if group.is_identity(u) or group.is_identity(v):
        raise ValueError("commensurate needs nontrivial elements")
    if isinstance(group, FreeAbelian):
        return lattice_pair(u, v)
    if not isinstance(group, WreathProduct) or not isinstance(group.A, FreeAbelian):
        raise GroupError(f"no concrete commensurability test for {group.descriptor}")
    H = group.H
    tu, tv = H.is_identity(u.cursor), H.is_identity(v.cursor)
    if tu != tv:
        return None
    if not tu:
        w = element_commensurate(H, u.cursor, v.cursor)
        if w is None:
            return None
        s, t = w
        return w if group.pow(u, s) == group.pow(v, t) else None
    zero = group.A.identity()
    keys = list(set(u.support) | set(v.support))
    a = [x for h in keys for x in u.support.get(h, zero)]
    b = [x for h in keys for x in v.support.get(h, zero)]
    return lattice_pair(a, b)
