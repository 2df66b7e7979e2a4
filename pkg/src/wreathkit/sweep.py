"""Seeded instance generators and oracle-equivalence suites."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .groups import Token, invert_word, make_group
from .hardness import DNF, IDENTITY, Literal, compile_formula, gprogram_eval
from .knapsack import (
    KnapsackExpression,
    normalize_expression,
    nu_decompose,
    solve_box,
    verify_certificate,
)
from .periodic import PeriodicFunction, periodic_check, recurrence_order_bound
from .powerword import decide_powerword, naive_eval, pw_inverse

DEFAULT_SEED = 20240601


def random_word(rng: random.Random, group, max_len: int, min_len: int = 1) -> tuple:
    """Random word over the generators of Z^r or an iterated wreath product."""
    r = group.r
    return tuple(
        Token(rng.randrange(group.num_levels), rng.randint(1, r), rng.choice((1, -1)))
        for _ in range(rng.randint(min_len, max_len))
    )


def _top_letter(rng, group) -> Token:
    return Token(group.num_levels - 1, rng.randint(1, group.r), rng.choice((1, -1)))


def random_powerword(rng: random.Random, group, max_factors: int = 6, max_period: int = 6, max_exp: int = 512) -> tuple:
    """A mix of unstructured power words and planted trivial ones, some of
    them perturbed; every instance has at most ``max_factors`` factors."""
    group = make_group(group)
    e = lambda: rng.randint(-max_exp, max_exp)
    kind = rng.randrange(6)
    if kind == 0 or max_factors < 4:
        return tuple((random_word(rng, group, max_period), e()) for _ in range(rng.randint(1, max_factors)))
    if kind == 1:
        # half a power word followed by its inverse, with one exponent nudged
        half = tuple((random_word(rng, group, max_period), e()) for _ in range(max_factors // 2))
        pw = half + pw_inverse(half)
        if rng.random() < 0.5:
            i = rng.randrange(len(pw))
            pw = pw[:i] + ((pw[i][0], pw[i][1] + rng.choice((1, -1))),) + pw[i + 1:]
        return pw
    if kind == 2:
        # commuting conjugates of top-level letters
        w1 = random_word(rng, group, max(1, (max_period - 1) // 2))
        w2 = random_word(rng, group, max(1, (max_period - 1) // 2))
        u = w1 + (_top_letter(rng, group),) + invert_word(w1)
        v = w2 + (_top_letter(rng, group),) + invert_word(w2)
        a, b = e(), e()
        if rng.random() < 0.3:
            b += 1
        return ((u, a), (v, b), (u, -a), (v, -b))
    if kind == 3:
        # u^a (uu)^b u^c with c = -a - 2b, sometimes off by one
        u = random_word(rng, group, max_period // 2)
        a, b = e(), e() // 2
        c = -a - 2 * b + (rng.choice((1, -1)) if rng.random() < 0.4 else 0)
        return ((u, a), (u + u, b), (u, c))
    if kind == 4:
        # conjugation w u^k w^-1 u^-k ... u^k w u^-k w^-1 style
        w = random_word(rng, group, max_period - 1)
        u = random_word(rng, group, max_period)
        k = e()
        pw = ((w, 1), (u, k), (invert_word(w), 1), (w, 1), (u, -k), (invert_word(w), 1))
        if rng.random() < 0.4:
            pw = pw[:5] + ((invert_word(w) + (_top_letter(rng, group),), 1),)
        return pw
    # short exponents, so letter-level cancellation happens often
    return tuple((random_word(rng, group, 2), rng.randint(-3, 3)) for _ in range(rng.randint(1, max_factors)))


def planted_expression(rng: random.Random, desc: str = "W(1,1)", max_d: int = 4, max_nu: int = 3):
    """A random expression closed off so that a random valuation solves it."""
    g = make_group(desc)
    d = rng.randint(1, max_d)
    atoms: list = []
    for i in range(d):
        if rng.random() < 0.4:
            atoms.append(random_word(rng, g, 2))
        atoms.append((random_word(rng, g, 3), f"x{i + 1}"))
    nu = {f"x{i + 1}": rng.randint(0, max_nu) for i in range(d)}
    flat: tuple = ()
    for a in atoms:
        flat += a[0] * nu[a[1]] if isinstance(a[-1], str) else a
    atoms.append(invert_word(flat))
    return KnapsackExpression.from_atoms(g, atoms), nu


def random_periodic(rng: random.Random, group, max_period: int = 5, max_funcs: int = 4) -> list:
    """Random periodic functions; about half are closed off to be trivial."""
    group = make_group(group)
    if group.finite:
        elems = group.elements()
    else:  # UT3: small entries keep the products readable
        elems = [(a, b, c) for a in (-1, 0, 1) for b in (-1, 0, 1) for c in (-1, 0, 1)]
    k = rng.randint(1, max_funcs)
    if rng.random() < 0.5:
        return [PeriodicFunction(tuple(rng.choice(elems) for _ in range(rng.randint(1, max_period)))) for _ in range(k)]
    p = rng.randint(1, max_period)
    periods = [rng.choice([q for q in range(1, p + 1) if p % q == 0]) for _ in range(k)]
    fs = [PeriodicFunction(tuple(rng.choice(elems) for _ in range(q))) for q in periods]
    closing = []
    for t in range(p):
        acc = group.identity()
        for f in fs:
            acc = group.mul(acc, f(t))
        closing.append(group.inv(acc))
    if rng.random() < 0.3:
        closing[rng.randrange(p)] = rng.choice(elems)
    return fs + [PeriodicFunction(tuple(closing))]


def exhaustive_periodic(group, fs, T: int) -> bool:
    mul = group.mul
    for t in range(T + 1):
        acc = group.identity()
        for f in fs:
            acc = mul(acc, f(t))
        if not group.is_identity(acc):
            return False
    return True


def all_dnfs(max_vars: int = 3, max_terms: int = 3):
    """Every DNF over V0..V{n-1} (n <= max_vars) with 1..max_terms distinct
    terms, under every split into existential prefix and universal rest."""
    for n in range(1, max_vars + 1):
        names = [f"V{i}" for i in range(n)]
        lits = [Literal(v, s) for v in names for s in (True, False)]
        terms = [t for k in range(1, n + 1) for t in itertools.combinations(lits, k) if len({l.var for l in t}) == k]
        for k in range(1, max_terms + 1):
            for ts in itertools.combinations(terms, k):
                for m in range(n + 1):
                    yield DNF(ts, tuple(names[:m]), tuple(names[m:]))


@dataclass
class SweepReport:
    suite: str
    seed: int
    instances: int = 0
    mismatches: list = field(default_factory=list)
    lines: list = field(default_factory=list)


def sweep_powerwp(n: int, seed: int, group: str = "W(1,1)") -> SweepReport:
    rng = random.Random(seed)
    g = make_group(group)
    rep = SweepReport("powerwp", seed)
    for i in range(n):
        pw = random_powerword(rng, g)
        got = decide_powerword(g, pw)
        want = g.is_identity(naive_eval(g, pw))
        rep.instances += 1
        rep.lines.append(f"{i} {'trivial' if got else 'nontrivial'}")
        if got != want:
            rep.mismatches.append(i)
    return rep


def sweep_periodic(n: int, seed: int, group: str = "UT3") -> SweepReport:
    rng = random.Random(seed)
    g = make_group(group)
    rep = SweepReport("periodic", seed)
    for i in range(n):
        fs = random_periodic(rng, g)
        L = math.lcm(*(f.period for f in fs))
        got = periodic_check(g, fs, 10 * L)
        want = exhaustive_periodic(g, fs, L - 1)
        d = recurrence_order_bound(g.nilpotency_class, [f.period for f in fs]).order
        early = exhaustive_periodic(g, fs, min(d, L) - 1)
        rep.instances += 1
        rep.lines.append(f"{i} {'trivial' if got else 'nontrivial'}")
        if got != want or (early and not want):
            rep.mismatches.append(i)
    return rep


def sweep_knapsack(n: int, seed: int, group: str = "W(1,1)", box: int = 4) -> SweepReport:
    rng = random.Random(seed)
    rep = SweepReport("knapsack", seed)
    for i in range(n):
        E, nu = planted_expression(rng, group, max_d=3, max_nu=box)
        sols = solve_box(E, box)
        ok = nu in sols
        En, y = normalize_expression(E)
        for s in sols:
            full = {**s, y: 1}
            ok = ok and verify_certificate(En, full, nu_decompose(En, full))
        rep.instances += 1
        rep.lines.append(f"{i} solutions {len(sols)}")
        if not ok:
            rep.mismatches.append(i)
    return rep


def sweep_hardness(n: int, seed: int) -> SweepReport:
    rng = random.Random(seed)
    formulas = list(all_dnfs(3, 3))
    rep = SweepReport("hardness", seed)
    for i in range(n):
        F = rng.choice(formulas)
        P = compile_formula(F)
        names = F.variables
        ok = all(
            (gprogram_eval(P, dict(zip(names, bits))) == IDENTITY) == F(dict(zip(names, bits)))
            for bits in itertools.product((0, 1), repeat=len(names))
        )
        rep.instances += 1
        rep.lines.append(f"{i} length {len(P)}")
        if not ok:
            rep.mismatches.append(i)
    return rep


SUITES = {
    "powerwp": sweep_powerwp,
    "periodic": sweep_periodic,
    "knapsack": sweep_knapsack,
    "hardness": sweep_hardness,
}
