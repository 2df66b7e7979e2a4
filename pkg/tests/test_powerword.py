import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wreathkit.groups import GroupError, Token, WreathElement, invert_word, make_group
from wreathkit.powerword import (
    GuardExceeded,
    PowerCompressedRay,
    commensurate,
    decide_powerword,
    is_normalized,
    naive_eval,
    normalize_powerword,
    powerpp_iterated,
    powerpp_wreath,
    powerpp_zr,
    powerwp_gwrz,
    powerwp_iterated,
    powerwp_wreath_abelian,
    pw_inverse,
    ray_intersection,
    tau_eval,
)
from wreathkit.progressions import ArithmeticProgression as AP
from wreathkit.sweep import random_powerword, random_word

T, Ti = Token(0, 1, 1), Token(0, 1, -1)
A, Ai = Token(1, 1, 1), Token(1, 1, -1)
W11 = make_group("W(1,1)")


def vec(*coords):
    """Word over Z^r for an integer vector."""
    out = []
    for i, c in enumerate(coords, 1):
        out.extend([Token(0, i, 1 if c > 0 else -1)] * abs(c))
    return tuple(out)


# ---------------------------------------------------------------- oracle

def test_naive_eval_examples():
    assert W11.is_identity(naive_eval(W11, [((T,), 0)]))
    Z = make_group("Z^1")
    assert naive_eval(Z, [((T,), 37), ((Ti,), 37)]) == (0,)
    assert naive_eval(W11, [((A, T), 3)]) == WreathElement({(0,): (1,), (1,): (1,), (2,): (1,)}, (3,))


def test_naive_eval_guard():
    with pytest.raises(GuardExceeded):
        naive_eval(W11, [((A, T), 10**7)])


# ---------------------------------------------------------------- normalization

def test_normalize_keeps_AH_periods():
    pw = (((A, T), 5),)
    assert normalize_powerword(W11, pw) == pw


def test_normalize_example():
    pw = (((T, A), 5),)
    out = normalize_powerword(W11, pw)
    assert is_normalized(W11, out)
    assert naive_eval(W11, out) == naive_eval(W11, pw)


def test_normalize_sweep():
    G = make_group("W(1,2)")
    rng = random.Random(9)
    for _ in range(500):
        pw = tuple((random_word(rng, G, 5), rng.randint(-64, 64)) for _ in range(rng.randint(1, 3)))
        out = normalize_powerword(G, pw)
        assert is_normalized(G, out)
        assert naive_eval(G, out) == naive_eval(G, pw)


def test_normalize_needs_wreath():
    with pytest.raises(GroupError):
        normalize_powerword("Z^2", [])


# ---------------------------------------------------------------- Z^r

def test_powerpp_zr_examples():
    assert powerpp_zr(2, vec(2, 4), [(vec(6, 12), 1)]) == 3
    assert powerpp_zr(2, vec(2, 4), [(vec(3, 6), 1)]) is None
    assert powerpp_zr(2, (), [((), 1)]) == 0


@given(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_powerpp_zr_division_oracle(u, v):
    got = powerpp_zr(2, vec(*u), [(vec(*v), 1)])
    sols = [z for z in range(-25, 26) if (z * u[0], z * u[1]) == v]
    if u == (0, 0):
        assert got == (0 if v == (0, 0) else None)
    else:
        assert got == (sols[0] if sols else None)


# ---------------------------------------------------------------- commensurability

def brute_lattice(G, u, v, bound):
    eu, ev = G.eval_word(u), G.eval_word(v)
    pu = {x: G.pow(eu, x) for x in range(-bound, bound + 1)}
    pv = {y: G.pow(ev, y) for y in range(-bound, bound + 1)}
    return {(x, y) for x in pu for y in pv if pu[x] == pv[y]}


def lattice_points(w, bound):
    if w is None:
        return {(0, 0)}
    s, t = w
    return {(k * s, k * t) for k in range(-2 * bound, 2 * bound + 1) if abs(k * s) <= bound and abs(k * t) <= bound}


def test_commensurate_examples():
    Z = make_group("Z^1")
    assert commensurate(Z, (T, T), (T, T, T)) == (3, 2)
    assert commensurate("Z^2", (Token(0, 1, 1),), (Token(0, 2, 1),)) is None
    assert commensurate(W11, (A, T), (T,)) is None
    assert brute_lattice(W11, (A, T), (T,), 10) == {(0, 0)}


def test_commensurate_rejects_trivial():
    with pytest.raises((GroupError, ValueError)):
        commensurate(W11, (), (T,))


@pytest.mark.parametrize("desc", ["W(1,1)", "W(2,1)"])
def test_commensurate_against_brute_force(desc):
    G = make_group(desc)
    rng = random.Random(desc)
    done = 0
    while done < 60:
        base = random_word(rng, G, 3)
        u = rng.choice([base, base * 2, random_word(rng, G, 4)])
        v = rng.choice([base * 3, invert_word(base) * 2, random_word(rng, G, 4), (T,) * rng.randint(1, 3)])
        if G.is_identity(G.eval_word(u)) or G.is_identity(G.eval_word(v)):
            continue
        w = commensurate(G, u, v)
        if w is not None:
            import math

            s, t = w
            assert math.gcd(s, t) == 1
            assert G.pow(G.eval_word(u), s) == G.pow(G.eval_word(v), t)
        assert brute_lattice(G, u, v, 12) == lattice_points(w, 12)
        done += 1


# ---------------------------------------------------------------- rays

def ray_points(G, ray):
    start = naive_eval(G, ray.offset)
    step = G.eval_word(ray.period)
    out, cur = [], start
    for _ in range(ray.length + 1):
        out.append(cur)
        cur = G.mul(cur, step)
    return out


def brute_intersection(G, p, q):
    qs = set(map(lambda e: G.key(e), ray_points(G, q)))
    return [i for i, x in enumerate(ray_points(G, p)) if G.key(x) in qs]


def test_ray_intersection_example():
    Z = make_group("Z^1")
    p = PowerCompressedRay((((T,), 1),), (T, T), 4)
    q = PowerCompressedRay((), (T, T, T), 6)
    assert ray_intersection(Z, p, q) == AP(1, 3, 2)
    assert ray_intersection(Z, p, p) == AP(0, 1, 5)
    p2 = PowerCompressedRay((), (T, T), 2)
    q2 = PowerCompressedRay((((T,), 1),), (T, T), 2)
    assert ray_intersection(Z, p2, q2) is None


def test_ray_intersection_exhaustive_small():
    Z = make_group("Z^1")
    checked = 0
    for a, b, p_per, q_per in itertools.product(range(0, 7), range(0, 7), (1, 2, 3), (1, 2, -2)):
        p = PowerCompressedRay((((T,), a),), (T,) * p_per, 5)
        per = (T,) * q_per if q_per > 0 else (Ti,) * -q_per
        q = PowerCompressedRay((((T,), b),), per, 6)
        got = ray_intersection(Z, p, q)
        want = brute_intersection(Z, p, q)
        assert (list(got.positions()) if got else []) == want
        checked += 1
    assert checked > 100


# ---------------------------------------------------------------- tau and wreath deciders

def test_tau_eval_examples():
    u = [((A, T), 2**40)]
    assert tau_eval(W11, u, [((T,), 17)]) == (1,)
    assert tau_eval(W11, u, [((T,), 2**40)]) == (0,)
    assert tau_eval(W11, [((T, T), 5)], [((T,), 3)]) == (0,)


def test_tau_eval_small_oracle():
    for k in range(0, 6):
        x = naive_eval(W11, [((A, T), k)])
        for j in range(-2, 8):
            assert tau_eval(W11, [((A, T), k)], [((T,), j)]) == W11.tau_at(x, (j,))


def test_powerwp_wreath_abelian_examples():
    rng = random.Random(4)
    for _ in range(10):
        u = random_word(rng, W11, 5)
        assert powerwp_wreath_abelian(W11, [(u, 2**50), (u, -(2**50))])
    big = [((A, T), 2**30), ((Ti, Ai), 2**30)]
    assert powerwp_wreath_abelian(W11, big)
    small = [((A, T), 4), ((Ti, Ai), 4)]
    assert W11.is_identity(naive_eval(W11, small))


def test_powerpp_wreath_examples():
    assert powerpp_wreath(W11, (T,), [((T,), 2**60)]) == 2**60
    assert powerpp_wreath(W11, (A,), [((A,), 12)]) == 12
    assert powerpp_wreath(W11, (A,), [((T,), 1)]) is None


def test_powerpp_iterated_against_scan():
    G = make_group("W(2,1)")
    rng = random.Random(8)
    for _ in range(100):
        u = random_word(rng, G, 4)
        k = rng.randint(-15, 15)
        v = [(u, k)] if rng.random() < 0.6 else [(random_word(rng, G, 4), 1)]
        eu, target = G.eval_word(u), naive_eval(G, v)
        truth = [z for z in range(-30, 31) if G.pow(eu, z) == target]
        got = powerpp_iterated(2, 1, u, v)
        if truth:
            assert got in truth
        else:
            assert got is None or abs(got) > 30 and G.pow(eu, got) == target


def test_identity_power_word():
    assert powerwp_iterated(2, 1, ())
    assert powerwp_iterated(0, 3, [(vec(1, 2, 3), 5), (vec(-1, -2, -3), 5)])


@pytest.mark.parametrize("m,r", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_powerwp_iterated_oracle(m, r):
    G = make_group(f"W({m},{r})")
    rng = random.Random(m * 10 + r)
    for _ in range(150):
        pw = random_powerword(rng, G, max_exp=256)
        assert powerwp_iterated(m, r, pw) == G.is_identity(naive_eval(G, pw))


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(-6, 6)), min_size=1, max_size=5))
def test_powerword_inverse_cancels(pairs):
    pool = [(A, T), (T,), (T, A, Ti), (Ai, T, T)]
    pw = tuple((pool[i], k) for i, k in pairs)
    assert powerwp_iterated(1, 1, pw + pw_inverse(pw))


# ---------------------------------------------------------------- G wr Z

def test_gwrz_examples():
    G = make_group("wrZ(Sym(5))")
    g = Token(1, G.A.token_for((1, 2, 0, 3, 4)).index, 1)
    assert powerwp_gwrz(G, [((g, T), 2**20), ((Ti, g.inverse()), 2**20)])
    assert not powerwp_gwrz(G, [((g, T), 2)])


def test_gwrz_rejects_other_groups():
    with pytest.raises(GroupError):
        powerwp_gwrz(make_group("W(2,1)"), [])


@pytest.mark.parametrize("desc,span", [("wrZ(Cyc(6))", 1), ("wrZ(Sym(3))", 6), ("wrZ(UT3)", 3), ("wrZ(Dih(4))", 2)])
def test_gwrz_oracle(desc, span):
    G = make_group(desc)
    rng = random.Random(desc)

    def word():
        out = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                out.append(Token(0, 1, rng.choice((1, -1))))
            else:
                out.append(Token(1, rng.randint(1, span), rng.choice((1, -1))))
        return tuple(out)

    for _ in range(200):
        pool = [word() for _ in range(2)]
        pool += [invert_word(x) for x in pool]
        pw = [(rng.choice(pool), rng.randint(-300, 300)) for _ in range(rng.randint(2, 6))]
        assert powerwp_gwrz(G, pw) == G.is_identity(naive_eval(G, pw, guard=10**7))


def test_decide_dispatch():
    assert decide_powerword("Z^2", [(vec(1, 1), 3), (vec(-1, -1), 3)])
    assert not decide_powerword("Cyc(6)", [((Token(0, 1, 1),), 5)])
    assert decide_powerword("FS(2,2)", [((Token(0, 1, 1), Token(0, 2, 1)), 4), ((Token(0, 2, -1), Token(0, 1, -1)), 4)])
    assert decide_powerword("W(1,1)", [((A, T), 3)], oracle=True) is False
