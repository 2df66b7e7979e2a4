import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wreathkit.groups import (
    GroupError,
    Token,
    WreathElement,
    canonical_serialize,
    element_word,
    embed_gd_word,
    embed_gd_wr_z,
    eval_word,
    gd_wreath,
    inverse,
    invert_word,
    magnus_embed,
    make_group,
    multiply,
    parse_word,
    project_sigma,
    project_tau_at,
)
from wreathkit.sweep import random_word

DESCRIPTORS = ["Z^2", "W(1,1)", "W(2,2)", "Sym(4)", "Cyc(6)", "UT3", "Dih(4)", "wrZ(Sym(3))", "wrZ(UT3)"]


def letters(group):
    """All positive generator tokens of a group, for random words."""
    out = []
    for level in range(group.num_levels):
        for index in range(1, 200):
            try:
                group.check_token(Token(level, index, 1))
            except GroupError:
                break
            out.append(Token(level, index, 1))
    return out


def rand_elem(rng, group, n=6):
    pool = letters(group)
    word = tuple(Token(*rng.choice(pool)[:2], rng.choice((1, -1))) for _ in range(rng.randint(0, n)))
    return group.eval_word(word)


def test_multiply_hand_example():
    G = make_group("W(1,1)")
    x = WreathElement({(0,): (1,)}, (1,))
    y = WreathElement({(0,): (-1,)}, (-1,))
    assert multiply(G, x, y) == WreathElement({(0,): (1,), (1,): (-1,)}, (0,))


def test_identity_and_inverse_laws():
    G = make_group("W(2,2)")
    rng = random.Random(1)
    for _ in range(100):
        g = rand_elem(rng, G)
        assert multiply(G, G.identity(), g) == g
        assert G.is_identity(multiply(G, g, inverse(G, g)))


def test_group_mismatch_rejected():
    G = make_group("W(1,1)")
    with pytest.raises(GroupError):
        multiply(G, (1, 2), G.identity())


def test_projections():
    G = make_group("W(1,1)")
    x = WreathElement({(0,): (1,)}, (1,))
    assert project_sigma(G, G.identity()) == (0,)
    assert project_tau_at(G, x, (0,)) == (1,)
    assert project_tau_at(G, x, (5,)) == (0,)


def test_eval_word_examples():
    G = make_group("W(1,1)")
    assert G.is_identity(eval_word(G, ()))
    x = eval_word(G, parse_word(G, "g1.1 g0.1 g1.1^-1 g0.1^-1"))
    assert x == WreathElement({(0,): (1,), (1,): (-1,)}, (0,))
    S = make_group("Sym(5)")
    assert S.is_identity(eval_word(S, parse_word(S, "(12) (12)")))


def test_invalid_token():
    G = make_group("W(1,1)")
    with pytest.raises(GroupError):
        parse_word(G, "g2.1")
    with pytest.raises(GroupError, match="column 7"):
        parse_word(G, "g0.1  g9.9")


@pytest.mark.parametrize("desc", DESCRIPTORS)
def test_associativity_and_no_identity_entries(desc):
    G = make_group(desc)
    rng = random.Random(desc)
    for _ in range(40):
        a, b, c = (rand_elem(rng, G) for _ in range(3))
        assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
        if isinstance(a, WreathElement):
            p = G.mul(a, b)
            assert all(not G.A.is_identity(v) for v in p.support.values())


@pytest.mark.parametrize("desc", ["W(1,1)", "W(2,1)", "wrZ(Sym(3))"])
def test_sigma_homomorphism_and_tau_product_rule(desc):
    G = make_group(desc)
    H, A = G.H, G.A
    rng = random.Random(7)
    for _ in range(30):
        gs = [rand_elem(rng, G) for _ in range(3)]
        prod = G.identity()
        for g in gs:
            prod = G.mul(prod, g)
        assert project_sigma(G, G.mul(gs[0], gs[1])) == H.mul(project_sigma(G, gs[0]), project_sigma(G, gs[1]))
        # tau of a product, pointwise, as a product of shifted taus
        points = set(prod.support)
        cur = H.identity()
        for g in gs:
            points |= {H.mul(cur, p) for p in g.support}
            cur = H.mul(cur, g.cursor)
        for p in points:
            acc, cur = A.identity(), H.identity()
            for g in gs:
                acc = A.mul(acc, project_tau_at(G, g, H.mul(H.inv(cur), p)))
                cur = H.mul(cur, g.cursor)
            assert acc == project_tau_at(G, prod, p)


def test_canonical_keys():
    G = make_group("W(2,1)")
    assert canonical_serialize(G, G.identity()) == b""
    rng = random.Random(3)
    for _ in range(100):
        w = random_word(rng, G, 6)
        g = random_word(rng, G, 3)
        assert canonical_serialize(G, G.eval_word(w)) == canonical_serialize(G, G.eval_word(w + g + invert_word(g)))
    seen = {}
    for _ in range(1000):
        x = G.eval_word(random_word(rng, G, 8))
        k = canonical_serialize(G, x)
        if k in seen:
            assert seen[k] == x
        seen[k] = x
    elems = list(seen.values())
    assert len({canonical_serialize(G, e) for e in elems}) == len(elems)


def test_embed_identity_and_copy_letter():
    C = make_group("Cyc(3)")
    G1 = gd_wreath(C, 1)
    x = G1.eval_word((Token(0, 1, 1), Token(1, 1, 1)))
    assert embed_gd_wr_z(1, x, C) == WreathElement({(1,): 1}, (1,))
    G2 = gd_wreath(C, 2)
    a1 = G2.eval_word((Token(1, 2, 1),))  # generator of copy 1
    assert embed_gd_wr_z(2, a1, C) == WreathElement({(1,): 1}, (0,))


@pytest.mark.parametrize("d", [2, 3])
def test_embed_is_homomorphism_and_matches_word_level(d):
    C = make_group("Sym(3)")
    G = gd_wreath(C, d)
    target = make_group("wrZ(Sym(3))")
    rng = random.Random(d)
    pool = [Token(0, 1, 1)] + [Token(1, G.A.coordinate_token(c, Token(0, j, 1)).index, 1) for c in range(d) for j in range(1, 7)]
    rw = lambda: tuple(Token(*rng.choice(pool)[:2], rng.choice((1, -1))) for _ in range(rng.randint(0, 6)))
    for _ in range(100):
        u, v = rw(), rw()
        x, y = G.eval_word(u), G.eval_word(v)
        ex, ey = embed_gd_wr_z(d, x, C), embed_gd_wr_z(d, y, C)
        assert embed_gd_wr_z(d, G.mul(x, y), C) == target.mul(ex, ey)
        assert target.eval_word(embed_gd_word(G, u)) == ex


def test_embed_injective_on_small_sample():
    C = make_group("Cyc(2)")
    G = gd_wreath(C, 2)
    pool = [Token(0, 1, 1), Token(0, 1, -1), Token(1, 1, 1), Token(1, 2, 1)]
    seen = {}
    for n in range(5):
        for w in itertools.product(pool, repeat=n):
            x = G.eval_word(w)
            e = embed_gd_wr_z(2, x, C)
            key = canonical_serialize(make_group("wrZ(Cyc(2))"), e)
            assert seen.setdefault(key, x) == x


def agl_image(word, p=5, images=((2, 1), (3, 4))):
    """Image in AGL(1,p) (maps z -> a z + b), a metabelian finite quotient."""
    acc = (1, 0)
    for tok in word:
        a, b = images[tok.index - 1]
        if tok.sign < 0:
            ai = pow(a, -1, p)
            a, b = ai, (-ai * b) % p
        # apply acc first, then (a, b)
        acc = (acc[0] * a % p, (acc[1] * a + b) % p)
    return acc


def test_magnus_examples():
    assert magnus_embed(1, 2, "x1 x2 x1^-1 x2^-1") == (0, 0)
    FS = make_group("FS(2,2)")
    comm = parse_word(FS, "x1 x2 x1^-1 x2^-1")
    assert not FS.ambient.is_identity(magnus_embed(2, 2, comm))
    assert agl_image(comm) != (1, 0)
    c1 = parse_word(FS, "x1 x2 x1^-1 x2^-1")
    c2 = parse_word(FS, "x1^-1 x2^-1 x1 x2")
    law = invert_word(c1) + invert_word(c2) + c1 + c2
    assert FS.ambient.is_identity(magnus_embed(2, 2, law))


def test_magnus_token_out_of_range():
    with pytest.raises(GroupError):
        magnus_embed(2, 2, "x3")


@given(st.lists(st.tuples(st.integers(1, 2), st.sampled_from([1, -1])), max_size=12))
def test_magnus_agrees_with_metabelian_quotient(pairs):
    word = tuple(Token(0, i, s) for i, s in pairs)
    FS = make_group("FS(2,2)")
    trivial = FS.ambient.is_identity(magnus_embed(2, 2, word))
    if trivial:
        assert agl_image(word) == (1, 0)
        assert agl_image(word, 7, ((3, 1), (2, 5))) == (1, 0)
    if agl_image(word) != (1, 0):
        assert not trivial


@pytest.mark.parametrize("desc", ["Z^2", "W(1,1)", "W(2,2)"])
def test_element_word_round_trip(desc):
    G = make_group(desc)
    rng = random.Random(11)
    for _ in range(50):
        x = G.eval_word(random_word(rng, G, 8))
        assert G.eval_word(element_word(G, x)) == x


def test_descriptor_errors():
    for bad in ["W(1,0)", "FS(0,2)", "wrZ(Z^1)", "Q8", "Sym(0)"]:
        with pytest.raises(GroupError):
            make_group(bad)
