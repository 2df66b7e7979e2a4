import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wreathkit.groups import GroupError, Token, make_group
from wreathkit.hardness import (
    DNF,
    IDENTITY,
    PEBBLE,
    SYM5,
    GProgram,
    Instruction,
    Literal,
    commutator,
    compile_formula,
    exists_forall,
    first_primes,
    forall_holds,
    gprogram_eval,
    reduce_forall_powerword,
    reduce_qbf2,
    sens_witness,
)
from wreathkit.knapsack import evaluate
from wreathkit.powerword import naive_eval, powerwp_gwrz
from wreathkit.sweep import all_dnfs

G = (1, 2, 0, 3, 4)  # (1 2 3)
CYC = (1, 2, 3, 4, 0)


def compose(perms):
    # independent of the group class: apply left to right on points
    out = list(range(5))
    for p in perms:
        out = [p[i] for i in out]
    return tuple(out)


# ---------------------------------------------------------------- programs

def test_gprogram_examples():
    P = GProgram((Instruction("X", G, IDENTITY), Instruction("X", SYM5.inv(G), IDENTITY)), ("X",))
    assert gprogram_eval(P, {"X": 0}) == IDENTITY == gprogram_eval(P, {"X": 1})
    Q = GProgram((Instruction("X", G, IDENTITY),), ("X",))
    assert gprogram_eval(Q, {"X": 1}) == G
    with pytest.raises(ValueError):
        gprogram_eval(Q, {})


def test_gprogram_declaration_errors():
    with pytest.raises(ValueError):
        GProgram((Instruction("Z", G, G),), ("X",))
    with pytest.raises(ValueError):
        GProgram((), ("X",), ("X",))


def test_gprogram_matches_composition():
    rng = random.Random(3)
    elems = SYM5.elements()
    for _ in range(200):
        ins = tuple(Instruction(rng.choice("XY"), rng.choice(elems), rng.choice(elems)) for _ in range(rng.randint(0, 20)))
        P = GProgram(ins, ("X",), ("Y",))
        asg = {"X": rng.randint(0, 1), "Y": rng.randint(0, 1)}
        assert gprogram_eval(P, asg) == compose([i.a if asg[i.var] else i.b for i in ins])


# ---------------------------------------------------------------- witnesses

def test_sens_depth_zero():
    w = sens_witness(0)
    assert list(w.words) == [""]
    assert SYM5.eval_word(w.root()) != IDENTITY


@pytest.mark.parametrize("d", range(6))
def test_sens_structure(d):
    w = sens_witness(d)
    assert SYM5.eval_word(w.root()) != IDENTITY
    assert len({len(w.words[v]) for v in w.words if len(v) == d}) == 1
    for v, word in w.words.items():
        if len(v) < d:
            x, y = SYM5.eval_word(w.words[v + "0"]), SYM5.eval_word(w.words[v + "1"])
            assert SYM5.eval_word(word) == commutator(SYM5, x, y)


def test_sens_three_by_permutation_arithmetic():
    w = sens_witness(3)
    perms = [SYM5.token_element(t) for t in w.root()]
    assert compose(perms) != IDENTITY


def test_sens_negative_depth():
    with pytest.raises(ValueError):
        sens_witness(-1)


# ---------------------------------------------------------------- compiler

def test_compile_true_and_single_literal():
    assert compile_formula(DNF(((),), ("X",))).instructions == ()
    P = compile_formula(DNF(((Literal("X"),),), ("X",)))
    assert gprogram_eval(P, {"X": 1}) == IDENTITY
    assert gprogram_eval(P, {"X": 0}) != IDENTITY


def test_compile_empty_formula():
    with pytest.raises(GroupError):
        compile_formula(DNF((), ("X",)))


def test_compile_all_small_formulas():
    n = 0
    for F in all_dnfs(3, 3):
        if F.exists:  # each formula appears once per split; one split suffices here
            continue
        P = compile_formula(F)
        names = F.variables
        for bits in itertools.product((0, 1), repeat=len(names)):
            asg = dict(zip(names, bits))
            assert (gprogram_eval(P, asg) == IDENTITY) == F(asg)
        n += 1
    assert n == 3 + 92 + 2951


# ---------------------------------------------------------------- knapsack reduction

def test_primes():
    assert first_primes(6) == [2, 3, 5, 7, 11, 13]


def test_prime_table_and_layout():
    F = DNF(((Literal("X"), Literal("Y")),), ("X",), ("Y",))
    P = compile_formula(F)
    R = reduce_qbf2(P)
    assert R.primes == {"X": 2, "Y": 3} and R.M == 6
    assert R.D == 2 * len(P) + 2


def test_constant_true_program():
    P = GProgram((Instruction("X", IDENTITY, IDENTITY),), ("X",))
    R = reduce_qbf2(P)
    for alpha in ({"X": 0}, {"X": 1}):
        nu = R.intended_valuation(alpha)
        assert R.is_solution(nu)
        assert R.expression.group.is_identity(evaluate(R.expression, nu))
        assert R.lifted.group.is_identity(evaluate(R.lifted, nu))


def test_existential_single_variable():
    P = GProgram((Instruction("X", IDENTITY, G),), ("X",))
    R = reduce_qbf2(P)
    assert R.is_solution(R.intended_valuation({"X": 1}))
    assert not R.is_solution(R.intended_valuation({"X": 0}))
    found = R.structured_search((1,))
    assert found is not None and found["x1"] > 0  # alpha(X) = 1 branch
    # forcing alpha(X) = 0 fails for every pebble choice
    for xt, xtp in itertools.product((0, 1), repeat=2):
        nu = {**R.intended_valuation({"X": 0}), "Xt_X": xt, "Xtp_X": xtp}
        assert not R.is_solution(nu)


def test_universal_single_variable():
    ok = GProgram((Instruction("Y", IDENTITY, IDENTITY),), (), ("Y",))
    assert reduce_qbf2(ok).structured_search() is not None
    bad = GProgram((Instruction("Y", IDENTITY, G),), (), ("Y",))
    R = reduce_qbf2(bad)
    assert R.structured_search((1, 2)) is None
    assert not R.is_solution(R.intended_valuation({}))


def test_empty_program_rejected():
    with pytest.raises(GroupError):
        reduce_qbf2(GProgram((), ("X",)))


def test_intended_valuation_linear_conditions():
    F = DNF(((Literal("X"), Literal("Y", False)), (Literal("Y"),)), ("X",), ("Y",))
    P = compile_formula(F)
    R = reduce_qbf2(P)
    for Mp in (R.M, 2 * R.M):
        nu = R.intended_valuation({"X": 1}, Mp)
        for i, ins in enumerate(P.instructions, 1):
            q = R.primes[ins.var]
            assert nu[f"z{i}"] + 1 == Mp
            walk = q * (nu.get(f"y{i}", 0) + nu.get(f"x{i}", 0) + nu.get(f"xp{i}", 0))
            assert walk == Mp
            if ins.var in P.exists:
                assert nu[f"x{i}"] * nu[f"xp{i}"] == 0
    with pytest.raises(ValueError):
        R.intended_valuation({"X": 1}, R.M + 1)


def test_embedded_and_lifted_agree():
    rng = random.Random(6)
    formulas = [F for F in all_dnfs(2, 2)]
    for F in rng.sample(formulas, 15):
        P = compile_formula(F)
        if not P.instructions:
            continue
        R = reduce_qbf2(P)
        for bits in itertools.product((0, 1), repeat=len(F.exists)):
            nu = R.intended_valuation(dict(zip(F.exists, bits)))
            lifted, cur = R.evaluate_lifted(nu)
            emb, cur2 = R.evaluate_embedded(nu)
            assert cur2 == R.D * cur
            assert {(0, R.D * p + c): v for (c, p), v in lifted.items()} == emb
            assert R.expression.group.is_identity(evaluate(R.expression, nu)) == (not emb and cur == 0)


def test_pebbles_empty_in_found_solutions():
    for F in all_dnfs(2, 2):
        P = compile_formula(F)
        if not P.instructions:
            continue
        R = reduce_qbf2(P)
        nu = R.structured_search((1,))
        if nu is not None:
            acc, cur = R.evaluate_lifted(nu)
            assert cur == 0
            assert not [k for k in acc if k[0] != R.program_copy]


# ---------------------------------------------------------------- power word reduction

def test_forall_constant_identity():
    P = GProgram((Instruction("Y", IDENTITY, IDENTITY),), (), ("Y",))
    assert powerwp_gwrz("wrZ(Sym(5))", reduce_forall_powerword(P))


def test_forall_single_letter():
    P = GProgram((Instruction("Y", G, IDENTITY),), (), ("Y",))
    W = reduce_forall_powerword(P)
    grp = make_group("wrZ(Sym(5))")
    value = naive_eval(grp, W)
    assert value.support == {(0,): G} and value.cursor == (0,)
    assert not powerwp_gwrz(grp, W)


def test_forall_requires_universal_only():
    with pytest.raises(GroupError):
        reduce_forall_powerword(GProgram((Instruction("X", G, G),), ("X",)))


letters5 = st.sampled_from([IDENTITY, G, CYC, (1, 0, 2, 3, 4), SYM5.inv(CYC)])


@given(st.lists(st.tuples(st.sampled_from(["Y1", "Y2", "Y3"]), letters5, letters5), min_size=1, max_size=8))
def test_forall_reduction_matches_brute_force(raw):
    P = GProgram(tuple(Instruction(*r) for r in raw), (), ("Y1", "Y2", "Y3"))
    W = reduce_forall_powerword(P)
    grp = make_group("wrZ(Sym(5))")
    truth = forall_holds(P)
    assert powerwp_gwrz(grp, W) == truth
    assert grp.is_identity(naive_eval(grp, W)) == truth


def test_exists_forall_oracle():
    F = DNF(((Literal("X"), Literal("Y")), (Literal("X"), Literal("Y", False))), ("X",), ("Y",))
    assert exists_forall(F, F.exists, F.forall)
    F2 = DNF(((Literal("X"), Literal("Y")),), ("X",), ("Y",))
    assert not exists_forall(F2, F2.exists, F2.forall)
