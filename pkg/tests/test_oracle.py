"""Tests for the brute-force extension enumerations."""

from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from etmass import oracle as orc
from etmass import unitgroups as ug
from etmass.fplinalg import FpMatrix, rank
from etmass.padic import GuardError, LocalField, quad_extend

from test_padic import random_unit


# ---------------------------------------------------------------------------
# norm equations in quadratic extensions
# ---------------------------------------------------------------------------


def test_norm_class_matrix_has_corank_one():
    # local class field theory: the norm group of a quadratic extension
    # has index exactly 2 in F^x
    for p, e, f, d in [(2, 1, 1, -1), (2, 1, 1, 5), (2, 1, 1, 2), (3, 1, 1, 3), (5, 1, 1, 2)]:
        F = LocalField(p, e, f)
        E = quad_extend(F, F.from_int(d))
        M = ug.norm_class_matrix(E)
        assert rank(M) == M.rows - 1, (p, d)


def test_solve_norm_equation_q2_gaussian():
    # Q_2(i): the norms are exactly the classes of 1, 2, 5, 10
    F = LocalField(2, 1, 1)
    E = quad_extend(F, F.from_int(-1))
    for n in (2, 5, 10, 17):
        b = ug.solve_norm_equation(E, F.from_int(n))
        assert b is not None
        assert F.unit_eq(E.norm(b), F.from_int(n))
    for n in (-1, -5, 3, 7, 6, 14):
        assert ug.solve_norm_equation(E, F.from_int(n)) is None


def test_solve_norm_equation_random():
    F = LocalField(2, 2, 1)
    rng = np.random.default_rng(31)
    for d in (F.from_int(-1), F.from_int(5), F.pi()):
        E = quad_extend(F, d)
        for _ in range(6):
            x = random_unit(E, rng)
            a = E.norm(x)
            b = ug.solve_norm_equation(E, a)
            assert b is not None
            assert F.unit_eq(E.norm(b), a)


def test_sqrt_exact():
    F = LocalField(2, 1, 1)
    for n in (1, 4, 9, 16, 17, 25, 68, 289):
        s = ug.sqrt_exact(F, F.from_int(n))
        assert F.unit_eq(F.mul(s, s), F.from_int(n))
    with pytest.raises(ValueError):
        ug.sqrt_exact(F, F.from_int(3))
    with pytest.raises(ValueError):
        ug.sqrt_exact(F, F.from_int(2))
    G = LocalField(5, 1, 1)
    s = ug.sqrt_exact(G, G.from_int(-1))
    assert G.unit_eq(G.mul(s, s), G.from_int(-1))


# ---------------------------------------------------------------------------
# cyclic degree-p extensions via characters
# ---------------------------------------------------------------------------


def test_q2_quadratic_character_counts():
    F = LocalField(2, 1, 1)
    recs = orc.enum_cp_characters(F)
    assert len(recs) == 7
    assert Counter(r.disc_val for r in recs) == {0: 1, 2: 2, 3: 4}


def test_q3_cubic_character_counts():
    F = LocalField(3, 1, 1)
    recs = orc.enum_cp_characters(F)
    assert len(recs) == 4
    assert Counter(r.disc_val for r in recs) == {0: 1, 4: 3}


def test_q5_quintic_character_counts():
    F = LocalField(5, 1, 1)
    recs = orc.enum_cp_characters(F)
    assert len(recs) == 6
    assert Counter(r.disc_val for r in recs) == {0: 1, 8: 5}


def test_character_counts_match_quadratic_constructor():
    # the character conductors agree with the discriminants of the
    # explicitly constructed quadratic extensions of Q_2
    F = LocalField(2, 1, 1)
    from etmass.padic import disc_val_quadratic

    seen = Counter()
    reps = set()
    for n in range(-20, 20):
        if n == 0:
            continue
        cls = tuple(ug.class_vec(F, F.from_int(n), 2))
        if not any(cls) or cls in reps:
            continue
        reps.add(cls)
        seen[disc_val_quadratic(F, F.from_int(n))] += 1
    oracle = Counter(r.disc_val for r in orc.enum_cp_characters(F))
    assert seen == oracle


def test_norm_intersection_is_squares():
    # intersection of the seven quadratic norm groups of Q_2 = squares
    F = LocalField(2, 1, 1)
    recs = orc.enum_cp_characters(F, gens=[F.from_int(n) for n in (-1, 2, 5, 17, 48)])
    everywhere = [all(r.norm_flags[i] for r in recs) for i in range(5)]
    # 17 and 48 = 16*3... only 17 is a square
    assert everywhere == [False, False, False, True, False]


def test_constrained_quadratic_premass_minus_one():
    # premass of ramified C2 extensions of Q_2 with -1 a norm
    F = LocalField(2, 1, 1)
    recs = orc.enum_cp_characters(F, gens=[F.from_int(-1)])
    total = sum(
        Fraction(1, r.aut * F.q**r.disc_val)
        for r in recs
        if r.cond > 0 and r.norm_flags[0]
    )
    assert total == Fraction(1, 8)
    assert orc.cp_premass_from_characters(F, recs) == Fraction(1, 2)


def test_cp_premass_quadratic_bases_of_q2():
    # the full ramified C2 premass is 1/q for every 2-adic field
    F = LocalField(2, 1, 1)
    for d in (-1, 2, 5):
        E = quad_extend(F, F.from_int(d))
        assert orc.cp_premass_from_characters(E) == Fraction(1, E.q)


def test_character_guard():
    F = LocalField(2, 1, 1)
    with pytest.raises(GuardError):
        orc.enum_cp_characters(F, max_size=3)


# ---------------------------------------------------------------------------
# tame extensions
# ---------------------------------------------------------------------------


def test_tame_q5_quadratics():
    F = LocalField(5, 1, 1)
    recs = orc.enum_tame(F, 2, gens=[F.from_int(n) for n in (5, -5, 10, 2, -1)])
    assert [r.symbol for r in recs] == ["(2)", "(1^2)", "(1^2)"]
    unram = recs[0]
    assert unram.disc_val == 0 and unram.aut == 2
    # units are norms from the unramified extension, uniformizers are not
    assert unram.norm_flags == (False, False, False, True, True)
    # -1 is a square in Q_5, so it is a norm everywhere
    assert all(r.norm_flags[4] for r in recs)
    # 5 and -5 land in the same ramified extension, 10 in the other
    assert recs[1].norm_flags[:3] in [(True, True, False), (False, False, True)]
    assert recs[1].norm_flags[:3] != recs[2].norm_flags[:3]


def test_tame_inert_case():
    # ell = 3 does not divide q - 1 = 4: a single non-Galois ramified
    # extension with full norm group
    F = LocalField(5, 1, 1)
    recs = orc.enum_tame(F, 3, gens=[F.from_int(2), F.pi()])
    assert [r.symbol for r in recs] == ["(3)", "(1^3)"]
    assert recs[1].aut == 1
    assert recs[1].disc_val == 2
    assert recs[1].norm_flags == (True, True)
    assert recs[0].norm_flags == (True, False)


def test_tame_q7_cubics():
    # ell = 3 divides q - 1 = 6: three ramified C3 extensions
    F = LocalField(7, 1, 1)
    recs = orc.enum_tame(F, 3, gens=[F.from_int(7), F.from_int(2), F.from_int(6)])
    assert len(recs) == 4
    ram = recs[1:]
    assert all(r.aut == 3 and r.disc_val == 2 for r in ram)
    # each uniformizer class lands in exactly one ramified extension
    assert sum(r.norm_flags[0] for r in ram) == 1
    # the unit norm subgroup is the cube residues for every L_j:
    # 2 is not a cube mod 7, 6 is
    assert sum(r.norm_flags[1] for r in ram) == 0
    assert sum(r.norm_flags[2] for r in ram) == 3


def test_tame_serre_sum():
    # sum over totally ramified degree-ell extensions of 1/#Aut = 1
    for p, ell in [(5, 2), (5, 3), (7, 3), (3, 2), (7, 2)]:
        F = LocalField(p, 1, 1)
        recs = [r for r in orc.enum_tame(F, ell) if r.symbol.startswith("(1")]
        assert sum(Fraction(1, r.aut) for r in recs) == 1


def test_tame_rejects_wild():
    F = LocalField(3, 1, 1)
    with pytest.raises(ValueError):
        orc.enum_tame(F, 3)


# ---------------------------------------------------------------------------
# quartic towers over Q_2
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def q2_towers():
    F = LocalField(2, 1, 1)
    gens = [F.from_int(-1), F.from_int(2), F.from_int(5)]
    return F, orc.enum_quartic_towers(F, gens=gens)


def test_tower_pair_counts(q2_towers):
    F, recs = q2_towers
    # 7 quadratic extensions E, each with 15 nontrivial square classes
    assert len(recs) == 105
    tal = orc.tally_towers(recs)
    by_group = Counter()
    for (sym, grp, dv), n in tal.items():
        by_group[grp] += n
    # classical counts of quartic 2-adic fields with a quadratic subfield
    assert by_group == {"C4": 12, "V4": 7, "D4": 36}


def test_tower_symbols_and_discs(q2_towers):
    F, recs = q2_towers
    tal = orc.tally_towers(recs)
    assert tal[("(4)", "C4", 0)] == 1
    # the four totally ramified V4 fields all have discriminant 2+3+3
    assert tal[("(1^4)", "V4", 8)] == 4
    # biquadratic fields containing the unramified quadratic
    assert tal[("(2^2)", "V4", 4)] == 1
    assert tal[("(2^2)", "V4", 6)] == 2
    # disc parity sanity: every (2^2) disc is even
    assert all(dv % 2 == 0 for (sym, _, dv) in tal if sym == "(2^2)")


def test_tower_premasses_22(q2_towers):
    # worked values for the (2^2) premass of Q_2, split by group
    F, recs = q2_towers
    q = F.q

    def pm(grp):
        return orc.quartic_premass(
            recs, pred=lambda r: r.symbol == "(2^2)" and r.group == grp, q=q
        )

    assert pm("C4") == Fraction(3, 128)
    assert pm("V4") == Fraction(3, 128)
    assert pm("D4") == Fraction(5, 64)


def test_tower_d4_norm_group_is_quadratic_subfield(q2_towers):
    # D4 fields over the unramified E: norms are the even-valuation
    # elements, so -1 and 5 are norms and 2 is not
    F, recs = q2_towers
    for r in recs:
        if r.symbol == "(2^2)" and r.group == "D4":
            assert r.norm_flags == (True, False, True)


def test_tower_v4_flags_consistent(q2_towers):
    # tallying with a norm predicate must stay integral: the three
    # pairs over different subfields agree on membership
    F, recs = q2_towers
    for i in range(3):
        tal = orc.tally_towers(recs, pred=lambda r, i=i: r.norm_flags[i])
        assert all(isinstance(v, int) for v in tal.values())


def test_tower_odd_valuation_generator_kills_22(q2_towers):
    # no (2^2) field admits 2 as a norm: their norm groups consist of
    # even-valuation elements
    F, recs = q2_towers
    tal = orc.tally_towers(recs, pred=lambda r: r.norm_flags[1])
    assert all(sym != "(2^2)" and sym != "(4)" for (sym, _, _) in tal)


def test_tower_guards():
    with pytest.raises(ValueError):
        orc.enum_quartic_towers(LocalField(3, 1, 1))
    with pytest.raises(GuardError):
        orc.enum_quartic_towers(LocalField(2, 2, 2))


def test_towers_over_ramified_base():
    # smoke test over F = Q_2(sqrt(-1)): tallies are integral and the
    # unramified quartic of F appears exactly once
    F0 = LocalField(2, 1, 1)
    F = quad_extend(F0, F0.from_int(-1))
    recs = orc.enum_quartic_towers(F)
    tal = orc.tally_towers(recs)
    assert tal[("(4)", "C4", 0)] == 1
    assert sum(tal.values()) > 20


# ---------------------------------------------------------------------------
# totally ramified degree-p census by resolvent descent
# ---------------------------------------------------------------------------


def test_quadratic_extension_counts():
    assert len(orc.quadratic_extensions(LocalField(3, 1, 1))) == 3
    assert len(orc.quadratic_extensions(LocalField(5, 1, 1))) == 3
    assert len(orc.quadratic_extensions(LocalField(2, 1, 1))) == 7


def test_cyclic_quartic_tower_counts():
    # local class field theory: C4 extensions correspond to surjections
    # F^x -> Z/4 up to automorphism
    assert len(orc.cyclic_quartic_towers(LocalField(5, 1, 1))) == 6
    assert len(orc.cyclic_quartic_towers(LocalField(2, 1, 1))) == 12


def test_extend_conjugation_orders():
    # the internal assertions check sigma has order four on each tower
    for K in orc.cyclic_quartic_towers(LocalField(5, 1, 1)):
        orc.extend_conjugation(K)


def test_wild_census_q2():
    recs = orc.enum_wild_totally_ramified(LocalField(2, 1, 1))
    assert Counter((r.group, r.disc_val) for r in recs) == {
        ("Cp", 2): 2,
        ("Cp", 3): 4,
    }
    assert orc.wild_premass(LocalField(2, 1, 1), recs) == Fraction(1, 2)


def test_wild_census_q3():
    F = LocalField(3, 1, 1)
    recs = orc.enum_wild_totally_ramified(F)
    assert Counter(r.group for r in recs) == {"Cp": 3, "Cp:C2": 6}
    assert sorted(r.disc_val for r in recs if r.group == "Cp:C2") == [3, 3, 4, 5, 5, 5]
    assert all(r.aut == 1 for r in recs if r.group != "Cp")
    assert orc.wild_premass(F, recs) == Fraction(1, 9)


def test_wild_census_q5():
    F = LocalField(5, 1, 1)
    recs = orc.enum_wild_totally_ramified(F)
    assert Counter(r.group for r in recs) == {"Cp": 5, "Cp:C2": 3, "Cp:C4": 17}
    assert orc.wild_premass(F, recs) == Fraction(1, 5**4)


def test_wild_census_ramified_quadratic_bases():
    Q3 = LocalField(3, 1, 1)
    for d in (Q3.pi(), Q3.mul(Q3.from_int(-1), Q3.pi())):
        F = quad_extend(Q3, d)
        assert orc.wild_premass(F) == Fraction(1, F.q ** (F.p - 1))


def test_wild_descent_guard():
    with pytest.raises(GuardError):
        orc.enum_wild_totally_ramified(LocalField(7, 1, 1))
