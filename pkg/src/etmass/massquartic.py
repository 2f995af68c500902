"""Quartic pre-masses with a prescribed norm subgroup.

For an odd residue characteristic every quartic etale algebra is tame
and the five constrained splitting symbols have short closed forms,
driven by stratified generating sets of the image of the constraint
group in F^x/F^{x2} and F^x/F^{x4}.  Over a 2-adic field the three
wild symbols (1^2 1^2), (2^2) and (1^4) are computed per Galois
closure group from discriminant-layer counts.  The C4 layers need the
norm-class sets N_{E,c} of the quadratic subextensions E, computed
here by two independent algorithms (brute enumeration of square
classes and F_2 subspace arithmetic) on top of quadratic Hilbert
symbols, plus a minimal-discriminant cyclic quartic extender omega of
each E, produced in the hard small-discriminant case by an explicit
nine-step construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .fplinalg import FpMatrix, colspan_intersect, kernel_basis
from .massprime import MassReport, count_Cp
from .padic import GuardError, disc_val_quadratic, quad_extend
from .unitgroups import (
    c_alpha,
    class_vec,
    dlog_mod,
    filtration_profile,
    norm_class_contains,
    p_class_coords,
    solve_norm_equation,
    square_class_basis,
    strat_gens,
    unit_basis,
)

__all__ = [
    "hilbert2",
    "choose_omega",
    "omega_small_disc",
    "OmegaState",
    "NormClassSet",
    "nec_sizes",
    "quartic_helpers",
    "counts_1212",
    "counts_22",
    "counts_14",
    "counts_12E_C4",
    "premass4_tame",
    "premass4_wild",
    "premass4",
]


# ---------------------------------------------------------------------------
# quadratic Hilbert symbols
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _hilbert_gram(F):
    """Gram matrix of the Hilbert pairing on a square-class basis.

    Entry (i, j) is the F_2 exponent of (b_i, b_j)_F, i.e. 1 exactly
    when b_i is *not* a norm from F(sqrt(b_j)).  The pairing is
    symmetric and bilinear, so this matrix determines every symbol.
    """
    basis = square_class_basis(F)
    n = len(basis)
    H = np.zeros((n, n), dtype=np.int64)
    for j, bj in enumerate(basis):
        E = quad_extend(F, bj)
        for i, bi in enumerate(basis):
            H[i, j] = 0 if norm_class_contains(E, bi) else 1
    assert np.array_equal(H, H.T), "Hilbert pairing must be symmetric"
    H.setflags(write=False)
    return H


def hilbert2(F, a, b) -> int:
    """The quadratic Hilbert symbol (a, b)_F, returned as +1 or -1."""
    va = class_vec(F, F.coerce(a), 2) % 2
    vb = class_vec(F, F.coerce(b), 2) % 2
    exp = int(va @ _hilbert_gram(F) @ vb) % 2
    return -1 if exp else 1


# ---------------------------------------------------------------------------
# cyclic quartic extenders omega of a quadratic extension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaState:
    """Intermediate values of the small-discriminant omega construction."""

    d: object
    a: object
    b: object
    omega: object
    lam: object
    omega1: object
    omega2: object
    lam2: object
    r2: object
    s2: object
    q: object
    n: object
    output: object


def omega_small_disc(F, E, with_state: bool = False):
    """A unit omega in E with E(sqrt(omega)) cyclic quartic over F and
    v_E of its relative discriminant equal to 3 m1 - 2.

    Applies to a ramified quadratic E/F of even discriminant valuation
    m1 <= e_F over a 2-adic base.  The element is built by an explicit
    nine-step procedure whose step invariants are asserted throughout.
    """
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    if E.kind != "ramified":
        raise ValueError("E must be ramified")
    m1 = E.disc_val
    e = F.e
    if m1 % 2 != 0 or m1 > e:
        raise ValueError("requires even discriminant valuation m1 <= e_F")

    # step 1-3: E = F(sqrt(d)) with v_F(d) = m1, and a uniformizer
    # rho = (a + sqrt(d))/2 of E with rho^2 = a rho + b, v(a) = m1/2,
    # v(b) = 1.  The constructor of E already stores such a and b.
    a, b = E.a, E.b
    d = F.normalize_pshift(a * a + 4 * b)
    assert F.val(a) == m1 // 2 and F.val(b) == 1 and F.val(d) == m1
    rho = E.rho()

    # step 4: a unit omega with N(omega) in d F^{x2}
    beta = solve_norm_equation(E, d)
    assert beta is not None, "d is a norm from E = F(sqrt(d))"
    vb_ = E.val(beta)
    assert vb_ == m1 and vb_ % 2 == 0
    omega = E.normalize_pshift(E.shift(beta, -vb_))

    # step 5: lam with N(omega) = lam^2 mod pi^(2e+1-m1)
    c, lam = c_alpha(F, E.norm(omega))
    assert c == 2 * e + 1 - m1
    assert F.congruent(E.norm(omega), F.mul(lam, lam), 2 * e + 1 - m1)

    # step 6: adjust so that omega1 = lam mod p_E^(m1)
    lamE = E.embed(lam)
    v6 = E.val(omega - lamE)
    assert v6 >= m1 - 1
    if v6 >= m1:
        omega1 = omega
    else:
        omega1 = E.normalize_pshift(E.shift(E.mul(omega, E.embed(b)), -2))

    # step 7: push the conjugate gap to exactly 2 m1
    v7 = E.val(omega1 - E.conj(omega1))
    assert v7 >= 2 * m1
    if v7 == 2 * m1:
        omega2, lam2 = omega1, lam
    else:
        opr = E.one() + rho
        omega2 = E.normalize_pshift(E.mul(omega1, E.mul(opr, opr)))
        lam2 = F.normalize_pshift(lam * (F.one() + a - b))
    assert E.congruent(omega2, E.embed(lam2), m1)

    # step 8: coordinates omega2 = r2 + s2 rho and the correctors
    r2, s2 = omega2.data
    assert F.val(s2) == m1 // 2
    qq = F.normalize_pshift((r2 - lam2) / s2)
    nn = F.normalize_pshift((qq * qq + b) / r2)

    # step 9: the small-discriminant representative
    g = E.add(E.embed(qq), rho)
    out = E.normalize_pshift(E.mul(E.mul(omega2, E.embed(nn)), E.inv(E.mul(g, g))))
    assert E.congruent(out, E.one(), 4 * e + 3 - 3 * m1)
    assert disc_val_quadratic(E, out) == 3 * m1 - 2
    assert np.array_equal(
        p_class_coords(F, E.norm(out)), p_class_coords(F, d)
    ), "norm class of omega must be the class of d"

    if with_state:
        return OmegaState(d, a, b, omega, lam, omega1, omega2, lam2, r2, s2, qq, nn, out)
    return out


def choose_omega(F, E):
    """A minimal-discriminant omega in E^x with E(sqrt(omega))/F cyclic.

    Raises ValueError when E has no cyclic quartic extension of F,
    i.e. when -1 is not a norm from E.
    """
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    d = F.coerce(E.d)
    if hilbert2(F, -1, d) != 1:
        raise ValueError("E admits no cyclic quartic extension of F")
    e = F.e
    m1 = E.disc_val
    if E.kind == "unramified":
        # the top unit class of E defines its unramified quadratic,
        # which is the unramified quartic of F: cyclic, discriminant 0
        omega = unit_basis(E).elems[-1]
        expected = 0
    elif m1 % 2 == 0 and m1 <= e:
        omega = omega_small_disc(F, E)
        expected = 3 * m1 - 2
    else:
        # every extender has relative discriminant valuation m1 + 2e,
        # so sliding a norm preimage of d to a unit (or uniformizer
        # times unit) by an even power of the uniformizer suffices
        beta = solve_norm_equation(E, d)
        assert beta is not None
        v = E.val(beta)
        omega = E.normalize_pshift(E.shift(beta, -(v - v % 2)))
        expected = m1 + 2 * e
    assert disc_val_quadratic(E, omega) == expected
    assert np.array_equal(p_class_coords(F, E.norm(omega)), p_class_coords(F, d))
    return omega


def omega_norm_signs(E, omega, gens4):
    """For each generator alpha: is alpha a norm from E(sqrt(omega))/F?

    Computed through the tower: alpha is a quartic norm exactly when
    some beta in E with N_{E/F}(beta) = alpha is itself a norm from
    E(sqrt(omega))/E.
    """
    F = E.base
    M = quad_extend(E, omega)
    signs = []
    for alpha in gens4:
        beta = solve_norm_equation(E, F.coerce(alpha))
        signs.append(beta is not None and norm_class_contains(M, beta))
    return tuple(signs)


# ---------------------------------------------------------------------------
# the norm-class sets N_{E,c}^A
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormClassSet:
    """Sizes of the norm-class set of a cyclic-extendable E, by level.

    ``total`` is the number of square classes t of F such that the
    Hilbert symbol (t, alpha)_F is +1 for every generator alpha that is
    a quartic norm and -1 for every generator that is not;  ``sizes``
    restricts t to the image of U^(c) for c = 0, ..., 2 e_F.
    """

    field: object
    ext: object
    omega: object
    gens4: tuple
    signs: tuple
    total: int
    sizes: tuple
    algo: str

    def size_at(self, c: int) -> int:
        if c < 0:
            return self.total
        if c < len(self.sizes):
            return self.sizes[c]
        # above the top level only the trivial class remains, and it is
        # a member exactly when every generator is a quartic norm
        return int(all(self.signs))


def _nec_rows(F, gens4):
    """Constraint rows over F_2: row_alpha . x = target_alpha."""
    H = _hilbert_gram(F)
    rows = [np.asarray((H @ p_class_coords(F, g)) % 2, dtype=np.int64) for g in gens4]
    return rows


def _nec_brute(F, rows, targets, levels):
    dim = len(levels)
    if F.e * F.f > 12:
        raise GuardError("brute square-class enumeration limited to [F:Q_2] <= 12")
    n = 1 << dim
    X = ((np.arange(n)[:, None] >> np.arange(dim)[None, :]) & 1).astype(np.int64)
    ok = np.ones(n, dtype=bool)
    for r, t in zip(rows, targets):
        ok &= (X @ r) % 2 == t
    lev = np.asarray(levels, dtype=np.int64)
    big = 10 * (2 * F.e + 2)
    cls_level = np.where(X.astype(bool), lev[None, :], big).min(axis=1)
    total = int(ok.sum())
    sizes = tuple(int((ok & (cls_level >= c)).sum()) for c in range(2 * F.e + 1))
    return total, sizes


def _span_size(dim, base_rows, extra_rows, coord_cols):
    """2^dim of {x : r.x = 0 for all rows} intersected with a coordinate
    subspace (all columns when coord_cols is None)."""
    all_rows = list(base_rows) + list(extra_rows)
    if all_rows:
        M = FpMatrix(2, np.array(all_rows, dtype=np.int64))
        K = kernel_basis(M)
    else:
        K = FpMatrix(2, np.eye(dim, dtype=np.int64))
    if coord_cols is not None:
        if not coord_cols:
            return 1  # only the trivial class
        C = FpMatrix(2, np.eye(dim, dtype=np.int64)[:, coord_cols])
        K = colspan_intersect(K, C)
    return 1 << K.cols


def _nec_subspace(F, rows, targets, levels):
    dim = len(levels)
    in_rows = [r for r, t in zip(rows, targets) if t == 0]
    out_rows = [r for r, t in zip(rows, targets) if t == 1]

    def count(coord_cols):
        acc = 0
        for k in range(len(out_rows) + 1):
            for S in itertools.combinations(out_rows, k):
                acc += (-1) ** k * _span_size(dim, in_rows, S, coord_cols)
        return acc

    total = count(None)
    sizes = tuple(
        count([j for j, lv in enumerate(levels) if lv >= c])
        for c in range(2 * F.e + 1)
    )
    return total, sizes


def nec_sizes(F, E, gens=(), algo: str = "auto", omega=None, gens4=None):
    """Level-filtered sizes of the norm-class set of a quadratic E/F.

    ``gens4`` defaults to ``gens``; any family generating the same
    subgroup modulo fourth powers gives the same answer.  ``algo`` is
    one of ``brute`` (enumerate all square classes; guarded by the
    degree of F), ``subspace`` (F_2 kernel intersections with
    inclusion-exclusion over the excluded generators) or ``auto``.
    """
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    if gens4 is None:
        gens4 = gens
    gens4 = tuple(F.coerce(g) for g in gens4)
    if omega is None:
        omega = choose_omega(F, E)
    signs = omega_norm_signs(E, omega, gens4)
    rows = _nec_rows(F, gens4)
    targets = [0 if s else 1 for s in signs]
    levels = unit_basis(F).levels
    if algo == "auto":
        algo = "subspace" if len(gens4) < F.e * F.f else "brute"
    if algo == "brute":
        total, sizes = _nec_brute(F, rows, targets, levels)
    elif algo == "subspace":
        total, sizes = _nec_subspace(F, rows, targets, levels)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    assert all(a >= b for a, b in zip(sizes, sizes[1:])), "sizes must decrease"
    assert total >= sizes[0] >= 0
    return NormClassSet(F, E, omega, gens4, signs, total, tuple(sizes), algo)


# ---------------------------------------------------------------------------
# closed-form counting helpers (2-adic quadratic towers)
# ---------------------------------------------------------------------------


def _h_nneq(q, e, m):
    """Unordered pairs of distinct ramified quadratics with disc sum m."""
    if m % 2 == 0 and 4 <= m <= 2 * e:
        val = 2 * (q - 1) ** 2 * q ** (m // 2 - 2) * (m // 2 - 1)
        if m % 4 == 0:
            val -= (q - 1) * q ** (m // 4 - 1)
        return val
    if m % 2 == 0 and 2 * e + 2 <= m <= 4 * e:
        val = 2 * (q - 1) ** 2 * q ** (m // 2 - 2) * (2 * e - m // 2 + 1)
        if m % 4 == 0:
            val -= (q - 1) * q ** (m // 4 - 1)
        return val
    if m % 2 == 1 and 2 * e + 3 <= m <= 4 * e + 1:
        return 4 * (q - 1) * q ** ((m - 1) // 2 - 1)
    if m == 4 * e + 2:
        return q**e * (2 * q**e - 1)
    return 0


def _h_nc2(q, e, m2):
    """Ramified quadratic extensions of a ramified quadratic E, by disc."""
    if m2 <= 0:
        return 0
    if m2 % 2 == 0 and m2 <= 4 * e:
        return 2 * (q - 1) * q ** (m2 // 2 - 1)
    if m2 == 4 * e + 1:
        return 2 * q ** (2 * e)
    return 0


def _h_nc4(q, e, m1, m2):
    """Quadratic extensions of E (disc m1) cyclic quartic over F."""
    if m2 <= 0:
        return 0
    if m1 % 2 == 0 and 2 <= m1 <= e:
        if m2 == 3 * m1 - 2:
            return q ** (m1 - 1)
        if m2 % 2 == 0 and 3 * m1 <= m2 <= 4 * e - m1 + 1:
            return q ** ((m1 + m2) // 4) - q ** ((m1 + m2 - 2) // 4)
        if m2 == 4 * e - m1 + 2:
            return q**e
        return 0
    if m1 == 2 * e + 1 or (m1 % 2 == 0 and e < m1 <= 2 * e):
        return 2 * q**e if m2 == m1 + 2 * e else 0
    return 0


def _h_nv4(q, e, m1, m2):
    """Quadratic extensions of E (disc m1) biquadratic over F."""
    if m2 <= 0:
        return 0
    if not (m1 == 2 * e + 1 or (m1 % 2 == 0 and 2 <= m1 <= 2 * e)):
        return 0
    if m2 % 2 == 0 and 2 <= m2 < m1:
        return 2 * (q - 1) * q ** (m2 // 2 - 1)
    if m2 == m1 and m1 % 2 == 0:
        return (q - 2) * q ** (m1 // 2 - 1)
    if m1 < m2 <= 4 * e - m1 and (m2 - m1) % 4 == 0:
        return (q - 1) * q ** ((m1 + m2) // 4 - 1)
    if m2 > m1 and m1 + m2 == 4 * e + 2:
        return q**e
    return 0


_HELPERS = {"Nneq": _h_nneq, "NC2": _h_nc2, "NC4": _h_nc4, "NV4": _h_nv4}


def quartic_helpers(q: int, e_F: int, name: str, *args) -> int:
    """Evaluate one of the closed-form tower-counting helpers.

    ``Nneq(m)`` counts unordered pairs of distinct ramified quadratics
    of F with total discriminant valuation m; ``NC2(m2)`` counts the
    ramified quadratic extensions of a ramified quadratic E of F with
    relative discriminant valuation m2; ``NC4(m1, m2)`` and
    ``NV4(m1, m2)`` count those that are cyclic quartic, respectively
    biquadratic, over F when E has discriminant valuation m1.
    """
    try:
        fn = _HELPERS[name]
    except KeyError:
        raise ValueError(f"unknown helper {name!r}") from None
    return fn(q, e_F, *args)


# ---------------------------------------------------------------------------
# per-discriminant counts of constrained quartic fields (p = 2)
# ---------------------------------------------------------------------------


def _even_valuations(F, gens):
    return all(F.val(g) % 2 == 0 for g in gens)


def _unramified_quadratic(F):
    return quad_extend(F, unit_basis(F).elems[-1])


def _half(n: int) -> int:
    h, r = divmod(n, 2)
    assert r == 0, "count must be even before halving"
    return h


def counts_1212(F, gens=()):
    """Counts of constrained (1^2 1^2) algebras by closure group and disc.

    The diagonal pairs L x L (closure C2) are constrained through the
    norm group of L; a product of two non-isomorphic ramified
    quadratics has full norm group, so those pairs (closure V4) are
    never constrained.
    """
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    gens_c = tuple(F.coerce(g) for g in gens)
    e, q = F.e, F.q
    prof2 = filtration_profile(F, gens_c, 2)
    out = {}
    for m in range(4, 4 * e + 3, 2):
        n = count_Cp(F, m // 2, prof2)
        if n:
            out[("C2", m)] = n
    for m in range(4, 4 * e + 3):
        n = _h_nneq(q, e, m)
        if n:
            out[("V4", m)] = n
    return out


def counts_22(F, gens=(), algo: str = "auto"):
    """Counts of constrained (2^2) quartic fields by closure group and
    discriminant valuation."""
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    gens_c = tuple(F.coerce(g) for g in gens)
    if not _even_valuations(F, gens_c):
        return {}
    e, q = F.e, F.q
    prof2 = filtration_profile(F, gens_c, 2)
    out = {}
    # biquadratic: compositum of the unramified quadratic with a
    # ramified one; the two members of each unramified twin pair give
    # the same field
    for m in range(4, 4 * e + 3, 2):
        n = count_Cp(F, m // 2, prof2)
        if n:
            out[("V4", m)] = _half(n)
    # dihedral: the norm group is that of the unramified quadratic, so
    # the even-valuation condition is the only constraint
    for m in range(4, 4 * e + 1, 4):
        out[("D4", m)] = (q - 1) * ((q + 1) * q ** (m // 2 - 2) - q ** (m // 4 - 1))
    out[("D4", 4 * e + 2)] = q**e * (q**e - 1)
    # cyclic: layers of the norm-class set of the unramified quadratic
    E = _unramified_quadratic(F)
    nec = nec_sizes(F, E, gens_c, algo=algo)
    for c in range(1, e + 1):
        n = _half(nec.size_at(2 * e - 2 * c) - nec.size_at(2 * e - 2 * c + 2))
        if n:
            out[("C4", 4 * c)] = n
    n = _half(nec.total - nec.size_at(0))
    if n:
        out[("C4", 4 * e + 2)] = n
    return out


def _c4_m2_support(e, m1):
    """Relative discriminant valuations of cyclic extenders of E."""
    if m1 > e:
        return [m1 + 2 * e]
    out = [3 * m1 - 2]
    out.extend(range(3 * m1, 4 * e - m1 + 2, 2))
    out.append(4 * e - m1 + 2)
    return sorted(set(out))


def counts_12E_C4(F, E, gens=(), m2: int | None = None, algo: str = "auto", nec=None):
    """Constrained cyclic quartic extensions of F through E, with
    relative discriminant valuation m2 over E.

    Returns a single count when ``m2`` is given, otherwise the full
    dict {m2: count} over the support.
    """
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    if E.kind != "ramified":
        raise ValueError("E must be a ramified quadratic of F")
    gens_c = tuple(F.coerce(g) for g in gens)
    d = F.coerce(E.d)
    e = F.e
    m1 = E.disc_val
    constrained = hilbert2(F, -1, d) == 1 and all(
        hilbert2(F, g, d) == 1 for g in gens_c
    )
    if not constrained:
        return 0 if m2 is not None else {}
    if nec is None:
        nec = nec_sizes(F, E, gens_c, algo=algo)

    def level(mm):
        return 2 * e - 2 * ((m1 + mm) // 4)

    def one(mm):
        if m1 > e:
            return _half(nec.total) if mm == m1 + 2 * e else 0
        if mm == 3 * m1 - 2:
            return _half(nec.size_at(level(mm)))
        if mm % 2 == 0 and 3 * m1 <= mm <= 4 * e - m1 + 1:
            return _half(nec.size_at(level(mm)) - nec.size_at(level(mm - 2)))
        if mm == 4 * e - m1 + 2:
            return _half(nec.total - nec.size_at(level(mm - 2)))
        return 0

    if m2 is not None:
        return one(m2)
    return {mm: one(mm) for mm in _c4_m2_support(e, m1) if one(mm)}


def counts_14(F, gens=(), algo: str = "auto"):
    """Counts of constrained totally ramified quartic fields (1^4) by
    closure group and discriminant valuation.  The S4/A4 part is not
    included: it does not depend on the constraint group."""
    if F.p != 2:
        raise ValueError("only defined over 2-adic fields")
    gens_c = tuple(F.coerce(g) for g in gens)
    e, q = F.e, F.q
    prof2 = filtration_profile(F, gens_c, 2)
    out = {}

    # biquadratic: unordered pairs of distinct ramified quadratics,
    # plus a correction for triples with pairwise equal discriminants
    A = prof2.group_size
    for m in range(6, 6 * e + 3, 2):
        tot = Fraction(0)
        for m2 in range(1, m):
            m1 = m - 2 * m2
            if 0 < m1 < m2:
                tot += Fraction(count_Cp(F, m1, prof2) * count_Cp(F, m2, prof2), 2)
        if m % 3 == 0:
            k = m // 3
            sz = prof2.size_at
            tot += (
                Fraction(2, 3 * A * A)
                * q ** (k - 2)
                * (q * sz(k) - sz(k - 1))
                * (q * sz(k) - 2 * sz(k - 1))
            )
        assert tot.denominator == 1 and tot >= 0
        if tot:
            out[("V4", m)] = int(tot)

    # dihedral: quadratic extensions of a constrained E that are
    # neither cyclic nor biquadratic over F.  The cyclic subtraction
    # only concerns the E admitting a cyclic quartic extension, i.e.
    # those with -1 a norm, so it gets a -1-augmented constraint group
    prof2x = filtration_profile(F, gens_c + (F.from_int(-1),), 2)
    for m in range(6, 8 * e + 4):
        s = 0
        for m1 in range(2, (m - 1) // 2 + 1):
            n1 = count_Cp(F, m1, prof2)
            if n1 == 0:
                continue
            m2 = m - 2 * m1
            s += n1 * (_h_nc2(q, e, m2) - _h_nv4(q, e, m1, m2))
            s -= count_Cp(F, m1, prof2x) * _h_nc4(q, e, m1, m2)
        assert s >= 0
        if s:
            ok = (
                (m % 2 == 0 and 6 <= m <= 8 * e + 2)
                or (m % 4 == 1 and 4 * e + 5 <= m <= 8 * e + 1)
                or m == 8 * e + 3
            )
            assert ok, f"unexpected dihedral support at m = {m}"
            out[("D4", m)] = _half(s)

    # cyclic: sweep the ramified quadratics E and count extenders
    basis = unit_basis(F)
    for mask in range(1, 1 << basis.dim):
        d = F.one()
        for j in range(basis.dim):
            if mask >> j & 1:
                d = F.mul(d, basis.elems[j])
        E = quad_extend(F, d)
        if E.kind != "ramified":
            continue
        per_m2 = counts_12E_C4(F, E, gens_c, algo=algo)
        for mm, n in per_m2.items():
            key = ("C4", 2 * E.disc_val + mm)
            out[key] = out.get(key, 0) + n
    return out


# ---------------------------------------------------------------------------
# tame symbols (all five have closed forms; three survive at p = 2)
# ---------------------------------------------------------------------------


def _abar4_closure(elems, g4):
    S = {(0, 0)} | set(elems)
    while True:
        new = {((a0 + b0) % 4, (a1 + b1) % g4) for a0, a1 in S for b0, b1 in S}
        if new <= S:
            return frozenset(S)
        S |= new


def _abar4_strata(S, g4):
    """All stratified minimal generating sets (A0, A1, A2) of S.

    Candidate generators keep valuation coordinate 0, 1 or 2 (an
    element of valuation 3 is replaced by its inverse) and at most one
    generator of odd valuation is allowed.
    """
    cands = sorted(x for x in S if x != (0, 0) and x[0] in (0, 1, 2))
    found = []
    for k in range(0, 3):
        for combo in itertools.combinations(cands, k):
            if sum(x[0] % 2 for x in combo) > 1:
                continue
            if _abar4_closure(combo, g4) == S:
                A0 = tuple(x for x in combo if x[0] == 0)
                A1 = tuple(x for x in combo if x[0] == 1)
                A2 = tuple(x for x in combo if x[0] == 2)
                found.append((A0, A1, A2))
        if found:
            return found
    raise ArithmeticError("no stratified generating set found")  # pragma: no cover


def _unique_value(values):
    vals = set(values)
    assert len(vals) == 1, "value must not depend on the stratification"
    return vals.pop()


def _premass_22_odd(F, gens_c):
    q = F.q
    g4 = gcd(4, q - 1)
    S = _abar4_closure(_abar4_images(F, gens_c, g4), g4)
    twoM = _abar4_two_m(g4)

    def value(strat):
        A0, A1, A2 = strat
        a0_sq = all(x in twoM for x in A0)
        if a0_sq and not A1 and not A2:
            return Fraction(1, 2 * q * q)
        if (
            a0_sq
            and not A1
            and all(
                ((x[0] - y[0]) % 4, (x[1] - y[1]) % g4) in twoM
                for x in A2
                for y in A2
            )
        ):
            return Fraction(1, 4 * q * q)
        return Fraction(0)

    return _unique_value(value(s) for s in _abar4_strata(S, g4))


def _premass_14_odd(F, gens_c):
    q = F.q
    g4 = gcd(4, q - 1)
    S = _abar4_closure(_abar4_images(F, gens_c, g4), g4)
    twoM = _abar4_two_m(g4)
    strata = _abar4_strata(S, g4)

    if q % 4 == 1:

        def value(strat):
            A0, A1, A2 = strat
            if S == frozenset({(0, 0)}):
                return Fraction(1, q**3)
            if not A0 and not A1 and len(A2) == 1 and A2[0] in twoM:
                return Fraction(1, 2 * q**3)
            if not A0 and not A2 and len(A1) == 1:
                return Fraction(1, 4 * q**3)
            return Fraction(0)

    else:

        def value(strat):
            A0, A1, A2 = strat
            if S <= twoM:
                return Fraction(1, q**3)
            if not A0 and not A2 and len(A1) == 1:
                return Fraction(1, 2 * q**3)
            return Fraction(0)

    return _unique_value(value(s) for s in strata)


def _abar4_images(F, gens_c, g4):
    out = []
    for g in gens_c:
        v = F.val(g)
        u = F.shift(g, -v) if v else g
        out.append((v % 4, dlog_mod(F, F.residue(u), g4)))
    return out


def _abar4_two_m(g4):
    return frozenset(((2 * a) % 4, (2 * b) % g4) for a in range(4) for b in range(g4))


def premass4_tame(F, gens=()) -> MassReport:
    """The tame part of the constrained quartic pre-mass of F.

    Always contains the unconstrained epimorphic part (the six symbols
    with an unramified-split factor) and the two valuation-condition
    symbols (4) and (2 2); for odd residue characteristic the three
    remaining symbols are tame as well and are included here.
    """
    q = F.q
    gens_c = tuple(F.coerce(g) for g in gens)
    vals = [F.val(g) for g in gens_c]
    parts = [
        ("epi", Fraction(5 * q * q + 8 * q + 8, 8 * q * q)),
        ("(4)", Fraction(1, 4) if all(v % 4 == 0 for v in vals) else Fraction(0)),
        ("(2 2)", Fraction(1, 8) if all(v % 2 == 0 for v in vals) else Fraction(0)),
    ]
    if F.p != 2:
        s2 = strat_gens(F, gens_c, 2)
        if s2.is_trivial():
            v1212 = Fraction(1, 2 * q * q)
        elif not s2.A0 and len(s2.A1) == 1:
            v1212 = Fraction(3, 8 * q * q)
        else:
            v1212 = Fraction(1, 4 * q * q)
        parts.append(("(1^2 1^2)", v1212))
        parts.append(("(2^2)", _premass_22_odd(F, gens_c)))
        parts.append(("(1^4)", _premass_14_odd(F, gens_c)))
    return MassReport(tuple(parts))


# ---------------------------------------------------------------------------
# wild symbols (p = 2)
# ---------------------------------------------------------------------------


def premass4_wild(F, gens=(), symbol: str = "(1^4)", algo: str = "auto") -> MassReport:
    """Constrained pre-mass of one wild quartic symbol of a 2-adic F,
    broken down by Galois closure group."""
    if F.p != 2:
        raise ValueError("wild quartic symbols require residue characteristic 2")
    gens_c = tuple(F.coerce(g) for g in gens)
    e, q = F.e, F.q
    prof2 = filtration_profile(F, gens_c, 2)

    if symbol == "(1^2 1^2)":
        diag = sum(
            Fraction(count_Cp(F, m // 2, prof2), q**m)
            for m in range(4, 4 * e + 3, 2)
        )
        dist = sum(Fraction(_h_nneq(q, e, m), q**m) for m in range(4, 4 * e + 3))
        return MassReport(
            (("C2", Fraction(diag, 8)), ("V4", Fraction(dist, 4)))
        )

    if symbol == "(2^2)":
        if not _even_valuations(F, gens_c):
            return MassReport((("C4", Fraction(0)), ("V4", Fraction(0)), ("D4", Fraction(0))))
        d4 = Fraction(1, 2) * (
            Fraction(1, q**2)
            - Fraction(1, q ** (2 * e + 2))
            - Fraction(1, q**2 + q + 1)
            * (Fraction(1, q) - Fraction(1, q ** (3 * e + 1)))
            + Fraction(q**e - 1, q ** (3 * e + 2))
        )
        A = prof2.group_size
        sz = prof2.size_at
        v4 = Fraction(1 if sz(2 * e) == 1 else 0, q ** (3 * e + 2))
        for c in range(1, e + 1):
            v4 += Fraction(q * sz(2 * c) - sz(2 * c - 1), q ** (3 * c + 1))
        v4 = Fraction(v4, 4 * A)
        E = _unramified_quadratic(F)
        nec = nec_sizes(F, E, gens_c, algo=algo)
        c4 = Fraction(0)
        for c in range(1, e + 1):
            c4 += Fraction(
                nec.size_at(2 * e - 2 * c) - nec.size_at(2 * e - 2 * c + 2),
                q ** (4 * c),
            )
        c4 += Fraction(nec.total - nec.size_at(0), q ** (4 * e + 2))
        return MassReport((("C4", Fraction(c4, 8)), ("V4", v4), ("D4", d4)))

    if symbol == "(1^4)":
        aut = {"C4": 4, "V4": 4, "D4": 2}

        def by_group(counts):
            acc = {g: Fraction(0) for g in aut}
            for (g, m), n in counts.items():
                acc[g] += Fraction(n, aut[g] * q**m)
            return acc

        con = by_group(counts_14(F, gens_c, algo=algo))
        free = by_group(counts_14(F, (), algo=algo))
        s4 = Fraction(1, q**3) - sum(free.values())
        assert s4 >= 0
        return MassReport(
            (
                ("C4", con["C4"]),
                ("V4", con["V4"]),
                ("D4", con["D4"]),
                ("A4/S4", s4),
            )
        )

    raise ValueError(f"unknown wild symbol {symbol!r}")


WILD_SYMBOLS = ("(1^2 1^2)", "(2^2)", "(1^4)")


def premass4(F, gens=(), algo: str = "auto") -> MassReport:
    """The full constrained quartic pre-mass of F, all eleven symbols.

    Tame parts are labelled by their symbol; wild parts (p = 2) are
    labelled "symbol group".
    """
    parts = list(premass4_tame(F, gens).parts)
    if F.p == 2:
        for sym in WILD_SYMBOLS:
            rep = premass4_wild(F, gens, sym, algo=algo)
            parts.extend((f"{sym} {g}", v) for g, v in rep.parts)
    return MassReport(tuple(parts))
