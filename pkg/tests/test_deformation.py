"""Schouten bracket, algebroid differential, Maurer-Cartan certificates."""
from fractions import Fraction

import numpy as np
import pytest

from gkw.calculus import (Form, GeneralizedSection, VectorField, courant_bracket,
                          interior_product, pairing_poly, standard_symplectic_form)
from gkw.deformation import DeformationBivector, LMultivector, schouten_bracket
from gkw.poly import QI, ComplexPolynomial

from generators import rand_lbar_section, rand_poly
from naive_calculus import naive_schouten
from test_calculus import section_to_raw, to_raw


def test_schouten_constant_bivector_squares_to_zero():
    n = 2
    A = LMultivector(n, 2, {(0, 1): ComplexPolynomial.one(n)})
    assert schouten_bracket(A, A).is_zero


def test_schouten_holomorphic_in_other_coords_vanishes():
    # [F d0^d1, G d0^d1] = 0 when F, G depend only on z2.. (the quotient
    # closure computation)
    n = 3
    F = ComplexPolynomial.variable(n, 2) ** 2
    G = ComplexPolynomial.variable(n, 2) + ComplexPolynomial.const(n, 5)
    A = LMultivector(n, 2, {(0, 1): F})
    B = LMultivector(n, 2, {(0, 1): G})
    assert schouten_bracket(A, B).is_zero


def test_schouten_repeated_factor_collapse():
    # [z0 d0^d1, z0 d0^d1] = 0: the only surviving term carries d1^d0^d1
    n = 2
    A = LMultivector(n, 2, {(0, 1): ComplexPolynomial.variable(n, 0)})
    assert schouten_bracket(A, A).is_zero


def test_schouten_degree_one_reduces_to_courant():
    rng = np.random.default_rng(31)
    n = 2
    for _ in range(20):
        s1 = rand_lbar_section(rng, n)
        s2 = rand_lbar_section(rng, n)
        A = LMultivector.from_sections(n, ComplexPolynomial.one(n), [s1])
        B = LMultivector.from_sections(n, ComplexPolynomial.one(n), [s2])
        got = schouten_bracket(A, B).as_section()
        want = courant_bracket(s1, s2)
        assert got == want


def test_schouten_function_bracket():
    n = 2
    f = ComplexPolynomial.variable(n, 0) * ComplexPolynomial.variable(n, 1)
    Y = LMultivector.from_sections(n, ComplexPolynomial.one(n),
                                   [GeneralizedSection.frame(n, 0)])
    F = LMultivector.from_function(f)
    got = schouten_bracket(Y, F)
    assert got.terms[()] == ComplexPolynomial.variable(n, 1)
    assert schouten_bracket(F, Y).terms[()] == -ComplexPolynomial.variable(n, 1)


def test_schouten_oracle_equivalence_50_seeded():
    rng = np.random.default_rng(515151)
    n = 2
    for _ in range(50):
        decs_a = [(rand_poly(rng, n, 1, 1), [rand_lbar_section(rng, n),
                                             rand_lbar_section(rng, n)])]
        decs_b = [(rand_poly(rng, n, 1, 1), [rand_lbar_section(rng, n),
                                             rand_lbar_section(rng, n)])]
        A = LMultivector.zero(n, 2)
        for c, fs in decs_a:
            A = A + LMultivector.from_sections(n, c, fs)
        B = LMultivector.zero(n, 2)
        for c, fs in decs_b:
            B = B + LMultivector.from_sections(n, c, fs)
        got = schouten_bracket(A, B)
        raw_a = [(to_raw(c), [section_to_raw(s) for s in fs]) for c, fs in decs_a]
        raw_b = [(to_raw(c), [section_to_raw(s) for s in fs]) for c, fs in decs_b]
        want = naive_schouten(raw_a, raw_b, n)
        assert {k: to_raw(p) for k, p in got.terms.items()} == want


# -- deformation bivectors ------------------------------------------------------

def cpn_eps(n):
    Y = VectorField(n, {1: ComplexPolynomial.variable(n, 0) ** 2})
    Z = VectorField.frame(n, 2)
    return DeformationBivector.from_vector_fields(Y, Z)


def test_paper_form_expansion():
    # eps built from (Y, Z) equals Y^Z + iota_Y omega ^ iota_Z omega by
    # construction; verify the expansion against a hand count: the form part
    # carries coefficient -1/4 F for the standard symplectic form
    n = 3
    eps = cpn_eps(n)
    z0sq = ComplexPolynomial.variable(n, 0) ** 2
    assert eps.hol == {(1, 2): z0sq}
    assert eps.form == {(1, 2): z0sq * QI(Fraction(-1, 4))}


def test_eps_fixes_symplectic_structure_mixed_type():
    # a^b decomposition into u/v frames is mixed exactly when the form
    # coefficient is -1/4 of the bivector one; cross-check numerically that
    # the deformed pair commutes (t small)
    from gkw.catalog import build_case
    case = build_case("cpn-2")
    scen = case.scenario
    from gkw.pipeline import sample_level_set
    z = sample_level_set(scen, 3, 9).points[-1]
    pair = scen.recipe.pair_at(z)   # KahlerPairNum validates commuting
    assert pair.J1.type_of() == 0


def test_algebroid_differential_examples():
    n = 3
    eps = cpn_eps(n)
    assert eps.algebroid_differential().is_zero     # z0^2 is holomorphic
    const = DeformationBivector(n, {(1, 2): ComplexPolynomial.one(n)},
                                {(1, 2): ComplexPolynomial.one(n)})
    assert const.algebroid_differential().is_zero
    bad = DeformationBivector(n, {(1, 2): ComplexPolynomial.variable(n, 0, conjugated=True)})
    d = bad.algebroid_differential()
    assert not d.is_zero
    assert (1, 2, 3 * n + 0) in d.terms   # contains a dzbar0 factor


def test_algebroid_differential_against_definition_formula():
    """Degree-2 cross-check of coefficient-wise dbar against the alternating
    sum formula evaluated on frame triples of the eigenbundle (whose frame
    sections have vanishing pairwise brackets)."""
    rng = np.random.default_rng(7)
    n = 2
    for _ in range(10):
        eps = DeformationBivector(
            n,
            {(0, 1): rand_poly(rng, n, 2, 2)},
            {(0, 1): rand_poly(rng, n, 2, 2)})
        d = eps.algebroid_differential()
        # frame of L = T01 + T*10: sections with pi = d/dzbar_k or 0
        frame = [GeneralizedSection.frame(n, n + k) for k in range(n)] \
            + [GeneralizedSection.frame(n, 2 * n + k) for k in range(n)]

        def ev2(m2, X, Y):
            # evaluate a degree-2 multivector on (X, Y) via the pairing
            # identification (factor 2 per slot)
            total = ComplexPolynomial.zero(n)
            for (a, b), p in m2.terms.items():
                ea, eb = _frame_sec(n, a), _frame_sec(n, b)
                total = total + p * (
                    (pairing_poly(X, ea) * pairing_poly(Y, eb)
                     - pairing_poly(X, eb) * pairing_poly(Y, ea)) * 4)
            return total

        def ev3(m3, X, Y, Z):
            total = ComplexPolynomial.zero(n)
            import itertools
            for (a, b, c), p in m3.terms.items():
                es = [_frame_sec(n, a), _frame_sec(n, b), _frame_sec(n, c)]
                det = ComplexPolynomial.zero(n)
                for perm, sign in _perms3():
                    term = (pairing_poly(X, es[perm[0]])
                            * pairing_poly(Y, es[perm[1]])
                            * pairing_poly(Z, es[perm[2]]))
                    det = det + term * (8 * sign)
                total = total + p * det
            return total

        for i in range(len(frame)):
            for j in range(i + 1, len(frame)):
                for k in range(j + 1, len(frame)):
                    X, Y, Z = frame[i], frame[j], frame[k]
                    lhs = ev3(d, X, Y, Z)
                    rhs = (X.vec.apply_to(ev2(eps.to_multivector(), Y, Z))
                           - Y.vec.apply_to(ev2(eps.to_multivector(), X, Z))
                           + Z.vec.apply_to(ev2(eps.to_multivector(), X, Y)))
                    assert lhs == rhs


def _frame_sec(n, a):
    return GeneralizedSection.frame(n, a if a < 2 * n else a)


def _perms3():
    return [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
            ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)]


def test_maurer_cartan_certificates():
    for n in (3, 4, 5):
        assert cpn_eps(n).maurer_cartan_residual().is_zero
    n = 3
    Yb = VectorField(n, {1: ComplexPolynomial.variable(n, 0, conjugated=True)})
    bad = DeformationBivector.from_vector_fields(Yb, VectorField.frame(n, 2))
    assert not bad.maurer_cartan_residual().is_zero


def test_maurer_cartan_toric_and_grassmann():
    from gkw.catalog import build_case
    for name in ("toric-cp2", "toric-blowup1", "grassmann-1-3", "grassmann-2-3"):
        case = build_case(name)
        assert case.scenario.recipe.eps.maurer_cartan_residual().is_zero, name


def test_lie_derivative_of_bivector():
    # rotation-invariance of the cpn deformation: the diagonal field has
    # weight 2 on z0^2 and -1 on each of d1, d2 and dzb1, dzb2
    from gkw.actions import TorusAction
    n = 3
    eps = cpn_eps(n)
    act = TorusAction(((1, 1, 1),))
    assert eps.lie_derivative(act.fundamental_field(0).vec).is_zero
    act2 = TorusAction(((1, 0, 0),))
    assert not eps.lie_derivative(act2.fundamental_field(0).vec).is_zero


def test_pullback_invariance_su2():
    from gkw.catalog import build_case, cpn_su2_invariance
    case = build_case("cpn-2")
    assert cpn_su2_invariance(case, count=10, seed=11)


def test_paper_form_expansion_random_fields():
    # the builder output equals the independently expanded wedge
    # Y^Z + iota_Y omega ^ iota_Z omega for random holomorphic-frame fields
    from gkw.calculus import interior_product, standard_symplectic_form
    rng = np.random.default_rng(21)
    n = 3
    for _ in range(10):
        Y = VectorField(n, {int(rng.integers(0, n)): rand_poly(rng, n, 2, 1)})
        Z = VectorField(n, {int(rng.integers(0, n)): rand_poly(rng, n, 2, 1)})
        eps = DeformationBivector.from_vector_fields(Y, Z)
        hol = {}
        for a, pa in Y.comps.items():
            for b, pb in Z.comps.items():
                if a == b:
                    continue
                key, sgn = ((a, b), 1) if a < b else ((b, a), -1)
                cur = hol.get(key, ComplexPolynomial.zero(n))
                val = cur + pa * pb * sgn
                if val.is_zero:
                    hol.pop(key, None)
                else:
                    hol[key] = val
        assert eps.hol == hol
        omega = standard_symplectic_form(n)
        w = interior_product(Y, omega).wedge(interior_product(Z, omega))
        assert eps.form == {(i - n, j - n): p for (i, j), p in w.comps.items()}


def test_evaluate_structure_preserved():
    n = 3
    eps = cpn_eps(n)
    z = np.array([2.0 + 0j, 0.3 + 0.1j, -0.2 + 0.4j])
    hol, form = eps.evaluate(z)
    assert hol == [((1, 2), pytest.approx(4.0 + 0j))]
    assert form[0][0] == (1, 2) and form[0][1] == pytest.approx(-1.0 + 0j)
    # z0 = 0 kills every coefficient
    z0 = np.array([0j, 1.0 + 0j, 2.0 + 0j])
    hol0, form0 = eps.evaluate(z0)
    assert all(abs(c) < 1e-15 for _, c in hol0 + form0)


def test_vector_field_evaluate_example():
    n = 3
    X = VectorField(n, {1: ComplexPolynomial.variable(n, 0)})
    out = X.evaluate(np.array([2.0 + 0j, 0j, 0j]))
    assert out[1] == pytest.approx(2.0 + 0j)
    assert np.abs(np.delete(out, 1)).max() == 0.0
