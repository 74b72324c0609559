"""Multivector calculus for deformations: Schouten bracket, Lie-algebroid
differential (the dbar case), and Maurer-Cartan residuals, all exact.

An LMultivector of degree k is stored expanded over the 4n generalized
frame directions (0..2n-1 tangent z/zbar frame, 2n..4n-1 covector frame),
keys strictly increasing, so zero-testing is canonical.
"""
from __future__ import annotations

from .calculus import (Form, GeneralizedSection, VectorField, _merge, _sort_with_sign,
                       courant_bracket, interior_product, lie_bracket,
                       standard_symplectic_form)
from .poly import QI, QI_HALF, ComplexPolynomial


class LMultivector:
    """Alternating k-tensor of generalized frame directions with polynomial
    coefficients.  Degree-1 instances are interconvertible with sections."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n, degree, terms=None):
        self.n = n
        self.degree = degree
        self.terms = {}
        if terms:
            for idx, p in terms.items():
                if len(idx) != degree:
                    raise ValueError("key length does not match degree")
                if not p.is_zero:
                    self.terms[idx] = p

    @classmethod
    def zero(cls, n, degree):
        return cls(n, degree)

    @classmethod
    def from_function(cls, f: ComplexPolynomial):
        return cls(f.n, 0, {(): f})

    @classmethod
    def from_sections(cls, n, coeff, factors):
        """coeff * (s_1 ^ ... ^ s_k), expanded over the frame."""
        if not isinstance(coeff, ComplexPolynomial):
            coeff = ComplexPolynomial.const(n, coeff)
        terms = {(): coeff}
        for s in factors:
            new = {}
            entries = [(a, p) for a, p in s.vec.comps.items()]
            entries += [(2 * n + a, p) for (a,), p in s.form.comps.items()]
            for idx, q in terms.items():
                for a, p in entries:
                    key, sign = _sort_with_sign(idx + (a,))
                    if key is None:
                        continue
                    _merge(new, key, q * p * sign)
            terms = new
        return cls(n, len(factors), terms)

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("cannot add multivectors of different degree")
        terms = dict(self.terms)
        for idx, p in other.terms.items():
            _merge(terms, idx, p)
        return LMultivector(self.n, self.degree, terms)

    def __neg__(self):
        return LMultivector(self.n, self.degree, {i: -p for i, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LMultivector(self.n, self.degree, {i: p * c for i, p in self.terms.items()})

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, LMultivector) and self.n == other.n
                and self.degree == other.degree and self.terms == other.terms)

    def as_section(self) -> GeneralizedSection:
        if self.degree != 1:
            raise ValueError("only degree-1 multivectors are sections")
        n = self.n
        vec = {}
        form = {}
        for (a,), p in self.terms.items():
            if a < 2 * n:
                vec[a] = p
            else:
                form[(a - 2 * n,)] = p
        return GeneralizedSection(VectorField(n, vec), Form(n, 1, form))

    def __repr__(self):
        def nm(a):
            n = self.n
            if a < n:
                return f"d/dz{a}"
            if a < 2 * n:
                return f"d/dzb{a - n}"
            if a < 3 * n:
                return f"dz{a - 2 * n}"
            return f"dzb{a - 3 * n}"
        if not self.terms:
            return "0"
        return " + ".join(f"({p!r}) {'^'.join(nm(a) for a in idx)}"
                          for idx, p in sorted(self.terms.items()))


def frame_section(n, a) -> GeneralizedSection:
    return GeneralizedSection.frame(n, a)


def schouten_bracket(A: LMultivector, B: LMultivector) -> LMultivector:
    """Graded bracket of multivector sections of an isotropic bracket-closed
    subbundle (the caller guarantees the factors lie in one).

    Degrees (p,q) -> p+q-1.  On (1,1) this is the Courant bracket; the
    function cases are [Y, f] = pi(Y) f = -[f, Y].  Stored coefficients
    ride on the first wedge factor of each term.
    """
    n = A.n
    p, q = A.degree, B.degree
    if p == 0 and q == 0:
        raise ValueError("bracket of two functions is not defined")
    if q == 0 or p == 0:
        if q == 0 and p == 1:
            f = B.terms.get((), ComplexPolynomial.zero(n))
            return LMultivector.from_function(A.as_section().vec.apply_to(f))
        if p == 0 and q == 1:
            f = A.terms.get((), ComplexPolynomial.zero(n))
            return LMultivector.from_function(-B.as_section().vec.apply_to(f))
        raise ValueError("function brackets supported only against degree-1 multivectors")
    out = LMultivector.zero(n, p + q - 1)
    for idxA, cA in A.terms.items():
        Xs = [frame_section(n, a) for a in idxA]
        Xs[0] = Xs[0].scale(cA)
        for idxB, cB in B.terms.items():
            Ys = [frame_section(n, b) for b in idxB]
            Ys[0] = Ys[0].scale(cB)
            for i in range(p):
                for j in range(q):
                    br = courant_bracket(Xs[i], Ys[j])
                    if br.is_zero:
                        continue
                    rest = [Xs[t] for t in range(p) if t != i] + [Ys[t] for t in range(q) if t != j]
                    sign = (-1) ** (i + j)
                    out = out + LMultivector.from_sections(n, sign, [br] + rest)
    return out


class DeformationBivector:
    """eps = sum F_ij d/dz_i ^ d/dz_j + sum G_ij dzbar_i ^ dzbar_j.

    Only the i<j representatives are stored.  Built from two
    holomorphic-frame fields via eps = Y^Z + iota_Y omega ^ iota_Z omega,
    the combination that fixes J_omega in a deformed pair.
    """

    __slots__ = ("n", "hol", "form")

    def __init__(self, n, hol=None, form=None):
        self.n = n
        self.hol = {}
        self.form = {}
        for src, dst in ((hol, self.hol), (form, self.form)):
            if src:
                for (i, j), p in src.items():
                    if i >= j:
                        raise ValueError("store strictly increasing index pairs")
                    if not p.is_zero:
                        dst[(i, j)] = p

    @classmethod
    def from_vector_fields(cls, Y: VectorField, Z: VectorField,
                           omega: Form | None = None) -> "DeformationBivector":
        n = Y.n
        if any(a >= n for a in Y.comps) or any(a >= n for a in Z.comps):
            raise ValueError("deformation fields must be holomorphic-frame")
        omega = omega if omega is not None else standard_symplectic_form(n)
        hol = {}
        for a, pa in Y.comps.items():
            for b, pb in Z.comps.items():
                if a == b:
                    continue
                key = (a, b) if a < b else (b, a)
                _merge(hol, key, pa * pb * (1 if a < b else -1))
        w = interior_product(Y, omega).wedge(interior_product(Z, omega))
        form = {}
        for (i, j), p in w.comps.items():
            if i < n or j < n:
                raise ValueError("contracted factors must be antiholomorphic")
            form[(i - n, j - n)] = p
        return cls(n, hol, form)

    @property
    def is_zero(self):
        return not self.hol and not self.form

    def scale(self, c):
        return DeformationBivector(self.n,
                                   {k: p * c for k, p in self.hol.items()},
                                   {k: p * c for k, p in self.form.items()})

    def __add__(self, other):
        hol = dict(self.hol)
        form = dict(self.form)
        for k, p in other.hol.items():
            _merge(hol, k, p)
        for k, p in other.form.items():
            _merge(form, k, p)
        return DeformationBivector(self.n, hol, form)

    def __eq__(self, other):
        return (isinstance(other, DeformationBivector) and self.n == other.n
                and self.hol == other.hol and self.form == other.form)

    def pullback_linear(self, A) -> "DeformationBivector":
        """Exact pullback along z -> A z (A invertible, QI entries):
        coefficients substitute z -> Az, tangent frames transform by A^-1,
        covector frames by conj(A).  Invariance <=> pullback == self."""
        from .exactlinalg import qi_matrix_inverse
        n = self.n
        Ainv = qi_matrix_inverse(A)
        out_h = {}
        out_f = {}
        for (i, j), p in self.hol.items():
            ps = p.substitute_linear(A)
            for a in range(n):
                ca = QI.of(Ainv[a][i])
                if not ca:
                    continue
                for b in range(n):
                    cb = QI.of(Ainv[b][j])
                    if not cb or a == b:
                        continue
                    key = (a, b) if a < b else (b, a)
                    _merge(out_h, key, ps * (ca * cb) * (1 if a < b else -1))
        for (i, j), p in self.form.items():
            ps = p.substitute_linear(A)
            for a in range(n):
                ca = QI.of(A[i][a]).conjugate()
                if not ca:
                    continue
                for b in range(n):
                    cb = QI.of(A[j][b]).conjugate()
                    if not cb or a == b:
                        continue
                    key = (a, b) if a < b else (b, a)
                    _merge(out_f, key, ps * (ca * cb) * (1 if a < b else -1))
        return DeformationBivector(n, out_h, out_f)

    def lie_derivative(self, X: VectorField) -> "DeformationBivector":
        """L_X eps by the Leibniz rule; exact.  Raises if the derivative
        leaves the (2,0)-bivector + (0,2)-form shape."""
        from .calculus import lie_derivative as lie_d
        n = self.n
        out_h = {}
        for (i, j), p in self.hol.items():
            _merge(out_h, (i, j), X.apply_to(p))
            for pos, (src, other) in enumerate(((i, j), (j, i))):
                br = lie_bracket(X, VectorField.frame(n, src))
                for a, q in br.comps.items():
                    if a >= n:
                        raise ValueError("Lie derivative left the holomorphic bivector bundle")
                    if a == other:
                        continue
                    # term p * [X, d/dz_src] ^ d/dz_other, slot order preserved
                    lo, hi = (a, other) if a < other else (other, a)
                    sign = 1 if a < other else -1
                    if pos == 1:
                        sign = -sign  # factor order (d/dz_i, [X, d/dz_j])
                    _merge(out_h, (lo, hi), p * q * sign)
        out_f = {}
        for (i, j), p in self.form.items():
            lw = lie_d(X, Form(n, 2, {(i + n, j + n): p}))
            for (a, b), q in lw.comps.items():
                if a < n or b < n:
                    raise ValueError("Lie derivative left the antiholomorphic form bundle")
                _merge(out_f, (a - n, b - n), q)
        return DeformationBivector(n, out_h, out_f)

    def to_multivector(self) -> LMultivector:
        n = self.n
        terms = {}
        for (i, j), p in self.hol.items():
            terms[(i, j)] = p
        for (i, j), p in self.form.items():
            _merge(terms, (3 * n + i, 3 * n + j), p)
        return LMultivector(n, 2, terms)

    def algebroid_differential(self) -> LMultivector:
        """d_L for the standard complex structure's eigenbundle: coefficient-wise
        dbar with the new dzbar factor wedged in front."""
        n = self.n
        terms = {}
        for idx, p in self.to_multivector().terms.items():
            for k in range(n):
                dp = p.wirtinger(k, holomorphic=False)
                if dp.is_zero:
                    continue
                key, sign = _sort_with_sign((3 * n + k,) + idx)
                if key is None:
                    continue
                _merge(terms, key, dp * sign)
        return LMultivector(n, 3, terms)

    def maurer_cartan_residual(self) -> LMultivector:
        """d_L eps + [eps, eps]/2; exact zero certifies bracket closure of
        the deformed eigenbundle."""
        m = self.to_multivector()
        return self.algebroid_differential() + schouten_bracket(m, m).scale(QI_HALF)

    def evaluate(self, z):
        """Numeric ((i,j), coeff) entries for the two graded parts."""
        hol = [((i, j), p.evaluate(z)) for (i, j), p in self.hol.items()]
        form = [((i, j), p.evaluate(z)) for (i, j), p in self.form.items()]
        return hol, form

    def __repr__(self):
        return f"DeformationBivector(hol={self.hol!r}, form={self.form!r})"
