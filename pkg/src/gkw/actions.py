"""Group actions on C^N, fundamental fields, moment maps, realification.

Conventions (fixed once, echoed in report headers): weight w rotates a
coordinate counterclockwise, z -> e^{i w t} z, so the fundamental field is
X_w = i w (z d/dz - zbar d/dzbar) = w (x d/dy - y d/dx), and the defining
identity dPhi^xi = iota_{xi_M} omega_std holds exactly for the standard
moment map Phi = 1/2 sum_j w_j |z_j|^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .calculus import (GeneralizedSection, VectorField, euler_field,
                       exterior_derivative, interior_product,
                       standard_symplectic_form)
from .poly import QI, QI_HALF, QI_I, ComplexPolynomial


@dataclass(frozen=True)
class TorusAction:
    """A k-torus acting on C^N through an integer weight matrix (k x N)."""

    weights: tuple

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)

    @property
    def k(self):
        return len(self.weights)

    @property
    def n(self):
        return len(self.weights[0])

    def fundamental_field(self, a: int) -> GeneralizedSection:
        n = self.n
        comps = {}
        for j, w in enumerate(self.weights[a]):
            if w == 0:
                continue
            comps[j] = ComplexPolynomial.variable(n, j) * (QI_I * w)
            comps[j + n] = ComplexPolynomial.variable(n, j, conjugated=True) * (-QI_I * w)
        return GeneralizedSection.from_vector(VectorField(n, comps))

    def fundamental_fields(self):
        return [self.fundamental_field(a) for a in range(self.k)]

    def group_element(self, thetas) -> np.ndarray:
        """Diagonal torus element for angles theta_a (floats)."""
        phases = np.zeros(self.n, dtype=complex)
        for j in range(self.n):
            ang = sum(th * self.weights[a][j] for a, th in enumerate(thetas))
            phases[j] = np.exp(1j * ang)
        return np.diag(phases)


def unitary_lie_basis(n: int):
    """Elementary skew-Hermitian basis in fixed order:
    i E_aa (a = 1..n), then for a<b: E_ab - E_ba, i(E_ab + E_ba)."""
    out = []
    for a in range(n):
        H = np.zeros((n, n), dtype=complex)
        H[a, a] = 1j
        out.append(H)
    for a in range(n):
        for b in range(a + 1, n):
            H = np.zeros((n, n), dtype=complex)
            H[a, b] = 1.0
            H[b, a] = -1.0
            out.append(H)
            H2 = np.zeros((n, n), dtype=complex)
            H2[a, b] = 1j
            H2[b, a] = 1j
            out.append(H2)
    return out


def _qi_of_entry(c: complex) -> QI:
    # lie-basis entries are exact small Gaussian integers
    return QI(Fraction(int(round(c.real))), Fraction(int(round(c.imag))))


@dataclass(frozen=True)
class UnitaryAction:
    """U(n) acting by left multiplication on C^{n x m}, flattened row-major:
    coordinate q = i*m + j for matrix entry (i, j)."""

    n: int
    m: int

    @property
    def dim_group(self):
        return self.n * self.n

    @property
    def ambient_n(self):
        return self.n * self.m

    def flat(self, i, j):
        return i * self.m + j

    def lie_basis(self):
        return unitary_lie_basis(self.n)

    @property
    def k(self):
        return self.dim_group

    def fundamental_field(self, idx: int) -> GeneralizedSection:
        """Linearization of Z -> e^{t xi} Z at t = 0: velocity xi Z.

        Real field: the antiholomorphic components are the conjugates of
        the holomorphic ones."""
        xi = self.lie_basis()[idx]
        N = self.ambient_n
        vec = {}
        for i in range(self.n):
            for j in range(self.m):
                p = ComplexPolynomial.zero(N)
                for s in range(self.n):
                    c = _qi_of_entry(xi[i, s])
                    if c:
                        p = p + ComplexPolynomial.variable(N, self.flat(s, j)) * c
                if not p.is_zero:
                    vec[self.flat(i, j)] = p
                    vec[N + self.flat(i, j)] = p.conjugate()
        return GeneralizedSection.from_vector(VectorField(N, vec))

    def fundamental_fields(self):
        return [self.fundamental_field(i) for i in range(self.dim_group)]

    def group_element_exact(self, params):
        """A rational-entry element of U(n) from tangent-half-angle data.

        params: list of (a, b, t1, t2) Givens-style blocks; each yields the
        exact unitary [[c, -s w], [s conj(w), c]] on rows (a, b) with
        c = (1-t1^2)/(1+t1^2), s = 2 t1/(1+t1^2), w = rational unit complex
        from t2.  Entries are QI."""
        A = [[QI(1 if i == j else 0) for j in range(self.n)] for i in range(self.n)]
        for (a, b, t1, t2) in params:
            c, s = _tan_half(t1)
            cw, sw = _tan_half(t2)
            w = QI(cw, sw)
            B = [[QI(1 if i == j else 0) for j in range(self.n)] for i in range(self.n)]
            B[a][a] = QI(c)
            B[b][b] = QI(c)
            B[a][b] = -QI(s) * w
            B[b][a] = QI(s) * w.conjugate()
            A = [[sum((A[i][k] * B[k][j] for k in range(self.n)), QI(0))
                  for j in range(self.n)] for i in range(self.n)]
        return A


def _tan_half(t: Fraction):
    """Exact point on the unit circle: (cos, sin) = ((1-t^2), 2t)/(1+t^2)."""
    t = Fraction(t)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


@dataclass(frozen=True)
class MomentMapPoly:
    """Generalized moment map mu = f + i h with exact real polynomial parts,
    one component per Lie-algebra basis element."""

    f: tuple
    h: tuple

    def __post_init__(self):
        for p in list(self.f) + list(self.h):
            if not p.is_real:
                raise ValueError("moment map components must be real polynomials")
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "h", tuple(self.h))

    @property
    def k(self):
        return len(self.f)

    @property
    def is_real(self):
        return all(p.is_zero for p in self.h)

    def complex_component(self, a):
        return self.f[a], self.h[a]

    def f_values(self, z) -> np.ndarray:
        return np.array([p.evaluate(z).real for p in self.f])

    def df_forms(self):
        return [exterior_derivative(p) for p in self.f]

    def dh_forms(self):
        return [exterior_derivative(p) for p in self.h]


def moment_from_hamiltonian_identity(fields) -> MomentMapPoly:
    """mu^xi(z) = 1/2 omega(xi_M(z), z): the exact quadratic potential of a
    linear Hamiltonian field w.r.t. omega_std."""
    if not fields:
        raise ValueError("need at least one fundamental field")
    n = fields[0].n
    omega = standard_symplectic_form(n)
    pos = euler_field(n)
    f = []
    for s in fields:
        w = interior_product(s.vec, omega)
        val = interior_product(pos, w).comps.get((), ComplexPolynomial.zero(n))
        f.append(val * QI_HALF)
    return MomentMapPoly(tuple(f), tuple(ComplexPolynomial.zero(n) for _ in f))


def standard_moment_map(action: TorusAction) -> MomentMapPoly:
    """Phi^a = 1/2 sum_j W[a][j] |z_j|^2 with dPhi^a = iota_{xi_a} omega_std."""
    n = action.n
    f = []
    for row in action.weights:
        p = ComplexPolynomial.zero(n)
        for j, w in enumerate(row):
            if w:
                zj = ComplexPolynomial.variable(n, j)
                zbj = ComplexPolynomial.variable(n, j, conjugated=True)
                p = p + zj * zbj * QI(Fraction(w, 2))
        f.append(p)
    h = tuple(ComplexPolynomial.zero(n) for _ in f)
    return MomentMapPoly(tuple(f), h)


def grassmannian_moment_map(action: UnitaryAction) -> MomentMapPoly:
    """Real components 1/2 tr(H_xi Z Z-dagger) per skew-Hermitian basis
    element xi = i H_xi; assembled so dmu^xi = iota_{xi_M} omega_std."""
    return moment_from_hamiltonian_identity(action.fundamental_fields())


def grassmannian_matrix_polynomials(action: UnitaryAction):
    """The Hermitian matrix Phi(Z) = Z Z-dagger as exact polynomials."""
    N = action.ambient_n
    out = [[ComplexPolynomial.zero(N) for _ in range(action.n)] for _ in range(action.n)]
    for a in range(action.n):
        for b in range(action.n):
            p = ComplexPolynomial.zero(N)
            for j in range(action.m):
                p = p + (ComplexPolynomial.variable(N, action.flat(a, j))
                         * ComplexPolynomial.variable(N, action.flat(b, j), conjugated=True))
            out[a][b] = p
    return out


def central_level(action: UnitaryAction) -> np.ndarray:
    """Moment values of the central coadjoint point Z Z-dagger = I:
    mu^xi = 1/2 tr(H_xi)."""
    vals = []
    for xi in action.lie_basis():
        H = (xi / 1j)
        vals.append(0.5 * float(np.trace(H).real))
    return np.array(vals)


def shift_by_bfield(mm: MomentMapPoly, phi: MomentMapPoly) -> MomentMapPoly:
    """mu + i Phi (Phi real): the moment map of the B-transformed structure
    when iota_{xi_M} B = dPhi^xi."""
    if len(phi.f) != len(mm.f):
        raise ValueError("component counts differ")
    if not phi.is_real:
        raise ValueError("shift must be by a real map")
    return MomentMapPoly(mm.f, tuple(h + p for h, p in zip(mm.h, phi.f)))
