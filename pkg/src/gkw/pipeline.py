"""End-to-end reduction: sample level sets, build P = g_M + df pointwise,
reduce, verify type formulas and bracket closure, extract bi-Hermitian data.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import frames
from .actions import MomentMapPoly, TorusAction, UnitaryAction
from .calculus import (Form, GeneralizedSection, VectorField, exterior_derivative,
                       interior_product, standard_symplectic_form)
from .deformation import DeformationBivector
from .linear import (BiHermitianData, ComplexSubspace, KahlerPairNum, LinearGC,
                     QuotientBasis, ValidationError, b_field_matrix,
                     contraction_operator, deform_pair, eta, extract_bihermitian,
                     numerical_rank, reduce_pair, subspace_intersection_dim)
from .poly import QI, ComplexPolynomial

FREENESS_TOL = 1e-8
LEVEL_TOL = 1e-12
P_ISOTROPY_TOL = 1e-9


# -- structure recipes --------------------------------------------------------

class GenuineKahlerRecipe:
    """(J_omega, J_J) for the standard flat structures on C^n."""

    kind = "genuine-kahler"

    def __init__(self, n: int):
        self.n = n
        self._J1 = LinearGC.from_symplectic(frames.omega_std_map(n))
        self._J2 = LinearGC.from_complex(frames.complex_structure_std(n))

    def pair_at(self, z) -> KahlerPairNum:
        return KahlerPairNum(self._J1, self._J2)

    def describe(self):
        return {"kind": self.kind, "n": self.n}


class DeformedKahlerRecipe:
    """(J_omega, J_eps(t)) on C^n: J2 deformed pointwise by t * eps."""

    kind = "deformed"

    def __init__(self, n: int, eps: DeformationBivector, t: Fraction):
        if eps.n != n:
            raise ValueError("deformation lives on a different C^n")
        self.n = n
        self.eps = eps
        self.t = Fraction(t)
        self._J1 = LinearGC.from_symplectic(frames.omega_std_map(n))
        self._J2 = LinearGC.from_complex(frames.complex_structure_std(n))
        self._Tt = frames.tangent_frame_matrix(n)
        self._Tc = frames.covector_frame_matrix(n)

    def contraction_at(self, z) -> np.ndarray:
        n = self.n
        hol, form = self.eps.evaluate(z)
        pairs = []
        for (i, j), c in hol:
            a = np.zeros(4 * n, dtype=complex)
            b = np.zeros(4 * n, dtype=complex)
            a[:2 * n] = self._Tt[:, i] * c
            b[:2 * n] = self._Tt[:, j]
            pairs.append((a, b))
        for (i, j), c in form:
            a = np.zeros(4 * n, dtype=complex)
            b = np.zeros(4 * n, dtype=complex)
            a[2 * n:] = self._Tc[:, n + i] * c
            b[2 * n:] = self._Tc[:, n + j]
            pairs.append((a, b))
        return contraction_operator(pairs, 2 * n)

    def pair_at(self, z) -> KahlerPairNum:
        base = KahlerPairNum(self._J1, self._J2)
        if self.eps.is_zero:
            return base
        return deform_pair(base, self.contraction_at(z), float(self.t))

    def upstairs_sections(self):
        """Polynomial frame sections of L_eps = {Y + t iota_Y eps : Y in L_J}."""
        n = self.n
        out = []
        t = QI(self.t)
        for a in range(2 * n):
            if a < n:
                base = GeneralizedSection.frame(n, n + a)       # d/dzbar_a
                contr = VectorField.zero(n)
                formc = {}
                for (i, j), p in self.eps.form.items():
                    if a == i:
                        _set = formc.setdefault((n + j,), ComplexPolynomial.zero(n))
                        formc[(n + j,)] = _set + p * t
                    elif a == j:
                        _set = formc.setdefault((n + i,), ComplexPolynomial.zero(n))
                        formc[(n + i,)] = _set - p * t
                extra = GeneralizedSection(contr, Form(n, 1, formc))
            else:
                k = a - n
                base = GeneralizedSection.frame(n, 2 * n + k)   # dz_k
                vecc = {}
                for (i, j), p in self.eps.hol.items():
                    if k == i:
                        vecc[j] = vecc.get(j, ComplexPolynomial.zero(n)) + p * t
                    elif k == j:
                        vecc[i] = vecc.get(i, ComplexPolynomial.zero(n)) - p * t
                extra = GeneralizedSection(VectorField(n, vecc), Form.zero(n, 1))
            out.append(base + extra)
        return out

    def describe(self):
        return {"kind": self.kind, "n": self.n, "t": str(self.t)}


class BShiftedRecipe:
    """e^B-transform of a base recipe by a closed polynomial 2-form B."""

    kind = "b-shifted"

    def __init__(self, base, B: Form):
        if B.degree != 2:
            raise ValueError("B must be a 2-form")
        self.base = base
        self.n = base.n
        self.B = B
        if not exterior_derivative(B).is_zero:
            raise ValueError("B must be closed")

    def pair_at(self, z) -> KahlerPairNum:
        pair = self.base.pair_at(z)
        Bm = frames.two_form_map_at(self.B, z)
        eB = b_field_matrix(Bm, 2 * self.n)
        eBm = b_field_matrix(-Bm, 2 * self.n)
        return KahlerPairNum(LinearGC(eB @ pair.J1.J @ eBm),
                             LinearGC(eB @ pair.J2.J @ eBm))

    def describe(self):
        return {"kind": self.kind, "base": self.base.describe()}


class ConstantPairRecipe:
    """A constant valid pair (the flat hyper-Kahler structures, e.g.)."""

    kind = "constant-pair"

    def __init__(self, n, J1, J2, label="constant"):
        self.n = n
        self.label = label
        self._pair = KahlerPairNum(LinearGC(J1), LinearGC(J2))

    def pair_at(self, z) -> KahlerPairNum:
        return self._pair

    def describe(self):
        return {"kind": self.kind, "label": self.label}


class RealifiedRecipe:
    """Exact-B-transform making the moment map real (connection-based).

    gamma = (theta, h) = w / D with w a polynomial 1-form and D = det of the
    fundamental-field Gram matrix of a constant metric g; the transform at a
    point is e^{B(p)} with B = d(gamma) = dw/D - (dD ^ w)/D^2, evaluated by
    the quotient rule.  Requires the pair's tangent metric to be constant
    (true for the flat scenarios this workbench builds).
    """

    kind = "realified"

    def __init__(self, base, action, moment: MomentMapPoly, g_const=None):
        self.base = base
        self.n = base.n
        self.action = action
        probe = np.full(self.n, 0.37 + 0.21j)
        pair = base.pair_at(probe)
        bih = extract_bihermitian(pair)
        g = bih.g if g_const is None else np.asarray(g_const, dtype=float)
        g_rat = [[Fraction(x).limit_denominator(1 << 20) for x in row] for row in g]
        if np.abs(np.array([[float(x) for x in row] for row in g_rat]) - g).max() > 1e-9:
            raise ValidationError("pair tangent metric is not rational-constant")
        self._g = g_rat
        n = self.n
        fields = [action.fundamental_field(a).vec for a in range(action.k)]
        k = len(fields)
        # u_a = g(., xi_a) as exact polynomial 1-forms over the real frame,
        # re-expressed in the z/zbar covector frame
        us = [self._metric_pairing_form(X) for X in fields]
        gram = [[self._metric_scalar(fields[a], fields[b]) for b in range(k)]
                for a in range(k)]
        D, adj = _det_and_adjugate_poly(gram)
        w = Form.zero(n, 1)
        for a in range(k):
            for b in range(k):
                coeff = adj[a][b] * moment.h[a]
                if not coeff.is_zero:
                    w = w + Form(n, 1, {key: p * coeff for key, p in us[b].comps.items()})
        self.D = D
        self.w = w
        self.dw = exterior_derivative(w)
        self.dD_w = exterior_derivative(D).wedge(w)
        self.moment_real = MomentMapPoly(moment.f, tuple(ComplexPolynomial.zero(n)
                                                         for _ in moment.f))

    def _metric_pairing_form(self, X: VectorField) -> Form:
        """g(., X) as a polynomial 1-form (g exact rational constant)."""
        n = self.n
        # real components of X: X = sum_q (A_q d/dx_q + B_q d/dy_q) with
        # A_q = X^{z_q} + X^{zb_q} ... easier via covector algebra:
        # g(., X) has real components (g Xr); build from z-frame comps.
        # d/dz_q = (d/dx - i d/dy)/2 -> real coeff vector columns
        comps = {}
        for a, p in X.comps.items():
            q = a % n
            hol = a < n
            # real coords of the frame vector
            ent = [(2 * q, QI(Fraction(1, 2))),
                   (2 * q + 1, QI(0, Fraction(-1, 2)) if hol else QI(0, Fraction(1, 2)))]
            for r, c in ent:
                for s in range(2 * n):
                    grs = QI(self._g[s][r])
                    if not grs:
                        continue
                    # covector e_s = dx or dy -> z-frame: dx_q = (dz+dzb)/2 etc.
                    qq = s // 2
                    if s % 2 == 0:
                        zparts = [((qq,), QI(Fraction(1, 2))), ((qq + n,), QI(Fraction(1, 2)))]
                    else:
                        zparts = [((qq,), QI(0, Fraction(-1, 2))), ((qq + n,), QI(0, Fraction(1, 2)))]
                    for key, zc in zparts:
                        add = p * (c * grs * zc)
                        if key in comps:
                            comps[key] = comps[key] + add
                        else:
                            comps[key] = add
        return Form(self.n, 1, {k: v for k, v in comps.items() if not v.is_zero})

    def _metric_scalar(self, X: VectorField, Y: VectorField) -> ComplexPolynomial:
        u = self._metric_pairing_form(Y)
        return interior_product(X, u).comps.get((), ComplexPolynomial.zero(self.n))

    def b_map_at(self, z) -> np.ndarray:
        Dv = self.D.evaluate(z)
        if abs(Dv) < 1e-14:
            raise ValidationError("fundamental-field Gram determinant vanishes at the point")
        M1 = frames.two_form_map_at(self.dw, z)
        M2 = frames.two_form_map_at(self.dD_w, z)
        out = M1 / Dv - M2 / Dv ** 2
        return np.real(out)

    def pair_at(self, z) -> KahlerPairNum:
        pair = self.base.pair_at(z)
        Bm = self.b_map_at(z)
        eB = b_field_matrix(Bm, 2 * self.n)
        eBm = b_field_matrix(-Bm, 2 * self.n)
        return KahlerPairNum(LinearGC(eB @ pair.J1.J @ eBm),
                             LinearGC(eB @ pair.J2.J @ eBm))

    def describe(self):
        return {"kind": self.kind, "base": self.base.describe()}


def _det_and_adjugate_poly(gram):
    """Exact determinant and adjugate of a small polynomial matrix."""
    k = len(gram)
    n = gram[0][0].n

    def det(rows, cols):
        if len(rows) == 1:
            return gram[rows[0]][cols[0]]
        out = ComplexPolynomial.zero(n)
        r = rows[0]
        for pos, c in enumerate(cols):
            minor = det(rows[1:], cols[:pos] + cols[pos + 1:])
            term = gram[r][c] * minor
            out = out + (term if pos % 2 == 0 else -term)
        return out

    allr = tuple(range(k))
    D = det(allr, allr)
    adj = [[ComplexPolynomial.zero(n) for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            rows = tuple(r for r in allr if r != j)
            cols = tuple(c for c in allr if c != i)
            m = det(rows, cols) if k > 1 else ComplexPolynomial.one(n)
            adj[i][j] = m if (i + j) % 2 == 0 else -m
    return D, adj


# -- scenario -----------------------------------------------------------------

@dataclass(frozen=True)
class Stratum:
    label: str
    classify: object          # callable z -> bool
    generate: object = None   # callable rng -> raw point (before level fix)


@dataclass
class Scenario:
    name: str
    n: int
    recipe: object
    action: object
    moment: MomentMapPoly
    level: tuple
    sampler: object
    strata: tuple = ()
    doc: str = ""

    def stratum_label(self, z) -> str:
        for s in self.strata:
            if s.classify(z):
                return s.label
        return "generic"

    def group_dims(self):
        if isinstance(self.action, TorusAction):
            return self.action.k, self.action.k
        return self.action.dim_group, self.action.dim_group

    def describe(self):
        return {
            "name": self.name,
            "ambient_complex_dim": self.n,
            "recipe": self.recipe.describe(),
            "action": ("torus " + repr(list(map(list, self.action.weights)))
                       if isinstance(self.action, TorusAction)
                       else f"U({self.action.n}) on C^({self.action.n}x{self.action.m})"),
            "level": [str(x) for x in self.level],
            "moment_real": self.moment.is_real,
        }


# -- samplers -------------------------------------------------------------------

@dataclass
class SampleBatch:
    points: list
    labels: list
    rejected: list


class ScalingSampler:
    """Exact radial scaling for a weighted-homogeneous rank-1 torus level."""

    def __init__(self, moment: MomentMapPoly, level, zero_sets=None):
        self.moment = moment
        self.level = float(level[0])
        self.zero_sets = zero_sets or {}
        if len(moment.f) != 1:
            raise ValueError("scaling sampler needs a one-dimensional level")

    def raw(self, rng, n, stratum=None):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for j in self.zero_sets.get(stratum, ()):
            z[j] = 0.0
        val = self.moment.f[0].evaluate(z).real
        if val <= 0 or self.level / val <= 0:
            return None
        return z * np.sqrt(self.level / val)


class PolytopeSampler:
    """Slack parametrization |z_j|^2 = 2 s_j(x) over polytope points."""

    def __init__(self, poly, facet_strata=None):
        self.poly = poly
        self.facet_strata = facet_strata or {}
        self.verts = [[float(c) for c in v] for v in poly.vertices()]
        lo = np.min(self.verts, axis=0)
        hi = np.max(self.verts, axis=0)
        self.bbox = (lo, hi)

    def _interior_x(self, rng):
        lo, hi = self.bbox
        for _ in range(200):
            x = lo + rng.random(len(lo)) * (hi - lo)
            if self.poly.contains([Fraction(v).limit_denominator(1 << 30) for v in x]):
                return x
        raise ValidationError("polytope rejection sampling failed")

    def _facet_x(self, rng, j):
        verts = [[float(c) for c in v] for v in self.poly.facet_vertices(j)]
        if len(verts) < 2:
            raise ValidationError(f"facet {j} has no interior")
        t = 0.15 + 0.7 * rng.random()
        return (1 - t) * np.array(verts[0]) + t * np.array(verts[1])

    def raw(self, rng, n, stratum=None):
        if stratum is not None and stratum in self.facet_strata:
            j = self.facet_strata[stratum]
            x = self._facet_x(rng, j)
        else:
            x = self._interior_x(rng)
        s = np.array([float(c) - np.dot([float(a) for a in eta_], x)
                      for eta_, c in zip(self.poly.normals, self.poly.offsets)])
        s = np.where(np.abs(s) < 1e-13, 0.0, s)
        if np.any(s < 0):
            return None
        phases = np.exp(2j * np.pi * rng.random(n))
        return np.sqrt(2.0 * s) * phases


class FrameSampler:
    """Row Gram-Schmidt onto the central level Z Z-dagger = I."""

    def __init__(self, action: UnitaryAction, zero_cols=None):
        self.action = action
        self.zero_cols = zero_cols or {}

    def raw(self, rng, n, stratum=None):
        a = self.action
        Z = rng.standard_normal((a.n, a.m)) + 1j * rng.standard_normal((a.n, a.m))
        for c in self.zero_cols.get(stratum, ()):
            Z[:, c] = 0.0
        for i in range(a.n):
            for s in range(i):
                Z[i] -= (Z[s].conj() @ Z[i]) * Z[s]
            nrm = np.linalg.norm(Z[i])
            if nrm < 1e-8:
                return None
            Z[i] /= nrm
        return Z.reshape(-1)


class RaySampler:
    """Root-solve f(u + s v) = level along random rays (quadratic f)."""

    def __init__(self, fpoly: ComplexPolynomial, level=0.0):
        self.f = fpoly
        self.level = float(level)

    def raw(self, rng, n, stratum=None):
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        # f(u + s v), s real: sample three values to get the quadratic
        f0 = self.f.evaluate(u).real - self.level
        f1 = self.f.evaluate(u + v).real - self.level
        fm1 = self.f.evaluate(u - v).real - self.level
        a = (f1 + fm1 - 2 * f0) / 2
        b = (f1 - fm1) / 2
        c = f0
        if abs(a) < 1e-14:
            if abs(b) < 1e-14:
                return None
            roots = [-c / b]
        else:
            disc = b * b - 4 * a * c
            if disc < 0:
                return None
            roots = [(-b + np.sqrt(disc)) / (2 * a), (-b - np.sqrt(disc)) / (2 * a)]
        s = roots[0]
        p = u + s * v
        if np.linalg.norm(p) < 1e-3:
            return None
        return p


def sample_level_set(scenario: Scenario, count: int, seed: int) -> SampleBatch:
    """Deterministic seeded samples on the level set, stratified over the
    declared strata, with freeness/regularity rejection."""
    rng = np.random.default_rng(seed)
    n = scenario.n
    level = np.array([float(x) for x in scenario.level])
    fields = [scenario.action.fundamental_field(a)
              for a in range(scenario.group_dims()[0])]
    dfs = [exterior_derivative(f) for f in scenario.moment.f]

    quotas = []
    named = [s.label for s in scenario.strata]
    per = max(1, int(round(0.3 * count))) if named else 0
    for lab in named:
        quotas += [lab] * per
    quotas += [None] * (count - len(quotas))
    if len(quotas) < count:
        quotas += [None] * (count - len(quotas))

    points, labels, rejected = [], [], []
    for want in quotas:
        accepted = None
        for attempt in range(400):
            z = scenario.sampler.raw(rng, n, want)
            if z is None:
                rejected.append((want, "sampler produced no candidate"))
                continue
            fv = np.array([p.evaluate(z).real for p in scenario.moment.f])
            if np.abs(fv - level).max() > LEVEL_TOL:
                rejected.append((want, f"level residual {np.abs(fv - level).max():.2e}"))
                continue
            Q = np.column_stack([frames.section_at(s, z)[:2 * n].real for s in fields])
            sv = np.linalg.svd(Q, compute_uv=False)
            if sv[-1] < FREENESS_TOL:
                rejected.append((want, f"action not free: sv {sv[-1]:.2e}"))
                continue
            DF = np.column_stack([frames.one_form_at(df, z).real for df in dfs])
            sv2 = np.linalg.svd(DF, compute_uv=False)
            if sv2[-1] < FREENESS_TOL:
                rejected.append((want, f"level not regular: sv {sv2[-1]:.2e}"))
                continue
            lab = scenario.stratum_label(z)
            if want is not None and lab != want:
                rejected.append((want, f"stratum mismatch: got {lab}"))
                continue
            accepted = (z, lab)
            break
        if accepted is None:
            raise ValidationError(
                f"sampling failed for stratum {want!r}: rejection rate too high")
        points.append(accepted[0])
        labels.append(accepted[1])
    if len(rejected) > 9 * count:
        raise ValidationError("rejection rate above 90%")
    return SampleBatch(points, labels, rejected)


# -- quotients ------------------------------------------------------------------

@dataclass
class QuotientFrame:
    point: np.ndarray
    label: str
    pair_up: KahlerPairNum
    pair_quot: KahlerPairNum
    qbasis: QuotientBasis
    type_j1_up: int
    type_j2_up: int
    type_j1: int
    type_j2: int
    dim_k_cap_piL2: int
    gap_ok: bool
    diagnostics: dict


def quotient_at_point(scenario: Scenario, z, label=None) -> QuotientFrame:
    n = scenario.n
    pair = scenario.recipe.pair_at(z)
    k = scenario.group_dims()[0]
    fields = [scenario.action.fundamental_field(a) for a in range(k)]
    Q = np.column_stack([frames.section_at(s, z)[:2 * n].real for s in fields])
    dfs = [exterior_derivative(f) for f in scenario.moment.f]
    DF = np.column_stack([frames.one_form_at(df, z).real for df in dfs])
    # moment condition J1(xi_M) = df
    lift = np.vstack([Q, np.zeros_like(Q)])
    expect = np.vstack([np.zeros_like(DF), DF])
    r_moment = float(np.linalg.norm(pair.J1.J @ lift - expect)
                     / max(1.0, np.linalg.norm(DF)))
    pair_q, qb = reduce_pair(pair, Q)
    E = eta(2 * n)
    r_iso = float(np.abs(qb.P.T @ E @ qb.P).max())
    L2 = pair.J2.eigenbundle()
    piL2 = L2.projection_to_tangent()
    kM = ComplexSubspace.from_columns(Q.astype(complex))
    dim_int, gap_int = subspace_intersection_dim(kM, piL2, require_determinate=False)
    t1u, g1u = pair.J1.type_with_gap()
    t2u, g2u = pair.J2.type_with_gap()
    t1q, g1q = pair_q.J1.type_with_gap()
    t2q, g2q = pair_q.J2.type_with_gap()
    return QuotientFrame(
        point=np.asarray(z, dtype=complex),
        label=label if label is not None else scenario.stratum_label(z),
        pair_up=pair, pair_quot=pair_q, qbasis=qb,
        type_j1_up=t1u, type_j2_up=t2u,
        type_j1=t1q, type_j2=t2q,
        dim_k_cap_piL2=dim_int,
        gap_ok=bool(gap_int and g1u and g2u and g1q and g2q),
        diagnostics={"moment_condition": r_moment, "p_isotropy": r_iso})


@dataclass
class TypeTableRow:
    point_id: int
    stratum: str
    type_j1: int
    type_j2: int
    dim_k_cap_piL2: int
    type_j1_up: int
    type_j2_up: int
    indeterminate: bool
    diagnostics: dict


@dataclass
class TypeTable:
    rows: list
    scenario_name: str

    def strata_types(self):
        out = {}
        for r in self.rows:
            out.setdefault(r.stratum, set()).add((r.type_j1, r.type_j2))
        return out


def type_table(scenario: Scenario, count=20, seed=7, workers=4) -> TypeTable:
    """Per-point quotients run concurrently (they are independent pure
    computations); rows are assembled in point-id order regardless of
    completion order."""
    from concurrent.futures import ThreadPoolExecutor
    batch = sample_level_set(scenario, count, seed)

    def job(arg):
        i, z, lab = arg
        return i, lab, quotient_at_point(scenario, z, lab)

    args = [(i, z, lab) for i, (z, lab) in enumerate(zip(batch.points, batch.labels))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, args))
    else:
        results = [job(a) for a in args]
    rows = []
    for i, lab, qf in sorted(results, key=lambda r: r[0]):
        rows.append(TypeTableRow(
            point_id=i, stratum=lab,
            type_j1=qf.type_j1, type_j2=qf.type_j2,
            dim_k_cap_piL2=qf.dim_k_cap_piL2,
            type_j1_up=qf.type_j1_up, type_j2_up=qf.type_j2_up,
            indeterminate=not qf.gap_ok,
            diagnostics=qf.diagnostics))
    return TypeTable(rows, scenario.name)


def verify_type_formula(scenario: Scenario, table: TypeTable):
    """Check type(J~2) = type(J2) - dim(G)/2 - dim(K)/2 + 2 dim(k_M cap pi L2)
    row by row; both sides were computed independently."""
    dim_g, dim_k = scenario.group_dims()
    results = []
    for r in table.rows:
        rhs2 = r.type_j2_up - (dim_g + dim_k) // 2 + 2 * r.dim_k_cap_piL2
        rhs1 = r.type_j1_up
        ok = (r.type_j2 == rhs2) and (r.type_j1 == rhs1)
        results.append({
            "point_id": r.point_id, "stratum": r.stratum,
            "type_j1": r.type_j1, "type_j1_formula": rhs1,
            "type_j2": r.type_j2, "type_j2_formula": rhs2,
            "indeterminate": r.indeterminate,
            "pass": bool(ok),
        })
    return results


# -- closure tests ----------------------------------------------------------------

def bracket_in_df_perp(s1, s2, moment: MomentMapPoly):
    """Exact check iota_{[X,Y]} df^xi = 0 for sections of df-perp."""
    from .calculus import courant_bracket
    br = courant_bracket(s1, s2)
    residuals = []
    for f in moment.f:
        df = exterior_derivative(f)
        contr = interior_product(br.vec, df).comps.get((), None)
        residuals.append(contr is None or contr.is_zero)
    return br, all(residuals)


def closure_test(scenario: Scenario, section_pairs, samples, check):
    """Symbolic Courant brackets plus pointwise eigenbundle membership.

    check(bracket, sample) -> residual; rows report max residual per pair.
    """
    from .calculus import courant_bracket
    rows = []
    for (s1, s2) in section_pairs:
        br = courant_bracket(s1, s2)
        res = max((check(br, z) for z in samples), default=0.0)
        rows.append({"residual": float(res), "pass": bool(res < 1e-9)})
    return rows


def membership_check_factory(scenario, which="L1"):
    """Residual of a bracket section in the pointwise eigenbundle."""
    def check(br, z):
        pair = scenario.recipe.pair_at(z)
        J = pair.J1 if which == "L1" else pair.J2
        L = J.eigenbundle()
        return L.residual(frames.section_at(br, z))
    return check


# -- bi-Hermitian ------------------------------------------------------------------

@dataclass
class QuotientBiHermitian:
    data: BiHermitianData
    distinct: bool
    even_type: bool
    checks: dict


def quotient_bihermitian(scenario: Scenario, z) -> QuotientBiHermitian:
    qf = quotient_at_point(scenario, z)
    data = extract_bihermitian(qf.pair_quot)
    ok, checks = data.validate()
    checks["valid"] = ok
    return QuotientBiHermitian(
        data=data,
        distinct=data.distinct(),
        even_type=(qf.type_j1 % 2 == 0) or (qf.type_j2 % 2 == 0),
        checks=checks)


# -- moment-map verification --------------------------------------------------

def verify_moment_map(structure_at, action, moment: MomentMapPoly, samples,
                      tol=1e-9, invariance=True):
    """At each sample and Lie-algebra basis element: membership residual of
    xi_M - i dmu^xi in the +i eigenbundle of the structure, plus the
    invariance contraction iota_{xi_M} dmu^eta (zero when condition one of
    the moment definition holds for a torus, and at central levels for U(n)).

    ``structure_at``: callable z -> LinearGC (the J1 the moment map pairs
    with).  Failures are rows, not exceptions.
    """
    k = action.k if isinstance(action, TorusAction) else action.dim_group
    fields = [action.fundamental_field(a) for a in range(k)]
    dfs = [exterior_derivative(f) for f in moment.f]
    dhs = [exterior_derivative(h) for h in moment.h]
    rows = []
    for idx, z in enumerate(samples):
        J = structure_at(z)
        L = J.eigenbundle()
        worst = 0.0
        for a in range(k):
            n = fields[a].n
            w = np.zeros(4 * n, dtype=complex)
            w[:2 * n] = frames.section_at(fields[a], z)[:2 * n]
            w[2 * n:] = (frames.one_form_at(dhs[a], z)
                         - 1j * frames.one_form_at(dfs[a], z))
            worst = max(worst, L.residual(w))
        inv = 0.0
        if invariance:
            for a in range(k):
                for b in range(k):
                    for comp in (dfs[b], dhs[b]):
                        c = interior_product(fields[a].vec, comp)
                        val = c.comps.get((), None)
                        if val is not None:
                            inv = max(inv, abs(val.evaluate(z)))
        rows.append({"sample": idx, "membership": float(worst),
                     "invariance": float(inv),
                     "pass": bool(worst < tol and inv < tol)})
    return rows


def realify(scenario: Scenario, theta="metric") -> Scenario:
    """Exact-B-transform scenario with real moment map (identity when the
    imaginary part already vanishes).

    theta picks the connection: "metric" uses the pair's (constant) tangent
    metric, "euclidean" the flat ambient one; any constant metric matrix is
    also accepted.  Different connections differ by exact B-transforms.
    """
    if scenario.moment.is_real:
        return scenario
    if isinstance(theta, str):
        n = scenario.n
        g_const = None if theta == "metric" else np.eye(2 * n)
        if theta not in ("metric", "euclidean"):
            raise ValueError(f"unknown connection recipe {theta!r}")
    else:
        g_const = np.asarray(theta, dtype=float)
    recipe = RealifiedRecipe(scenario.recipe, scenario.action, scenario.moment,
                             g_const=g_const)
    return Scenario(
        name=scenario.name + "+realified", n=scenario.n, recipe=recipe,
        action=scenario.action, moment=recipe.moment_real,
        level=scenario.level, sampler=scenario.sampler, strata=scenario.strata,
        doc=scenario.doc)


# -- closure families -----------------------------------------------------------

@dataclass
class ClosureFamily:
    """A family of polynomial sections with its closure checks.

    symbolic_check(bracket) -> bool runs an exact identity; structure_at,
    when given, supplies the pointwise eigenbundle for membership residuals.
    """

    name: str
    sections: list
    symbolic_check: object = None
    structure_at: object = None
    max_pairs: int = 6


def run_closure_families(families, samples):
    from .calculus import courant_bracket
    rows = []
    for fam in families:
        secs = fam.sections
        done = 0
        for i in range(len(secs)):
            for j in range(i + 1, len(secs)):
                if done >= fam.max_pairs:
                    break
                br = courant_bracket(secs[i], secs[j])
                row = {"family": fam.name, "pair": (i, j)}
                ok = True
                if fam.symbolic_check is not None:
                    sym = bool(fam.symbolic_check(br))
                    row["symbolic_zero"] = sym
                    ok = ok and sym
                if fam.structure_at is not None:
                    res = 0.0
                    for z in samples:
                        L = fam.structure_at(z).eigenbundle()
                        res = max(res, L.residual(frames.section_at(br, z)))
                    row["membership_residual"] = float(res)
                    ok = ok and res < 1e-9
                row["pass"] = bool(ok)
                rows.append(row)
                done += 1
        if done == 0:
            rows.append({"family": fam.name, "pair": None, "pass": False,
                         "note": "family has fewer than two sections"})
    return rows


def df_contraction_is_zero(moment: MomentMapPoly):
    """Exact check that the bracket stays perpendicular to the level set:
    iota over its vector part kills every df^xi (and dh^xi)."""
    dfs = [exterior_derivative(f) for f in moment.f]
    dhs = [exterior_derivative(h) for h in moment.h if not h.is_zero]

    def check(br):
        for df in dfs + dhs:
            c = interior_product(br.vec, df).comps.get((), None)
            if c is not None and not c.is_zero:
                return False
        return True
    return check


def gm_pairing_is_zero(action):
    """Exact check <bracket, xi_M> = 0 for every fundamental field."""
    from .calculus import pairing_poly
    k = action.k if isinstance(action, TorusAction) else action.dim_group
    fields = [action.fundamental_field(a) for a in range(k)]

    def check(br):
        return all(pairing_poly(br, f).is_zero for f in fields)
    return check
