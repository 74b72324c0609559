"""Seeded random generators shared by the property-test modules."""
from fractions import Fraction

import numpy as np

from gkw.calculus import Form, GeneralizedSection, VectorField
from gkw.linear import KahlerPairNum, LinearGC, b_field_matrix
from gkw.poly import QI, ComplexPolynomial


def rand_qi(rng, den=4):
    return QI(Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, den))),
              Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, den))))


def rand_poly(rng, n, max_terms=2, max_deg=1):
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        e = tuple(int(rng.integers(0, max_deg + 1)) for _ in range(2 * n))
        terms[e] = rand_qi(rng)
    return ComplexPolynomial(n, terms)


def rand_section(rng, n, max_terms=2, max_deg=1, frame_indices=None):
    vec = {}
    form = {}
    idx = frame_indices if frame_indices is not None else range(2 * n)
    for a in idx:
        if rng.random() < 0.5:
            vec[a] = rand_poly(rng, n, max_terms, max_deg)
    for a in idx:
        if rng.random() < 0.5:
            form[(a,)] = rand_poly(rng, n, max_terms, max_deg)
    return GeneralizedSection(VectorField(n, vec), Form(n, 1, form))


def rand_lbar_section(rng, n, max_deg=1):
    """Random section of the antihol-closed bundle T10 + T*01 (for the
    Schouten caller contract)."""
    vec = {a: rand_poly(rng, n, 2, max_deg) for a in range(n) if rng.random() < 0.7}
    form = {(n + a,): rand_poly(rng, n, 2, max_deg) for a in range(n) if rng.random() < 0.7}
    if not vec and not form:
        vec[0] = ComplexPolynomial.one(n)
    return GeneralizedSection(VectorField(n, vec), Form(n, 1, form))


# -- numeric structures ---------------------------------------------------------

def rand_antisym(rng, m, scale=1.0):
    A = rng.standard_normal((m, m)) * scale
    return A - A.T


def rand_invertible(rng, m):
    while True:
        A = rng.standard_normal((m, m))
        if abs(np.linalg.det(A)) > 0.1:
            return A


def rand_symplectic_map(rng, m):
    """Random invertible antisymmetric omega map."""
    while True:
        M = rand_antisym(rng, m)
        if abs(np.linalg.det(M)) > 1e-3:
            return M


def rand_complex_structure(rng, m):
    J0 = np.zeros((m, m))
    for q in range(m // 2):
        J0[2 * q + 1, 2 * q] = 1.0
        J0[2 * q, 2 * q + 1] = -1.0
    A = rand_invertible(rng, m)
    return A @ J0 @ np.linalg.inv(A)


def gl_conjugate(J, A):
    """Conjugation by diag(A, A^-T), which preserves the pairing."""
    m = J.J.shape[0] // 2
    O = np.zeros((2 * m, 2 * m))
    O[:m, :m] = A
    O[m:, m:] = np.linalg.inv(A).T
    Oi = np.linalg.inv(O)
    return LinearGC(O @ J.J @ Oi)


def rand_gc(rng, m):
    """Random generalized complex structure on R^m (m even)."""
    kind = rng.integers(0, 4)
    if kind == 0:
        J = LinearGC.from_symplectic(rand_symplectic_map(rng, m))
    elif kind == 1:
        J = LinearGC.from_complex(rand_complex_structure(rng, m))
    elif kind == 2 and m >= 4:
        m1 = 2 * int(rng.integers(1, m // 2))
        J = rand_gc(rng, m1).product(rand_gc(rng, m - m1))
    else:
        J = LinearGC.from_symplectic(rand_symplectic_map(rng, m))
    if rng.random() < 0.5:
        J = J.b_transform(rand_antisym(rng, m, 0.5))
    if rng.random() < 0.5:
        J = gl_conjugate(J, rand_invertible(rng, m))
    return J


def rand_compatible_kahler(rng, m):
    """Genuine Kahler block: random J plus J-invariant positive g; the pair
    (J_omega, J_J) with omega map M = -g J is positive."""
    Jc = rand_complex_structure(rng, m)
    S = rng.standard_normal((m, m))
    g0 = S @ S.T + m * np.eye(m)
    g = g0 + Jc.T @ g0 @ Jc
    M = -g @ Jc
    return KahlerPairNum(LinearGC.from_symplectic(M), LinearGC.from_complex(Jc))


def hk_block_pair():
    """Flat hyper-Kahler pair normalized so J1 is honestly symplectic
    (B-transform by -omega_K): (J_{sig-}, e^{-2K} J_{sig+} e^{2K})."""
    from gkw.catalog import hyperkahler_pair
    J1, J2, (I4, J4, K4), X, mus = hyperkahler_pair()
    eB = b_field_matrix(-K4, 4)
    eBm = b_field_matrix(K4, 4)
    return KahlerPairNum(LinearGC(eB @ J1 @ eBm), LinearGC(eB @ J2 @ eBm))


def rand_pair_with_admissible_q(rng, m, qdim=1, allow_hk=True):
    """Random generalized Kahler pair on R^m whose J1 is symplectic-type,
    plus an omega-isotropic Q (so P = Q + J1(Q) is isotropic); built from
    genuine Kahler and (optionally) flat hyper-Kahler blocks, B-transformed
    by forms vanishing on Q and GL-conjugated."""
    blocks = []
    left = m
    while left > 0:
        if allow_hk and left >= 4 and rng.random() < 0.4:
            blocks.append(("hk", 4))
            left -= 4
        else:
            take = 2 * int(rng.integers(1, left // 2 + 1))
            blocks.append(("kahler", take))
            left -= take
    pair = None
    for kind, size in blocks:
        blk = hk_block_pair() if kind == "hk" else rand_compatible_kahler(rng, size)
        if pair is None:
            pair = blk
        else:
            pair = KahlerPairNum(pair.J1.product(blk.J1), pair.J2.product(blk.J2))
    # omega map of J1 (its lower-left block)
    M = pair.J1.J[m:, :m]
    Q = np.zeros((m, 0))
    for _ in range(qdim):
        for _attempt in range(50):
            v = rng.standard_normal(m)
            if Q.shape[1]:
                # project v into the annihilator of M Q (sigma-orthogonal)
                W = (M @ Q).T
                u, s, vh = np.linalg.svd(W, full_matrices=True)
                ns = vh[(s > 1e-10 * max(1, s[0] if len(s) else 1)).sum():].T
                v = ns @ (ns.T @ v)
            if np.linalg.norm(v) > 1e-6:
                v = v / np.linalg.norm(v)
                Q = np.column_stack([Q, v])
                break
        else:
            raise RuntimeError("failed to extend isotropic Q")
    if rng.random() < 0.5:
        B = rand_antisym(rng, m, 0.3)
        # make B vanish on Q: B' = P^T B P with P the projector killing Q
        P = np.eye(m) - Q @ np.linalg.pinv(Q)
        B = P.T @ B @ P
        pair = KahlerPairNum(pair.J1.b_transform(B), pair.J2.b_transform(B))
    if rng.random() < 0.5:
        A = rand_invertible(rng, m)
        pair = KahlerPairNum(gl_conjugate(pair.J1, A), gl_conjugate(pair.J2, A))
        Q = A @ Q
    return pair, Q


def rand_gc_with_admissible_q(rng, m, qdim=1):
    """Random J with J(Q) < V* and P isotropic: symplectic (+ complex
    factors) with omega-isotropic Q in the symplectic part."""
    m1 = m if rng.random() < 0.5 or m < 4 else 2 * int(rng.integers(1, m // 2 + 1))
    M = rand_symplectic_map(rng, m1)
    J = LinearGC.from_symplectic(M)
    if m1 < m:
        J = J.product(LinearGC.from_complex(rand_complex_structure(rng, m - m1)))
    Q = np.zeros((m, 0))
    for _ in range(qdim):
        for _attempt in range(50):
            v = np.concatenate([rng.standard_normal(m1), np.zeros(m - m1)])
            if Q.shape[1]:
                W = np.zeros((Q.shape[1], m))
                W[:, :m1] = (M @ Q[:m1, :]).T
                u, s, vh = np.linalg.svd(W, full_matrices=True)
                ns = vh[(s > 1e-10 * max(1, s[0] if len(s) else 1)).sum():].T
                v = ns @ (ns.T @ v)
                v[m1:] = 0
            if np.linalg.norm(v) > 1e-6:
                Q = np.column_stack([Q, v / np.linalg.norm(v)])
                break
        else:
            raise RuntimeError("failed to extend isotropic Q")
    if rng.random() < 0.5:
        B = rand_antisym(rng, m, 0.3)
        P = np.eye(m) - Q @ np.linalg.pinv(Q)
        B = P.T @ B @ P
        J = J.b_transform(B)
    if rng.random() < 0.5:
        A = rand_invertible(rng, m)
        J = gl_conjugate(J, A)
        Q = A @ Q
    return J, Q
