"""Exact multivariate polynomials over the Gaussian rationals.

Coordinates are z_1..z_n and their conjugates zbar_1..zbar_n, treated as
independent symbols.  An exponent key is a tuple of 2n nonnegative ints,
z-exponents first.  No floating-point number ever enters this module;
coefficients are pairs of ``fractions.Fraction``.
"""
from __future__ import annotations

from fractions import Fraction


class QI:
    """A Gaussian rational re + im*sqrt(-1) with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @staticmethod
    def of(value) -> "QI":
        if isinstance(value, QI):
            return value
        if isinstance(value, complex):
            raise TypeError("QI is exact; refuse silent float conversion")
        return QI(value)

    def __add__(self, other):
        other = QI.of(other)
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QI.of(other))

    def __rsub__(self, other):
        return QI.of(other) + (-self)

    def __mul__(self, other):
        other = QI.of(other)
        return QI(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QI.of(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * other.re + self.im * other.im) / d,
                  (self.im * other.re - self.re * other.im) / d)

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QI(other)
        if not isinstance(other, QI):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*i)"


QI_ZERO = QI(0)
QI_ONE = QI(1)
QI_I = QI(0, 1)
QI_HALF = QI(Fraction(1, 2))


class ComplexPolynomial:
    """Polynomial in z_1..z_n, zbar_1..zbar_n with QI coefficients.

    Stored in canonical form: the ``terms`` dict maps exponent tuples to
    nonzero QI coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = QI.of(c)
                if c:
                    if len(exps) != 2 * n:
                        raise ValueError(f"exponent tuple {exps} has wrong length for n={n}")
                    clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def const(cls, n, c):
        return cls(n, {tuple([0] * (2 * n)): QI.of(c)})

    @classmethod
    def one(cls, n):
        return cls.const(n, 1)

    @classmethod
    def variable(cls, n, j, conjugated=False):
        exps = [0] * (2 * n)
        exps[j + (n if conjugated else 0)] = 1
        return cls(n, {tuple(exps): QI_ONE})

    @classmethod
    def monomial(cls, n, coeff, z_exps, zbar_exps):
        return cls(n, {tuple(z_exps) + tuple(zbar_exps): QI.of(coeff)})

    # -- ring operations ---------------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            raise ValueError("polynomials over different coordinate counts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            other = ComplexPolynomial.const(self.n, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, QI_ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return ComplexPolynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            other = ComplexPolynomial.const(self.n, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            c = QI.of(other)
            if not c:
                return ComplexPolynomial(self.n)
            return ComplexPolynomial(self.n, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, QI_ZERO) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return ComplexPolynomial(self.n, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = ComplexPolynomial.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus ----------------------------------------------------------
    def conjugate(self) -> "ComplexPolynomial":
        """Swap z_i <-> zbar_i exponents and conjugate coefficients."""
        n = self.n
        terms = {}
        for e, c in self.terms.items():
            terms[e[n:] + e[:n]] = c.conjugate()
        return ComplexPolynomial(n, terms)

    @property
    def is_real(self) -> bool:
        return self == self.conjugate()

    def wirtinger(self, j: int, holomorphic: bool = True) -> "ComplexPolynomial":
        """Exact d/dz_j (or d/dzbar_j); z and zbar are independent symbols."""
        idx = j if holomorphic else j + self.n
        terms = {}
        for e, c in self.terms.items():
            k = e[idx]
            if k == 0:
                continue
            e2 = list(e)
            e2[idx] = k - 1
            e2 = tuple(e2)
            s = terms.get(e2, QI_ZERO) + c * k
            if s:
                terms[e2] = s
            else:
                terms.pop(e2, None)
        return ComplexPolynomial(self.n, terms)

    def is_holomorphic(self) -> bool:
        return all(all(x == 0 for x in e[self.n:]) for e in self.terms)

    # -- evaluation / substitution ------------------------------------------
    def evaluate(self, z) -> complex:
        """Evaluate at a point z in C^n (floating arithmetic)."""
        if len(z) != self.n:
            raise ValueError(f"point has {len(z)} coordinates, polynomial has n={self.n}")
        zb = [complex(w).conjugate() for w in z]
        total = 0j
        for e, c in self.terms.items():
            val = c.to_complex()
            for j in range(self.n):
                if e[j]:
                    val *= complex(z[j]) ** e[j]
                if e[self.n + j]:
                    val *= zb[j] ** e[self.n + j]
            total += val
        return total

    def substitute_linear(self, A) -> "ComplexPolynomial":
        """Pull back through the exact linear map z -> A z (A: n x n of QI).

        zbar_i substitutes to conj(A)_i. zbar.  Used for group invariance.
        """
        n = self.n
        zs = [ComplexPolynomial(n, {tuple((1 if t == k else 0) for t in range(2 * n)): QI_ONE})
              for k in range(2 * n)]
        new_z = []
        new_zb = []
        for i in range(n):
            p = ComplexPolynomial.zero(n)
            q = ComplexPolynomial.zero(n)
            for j in range(n):
                a = QI.of(A[i][j])
                if a:
                    p = p + zs[j] * a
                    q = q + zs[n + j] * a.conjugate()
            new_z.append(p)
            new_zb.append(q)
        out = ComplexPolynomial.zero(n)
        for e, c in self.terms.items():
            term = ComplexPolynomial.const(n, c)
            for j in range(n):
                if e[j]:
                    term = term * new_z[j] ** e[j]
                if e[n + j]:
                    term = term * new_zb[j] ** e[n + j]
            out = out + term
        return out

    def __repr__(self):
        if self.is_zero:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = []
            for j in range(self.n):
                if e[j]:
                    mono.append(f"z{j}" + (f"^{e[j]}" if e[j] > 1 else ""))
                if e[self.n + j]:
                    mono.append(f"zb{j}" + (f"^{e[self.n + j]}" if e[self.n + j] > 1 else ""))
            bits.append(f"{c!r}*{'*'.join(mono)}" if mono else f"{c!r}")
        return " + ".join(bits)
