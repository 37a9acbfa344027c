"""Supercommutative polynomials in r (even), u (even), theta (odd) and dtheta (odd).

A monomial is a key ``(c, b, J, K)``: exponent tuples for r and u, and bitmasks
for the theta and dtheta indices (bit j is index j, 0-based).  The odd
generators are ordered theta_1 < ... < theta_n < dtheta_1 < ... < dtheta_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Key = tuple[tuple[int, ...], tuple[int, ...], int, int]


class NoEvenPart(ValueError):
    """A monomial of the superpotential has no u-factor."""


@dataclass(frozen=True)
class TruncationPolicy:
    max_r_order: int = 2
    max_u_degree: int = 6
    max_length: int = 6

    def __post_init__(self):
        if min(self.max_r_order, self.max_u_degree, self.max_length) < 0:
            raise ValueError("truncation bounds must be >= 0")


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def merge_sign(m1: int, m2: int) -> int:
    """Sign of the shuffle putting the odd word m1 followed by m2 in increasing order."""
    inv = 0
    for y in bits(m2):
        inv += popcount(m1 >> (y + 1))
    return -1 if inv & 1 else 1


def _add(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(x, y))


class SuperPolynomial:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Key, Fraction] | None = None):
        self.n = n
        clean = {}
        for k, v in (terms or {}).items():
            if v:
                clean[k] = v if type(v) is Fraction else Fraction(v)
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> SuperPolynomial:
        """Wrap an already clean dict of nonzero Fractions."""
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    # -- constructors --
    @classmethod
    def monomial(cls, n: int, coef=1, c=None, b=None, J: Iterable[int] = (), K: Iterable[int] = ()) -> SuperPolynomial:
        """Monomial with odd factors multiplied in the given order (sign applied)."""
        c = tuple(c) if c is not None else (0,) * n
        b = tuple(b) if b is not None else (0,) * n
        word = [j for j in J] + [n + k for k in K]
        sign, mask = 1, 0
        for g in word:
            if mask >> g & 1:
                return cls(n)
            sign *= merge_sign(mask, 1 << g)
            mask |= 1 << g
        key = (c, b, mask & ((1 << n) - 1), mask >> n)
        return cls(n, {key: Fraction(coef) * sign})

    @classmethod
    def const(cls, n: int, value=1) -> SuperPolynomial:
        return cls.monomial(n, value)

    @classmethod
    def u(cls, n: int, j: int) -> SuperPolynomial:
        return cls.monomial(n, b=[int(i == j) for i in range(n)])

    @classmethod
    def r(cls, n: int, j: int) -> SuperPolynomial:
        return cls.monomial(n, c=[int(i == j) for i in range(n)])

    @classmethod
    def theta(cls, n: int, j: int) -> SuperPolynomial:
        return cls.monomial(n, J=[j])

    @classmethod
    def dtheta(cls, n: int, j: int) -> SuperPolynomial:
        return cls.monomial(n, K=[j])

    # -- arithmetic --
    def __add__(self, other: SuperPolynomial) -> SuperPolynomial:
        out = dict(self.terms)
        for k, v in other.terms.items():
            x = out.get(k, 0) + v
            if x:
                out[k] = x
            else:
                del out[k]
        return SuperPolynomial._raw(self.n, out)

    def __neg__(self) -> SuperPolynomial:
        return SuperPolynomial._raw(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: SuperPolynomial) -> SuperPolynomial:
        return self + (-other)

    def scale(self, x) -> SuperPolynomial:
        x = Fraction(x)
        return SuperPolynomial(self.n, {k: v * x for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SuperPolynomial.const(self.n, other) if other else SuperPolynomial(self.n)
        return isinstance(other, SuperPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"SuperPolynomial({serialize(self)})"

    def __str__(self) -> str:
        return serialize(self)

    # -- queries --
    def parities(self) -> set[int]:
        return {popcount(J | K << self.n) & 1 for (_, _, J, K) in self.terms}

    def is_even(self) -> bool:
        return self.parities() <= {0}

    def r_order(self) -> int:
        return max((sum(c) for (c, _, _, _) in self.terms), default=0)

    def u_degree(self) -> int:
        return max((sum(b) for (_, b, _, _) in self.terms), default=0)

    def part(self, pred) -> SuperPolynomial:
        return SuperPolynomial(self.n, {k: v for k, v in self.terms.items() if pred(k)})

    def truncate(self, policy: TruncationPolicy | None) -> SuperPolynomial:
        if policy is None:
            return self
        return self.part(lambda k: sum(k[0]) <= policy.max_r_order and sum(k[1]) <= policy.max_u_degree)

    def diff_u(self, j: int) -> SuperPolynomial:
        out = {}
        for (c, b, J, K), v in self.terms.items():
            if b[j]:
                nb = b[:j] + (b[j] - 1,) + b[j + 1:]
                out[(c, nb, J, K)] = out.get((c, nb, J, K), 0) + v * b[j]
        return SuperPolynomial(self.n, out)

    def constant_term(self) -> SuperPolynomial:
        """Part with no u and no odd generators (an element of R)."""
        return self.part(lambda k: not any(k[1]) and not k[2] and not k[3])


def mul(p: SuperPolynomial, q: SuperPolynomial, policy: TruncationPolicy | None = None) -> SuperPolynomial:
    """Supercommutative product with Koszul signs."""
    n = p.n
    if q.n != n:
        raise ValueError("ambient mismatch")
    N = policy.max_r_order if policy else None
    D = policy.max_u_degree if policy else None
    out: dict[Key, Fraction] = {}
    for (c1, b1, J1, K1), v1 in p.terms.items():
        m1 = J1 | K1 << n
        for (c2, b2, J2, K2), v2 in q.terms.items():
            m2 = J2 | K2 << n
            if m1 & m2:
                continue
            c = _add(c1, c2)
            if N is not None and sum(c) > N:
                continue
            b = _add(b1, b2)
            if D is not None and sum(b) > D:
                continue
            m = m1 | m2
            key = (c, b, m & ((1 << n) - 1), m >> n)
            out[key] = out.get(key, 0) + merge_sign(m1, m2) * v1 * v2
    return SuperPolynomial(n, out)


def power(p: SuperPolynomial, k: int, policy: TruncationPolicy | None = None) -> SuperPolynomial:
    out = SuperPolynomial.const(p.n)
    for _ in range(k):
        out = mul(out, p, policy)
    return out


def d_dtheta(j: int, p: SuperPolynomial) -> SuperPolynomial:
    """Left odd derivation d/d theta_j."""
    out = {}
    for (c, b, J, K), v in p.terms.items():
        if J >> j & 1:
            sign = -1 if popcount(J & ((1 << j) - 1)) & 1 else 1
            out[(c, b, J & ~(1 << j), K)] = sign * v
    return SuperPolynomial(p.n, out)


def euler_split(w: SuperPolynomial) -> list[SuperPolynomial]:
    """w_j with sum_j u_j w_j = w, weighting each monomial by b_j/|b|."""
    n = w.n
    parts: list[dict[Key, Fraction]] = [{} for _ in range(n)]
    for (c, b, J, K), v in w.terms.items():
        if J or K:
            raise ValueError("superpotential must be even and theta-free")
        deg = sum(b)
        if deg == 0:
            raise NoEvenPart(f"monomial without u-factor: {serialize(SuperPolynomial(n, {(c, b, J, K): v}))}")
        for j in range(n):
            if b[j]:
                nb = b[:j] + (b[j] - 1,) + b[j + 1:]
                parts[j][(c, nb, 0, 0)] = parts[j].get((c, nb, 0, 0), 0) + v * Fraction(b[j], deg)
    return [SuperPolynomial(n, t) for t in parts]


def contract_dW(W: SuperPolynomial, eta: SuperPolynomial) -> SuperPolynomial:
    """iota_{dW} eta = sum_j dW/du_j * d/dtheta_j eta."""
    out = SuperPolynomial(eta.n)
    for j in range(eta.n):
        out = out + mul(W.diff_u(j), d_dtheta(j, eta))
    return out


def _fmt_coef(v: Fraction) -> str:
    return f"({v.numerator})" if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


def _sort_key(key: Key):
    c, b, J, K = key
    return (sum(c), sum(b), popcount(J) + popcount(K), c, b, bits(J), bits(K))


def serialize(p: SuperPolynomial) -> str:
    """Canonical string such as ``(-3/10)*r1*u1^2*t1*d2``."""
    if not p.terms:
        return "0"
    out = []
    for key in sorted(p.terms, key=_sort_key):
        c, b, J, K = key
        factors = [_fmt_coef(p.terms[key])]
        for name, exps in (("r", c), ("u", b)):
            for j, e in enumerate(exps):
                if e:
                    factors.append(f"{name}{j + 1}" + (f"^{e}" if e > 1 else ""))
        factors += [f"t{j + 1}" for j in bits(J)] + [f"d{j + 1}" for j in bits(K)]
        out.append("*".join(factors))
    return " + ".join(out)


def from_terms(n: int, terms: Iterable[tuple]) -> SuperPolynomial:
    """Build an even polynomial from (coefficient, u-exponents, r-exponents) triples."""
    out = SuperPolynomial(n)
    for coef, b, c in terms:
        out = out + SuperPolynomial.monomial(n, Fraction(coef), c=c, b=b)
    return out


def fermat(n: int, r_coeffs=None) -> SuperPolynomial:
    """u_1...u_n + sum_j k_j r_j u_j^n (k_j = 1 by default)."""
    ks = list(r_coeffs) if r_coeffs is not None else [1] * n
    w = SuperPolynomial.monomial(n, b=[1] * n)
    for j in range(n):
        e = [0] * n
        e[j] = n
        w = w + SuperPolynomial.monomial(n, ks[j], c=[int(i == j) for i in range(n)], b=e)
    return w
