"""Koszul matrix factorizations and their endomorphism DGA.

Operators on K = S[theta] are stored as SuperPolynomials in normal order
``u^b r^c theta^J dtheta^K`` (multiply by theta^J after applying dtheta^K).
Their composition is the Clifford product, with dtheta_j theta_k + theta_k dtheta_j = [j = k].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import grading
from .superalg import (
    SuperPolynomial,
    TruncationPolicy,
    bits,
    euler_split,
    mul,
    popcount,
)


class NotScalar(ArithmeticError):
    def __init__(self, payload: SuperPolynomial):
        super().__init__(f"delta^2 is not a multiple of the identity: {payload}")
        self.payload = payload


def _lt(mask: int, j: int) -> int:
    return popcount(mask & ((1 << j) - 1))


@lru_cache(maxsize=None)
def odd_product(J1: int, K1: int, J2: int, K2: int) -> tuple:
    """Normal-ordered (theta^J1 dtheta^K1)(theta^J2 dtheta^K2) as ((J, K, sign), ...)."""
    terms = {(J2, K2): 1}
    for b in reversed(bits(K1)):
        nxt: dict = {}
        for (J, K), s in terms.items():
            if J >> b & 1:
                key = (J & ~(1 << b), K)
                nxt[key] = nxt.get(key, 0) + s * (-1 if _lt(J, b) & 1 else 1)
            if not K >> b & 1:
                sg = (-1 if popcount(J) & 1 else 1) * (-1 if _lt(K, b) & 1 else 1)
                key = (J, K | 1 << b)
                nxt[key] = nxt.get(key, 0) + s * sg
        terms = {k: v for k, v in nxt.items() if v}
    for t in reversed(bits(J1)):
        nxt = {}
        for (J, K), s in terms.items():
            if not J >> t & 1:
                key = (J | 1 << t, K)
                nxt[key] = nxt.get(key, 0) + s * (-1 if _lt(J, t) & 1 else 1)
        terms = {k: v for k, v in nxt.items() if v}
    return tuple((J, K, s) for (J, K), s in sorted(terms.items()))


def _group_odd(x: SuperPolynomial) -> dict:
    g: dict = {}
    for (c, b, J, K), v in x.terms.items():
        g.setdefault((J, K), []).append((c, b, sum(c), sum(b), v))
    return g


def compose(x: SuperPolynomial, y: SuperPolynomial, policy: TruncationPolicy | None = None) -> SuperPolynomial:
    """Operator composition x o y."""
    N = policy.max_r_order if policy else None
    D = policy.max_u_degree if policy else None
    out: dict = {}
    yg = _group_odd(y)
    for (J1, K1), xl in _group_odd(x).items():
        for (J2, K2), yl in yg.items():
            prods = odd_product(J1, K1, J2, K2)
            if not prods:
                continue
            for c1, b1, sc1, sb1, v1 in xl:
                for c2, b2, sc2, sb2, v2 in yl:
                    if N is not None and sc1 + sc2 > N:
                        continue
                    if D is not None and sb1 + sb2 > D:
                        continue
                    c = tuple(p + q for p, q in zip(c1, c2))
                    b = tuple(p + q for p, q in zip(b1, b2))
                    v = v1 * v2
                    for J, K, sg in prods:
                        key = (c, b, J, K)
                        out[key] = out.get(key, 0) + (v if sg == 1 else -v if sg == -1 else sg * v)
    return SuperPolynomial(x.n, out)


def parity_split(x: SuperPolynomial) -> dict[int, SuperPolynomial]:
    parts: dict = {0: {}, 1: {}}
    for k, v in x.terms.items():
        parts[(popcount(k[2]) + popcount(k[3])) & 1][k] = v
    return {p: SuperPolynomial(x.n, t) for p, t in parts.items() if t}


def supercommutator(x: SuperPolynomial, y: SuperPolynomial, policy=None) -> SuperPolynomial:
    out = SuperPolynomial(x.n)
    for px, a in parity_split(x).items():
        for py, b in parity_split(y).items():
            ab, ba = compose(a, b, policy), compose(b, a, policy)
            out = out + ab + (ba if px * py else -ba)
    return out


def apply_operator(op: SuperPolynomial, f: SuperPolynomial) -> SuperPolynomial:
    """Act on a module element f in S[theta] (no dtheta terms)."""
    res = compose(op, f)
    return res.part(lambda k: k[3] == 0)


@dataclass(frozen=True, eq=False)
class MatrixFactorization:
    n: int
    a: int
    w: SuperPolynomial
    wj: tuple
    delta0: SuperPolynomial
    delta1: SuperPolynomial
    datum: grading.GradingDatum | None = None

    @property
    def delta(self) -> SuperPolynomial:
        return self.delta0 + self.delta1

    def basis_degree(self, J: int) -> grading.YDegree:
        zero = (0,) * self.n
        return grading.monomial_degree(zero, zero, grading.mask_list(J), [], self.datum, self.a, dual_theta=True)

    def matrix(self) -> list[list[SuperPolynomial]]:
        """delta as a 2^n x 2^n matrix on the basis theta^J (column J is delta(theta^J))."""
        n = self.n
        size = 1 << n
        M = [[SuperPolynomial(n) for _ in range(size)] for _ in range(size)]
        for J in range(size):
            img = apply_operator(self.delta, SuperPolynomial(n, {((0,) * n, (0,) * n, J, 0): Fraction(1)}))
            for (c, b, J0, K0), v in img.terms.items():
                M[J0][J] = M[J0][J] + SuperPolynomial(n, {(c, b, 0, 0): v})
        return M


def build_O0(w: SuperPolynomial, n: int, a: int | None = None, wj=None) -> MatrixFactorization:
    """delta = sum_j u_j dtheta_j + w_j theta_j with the Euler splitting of w."""
    a = n if a is None else a
    if wj is None:
        wj = euler_split(w)
    d0 = SuperPolynomial(n)
    d1 = SuperPolynomial(n)
    for j in range(n):
        d0 = d0 + SuperPolynomial.monomial(n, b=[int(i == j) for i in range(n)], K=[j])
        d1 = d1 + mul(wj[j], SuperPolynomial.theta(n, j))
    datum = grading.G_na(n, 1) if n >= 3 else None
    return MatrixFactorization(n, a, w, tuple(wj), d0, d1, datum)


def square(mf: MatrixFactorization) -> SuperPolynomial:
    """The scalar s with delta^2 = s * id."""
    sq = compose(mf.delta, mf.delta)
    if any(J or K for (_, _, J, K) in sq.terms):
        raise NotScalar(sq)
    return sq


def delta_degrees(mf: MatrixFactorization) -> list:
    """Distinct degrees of the monomials of delta (theta in the dual convention)."""
    out: list = []
    for (c, b, J, K) in mf.delta.terms:
        d = grading.monomial_degree(b, c, grading.mask_list(J), grading.mask_list(K), mf.datum, mf.a,
                                    dual_theta=True)
        if d not in out:
            out.append(d)
    return out


def is_graded(mf: MatrixFactorization) -> bool:
    degs = delta_degrees(mf)
    return len(degs) == 1 and degs[0] == mf.datum.fdeg(1)


# -- the endomorphism DGA S[theta, dtheta] --

def d0_op(x: SuperPolynomial) -> SuperPolynomial:
    """[delta0, x] = sum_j u_j (d/dtheta_j on the theta part)."""
    n = x.n
    out: dict = {}
    for (c, b, J, K), v in x.terms.items():
        for j in bits(J):
            nb = b[:j] + (b[j] + 1,) + b[j + 1:]
            key = (c, nb, J & ~(1 << j), K)
            out[key] = out.get(key, 0) + (-v if _lt(J, j) & 1 else v)
    return SuperPolynomial(n, out)


def make_d1(wj, policy: TruncationPolicy | None = None):
    """x -> [delta1, x] = sum_{j in K} w_j (-1)^{|J| + #(K < j)} theta^J dtheta^{K - j}."""
    N = policy.max_r_order if policy else None
    D = policy.max_u_degree if policy else None
    wterms = [list(w.terms.items()) for w in wj]

    def d1(x: SuperPolynomial) -> SuperPolynomial:
        out: dict = {}
        for (c, b, J, K), v in x.terms.items():
            pj = popcount(J)
            for j in bits(K):
                sg = -1 if (pj + _lt(K, j)) & 1 else 1
                Kj = K & ~(1 << j)
                for (c2, b2, _, _), v2 in wterms[j]:
                    cc = tuple(p + q for p, q in zip(c, c2))
                    if N is not None and sum(cc) > N:
                        continue
                    bb = tuple(p + q for p, q in zip(b, b2))
                    if D is not None and sum(bb) > D:
                        continue
                    key = (cc, bb, J, Kj)
                    out[key] = out.get(key, 0) + sg * v * v2
        return SuperPolynomial(x.n, out)

    return d1


@dataclass
class EndoDGA:
    mf: MatrixFactorization
    policy: TruncationPolicy | None = None
    d1: object = field(init=False)

    def __post_init__(self):
        self.d1 = make_d1(self.mf.wj, self.policy)

    def d0(self, x: SuperPolynomial) -> SuperPolynomial:
        return d0_op(x)

    def product(self, x: SuperPolynomial, y: SuperPolynomial) -> SuperPolynomial:
        return compose(x, y, self.policy)


def basis_monomials(n: int, cap: int):
    """u^b theta^J dtheta^K with |b| <= cap, all J and K."""
    for deg in range(cap + 1):
        for b in grading._compositions(deg, n):
            for J in range(1 << n):
                for K in range(1 << n):
                    yield SuperPolynomial(n, {((0,) * n, b, J, K): Fraction(1)})


def endo_dga(mf: MatrixFactorization, cap: int = 3) -> tuple[EndoDGA, dict]:
    """The DGA with d_j = [delta_j, -] and a report of d0^2 = d1^2 = [d0, d1] = 0 on basis monomials."""
    E = EndoDGA(mf)
    fails = {"d0^2": 0, "d1^2": 0, "[d0,d1]": 0}
    for x in basis_monomials(mf.n, cap):
        if E.d0(E.d0(x)):
            fails["d0^2"] += 1
        if E.d1(E.d1(x)):
            fails["d1^2"] += 1
        if E.d0(E.d1(x)) + E.d1(E.d0(x)):
            fails["[d0,d1]"] += 1
    return E, {"passed": not any(fails.values()), "violations": fails}
