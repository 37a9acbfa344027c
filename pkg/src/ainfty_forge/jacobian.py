"""Gröbner bases over Q and Jacobian rings of the type A superpotentials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

Poly = dict  # exponent tuple -> Fraction


class NotZeroDimensional(ValueError):
    pass


class NotIsolated(ValueError):
    pass


def grevlex(e: tuple) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex(e: tuple) -> tuple:
    return e


ORDERS = {"grevlex": grevlex, "lex": lex}


def clean(p: Poly) -> Poly:
    return {e: Fraction(c) for e, c in p.items() if c}


def lead(p: Poly, order) -> tuple:
    return max(p, key=order)


def p_add(p: Poly, q: Poly, f=1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        x = out.get(e, 0) + f * c
        if x:
            out[e] = x
        else:
            out.pop(e, None)
    return out


def p_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return clean(out)


def p_pow(p: Poly, k: int, nvars: int) -> Poly:
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        out = p_mul(out, p)
    return out


def monomial(e, c=1) -> Poly:
    return {tuple(e): Fraction(c)}


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _shift(p: Poly, e: tuple, c) -> Poly:
    return {tuple(a + b for a, b in zip(m, e)): v * c for m, v in p.items()}


def _monic(p: Poly, order) -> Poly:
    c = p[lead(p, order)]
    return {e: v / c for e, v in p.items()}


def reduce_full(p: Poly, basis: list[Poly], order) -> Poly:
    """Remainder of p on division by basis (every term reduced)."""
    p = dict(p)
    rem: Poly = {}
    leads = [(lead(g, order), g) for g in basis]
    while p:
        lt = lead(p, order)
        c = p[lt]
        for lg, g in leads:
            if _divides(lg, lt):
                e = tuple(a - b for a, b in zip(lt, lg))
                p = p_add(p, _shift(g, e, c / g[lg]), -1)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem


def _spoly(f: Poly, g: Poly, order) -> Poly:
    lf, lg = lead(f, order), lead(g, order)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    ef = tuple(a - b for a, b in zip(lcm, lf))
    eg = tuple(a - b for a, b in zip(lcm, lg))
    return p_add(_shift(f, ef, 1 / f[lf]), _shift(g, eg, 1 / g[lg]), -1)


@dataclass
class GroebnerBasis:
    basis: list
    order: str
    nvars: int
    standard: list | None = field(default=None)

    @property
    def key(self):
        return ORDERS[self.order]

    def leads(self) -> list[tuple]:
        return [lead(g, self.key) for g in self.basis]


def buchberger(gens: list[Poly], order: str = "grevlex") -> GroebnerBasis:
    """Reduced Gröbner basis, pairs processed first in first out."""
    gens = [clean(g) for g in gens]
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("empty generator list")
    key = ORDERS[order]
    nvars = len(next(iter(gens[0])))
    G = [_monic(g, key) for g in gens]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        li, lj = lead(G[i], key), lead(G[j], key)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading terms
        r = reduce_full(_spoly(G[i], G[j], key), G, key)
        if r:
            G.append(_monic(r, key))
            pairs += [(k, len(G) - 1) for k in range(len(G) - 1)]
    # minimal then reduced
    leads = [lead(g, key) for g in G]
    keep = []
    for i, g in enumerate(G):
        if any(k != i and _divides(leads[k], leads[i]) and (leads[k] != leads[i] or k < i)
               for k in range(len(G))):
            continue
        keep.append(g)
    red = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lg = lead(g, key)
        rest = reduce_full({e: v for e, v in g.items() if e != lg}, others, key)
        red.append(_monic(p_add(rest, {lg: g[lg]}), key))
    red.sort(key=lambda g: key(lead(g, key)))
    return GroebnerBasis(red, order, nvars)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    return reduce_full(clean(p), gb.basis, gb.key)


def is_reduced(gb: GroebnerBasis) -> bool:
    key = gb.key
    leads = gb.leads()
    for i, g in enumerate(gb.basis):
        if g[leads[i]] != 1:
            return False
        for k, lk in enumerate(leads):
            if k != i and any(_divides(lk, e) for e in g):
                return False
    for i in range(len(gb.basis)):
        for j in range(i):
            if reduce_full(_spoly(gb.basis[i], gb.basis[j], key), gb.basis, key):
                return False
    return True


def standard_monomials(gb: GroebnerBasis) -> list[tuple]:
    leads = gb.leads()
    if any(all(x == 0 for x in lt) for lt in leads):
        return []
    bounds = []
    for v in range(gb.nvars):
        pure = [lt[v] for lt in leads if all(x == 0 for k, x in enumerate(lt) if k != v)]
        if not pure:
            raise NotZeroDimensional(f"no pure power of variable {v + 1} among leading terms")
        bounds.append(min(pure))
    out = [e for e in product(*[range(b) for b in bounds]) if not any(_divides(lt, e) for lt in leads)]
    return sorted(out, key=gb.key)


def quotient_dimension(gb: GroebnerBasis) -> int:
    return len(standard_monomials(gb))


# -- Jacobian ring of u_1...u_n + r sum u_j^n --

def superpotential(n: int, r) -> Poly:
    w = monomial((1,) * n)
    for j in range(n):
        w = p_add(w, monomial(tuple(n if k == j else 0 for k in range(n)), r))
    return w


def partial(p: Poly, j: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        if e[j]:
            e2 = e[:j] + (e[j] - 1,) + e[j + 1:]
            out[e2] = out.get(e2, 0) + c * e[j]
    return clean(out)


def jacobian_ideal(w: Poly, n: int) -> list[Poly]:
    return [partial(w, j) for j in range(n)]


@dataclass
class HHRingReport:
    n: int
    r: Fraction
    passed: bool
    quotient_dimension: int
    expected_dimension: int
    relations_hold: list
    alpha_top_vanishes: bool
    alpha_below_nonzero: bool
    structure_constant: Fraction
    nilpotency: int


def hh_ring_check(n: int, r_value, order: str = "grevlex") -> HHRingReport:
    """Check that alpha = u_1...u_n generates Q[alpha]/alpha^{n-1} inside the Jacobian ring."""
    r = Fraction(r_value)
    w = superpotential(n, r)
    gb = buchberger(jacobian_ideal(w, n), order)
    try:
        dim = quotient_dimension(gb)
    except NotZeroDimensional as exc:
        raise NotIsolated(f"w has a non-isolated singularity at r = {r}") from exc
    alpha = monomial((1,) * n)
    rel = []
    for j in range(n):
        e = tuple(0 if k == j else 1 for k in range(n))
        ej = tuple(n - 1 if k == j else 0 for k in range(n))
        rel.append(not normal_form(p_add(monomial(e), monomial(ej, n * r)), gb))
    top = not normal_form(p_pow(alpha, n - 1, n), gb)
    below = bool(normal_form(p_pow(alpha, n - 2, n), gb))
    # alpha = c * r * u_1^n modulo the ideal
    e1 = tuple(n if k == 0 else 0 for k in range(n))
    c = -n
    const_ok = not normal_form(p_add(alpha, monomial(e1, -c * r)), gb)
    nil = next(k for k in range(1, n + 1) if not normal_form(p_pow(alpha, k, n), gb))
    expected = (n - 1) ** n
    passed = dim == expected and all(rel) and top and below and const_ok
    return HHRingReport(n, r, passed, dim, expected, rel, top, below, Fraction(c) if const_ok else None, nil)


def invariant_membership(b, n: int):
    """(True, q, m) if u^b = (u_1...u_n)^q prod u_j^{n m_j}, else (False, None, None)."""
    b = list(b)
    for q in range(min(b) + 1):
        if all((x - q) % n == 0 for x in b):
            return True, q, tuple((x - q) // n for x in b)
    return False, None, None


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    terms = []
    for e in sorted(p, key=grevlex, reverse=True):
        c = p[e]
        coef = f"({c.numerator})" if c.denominator == 1 else f"({c.numerator}/{c.denominator})"
        fac = [f"u{k + 1}" + (f"^{x}" if x > 1 else "") for k, x in enumerate(e) if x]
        terms.append("*".join([coef] + fac))
    return " + ".join(terms)
