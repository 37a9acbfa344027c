"""Hochschild cochains on the exterior algebra A = Lambda[theta_1..theta_n] with values in A (x) R.

A cochain is a sparse table ``inputs -> value``.  Inputs are tuples of bitmasks
``(K_s, ..., K_1)`` written left to right as in ``phi(a_s, ..., a_1)``, so the
last entry is ``a_1``.  A value is a dict ``(c, K0) -> Fraction`` standing for
``sum coef * r^c theta^{K0}``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterable, Mapping

from . import grading
from .linalg import Echelon, EchelonModP, solve
from .superalg import SuperPolynomial, TruncationPolicy, merge_sign, popcount

Value = dict
Table = dict

_PC = [popcount(i) for i in range(1 << 8)]


def _pc(mask: int) -> int:
    return _PC[mask] if mask < 256 else popcount(mask)


class ObstructionNonzero(RuntimeError):
    def __init__(self, k: int, message: str = ""):
        super().__init__(f"obstruction at r-order {k}" + (f": {message}" if message else ""))
        self.k = k


class FirstOrderZero(RuntimeError):
    pass


class NotInvertible(ValueError):
    pass


class PieceInfinite(RuntimeError):
    pass


def meet(p: TruncationPolicy | None, q: TruncationPolicy | None) -> TruncationPolicy:
    if p is None:
        return q or TruncationPolicy()
    if q is None:
        return p
    return TruncationPolicy(min(p.max_r_order, q.max_r_order), min(p.max_u_degree, q.max_u_degree),
                            min(p.max_length, q.max_length))


def _addc(c1: tuple, c2: tuple) -> tuple:
    return tuple(x + y for x, y in zip(c1, c2))


class HochschildCochain:
    """Immutable truncated cochain; ``a`` is the r-degree parameter used for grading."""

    __slots__ = ("n", "table", "policy", "a")

    def __init__(self, n: int, table: Mapping | None = None, policy: TruncationPolicy | None = None,
                 a: int | None = None):
        self.n = n
        self.policy = policy or TruncationPolicy()
        self.a = n if a is None else a
        L, N = self.policy.max_length, self.policy.max_r_order
        clean = {}
        for T, val in (table or {}).items():
            if len(T) > L:
                continue
            v = {k: Fraction(x) for k, x in val.items() if x and sum(k[0]) <= N}
            if v:
                clean[tuple(T)] = v
        self.table = clean

    # -- construction helpers --
    def _new(self, table, policy=None) -> HochschildCochain:
        return HochschildCochain(self.n, table, policy or self.policy, self.a)

    def with_policy(self, policy: TruncationPolicy) -> HochschildCochain:
        return HochschildCochain(self.n, self.table, policy, self.a)

    @classmethod
    def from_entries(cls, n: int, entries: Iterable, policy=None, a=None) -> HochschildCochain:
        """entries: (inputs, c, K0, coef)."""
        table: dict = defaultdict(lambda: defaultdict(Fraction))
        zero = (0,) * n
        for T, c, K0, coef in entries:
            table[tuple(T)][(tuple(c) if c is not None else zero, K0)] += Fraction(coef)
        return cls(n, table, policy, a)

    # -- linear structure --
    def __add__(self, other: HochschildCochain) -> HochschildCochain:
        table = {T: dict(v) for T, v in self.table.items()}
        for T, val in other.table.items():
            tgt = table.setdefault(T, {})
            for k, x in val.items():
                tgt[k] = tgt.get(k, 0) + x
        return self._new(table, meet(self.policy, other.policy))

    def scale(self, x) -> HochschildCochain:
        x = Fraction(x)
        return self._new({T: {k: v * x for k, v in val.items()} for T, val in self.table.items()})

    def __neg__(self) -> HochschildCochain:
        return self.scale(-1)

    def __sub__(self, other: HochschildCochain) -> HochschildCochain:
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, HochschildCochain) and self.n == other.n and self.table == other.table

    def __bool__(self) -> bool:
        return bool(self.table)

    def __repr__(self) -> str:
        return f"HochschildCochain(n={self.n}, entries={self.size()}, lengths={sorted(self.lengths())})"

    def is_zero(self) -> bool:
        return not self.table

    def size(self) -> int:
        return sum(len(v) for v in self.table.values())

    def lengths(self) -> set[int]:
        return {len(T) for T in self.table}

    def entries(self):
        for T, val in self.table.items():
            for (c, K0), v in val.items():
                yield T, c, K0, v

    def restrict(self, pred) -> HochschildCochain:
        """Keep entries with pred(inputs, c, K0)."""
        table = {}
        for T, val in self.table.items():
            v = {k: x for k, x in val.items() if pred(T, k[0], k[1])}
            if v:
                table[T] = v
        return self._new(table)

    def length_part(self, s: int) -> HochschildCochain:
        return self.restrict(lambda T, c, K0: len(T) == s)

    def min_length(self, s: int) -> HochschildCochain:
        return self.restrict(lambda T, c, K0: len(T) >= s)

    def order_part(self, k: int) -> HochschildCochain:
        return self.restrict(lambda T, c, K0: sum(c) == k)

    def value(self, inputs) -> SuperPolynomial:
        n = self.n
        val = self.table.get(tuple(inputs), {})
        return SuperPolynomial(n, {(c, (0,) * n, K0, 0): v for (c, K0), v in val.items()})

    # -- grading --
    def entry_sign(self, T, K0) -> int:
        return (len(T) + _pc(K0) + sum(_pc(k) for k in T)) & 1

    def entry_degree(self, T, c, K0, datum=None) -> grading.YDegree:
        """f(s) + deg(r^c theta^K0) - sum deg(theta^{K_i}) in G^n_1."""
        G = datum or grading.G_na(self.n, 1)
        zero = (0,) * self.n
        deg = G.fdeg(len(T)) + grading.monomial_degree(zero, c, grading.mask_list(K0), [], G, self.a)
        for K in T:
            deg = deg - grading.monomial_degree(zero, zero, grading.mask_list(K), [], G, self.a)
        return deg

    def degrees(self, datum=None) -> list:
        G = datum or grading.G_na(self.n, 1)
        out: list = []
        for T, c, K0, _ in self.entries():
            d = self.entry_degree(T, c, K0, G)
            if d not in out:
                out.append(d)
        return out

    def is_homogeneous(self, degree: grading.YDegree) -> bool:
        return all(d == degree for d in self.degrees(degree.ambient))


def exterior_mu2(n: int, policy: TruncationPolicy | None = None, a: int | None = None) -> HochschildCochain:
    """mu^2(a2, a1) = (-1)^{|a1|} a2 ^ a1."""
    zero = (0,) * n
    table = {}
    for K2 in range(1 << n):
        for K1 in range(1 << n):
            if K2 & K1:
                continue
            sgn = merge_sign(K2, K1) * (-1 if _pc(K1) & 1 else 1)
            table[(K2, K1)] = {(zero, K2 | K1): Fraction(sgn)}
    return HochschildCochain(n, table, policy, a)


def identity_cochain(n: int, policy=None, a=None) -> HochschildCochain:
    zero = (0,) * n
    return HochschildCochain(n, {(K,): {(zero, K): Fraction(1)} for K in range(1 << n)}, policy, a)


# -- Gerstenhaber product --

def _output_index(psi: HochschildCochain):
    """K0 -> list of (inputs, c, coef, (sigma(psi entry) + 1) mod 2)."""
    index = defaultdict(list)
    for T, val in psi.table.items():
        base = len(T) + sum(_pc(k) for k in T)
        for (c, K0), v in val.items():
            index[K0].append((T, c, v, (base + _pc(K0) + 1) & 1))
    return index


def _circ_into(out, phi_items, index, L, N):
    for T, val, positions in phi_items:
        m = len(T)
        for pos in positions:
            right = T[pos + 1:]
            rsum = sum(_pc(k) for k in right) - len(right)
            left = T[:pos]
            for Tp, c2, v2, sfac in index.get(T[pos], ()):
                if m - 1 + len(Tp) > L:
                    continue
                neg = sfac and (rsum & 1)
                tgt = out[left + Tp + right]
                for (c1, K0), v1 in val.items():
                    c = _addc(c1, c2) if any(c2) else c1
                    if sum(c) > N:
                        continue
                    x = v1 * v2
                    tgt[(c, K0)] += -x if neg else x


def circ(phi: HochschildCochain, psi: HochschildCochain, policy: TruncationPolicy | None = None) -> HochschildCochain:
    """phi o psi with sign (sigma(psi) + 1)(sigma(a_1) + ... + sigma(a_i) - i)."""
    P = policy or meet(phi.policy, psi.policy)
    out = defaultdict(lambda: defaultdict(Fraction))
    items = ((T, val, range(len(T))) for T, val in phi.table.items())
    _circ_into(out, items, _output_index(psi), P.max_length, P.max_r_order)
    return HochschildCochain(phi.n, out, P, phi.a)


def split_parity(phi: HochschildCochain) -> dict[int, HochschildCochain]:
    parts: dict = {0: {}, 1: {}}
    for T, val in phi.table.items():
        for (c, K0), v in val.items():
            parts[phi.entry_sign(T, K0)].setdefault(T, {})[(c, K0)] = v
    return {s: phi._new(t) for s, t in parts.items() if t}


def bracket(phi: HochschildCochain, psi: HochschildCochain, policy=None) -> HochschildCochain:
    """[phi, psi] = phi o psi - (-1)^{(s(phi)+1)(s(psi)+1)} psi o phi, extended bilinearly."""
    P = policy or meet(phi.policy, psi.policy)
    out = HochschildCochain(phi.n, {}, P, phi.a)
    for sp, a in split_parity(phi).items():
        for sq, b in split_parity(psi).items():
            term = circ(a, b, P)
            other = circ(b, a, P)
            out = out + term + (other if (sp + 1) * (sq + 1) % 2 else -other)
    return out


class Delta:
    """The Hochschild differential tau -> [mu, tau] for a fixed even mu, with cached indices."""

    def __init__(self, mu: HochschildCochain, policy: TruncationPolicy | None = None):
        self.mu = mu
        self.policy = policy or mu.policy
        self.out_index = _output_index(mu)
        self.slot_index = defaultdict(list)
        for T, val in mu.table.items():
            for pos, K in enumerate(T):
                self.slot_index[K].append((T, val, pos))

    def __call__(self, tau: HochschildCochain) -> HochschildCochain:
        P = meet(self.policy, tau.policy)
        L, N = P.max_length, P.max_r_order
        out = defaultdict(lambda: defaultdict(Fraction))
        # mu o tau
        tau_index = _output_index(tau)
        items = []
        for K0 in tau_index:
            for T, val, pos in self.slot_index.get(K0, ()):
                items.append((T, val, (pos,)))
        _circ_into(out, items, tau_index, L, N)
        # - (-1)^{sigma(tau)+1} tau o mu
        for s, part in split_parity(tau).items():
            neg = defaultdict(lambda: defaultdict(Fraction))
            _circ_into(neg, ((T, val, range(len(T))) for T, val in part.table.items()), self.out_index, L, N)
            f = -1 if (s + 1) % 2 == 0 else 1
            for T, val in neg.items():
                tgt = out[T]
                for k, v in val.items():
                    tgt[k] += f * v
        return HochschildCochain(tau.n, out, P, tau.a)


def hochschild_differential(mu: HochschildCochain, tau: HochschildCochain) -> HochschildCochain:
    return Delta(mu)(tau)


# -- diamond --

def diamond(phi: HochschildCochain, F: HochschildCochain, policy=None) -> HochschildCochain:
    """(phi <> F)^n = sum over i_1 + ... + i_j = n of phi^j(F^{i_1}(...), ..., F^{i_j}(...))."""
    P = policy or meet(phi.policy, F.policy)
    L, N = P.max_length, P.max_r_order
    index = defaultdict(list)
    for T, val in F.table.items():
        if not T:
            raise ValueError("F must be supported in lengths >= 1")
        for (c, K0), v in val.items():
            index[K0].append((T, c, v, sum(c)))
    out = defaultdict(lambda: defaultdict(Fraction))
    zero = (0,) * phi.n
    for T, val in phi.table.items():
        j = len(T)
        minr = min(sum(c) for c, _ in val)
        partial = [((), zero, Fraction(1), 0)]
        for pos, e in enumerate(T):
            remaining = j - pos - 1
            nxt = []
            for ins, c, coef, rc in partial:
                for Tf, cf, vf, rf in index.get(e, ()):
                    if len(ins) + len(Tf) + remaining > L or rc + rf + minr > N:
                        continue
                    nxt.append((ins + Tf, _addc(c, cf) if rf else c, coef * vf, rc + rf))
            partial = nxt
            if not partial:
                break
        for ins, c, coef, rc in partial:
            tgt = out[ins]
            for (c1, K0), v1 in val.items():
                if rc + sum(c1) > N:
                    continue
                tgt[(_addc(c1, c), K0)] += coef * v1
    return HochschildCochain(phi.n, out, P, phi.a)


# -- Yoneda product --

def yoneda(phi: HochschildCochain, psi: HochschildCochain, mu: HochschildCochain, policy=None) -> HochschildCochain:
    """mu(..., phi(...), ..., psi(...), ...) with the two insertion signs."""
    P = policy or meet(meet(phi.policy, psi.policy), mu.policy)
    L, N = P.max_length, P.max_r_order
    iphi, ipsi = _output_index(phi), _output_index(psi)
    out = defaultdict(lambda: defaultdict(Fraction))
    for T, val in mu.table.items():
        m = len(T)
        for p1 in range(m):
            for p2 in range(p1 + 1, m):
                left, mid, right = T[:p1], T[p1 + 1:p2], T[p2 + 1:]
                s_right = sum(_pc(k) for k in right) - len(right)
                s_mid = sum(_pc(k) for k in mid) - len(mid)
                for Tb, cb, vb, fb in iphi.get(T[p1], ()):
                    for Tg, cg, vg, fg in ipsi.get(T[p2], ()):
                        if m - 2 + len(Tb) + len(Tg) > L:
                            continue
                        s_g = sum(_pc(k) for k in Tg) - len(Tg)
                        e = fb * (s_right + s_g + s_mid) + fg * s_right
                        sign = -1 if e & 1 else 1
                        tgt = out[left + Tb + mid + Tg + right]
                        cc = _addc(cb, cg)
                        for (c1, K0), v1 in val.items():
                            c = _addc(c1, cc)
                            if sum(c) <= N:
                                tgt[(c, K0)] += sign * v1 * vb * vg
    return HochschildCochain(mu.n, out, P, mu.a)


# -- A-infinity relation --

@dataclass
class AinfReport:
    passed: bool
    residual: HochschildCochain
    failing_lengths: list[int] = field(default_factory=list)


def check_ainf(mu: HochschildCochain, policy=None) -> AinfReport:
    res = circ(mu, mu, policy)
    return AinfReport(res.is_zero(), res, sorted(res.lengths()))


# -- formal diffeomorphisms --

def _linear_part(F: HochschildCochain) -> list[list[Fraction]]:
    size = 1 << F.n
    zero = (0,) * F.n
    M = [[Fraction(0)] * size for _ in range(size)]
    for (K,), val in ((T, v) for T, v in F.table.items() if len(T) == 1):
        for (c, K0), x in val.items():
            if c == zero:
                M[K0][K] += x
    return M


def _invert_matrix(M):
    size = len(M)
    A = [row[:] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(M)]
    for col in range(size):
        piv = next((r for r in range(col, size) if A[r][col]), None)
        if piv is None:
            raise NotInvertible("order-0 linear part is singular")
        A[col], A[piv] = A[piv], A[col]
        f = A[col][col]
        A[col] = [x / f for x in A[col]]
        for r in range(size):
            if r != col and A[r][col]:
                g = A[r][col]
                A[r] = [x - g * y for x, y in zip(A[r], A[col])]
    return [row[size:] for row in A]


def linear_cochain(n: int, M, policy=None, a=None) -> HochschildCochain:
    zero = (0,) * n
    table = {}
    for K in range(1 << n):
        val = {(zero, K0): M[K0][K] for K0 in range(1 << n) if M[K0][K]}
        if val:
            table[(K,)] = val
    return HochschildCochain(n, table, policy, a)


def invert_formal_diffeo(F: HochschildCochain) -> HochschildCochain:
    """G with G <> F = id, by fixed-point iteration in (length - 1) + r-order."""
    if any(len(T) == 0 for T in F.table):
        raise ValueError("formal diffeomorphisms live in lengths >= 1")
    Minv = _invert_matrix(_linear_part(F))
    L0inv = linear_cochain(F.n, Minv, F.policy, F.a)
    ident = identity_cochain(F.n, F.policy, F.a)
    G = L0inv
    for _ in range(F.policy.max_length + F.policy.max_r_order + 2):
        E = diamond(G, F) - ident
        if E.is_zero():
            return G
        G = G - diamond(E, L0inv)
    if not (diamond(G, F) - ident).is_zero():
        raise RuntimeError("inversion did not converge")
    return G


def pushforward(F: HochschildCochain, mu: HochschildCochain, Finv: HochschildCochain | None = None) -> HochschildCochain:
    """F_* mu = (F o mu) <> F^{-1}."""
    if Finv is None:
        Finv = invert_formal_diffeo(F)
    return diamond(circ(F, mu), Finv)


# -- Aut(R) --

class RingAutomorphism:
    """psi in R of degree zero with psi(0) != 0, acting by r^c -> psi^{|c|} r^c."""

    def __init__(self, psi: SuperPolynomial, a: int | None = None, check: bool = True):
        n = psi.n
        for (c, b, J, K) in psi.terms:
            if any(b) or J or K:
                raise ValueError("psi must be a polynomial in r only")
        if check:
            if not psi.constant_term():
                raise ValueError("psi(0) must be nonzero")
            if n >= 3:
                G = grading.G_na(n, 1)
                zero = (0,) * n
                for (c, _, _, _) in psi.terms:
                    if grading.monomial_degree(zero, c, [], [], G, n if a is None else a) != G.zero():
                        raise ValueError("psi must have degree zero")
        self.psi = psi

    @classmethod
    def constant(cls, n: int, k) -> RingAutomorphism:
        return cls(SuperPolynomial.const(n, k))


def _r_powers(psi: SuperPolynomial, N: int) -> list[list[tuple]]:
    """psi^k as lists of (c, coef), truncated at r-order N."""
    terms = [(c, v) for (c, _, _, _), v in psi.terms.items()]
    n = psi.n
    out = [[((0,) * n, Fraction(1))]]
    for _ in range(N):
        acc: dict = defaultdict(Fraction)
        for c1, v1 in out[-1]:
            for c2, v2 in terms:
                c = _addc(c1, c2)
                if sum(c) <= N:
                    acc[c] += v1 * v2
        out.append([(c, v) for c, v in acc.items() if v])
    return out


def aut_act(psi, mu: HochschildCochain) -> HochschildCochain:
    """(psi . mu)(a_s..a_1) = psi^* mu(...): each r^c term picks up psi^{|c|}."""
    if isinstance(psi, RingAutomorphism):
        psi = psi.psi
    N = mu.policy.max_r_order
    pw = _r_powers(psi, N)
    table = {}
    for T, val in mu.table.items():
        acc: dict = defaultdict(Fraction)
        for (c, K0), v in val.items():
            k = sum(c)
            for c2, v2 in pw[k]:
                cc = _addc(c, c2)
                if sum(cc) <= N:
                    acc[(cc, K0)] += v * v2
        table[T] = acc
    return mu._new(table)


# -- symmetric group action --

def permute_mask(h, K: int) -> tuple[int, int]:
    """h(theta^K) = sign * theta^{h(K)}."""
    sign, mask = 1, 0
    j = 0
    while K:
        if K & 1:
            g = 1 << h[j]
            sign *= merge_sign(mask, g)
            mask |= g
        K >>= 1
        j += 1
    return sign, mask


def symmetric_action(h, phi: HochschildCochain) -> HochschildCochain:
    """(h . phi)(a_s..a_1) = h(phi(h^{-1} a_s, ..., h^{-1} a_1)), h(theta_j) = theta_{h(j)}, h(r_j) = r_{h(j)}."""
    n = phi.n
    table: dict = defaultdict(lambda: defaultdict(Fraction))
    for T, val in phi.table.items():
        sign, newT = 1, []
        for K in T:
            s, m = permute_mask(h, K)
            sign *= s
            newT.append(m)
        tgt = table[tuple(newT)]
        for (c, K0), v in val.items():
            s0, m0 = permute_mask(h, K0)
            c2 = [0] * n
            for j, e in enumerate(c):
                c2[h[j]] = e
            tgt[(tuple(c2), m0)] += sign * s0 * v
    return phi._new(table)


def sn_generators(n: int) -> list[tuple[int, ...]]:
    if n < 2:
        return []
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple((j + 1) % n for j in range(n))
    return [swap, cycle]


def invariant_check(phi: HochschildCochain) -> bool:
    return all(symmetric_action(h, phi) == phi for h in sn_generators(phi.n))


def sn_average(phi: HochschildCochain) -> HochschildCochain:
    n = phi.n
    acc = HochschildCochain(n, {}, phi.policy, phi.a)
    for h in permutations(range(n)):
        acc = acc + symmetric_action(h, phi)
    return acc.scale(Fraction(1, factorial(n)))


# -- graded pieces and HH --

def piece_basis(n: int, a: int, total: int, s: int, j: int, normalized: bool = False,
                limit: int | None = None) -> list[tuple]:
    """Basis entries (inputs, c, K0) of the length-s, order-j piece of total degree f(total)."""
    out = []
    for c, K0, m in grading.cochain_shapes(n, a, total, s, j):
        for T in grading.tuples_with_multiplicity(s, m):
            if normalized and 0 in T:
                continue
            out.append((T, c, K0))
            if limit is not None and len(out) > limit:
                raise PieceInfinite(f"piece (f({total}), s={s}, j={j}) exceeds {limit} elements")
    out.sort()
    return out


def _basis_cochain(n, entry, policy, a):
    T, c, K0 = entry
    return HochschildCochain(n, {T: {(c, K0): Fraction(1)}}, policy, a)


def _row_map(cochain: HochschildCochain) -> dict:
    return {(T, c, K0): v for T, c, K0, v in cochain.entries()}


@dataclass
class HHResult:
    dimension: int
    representatives: list
    dims: dict
    certified_by: str


def compute_hh(mu2: HochschildCochain, total: int, s: int, j: int = 0, normalized: bool = True,
               limit: int = 200000, exact_threshold: int = 3000) -> HHResult:
    """dim HH^{(f(total), s)} of (A, mu2) with coefficients of r-order j.

    Kernel and image are computed exactly over Q.  For pieces larger than
    ``exact_threshold`` the kernel dimension is first bounded above by a rank
    computation over F_p (rank over F_p never exceeds rank over Q); when the
    bound already forces zero cohomology no rational elimination is needed.
    """
    n, a = mu2.n, mu2.a
    pol = TruncationPolicy(max(j, 0), 0, s + 1)
    d = Delta(mu2.with_policy(pol), pol)
    B_prev = piece_basis(n, a, total - 1, s - 1, j, normalized, limit) if s >= 1 else []
    B = piece_basis(n, a, total, s, j, normalized, limit)
    images_prev = [_row_map(d(_basis_cochain(n, e, pol, a))) for e in B_prev]
    col_index = {e: i for i, e in enumerate(B)}
    Eim = Echelon()
    for v in images_prev:
        Eim.add({col_index[k]: x for k, x in v.items()})
    rank_prev = Eim.rank
    dims = {"C_prev": len(B_prev), "C": len(B), "rank_prev": rank_prev}
    if len(B) > exact_threshold:
        Ep = EchelonModP()
        for e in B:
            Ep.add(_row_map(d(_basis_cochain(n, e, pol, a))))
        upper = len(B) - Ep.rank - rank_prev
        dims["rank_next_modp"] = Ep.rank
        if upper == 0:
            return HHResult(0, [], dims, "modular rank bound")
    Eker = Echelon(track=True)
    kernel = []
    for i, e in enumerate(B):
        dep = Eker.add(_row_map(d(_basis_cochain(n, e, pol, a))), i)
        if dep is not None:
            kernel.append(dep)
    dims["rank_next"] = Eker.rank
    reps = []
    for vec in kernel:
        if Eim.add(vec) is None:
            reps.append(HochschildCochain.from_entries(
                n, [(B[i][0], B[i][1], B[i][2], x) for i, x in vec.items()], pol, a))
    return HHResult(len(reps), reps, dims, "exact")


# -- versality --

@dataclass
class VersalityResult:
    psi: SuperPolynomial
    F: HochschildCochain
    verified: bool
    steps: list


def _degree_zero_monomials(n: int, a: int, k: int) -> list[tuple]:
    G = grading.G_na(n, 1)
    zero = (0,) * n
    return [c for c in grading._compositions(k, n)
            if grading.monomial_degree(zero, c, [], [], G, a) == G.zero()]


def versality_solve(mu: HochschildCochain, eta: HochschildCochain, equivariant: bool = False,
                    normalized: bool = False) -> VersalityResult:
    """Find psi in Aut(R) and a formal diffeomorphism F with psi . mu = F_* eta, order by order in r."""
    n, a = mu.n, mu.a
    P = meet(mu.policy, eta.policy)
    N, L = P.max_r_order, P.max_length
    mu0 = mu.order_part(0)
    if mu0 != eta.order_part(0):
        raise ValueError("mu and eta must agree at r-order 0")
    delta = Delta(mu0, P)
    ident = identity_cochain(n, P, a)
    psi = SuperPolynomial(n)
    F = ident
    mu1 = mu.order_part(1)
    steps = []
    for k in range(1, N + 1):
        resid = (aut_act(psi, mu) - pushforward(F, eta)).order_part(k)
        psi_basis = _degree_zero_monomials(n, a, k - 1)
        F_basis = []
        for s in range(1, L):  # length-L corrections only change lengths > L
            F_basis.extend(piece_basis(n, a, 1, s, k, normalized))
        cols = []
        labels = []
        for c in psi_basis:
            term = aut_act(SuperPolynomial.monomial(n, c=c), mu1).order_part(k) if k > 1 else mu1
            cols.append(_row_map(term))
            labels.append(("psi", c))
        for e in F_basis:
            cols.append(_row_map(delta(_basis_cochain(n, e, P, a)).order_part(k)))
            labels.append(("F", e))
        if k == 1:
            Ech = Echelon()
            rows = {}
            for col in cols[len(psi_basis):]:
                Ech.add({rows.setdefault(r, len(rows)): x for r, x in col.items()})
            if not Ech.reduce({rows.setdefault(r, len(rows)): x for r, x in _row_map(mu1).items()})[0]:
                raise FirstOrderZero("first-order part of mu is exact")
        rows: dict = {}
        num_cols = [{rows.setdefault(r, len(rows)): x for r, x in col.items()} for col in cols]
        rhs = {rows.setdefault(r, len(rows)): -x for r, x in _row_map(resid).items()}
        x = solve(num_cols, rhs)
        if x is None:
            raise ObstructionNonzero(k, "residual class is not exact after the Aut(R) adjustment")
        dpsi = SuperPolynomial(n)
        Fk = []
        for i, coef in x.items():
            kind, lab = labels[i]
            if kind == "psi":
                dpsi = dpsi + SuperPolynomial.monomial(n, coef, c=lab)
            else:
                Fk.append((lab[0], lab[1], lab[2], coef))
        Fk_c = HochschildCochain.from_entries(n, Fk, P, a)
        if equivariant:
            Fk_c = sn_average(Fk_c)
        if k == 1 and not dpsi:
            raise ObstructionNonzero(1, "first-order classes are not proportional")
        psi = psi + dpsi
        F = F + Fk_c
        steps.append({"order": k, "psi_terms": len(dpsi.terms), "F_terms": Fk_c.size(),
                      "unknowns": len(cols)})
    ok = aut_act(psi, mu) == pushforward(F, eta)
    return VersalityResult(psi, F, ok, steps)
