"""Homological perturbation for the endomorphism algebra of the Koszul factorization.

B = S[theta, dtheta] with mu^1 = d0, mu^2 the operator product and the
perturbation d1.  C = R[dtheta] is the cohomology, with i, p, h as below.

All operations use the shifted sign convention matching the cochains of
``hochschild``: mu^1(x) = (-1)^|x| d0 x, mu^2(x2, x1) = (-1)^|x1| x2 x1, and the
shifted homotopy h_s(x) = (-1)^|x| h x, so that mu^1 h_s + h_s mu^1 = ip - id.
Every composite "h_s after an odd operation" is even, so the tree sums carry no
Koszul signs beyond those inside mu^1, mu^2 and h_s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable

from . import grading
from .hochschild import HochschildCochain
from .mf import EndoDGA, MatrixFactorization, basis_monomials, build_O0, compose, d0_op, make_d1
from .superalg import SuperPolynomial, TruncationPolicy, bits, euler_split, popcount


class DegreeTooLow(ValueError):
    """The superpotential has a monomial of u-degree < 3."""


def _lt(mask: int, j: int) -> int:
    return popcount(mask & ((1 << j) - 1))


def _signed(x: SuperPolynomial) -> SuperPolynomial:
    """x -> (-1)^|x| x, termwise."""
    return SuperPolynomial._raw(x.n, {k: (-v if (popcount(k[2]) + popcount(k[3])) & 1 else v)
                                      for k, v in x.terms.items()})


def _htilde_into(out: dict, key, v) -> None:
    c, b, J, K = key
    for j in range(len(b)):
        if not b[j] or J >> j & 1:
            continue
        nb = b[:j] + (b[j] - 1,) + b[j + 1:]
        k2 = (c, nb, J | 1 << j, K)
        out[k2] = out.get(k2, 0) + (-v if _lt(J, j) & 1 else v) * b[j]


def op_htilde(x: SuperPolynomial) -> SuperPolynomial:
    """(sum_j df/du_j theta_j) theta^J dtheta^K."""
    out: dict = {}
    for key, v in x.terms.items():
        _htilde_into(out, key, v)
    return SuperPolynomial(x.n, out)


def op_h(x: SuperPolynomial, normalized: bool = True) -> SuperPolynomial:
    """h̃ divided by |b| + |J| (zero on b = 0, J = empty)."""
    if not normalized:
        return op_htilde(x)
    out: dict = {}
    for key, v in x.terms.items():
        weight = sum(key[1]) + popcount(key[2])
        if weight:
            _htilde_into(out, key, v / weight)
    return SuperPolynomial(x.n, out)


def op_p(x: SuperPolynomial) -> SuperPolynomial:
    return x.part(lambda k: not any(k[1]) and not k[2])


def op_i(x: SuperPolynomial) -> SuperPolynomial:
    return x


@dataclass
class TransferData:
    """The retract (i, p, h) of (B, d0) onto (C, 0) with the perturbation d1."""

    n: int
    wj: tuple
    policy: TruncationPolicy | None = None
    normalized: bool = True
    d1: Callable = field(init=False, repr=False)

    def __post_init__(self):
        self.d1 = make_d1(self.wj, self.policy)

    @classmethod
    def from_mf(cls, mf: MatrixFactorization, policy=None, normalized=True) -> TransferData:
        return cls(mf.n, mf.wj, policy, normalized)

    @classmethod
    def from_endo(cls, E: EndoDGA, normalized=True) -> TransferData:
        return cls(E.mf.n, E.mf.wj, E.policy, normalized)

    def d0(self, x):
        return d0_op(x)

    def h(self, x):
        return op_h(x, self.normalized)

    def i(self, x):
        return op_i(x)

    def p(self, x):
        return op_p(x)

    def product(self, x, y):
        return compose(x, y, self.policy)

    # shifted operations
    def hs(self, x):
        return self.h(_signed(x))

    def ds(self, x):
        return self.d1(_signed(x))

    def m1(self, x):
        return self.d0(_signed(x))

    def m2(self, x2, x1):
        return self.product(x2, _signed(x1))


def check_transfer(td: TransferData, cap: int = 3) -> dict:
    """Side conditions, homotopy identity and nilpotence on basis monomials with |b| <= cap."""
    fails = {"pi=id": 0, "h^2=0": 0, "hi=0": 0, "ph=0": 0, "ip=id-[d0,h]": 0, "(h d1)^(n+1)=0": 0}
    for x in basis_monomials(td.n, cap):
        (c, b, J, K), = x.terms
        in_C = not any(b) and not J
        hx = td.h(x)
        if in_C and td.p(td.i(x)) != x:
            fails["pi=id"] += 1
        if td.h(hx):
            fails["h^2=0"] += 1
        if in_C and td.h(td.i(x)):
            fails["hi=0"] += 1
        if td.p(hx):
            fails["ph=0"] += 1
        if td.i(td.p(x)) - x + td.d0(hx) + td.h(td.d0(x)):
            fails["ip=id-[d0,h]"] += 1
        y = x
        for _ in range(td.n + 1):
            y = td.h(td.d1(y))
        if y:
            fails["(h d1)^(n+1)=0"] += 1
    return {"passed": not any(fails.values()), "violations": fails}


# -- planar trees --

@dataclass(frozen=True)
class PlanarTree:
    """A leaf (children = None) or a vertex with ordered children, leftmost first."""

    children: tuple | None = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def arity(self) -> int:
        return 0 if self.children is None else len(self.children)

    def leaves(self) -> int:
        return 1 if self.is_leaf else sum(c.leaves() for c in self.children)

    def vertices(self) -> int:
        return 0 if self.is_leaf else 1 + sum(c.vertices() for c in self.children)

    def max_unary_chain(self) -> int:
        def walk(t, run):
            if t.is_leaf:
                return run
            r = run + 1 if t.arity == 1 else 0
            return max([r] + [walk(c, r) for c in t.children])
        return walk(self, 0)

    def __str__(self) -> str:
        if self.is_leaf:
            return "|"
        return "(" + " ".join(str(c) for c in self.children) + ")"


LEAF = PlanarTree()


def _comps(s: int, k: int):
    if k == 1:
        yield (s,)
        return
    for first in range(1, s - k + 2):
        for rest in _comps(s - first, k - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _trees(s: int, chain: int, N: int) -> tuple:
    """Trees with s leaves whose root sits at the end of a unary chain of length `chain` above."""
    out = []
    if s == 1:
        out.append(LEAF)
    if chain < N:
        for t in _trees(s, chain + 1, N):
            out.append(PlanarTree((t,)))
    for k in range(2, s + 1):
        for comp in _comps(s, k):
            for kids in _product([_trees(m, 0, N) for m in comp]):
                out.append(PlanarTree(tuple(kids)))
    return tuple(out)


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def enumerate_trees(s: int, N: int) -> list[PlanarTree]:
    """Semistable planar trees with s leaves and unary chains of length <= N, in canonical order."""
    if s < 1:
        raise ValueError("s >= 1")
    return list(_trees(s, 0, N))


def evaluate_tree(td: TransferData, tree: PlanarTree, inputs: list, root: bool = True,
                  memo: dict | None = None) -> SuperPolynomial:
    """Compose i on leaves, d1 / mu^2 on vertices, h on internal edges and p at the root."""
    if memo is None:
        memo = {}
    mk = (id(tree), tuple(id(x) for x in inputs), root)
    got = memo.get(mk)
    if got is not None:
        return got[1]
    if tree.is_leaf:
        (x,) = inputs
        out = td.i(x)
        out = td.p(out) if root else out
        memo[mk] = (tree, out)
        return out
    vals = []
    pos = 0
    out = None
    for child in tree.children:
        m = child.leaves()
        v = evaluate_tree(td, child, inputs[pos:pos + m], False, memo)
        if not v:
            out = SuperPolynomial(td.n)
            break
        vals.append(v)
        pos += m
    if out is None:
        if tree.arity == 1:
            out = td.ds(vals[0])
        elif tree.arity == 2:
            out = td.m2(vals[0], vals[1])
        else:
            out = SuperPolynomial(td.n)
        out = td.p(out) if root else td.hs(out)
    memo[mk] = (tree, out)  # keeps the tree alive so its id stays unique
    return out


def nu_by_trees(td: TransferData, masks: tuple, N: int | None = None) -> SuperPolynomial:
    """nu^s on dtheta-monomial inputs by summing over all trees (the bare edge excluded)."""
    N = td.n + 1 if N is None else N
    n = td.n
    zero = (0,) * n
    inputs = [SuperPolynomial(n, {(zero, zero, 0, K): Fraction(1)}) for K in masks]
    out = SuperPolynomial(n)
    memo: dict = {}
    for t in enumerate_trees(len(masks), N):
        if not t.is_leaf:
            out = out + evaluate_tree(td, t, inputs, True, memo)
    return out.truncate(td.policy)


# -- the recursive transfer --

class Transfer:
    """Memoized P^s (the maps G) and nu^s on tuples of dtheta-monomials.

    G^1 = sum_j (h_s d_s)^j i and G^m = sum_j (h_s d_s)^j h_s lambda_m with
    lambda_m = sum over splits of mu^2(G^hi, G^lo).  nu^m = p lambda_m for m >= 2:
    the extra term p d_s G^m vanishes since d1 raises the u-degree by >= 2.
    """

    def __init__(self, td: TransferData):
        self.td = td
        self.n = td.n
        self._G: dict = {}

    def _geometric(self, x: SuperPolynomial) -> SuperPolynomial:
        acc, cur = dict(x.terms), x
        while True:
            cur = self.td.hs(self.td.ds(cur))
            if not cur:
                return SuperPolynomial(self.n, acc)
            for key, v in cur.terms.items():
                acc[key] = acc.get(key, 0) + v

    def leaf(self, K: int) -> SuperPolynomial:
        zero = (0,) * self.n
        return SuperPolynomial(self.n, {(zero, zero, 0, K): Fraction(1)})

    def G(self, T: tuple) -> SuperPolynomial:
        got = self._G.get(T)
        if got is not None:
            return got
        td = self.td
        if len(T) == 1:
            out = self._geometric(td.i(self.leaf(T[0])))
        else:
            acc: dict = {}
            for k in range(1, len(T)):
                for key, v in td.m2(self.G(T[:k]), self.G(T[k:])).terms.items():
                    acc[key] = acc.get(key, 0) + v
            lam = SuperPolynomial(self.n, acc)
            out = self._geometric(td.hs(lam))
        self._G[T] = out
        return out

    def nu(self, T: tuple) -> SuperPolynomial:
        td = self.td
        if len(T) == 1:
            return td.p(td.ds(self.G(T)))
        out = SuperPolynomial(self.n)
        for k in range(1, len(T)):
            # p(x y) only sees the part of x with b = 0 and J empty, and of y with b = 0
            left = td.p(self.G(T[:k]))
            if not left:
                continue
            right = self.G(T[k:]).part(lambda key: not any(key[1]))
            if right:
                out = out + td.p(td.m2(left, right))
        return out


def _check_degree(w: SuperPolynomial) -> None:
    for (c, b, J, K) in w.terms:
        if J or K:
            raise ValueError("superpotential must be theta-free")
        if sum(b) < 3:
            raise DegreeTooLow(f"monomial of u-degree {sum(b)}")


def _allowed_tuples(n: int, a: int, s: int, N: int):
    """Input tuples that a degree-f(2) cochain can be nonzero on (graded superpotential)."""
    seen = set()
    for j in range(N + 1):
        for _c, _K0, m in grading.cochain_shapes(n, a, 2, s, j):
            key = tuple(m)
            if key in seen:
                continue
            seen.add(key)
            yield from grading.tuples_with_multiplicity(s, m)


def _w_is_graded(w: SuperPolynomial, n: int, a: int) -> bool:
    if n < 3:
        return False
    G = grading.G_na(n, 1)
    target = G.fdeg(2)
    return all(grading.monomial_degree(b, c, [], [], G, a) == target for (c, b, _, _) in w.terms)


@dataclass
class MinimalModel:
    nu: HochschildCochain
    transfer: Transfer
    I: "Inclusion"
    mf: MatrixFactorization

    def P(self, inputs: tuple) -> SuperPolynomial:
        return self.transfer.G(tuple(inputs))


def identification_sign(T: tuple, K0: int) -> int:
    """Sign of an entry under the algebra isomorphism C -> A, dtheta_j -> -theta_j."""
    return -1 if (sum(popcount(K) for K in T) + popcount(K0)) & 1 else 1


def _to_cochain_value(T: tuple, x: SuperPolynomial) -> dict:
    out = {}
    for (c, b, J, K), v in x.terms.items():
        if any(b) or J:
            raise ValueError("not an element of C")
        out[(c, K)] = v * identification_sign(T, K)
    return out


def minimal_model(w: SuperPolynomial, n: int, policy: TruncationPolicy | None = None, a: int | None = None,
                  wj=None, use_grading: bool = True) -> MinimalModel:
    """The transferred A-infinity structure nu on C with the morphisms I and P."""
    policy = policy or TruncationPolicy()
    a = n if a is None else a
    _check_degree(w)
    mf = build_O0(w, n, a, wj)
    td = TransferData.from_mf(mf, policy)
    tr = Transfer(td)
    graded = use_grading and _w_is_graded(w, n, a)
    table = {}
    for s in range(2, policy.max_length + 1):
        if graded:
            tuples = _allowed_tuples(n, a, s, policy.max_r_order)
        else:
            tuples = _all_tuples(n, s)
        for T in tuples:
            val = tr.nu(T).truncate(policy)
            if val:
                table[T] = _to_cochain_value(T, val)
    nu = HochschildCochain(n, table, policy, a)
    return MinimalModel(nu, tr, Inclusion(td), mf)


def _all_tuples(n: int, s: int):
    return _product([range(1 << n)] * s)


def closed_form_nu(w: SuperPolynomial, inputs, wj=None) -> SuperPolynomial:
    """Constant term of d_{i_k} ... d_{i_2} w_{i_1} over (k-1)!, inputs 0-based (i_1, ..., i_k)."""
    inputs = list(inputs)
    if len(inputs) < 2:
        raise ValueError("k >= 2")
    wj = euler_split(w) if wj is None else wj
    f = wj[inputs[0]]
    for j in inputs[1:]:
        f = f.diff_u(j)
    return f.part(lambda k: not any(k[1])).scale(Fraction(1, factorial(len(inputs) - 1)))


# -- the morphism I: B -> C --

class Inclusion:
    """I^s = p sum_j (delta H)^j on the bar construction (tensor trick).

    Tensors are dicts mapping tuples of B-monomial keys (leftmost first) to
    coefficients.  H = sum_k 1 x ... x h_s (slot k) x ip x ... x ip, and delta is
    the coderivation of d_s and mu^2; operations pass the factors to their right.
    """

    def __init__(self, td: TransferData):
        self.td = td
        self.n = td.n

    @staticmethod
    def _par(key) -> int:
        return (popcount(key[2]) + popcount(key[3]) + 1) & 1

    def _mono(self, key, v=Fraction(1)) -> SuperPolynomial:
        return SuperPolynomial(self.n, {key: v})

    def _H(self, tensor: dict) -> dict:
        td = self.td
        out: dict = {}
        for word, coef in tensor.items():
            m = len(word)
            for k in range(m):
                # slot k from the left; slots right of it get ip, slots left of it stay
                right = word[k + 1:]
                sign = -1 if sum(self._par(x) for x in right) & 1 else 1
                pieces = [[(x, Fraction(1))] for x in word[:k]]
                pieces.append(list(td.hs(self._mono(word[k])).terms.items()))
                for x in right:
                    pieces.append(list(td.i(td.p(self._mono(x))).terms.items()))
                _accumulate(out, pieces, coef * sign)
        return out

    def _delta(self, tensor: dict) -> dict:
        td = self.td
        out: dict = {}
        for word, coef in tensor.items():
            m = len(word)
            for k in range(m):
                right = word[k + 1:]
                sign = -1 if sum(self._par(x) for x in right) & 1 else 1
                img = td.ds(self._mono(word[k]))
                pieces = [[(x, Fraction(1))] for x in word[:k]] + [list(img.terms.items())] + \
                         [[(x, Fraction(1))] for x in right]
                _accumulate(out, pieces, coef * sign)
            for k in range(m - 1):
                right = word[k + 2:]
                sign = -1 if sum(self._par(x) for x in right) & 1 else 1
                img = td.m2(self._mono(word[k]), self._mono(word[k + 1]))
                pieces = [[(x, Fraction(1))] for x in word[:k]] + [list(img.terms.items())] + \
                         [[(x, Fraction(1))] for x in right]
                _accumulate(out, pieces, coef * sign)
        return out

    def __call__(self, keys: tuple) -> SuperPolynomial:
        """I^s(x_s, ..., x_1) on B-monomial keys."""
        td = self.td
        tensor = {tuple(keys): Fraction(1)}
        out = SuperPolynomial(self.n)
        while tensor:
            for word, coef in tensor.items():
                if len(word) == 1:
                    out = out + td.p(self._mono(word[0], coef))
            tensor = self._delta(self._H(tensor))
            if td.policy:
                tensor = {w: v for w, v in tensor.items()
                          if sum(sum(x[0]) for x in w) <= td.policy.max_r_order}
        return out


def _accumulate(out: dict, pieces: list, coef) -> None:
    def rec(i, word, c):
        if i == len(pieces):
            out[word] = out.get(word, 0) + c
            if not out[word]:
                del out[word]
            return
        for key, v in pieces[i]:
            rec(i + 1, word + (key,), c * v)
    if all(pieces):
        rec(0, (), coef)


def _nu_on(transfer: Transfer, args: list) -> SuperPolynomial:
    """nu^r (raw, C-valued) on C-polynomial arguments, extended R-multilinearly."""
    n = transfer.n
    out: dict = {}

    def rec(i, masks, c, coef):
        if i == len(args):
            for (c2, b, J, K), v in transfer.nu(tuple(masks)).terms.items():
                cc = tuple(x + y for x, y in zip(c, c2))
                key = (cc, b, J, K)
                out[key] = out.get(key, 0) + coef * v
            return
        for (c1, b1, J1, K1), v1 in args[i].terms.items():
            rec(i + 1, masks + [K1], tuple(x + y for x, y in zip(c, c1)), coef * v1)

    rec(0, [], (0,) * n, Fraction(1))
    return SuperPolynomial(n, out)


def _compositions_of(k: int):
    if k == 0:
        yield ()
        return
    for first in range(1, k + 1):
        for rest in _compositions_of(k - first):
            yield (first,) + rest


def morphism_residual(mm: MinimalModel, keys: tuple) -> SuperPolynomial:
    """(I o mu~ - nu <> I) on B-monomial inputs (leftmost first); zero when I is an A-infinity morphism."""
    td, tr, I = mm.transfer.td, mm.transfer, mm.I
    n = td.n
    k = len(keys)
    par = [Inclusion._par(x) for x in keys]
    lhs = SuperPolynomial(n)
    for j in (1, 2):
        for start in range(0, k - j + 1):
            block = keys[start:start + j]
            right = keys[start + j:]
            sign = -1 if sum(par[start + j:]) & 1 else 1
            monos = [SuperPolynomial(n, {x: Fraction(1)}) for x in block]
            if j == 1:
                img = td.m1(monos[0]) + td.ds(monos[0])
            else:
                img = td.m2(monos[0], monos[1])
            for key, v in img.terms.items():
                lhs = lhs + I(keys[:start] + (key,) + right).scale(v * sign)
    rhs = SuperPolynomial(n)
    for comp in _compositions_of(k):
        if len(comp) < 2:
            continue
        args, pos = [], 0
        for m in comp:
            args.append(I(keys[pos:pos + m]))
            pos += m
        if all(args):
            rhs = rhs + _nu_on(tr, args)
    return (lhs - rhs).truncate(td.policy)
