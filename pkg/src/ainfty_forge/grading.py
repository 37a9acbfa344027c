"""Finitely generated abelian groups, grading data and degree bookkeeping.

Groups are presented by integer relation matrices (relations as columns).
Element arithmetic reduces through cached Smith normal form witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

Matrix = list[list[int]]


class IllFormed(ValueError):
    """A pseudo-morphism or group homomorphism fails its defining identity."""


def _identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _matmul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(A))]


def _matvec(A: Matrix, x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    m = len(M)
    k = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    U = _identity(m)
    V = _identity(k)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, k)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, k):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, A, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, k):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, k) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return U, A, V


def determinant(M: Matrix) -> int:
    """Integer determinant by fraction-free elimination (Bareiss)."""
    n = len(M)
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for t in range(n - 1):
        if A[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if A[i][t]), None)
            if swap is None:
                return 0
            A[t], A[swap] = A[swap], A[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                A[i][j] = (A[i][j] * A[t][t] - A[i][t] * A[t][j]) // prev
        prev = A[t][t]
    return sign * A[n - 1][n - 1] if n else 1


class FgAbelianGroup:
    """Z^k modulo the column lattice of an integer k x m relation matrix."""

    __slots__ = ("k", "relations", "_U", "_diag")

    def __init__(self, k: int, relations: Iterable[Sequence[int]] = ()):
        cols = [tuple(int(x) for x in col) for col in relations]
        for col in cols:
            if len(col) != k:
                raise ValueError("relation length does not match generator count")
        self.k = k
        self.relations = tuple(cols)
        M = [[col[i] for col in cols] for i in range(k)]
        if cols and k:
            U, D, _ = smith_normal_form(M)
            diag = [D[i][i] for i in range(min(k, len(cols)))]
        else:
            U, diag = _identity(k), []
        self._U = tuple(tuple(row) for row in U)
        self._diag = tuple(d for d in diag if d)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self._diag if d > 1)

    @property
    def free_rank(self) -> int:
        return self.k - len(self._diag)

    def canonical(self, x: Sequence[int]) -> tuple[int, ...]:
        """Normal form of an element; equal iff the elements agree in the group."""
        y = _matvec(self._U, x)
        out = [y[i] % d for i, d in enumerate(self._diag) if d > 1]
        out.extend(y[len(self._diag):])
        return tuple(out)

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.canonical([a - b for a, b in zip(x, y)]) == (0,) * (len(self.torsion) + self.free_rank)

    def is_zero(self, x: Sequence[int]) -> bool:
        return self.equal(x, [0] * self.k)

    def __repr__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


ZZ = FgAbelianGroup(1)
Z2 = FgAbelianGroup(1, [(2,)])
ZERO = FgAbelianGroup(0)


@dataclass(frozen=True)
class GroupHom:
    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source, target, matrix, check: bool = True):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in matrix))
        if check:
            for rel in source.relations:
                if not target.is_zero(self(rel)):
                    raise IllFormed(f"relation {rel} is not sent to zero")

    def __call__(self, x: Sequence[int]) -> list[int]:
        if self.target.k == 0:
            return []
        return _matvec(self.matrix, x)

    def compose(self, other: GroupHom) -> GroupHom:
        """self after other."""
        cols = []
        for j in range(other.source.k):
            e = [int(i == j) for i in range(other.source.k)]
            cols.append(self(other(e)) if other.target.k else [0] * self.target.k)
        rows = [[cols[j][i] for j in range(other.source.k)] for i in range(self.target.k)]
        return GroupHom(other.source, self.target, rows, check=False)

    def equals(self, other: GroupHom) -> bool:
        for i in range(self.source.k):
            e = [int(i == j) for j in range(self.source.k)]
            if not self.target.equal(self(e), other(e)):
                return False
        return True


@dataclass(frozen=True, eq=False)
class GradingDatum:
    Y: FgAbelianGroup
    f: GroupHom
    sigma: GroupHom
    name: str = ""

    def __post_init__(self):
        if self.sigma(self.f([1]))[0] % 2 != 1:
            raise IllFormed("sign morphism must send f(1) to 1")

    def fdeg(self, k: int) -> YDegree:
        return YDegree(self, tuple(k * x for x in self.f([1])))

    def zero(self) -> YDegree:
        return YDegree(self, (0,) * self.Y.k)


@dataclass(frozen=True, eq=False)
class YDegree:
    ambient: GradingDatum
    vector: tuple[int, ...]

    def __add__(self, other: YDegree) -> YDegree:
        return YDegree(self.ambient, tuple(a + b for a, b in zip(self.vector, other.vector)))

    def __sub__(self, other: YDegree) -> YDegree:
        return YDegree(self.ambient, tuple(a - b for a, b in zip(self.vector, other.vector)))

    def __neg__(self) -> YDegree:
        return YDegree(self.ambient, tuple(-a for a in self.vector))

    def __eq__(self, other) -> bool:
        if not isinstance(other, YDegree):
            return NotImplemented
        return self.ambient.Y.equal(self.vector, other.vector)

    def __hash__(self):
        return hash(self.ambient.Y.canonical(self.vector))

    @property
    def sign(self) -> int:
        return self.ambient.sigma(self.vector)[0] % 2


@dataclass(frozen=True, eq=False)
class PseudoGradingDatum:
    Z_grp: FgAbelianGroup
    Y_grp: FgAbelianGroup
    f: GroupHom
    c: tuple[int, ...]

    def __post_init__(self):
        if any(x % 2 for x in self.c):
            raise IllFormed("c must take values in 2Z")


@dataclass(frozen=True, eq=False)
class PseudoMorphism:
    source: PseudoGradingDatum
    target: PseudoGradingDatum
    p_Z: GroupHom
    p_Y: GroupHom
    d: tuple[int, ...]

    def compose_after(self, first: PseudoMorphism) -> PseudoMorphism:
        """self o first, with d = d_first + p_Y(first)^* d_self."""
        d = tuple(
            a + sum(self.d[i] * first.p_Y.matrix[i][j] for i in range(len(self.d)))
            for j, a in enumerate(first.d)
        )
        return PseudoMorphism(
            first.source, self.target, self.p_Z.compose(first.p_Z), self.p_Y.compose(first.p_Y), d
        )


def realize(H: PseudoGradingDatum) -> GradingDatum:
    """Y' = (Z + Y)/<(c(-z), f(z))>, f(1) = (1, 0), sigma(j + y) = j mod 2."""
    k = 1 + H.Y_grp.k
    rels = [(0,) + tuple(rel) for rel in H.Y_grp.relations]
    for z in range(H.Z_grp.k):
        e = [int(i == z) for i in range(H.Z_grp.k)]
        rels.append((-H.c[z],) + tuple(H.f(e)))
    Y = FgAbelianGroup(k, rels)
    f = GroupHom(ZZ, Y, [[1]] + [[0]] * H.Y_grp.k)
    sigma = GroupHom(Y, Z2, [[1] + [0] * H.Y_grp.k])
    return GradingDatum(Y, f, sigma)


def realize_morphism(pm: PseudoMorphism, check: bool = True,
                     source: GradingDatum | None = None, target: GradingDatum | None = None) -> GroupHom:
    """(j + y) -> (j + d(y)) + p_Y(y)."""
    src, tgt = pm.source, pm.target
    if check:
        for z in range(src.Z_grp.k):
            e = [int(i == z) for i in range(src.Z_grp.k)]
            pz = pm.p_Z(e)
            lhs = src.c[z]
            rhs = sum(a * b for a, b in zip(tgt.c, pz)) + sum(a * b for a, b in zip(pm.d, src.f(e)))
            if lhs != rhs:
                raise IllFormed("c1 != p_Z^*(c2) + f1^*(d)")
            if not tgt.Y_grp.equal(tgt.f(pz), pm.p_Y(src.f(e))):
                raise IllFormed("p_Y o f1 != f2 o p_Z")
        if any(x % 2 for x in pm.d):
            raise IllFormed("d must take values in 2Z")
        for rel in src.Y_grp.relations:
            if sum(a * b for a, b in zip(pm.d, rel)):
                raise IllFormed("d does not vanish on relations")
    G1 = source or realize(src)
    G2 = target or realize(tgt)
    top = [1] + list(pm.d)
    rows = [top] + [[0] + list(pm.p_Y.matrix[i]) for i in range(tgt.Y_grp.k)]
    return GroupHom(G1.Y, G2.Y, rows, check=check)


# -- the named data --

def _hom(src: FgAbelianGroup, tgt: FgAbelianGroup, rows) -> GroupHom:
    return GroupHom(src, tgt, rows)


def H_zero() -> PseudoGradingDatum:
    return PseudoGradingDatum(ZERO, ZERO, GroupHom(ZERO, ZERO, []), ())


def H_na(n: int, a: int) -> PseudoGradingDatum:
    """Z -> Z^n, 1 -> y_[n], with c = 2(n - a)."""
    Yn = FgAbelianGroup(n)
    return PseudoGradingDatum(ZZ, Yn, _hom(ZZ, Yn, [[1]] * n), (2 * (n - a),))


def H_MF(n: int) -> PseudoGradingDatum:
    """Z -> Z, multiplication by n, with c = 2."""
    return PseudoGradingDatum(ZZ, ZZ, _hom(ZZ, ZZ, [[n]]), (2,))


def G_Z() -> GradingDatum:
    return realize(H_zero())


def G_na(n: int, a: int = 1) -> GradingDatum:
    G = realize(H_na(n, a))
    return GradingDatum(G.Y, G.f, G.sigma, name=f"G^{n}_{a}")


def G_MF(n: int) -> GradingDatum:
    return realize(H_MF(n))


def coker_f(G: GradingDatum) -> FgAbelianGroup:
    """X = Y / f(Z)."""
    return FgAbelianGroup(G.Y.k, list(G.Y.relations) + [tuple(G.f([1]))])


def G_sigma() -> GradingDatum:
    return GradingDatum(Z2, GroupHom(ZZ, Z2, [[1]]), GroupHom(Z2, Z2, [[1]]))


def square_morphisms(n: int, q2_d: Sequence[int] | None = None):
    """The four pseudo-morphisms q1, p1, q2, p2 of the grading square."""
    Hnn, Hn1, Hmf, H0 = H_na(n, n), H_na(n, 1), H_MF(n), H_zero()
    Zn = FgAbelianGroup(n)
    q1 = PseudoMorphism(Hnn, H0, GroupHom(ZZ, ZERO, []), GroupHom(Zn, ZERO, []), (0,) * n)
    p1 = PseudoMorphism(Hnn, Hn1, _hom(ZZ, ZZ, [[n]]),
                        _hom(Zn, Zn, [[n * int(i == j) for j in range(n)] for i in range(n)]),
                        (2 * (1 - n),) * n)
    d2 = tuple(q2_d) if q2_d is not None else (2,) * n
    q2 = PseudoMorphism(Hn1, Hmf, _hom(ZZ, ZZ, [[-1]]), _hom(Zn, ZZ, [[-1] * n]), d2)
    p2 = PseudoMorphism(H0, Hmf, GroupHom(ZERO, ZZ, [[]]), GroupHom(ZERO, ZZ, [[]]), ())
    return q1, p1, q2, p2


def check_square(n: int, q2_d: Sequence[int] | None = None) -> bool:
    """Test q2 o p1 = p2 o q1 as maps G^n_n -> G_MF(n), on generators modulo relations."""
    q1, p1, q2, p2 = square_morphisms(n, q2_d)
    strict = q2_d is None
    Gnn, Gn1, Gmf, Gz = realize(q1.source), realize(p1.target), realize(q2.target), realize(q1.target)
    R_q1 = realize_morphism(q1, source=Gnn, target=Gz)
    R_p1 = realize_morphism(p1, source=Gnn, target=Gn1)
    R_q2 = realize_morphism(q2, check=strict, source=Gn1, target=Gmf)
    R_p2 = realize_morphism(p2, source=Gz, target=Gmf)
    return R_q2.compose(R_p1).equals(R_p2.compose(R_q1))


# -- degrees of monomials in the polynomial/exterior world --

def monomial_degree(b: Sequence[int], c: Sequence[int], J: Iterable[int], K: Iterable[int],
                    datum: GradingDatum, a: int, dual_theta: bool = False) -> YDegree:
    """Degree of r^c u^b theta^J dtheta^K in a datum presented as (Z + Z^n)/relations.

    theta_j has degree (-1, y_j) (or (1, -y_j) when ``dual_theta``), dtheta_j the
    negation, r_j has (2 - 2a, a y_j) and u_j has (2, -y_j).  Indices are 0-based.
    """
    n = datum.Y.k - 1
    v = [0] * (n + 1)
    ts = 1 if dual_theta else -1

    def add(j, z, y):
        v[0] += z
        v[1 + j] += y

    for j, e in enumerate(b):
        add(j, 2 * e, -e)
    for j, e in enumerate(c):
        add(j, (2 - 2 * a) * e, a * e)
    for j in J:
        add(j, ts, -ts)
    for j in K:
        add(j, -ts, ts)
    return YDegree(datum, tuple(v))


def mask_list(mask: int) -> list[int]:
    return [j for j in range(mask.bit_length()) if mask >> j & 1]


@dataclass(frozen=True)
class GradingSolution:
    b: tuple[int, ...]
    c: tuple[int, ...]
    K: tuple[int, ...]
    q: int
    s: int
    t: int

    def check(self, n: int, a: int, total: int) -> bool:
        j = sum(self.c)
        yK = [int(k in self.K) for k in range(n)]
        eqs = [
            self.s == sum(self.b),
            self.s + self.t == total,
            all(yK[k] + a * self.c[k] - self.b[k] == self.q for k in range(n)),
            self.t == (n - 2) * self.q + (2 - a) * j,
            len(self.K) == self.s + self.t + 2 * (self.q - j),
            (n - 2) * len(self.K) == (n - 2) * self.s + n * self.t + 2 * (a - n) * j,
        ]
        return all(eqs)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def solve_gradings(n: int, a: int, j: int, total: int, max_b: int,
                   s_range: tuple[int, int] | None = None) -> list[GradingSolution]:
    """All generators r^c u^b theta^K of order j and total degree s + t, with |b| <= max_b."""
    out = []
    for s in range(max_b + 1):
        if s_range is not None and not (s_range[0] <= s <= s_range[1]):
            continue
        t = total - s
        for c in _compositions(j, n):
            for size in range(n + 1):
                for K in combinations(range(n), size):
                    num = size + a * j - s
                    if num % n:
                        continue
                    q = num // n
                    b = tuple(int(k in K) + a * c[k] - q for k in range(n))
                    if min(b) < 0:
                        continue
                    sol = GradingSolution(b, c, K, q, s, t)
                    if sol.check(n, a, total):
                        out.append(sol)
    out.sort(key=lambda g: (g.s, g.c, g.b, g.K))
    return out


def cochain_shapes(n: int, a: int, total: int, s: int, j: int):
    """Fine degrees of basis cochains r^c theta^{K0} <- (theta^{K_s}, ..., theta^{K_1}).

    Yields (c, K0, m) where m is the required multiplicity of each index among the
    inputs, for length-s cochains of total degree f(total) and r-order j in G^n_1.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    num = total - s - (2 - a) * j
    if num % (n - 2):
        return
    q = num // (n - 2)
    for c in _compositions(j, n):
        for K0 in range(1 << n):
            m = tuple(a * c[k] + (K0 >> k & 1) - q for k in range(n))
            if min(m) < 0 or max(m) > s:
                continue
            yield c, K0, m


def tuples_with_multiplicity(s: int, m: Sequence[int]):
    """All s-tuples of bitmasks in which index k occurs in exactly m[k] entries."""
    per = [list(combinations(range(s), mk)) for mk in m]
    for choice in product(*per):
        masks = [0] * s
        for k, positions in enumerate(choice):
            for p in positions:
                masks[p] |= 1 << k
        yield tuple(masks)
