"""Sparse exact linear algebra: incremental echelon forms over Q and over F_p."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vec = dict  # row index -> coefficient


class Echelon:
    """Incremental column echelon form over Q with combination tracking.

    Each added vector is reduced against the stored pivots; the pivot of a
    stored vector is its smallest key.  When ``track`` is set, every stored
    vector remembers which input vectors it is made of.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[Hashable, tuple[Vec, Vec]] = {}
        self.track = track
        self.count = 0

    def reduce(self, v: Mapping, combo: Vec | None = None) -> tuple[Vec, Vec]:
        v = {k: Fraction(x) for k, x in v.items() if x}
        combo = dict(combo or {})
        while True:
            cand = [k for k in v if k in self.pivots]
            if not cand:
                return v, combo
            p = min(cand)
            f = v[p]
            pv, pc = self.pivots[p]
            for k, x in pv.items():
                y = v.get(k, 0) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            if self.track:
                for k, x in pc.items():
                    y = combo.get(k, 0) - f * x
                    if y:
                        combo[k] = y
                    else:
                        combo.pop(k, None)

    def add(self, v: Mapping, label: Hashable | None = None) -> Vec | None:
        """Insert v; return None if independent, else the dependency (label -> coef) with sum = 0."""
        idx = self.count if label is None else label
        self.count += 1
        r, combo = self.reduce(v, {idx: Fraction(1)} if self.track else None)
        if not r:
            return combo if self.track else {}
        p = min(r)
        f = r[p]
        r = {k: x / f for k, x in r.items()}
        combo = {k: x / f for k, x in combo.items()}
        self.pivots[p] = (r, combo)
        return None

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank_q(vectors: Iterable[Mapping]) -> int:
    E = Echelon()
    for v in vectors:
        E.add(v)
    return E.rank


def nullspace(vectors: list[Mapping]) -> list[Vec]:
    """Basis of {x : sum_i x_i v_i = 0}, as dicts index -> coefficient."""
    E = Echelon(track=True)
    out = []
    for i, v in enumerate(vectors):
        dep = E.add(v, i)
        if dep is not None:
            out.append(dep)
    return out


def solve(vectors: list[Mapping], rhs: Mapping) -> Vec | None:
    """A solution x of sum_i x_i v_i = rhs supported on pivot columns, or None."""
    E = Echelon(track=True)
    for i, v in enumerate(vectors):
        E.add(v, i)
    r, combo = E.reduce(rhs, {})
    if r:
        return None
    return {k: -x for k, x in combo.items()} if combo else {}


def in_span(E: Echelon, v: Mapping) -> bool:
    r, _ = E.reduce(v)
    return not r


class EchelonModP:
    """Incremental echelon form over F_p, for rank bounds on large pieces."""

    def __init__(self, p: int = 2305843009213693951):
        self.p = p
        self.pivots: dict[Hashable, dict] = {}

    def add(self, v: Mapping) -> bool:
        p = self.p
        w = {}
        for k, x in v.items():
            if isinstance(x, Fraction):
                x = x.numerator * pow(x.denominator, -1, p)
            x %= p
            if x:
                w[k] = x
        while w:
            cand = [k for k in w if k in self.pivots]
            if not cand:
                break
            piv = min(cand)
            f = w[piv]
            for k, x in self.pivots[piv].items():
                y = (w.get(k, 0) - f * x) % p
                if y:
                    w[k] = y
                else:
                    w.pop(k, None)
        if not w:
            return False
        piv = min(w)
        inv = pow(w[piv], -1, p)
        self.pivots[piv] = {k: x * inv % p for k, x in w.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)
