"""HKR map from Hochschild cochains to polyvector fields, and the type A test."""

from __future__ import annotations

from dataclasses import dataclass, field

from .hochschild import HochschildCochain, exterior_mu2, invariant_check
from .superalg import SuperPolynomial, TruncationPolicy, fermat, popcount


def phi(alpha: HochschildCochain, policy: TruncationPolicy | None = None) -> SuperPolynomial:
    """Evaluate alpha on the generic element u = sum_j u_j theta_j in every slot."""
    n = alpha.n
    out: dict = {}
    for T, val in alpha.table.items():
        if any(popcount(K) != 1 for K in T):
            continue
        b = [0] * n
        for K in T:
            b[K.bit_length() - 1] += 1
        b = tuple(b)
        for (c, K0), v in val.items():
            key = (c, b, K0, 0)
            out[key] = out.get(key, 0) + v
    res = SuperPolynomial(n, out)
    return res.truncate(policy) if policy else res


def deformation_class(mu: HochschildCochain) -> SuperPolynomial:
    """Phi of the order-1 part of mu."""
    return phi(mu.order_part(1))


@dataclass
class TypeAReport:
    passed: bool
    mu2_ok: bool
    sign: int
    hkr: SuperPolynomial
    discrepancy: SuperPolynomial
    equivariant: bool
    notes: list = field(default_factory=list)


def type_a_target(n: int) -> SuperPolynomial:
    return fermat(n)


def type_a_check(mu: HochschildCochain, n: int | None = None) -> TypeAReport:
    """Compare Phi(mu^{>=3}) with u_1...u_n + sum r_j u_j^n modulo r-order >= 2.

    ``sign`` is +1 or -1 when Phi matches the target up to that sign, else 0;
    only +1 counts as a pass.
    """
    n = mu.n if n is None else n
    mu2 = mu.restrict(lambda T, c, K0: len(T) == 2 and not any(c))
    mu2_ok = mu2 == exterior_mu2(n, mu.policy, mu.a)
    image = phi(mu.min_length(3)).part(lambda k: sum(k[0]) <= 1)
    target = type_a_target(n)
    disc = image - target
    sign = 1 if not disc else (-1 if not image + target else 0)
    return TypeAReport(mu2_ok and sign == 1, mu2_ok, sign, image, disc, invariant_check(mu))
