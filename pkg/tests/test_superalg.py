from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ainfty_forge.superalg import (
    NoEvenPart,
    SuperPolynomial as SP,
    TruncationPolicy,
    contract_dW,
    d_dtheta,
    euler_split,
    fermat,
    from_terms,
    mul,
    power,
    serialize,
)

PROPS = settings(max_examples=200, derandomize=True, deadline=None)
N = 3


def th(j):
    return SP.theta(N, j)


def u(j):
    return SP.u(N, j)


def r(j):
    return SP.r(N, j)


def test_odd_square_vanishes():
    assert mul(th(0), th(0)) == SP(N)


def test_odd_transposition():
    assert mul(th(1), th(0)) == -mul(th(0), th(1))
    assert serialize(mul(th(1), th(0))) == "(-1)*t1*t2"


def test_even_variables_commute():
    assert mul(u(0) + r(0), u(0) - r(0)) == mul(u(0), u(0)) - mul(r(0), r(0))


def test_monomial_with_repeated_odd_is_zero():
    assert SP.monomial(N, J=[1, 1]) == SP(N)
    assert SP.monomial(N, J=[2, 0]) == -SP.monomial(N, J=[0, 2])


def test_d_dtheta_examples():
    t12 = mul(th(0), th(1))
    assert d_dtheta(0, t12) == th(1)
    assert d_dtheta(1, t12) == -th(0)
    assert d_dtheta(0, mul(u(0), u(1))) == SP(N)


def test_euler_split_examples():
    w = SP.monomial(N, b=[1, 1, 1])
    w1, w2, w3 = euler_split(w)
    assert w1 == SP.monomial(N, Fraction(1, 3), b=[0, 1, 1])
    assert w2 == SP.monomial(N, Fraction(1, 3), b=[1, 0, 1])
    assert w3 == SP.monomial(N, Fraction(1, 3), b=[1, 1, 0])
    w = SP.monomial(N, c=[1, 0, 0], b=[3, 0, 0])
    assert euler_split(w) == [SP.monomial(N, c=[1, 0, 0], b=[2, 0, 0]), SP(N), SP(N)]
    assert euler_split(SP(N)) == [SP(N)] * 3


def test_euler_split_rejects_constant():
    try:
        euler_split(SP.monomial(N, c=[1, 0, 0]))
    except NoEvenPart:
        pass
    else:
        raise AssertionError("pure r monomial accepted")


def test_contract_examples():
    W = SP.monomial(N, b=[1, 1, 1])
    assert contract_dW(W, th(0)) == SP.monomial(N, b=[0, 1, 1])
    assert contract_dW(W, SP.const(N)) == SP(N)
    assert contract_dW(mul(u(0), u(0)), mul(th(0), th(1))) == SP.monomial(N, 2, b=[1, 0, 0], J=[1])


def test_serialize_format():
    p = SP.monomial(N, Fraction(-3, 10), c=[1, 0, 0], b=[2, 0, 0], J=[0], K=[1])
    assert serialize(p) == "(-3/10)*r1*u1^2*t1*d2"
    assert serialize(SP(N)) == "0"
    q = fermat(3)
    assert serialize(q) == serialize(SP(3, dict(reversed(list(q.terms.items())))))


def test_truncation():
    P = TruncationPolicy(1, 3, 0)
    x = power(u(0) + r(0), 3, P)
    assert x.r_order() <= 1 and x.u_degree() <= 3
    assert x == SP.monomial(N, 3, c=[1, 0, 0], b=[2, 0, 0]) + SP.monomial(N, b=[3, 0, 0])


def test_fermat_and_from_terms():
    w = from_terms(3, [(1, (1, 1, 1), (0, 0, 0))] + [(1, tuple(3 * (i == j) for i in range(3)),
                                                        tuple(int(i == j) for i in range(3))) for j in range(3)])
    assert w == fermat(3)


coef = st.integers(-3, 3).filter(bool)
exps = st.lists(st.integers(0, 2), min_size=N, max_size=N)
mask = st.integers(0, (1 << N) - 1)


@st.composite
def superpoly(draw, odd=True, dtheta=True, min_b=0):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        b = tuple(draw(exps))
        if sum(b) < min_b:
            b = (b[0] + min_b,) + b[1:]
        key = (tuple(draw(exps)), b, draw(mask) if odd else 0, draw(mask) if dtheta else 0)
        terms[key] = Fraction(draw(coef))
    return SP(N, terms)



def _homogeneous(p, parity):
    return p.part(lambda k: (bin(k[2]).count("1") + bin(k[3]).count("1")) % 2 == parity)


@PROPS
@given(superpoly(), superpoly(), superpoly())
def test_mul_associative(p, q, s):
    assert mul(mul(p, q), s) == mul(p, mul(q, s))


@PROPS
@given(superpoly(), superpoly(), st.integers(0, 1), st.integers(0, 1))
def test_mul_supercommutative(p, q, a, b):
    p, q = _homogeneous(p, a), _homogeneous(q, b)
    sign = -1 if a * b else 1
    assert mul(p, q) == mul(q, p).scale(sign)


@PROPS
@given(superpoly(), superpoly(), st.integers(0, 1), st.integers(0, N - 1))
def test_d_dtheta_is_odd_derivation(p, q, a, j):
    p = _homogeneous(p, a)
    lhs = d_dtheta(j, mul(p, q))
    rhs = mul(d_dtheta(j, p), q) + mul(p, d_dtheta(j, q)).scale(-1 if a else 1)
    assert lhs == rhs


@PROPS
@given(superpoly(odd=False, dtheta=False, min_b=1))
def test_euler_split_reconstitutes(w):
    parts = euler_split(w)
    total = SP(N)
    for j, wj in enumerate(parts):
        total = total + mul(u(j), wj)
    assert total == w


@PROPS
@given(superpoly(odd=False, dtheta=False), superpoly(dtheta=False))
def test_contraction_squares_to_zero(W, eta):
    assert contract_dW(W, contract_dW(W, eta)) == SP(N)
