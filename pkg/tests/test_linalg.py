from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ainfty_forge.linalg import Echelon, EchelonModP, in_span, nullspace, rank_q, solve

PROPS = settings(max_examples=200, derandomize=True, deadline=None)


def dense_rank(rows):
    """Plain Gauss-Jordan on a dense copy."""
    A = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    width = len(A[0]) if A else 0
    while rank < len(A) and col < width:
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            col += 1
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                f = A[i][col] / A[rank][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
        col += 1
    return rank


def as_sparse(row):
    return {k: x for k, x in enumerate(row) if x}


def test_rank_examples():
    assert rank_q([]) == 0
    assert rank_q([{0: 1}, {0: 2}]) == 1
    assert rank_q([{0: 1, 1: 1}, {0: 1, 1: -1}, {1: 3}]) == 2


def test_nullspace_example():
    vs = [{0: 1}, {1: 1}, {0: 2, 1: -3}]
    (dep,) = nullspace(vs)
    total = {}
    for i, c in dep.items():
        for k, x in vs[i].items():
            total[k] = total.get(k, 0) + c * x
    assert not any(total.values())


def test_solve_and_span():
    vs = [{0: 1, 1: 1}, {1: 2}]
    x = solve(vs, {0: 3, 1: 7})
    assert x == {0: Fraction(3), 1: Fraction(2)}
    assert solve([{0: 1}], {1: 1}) is None
    E = Echelon()
    for v in vs:
        E.add(v)
    assert in_span(E, {0: 5})
    assert not in_span(Echelon(), {0: 1})


rows = st.integers(1, 5).flatmap(
    lambda k: st.lists(st.lists(st.integers(-4, 4), min_size=k, max_size=k), min_size=0, max_size=6))


@PROPS
@given(rows)
def test_rank_matches_dense(M):
    r = rank_q([as_sparse(row) for row in M])
    assert r == (dense_rank(M) if M else 0)
    P = EchelonModP()
    for row in M:
        P.add(as_sparse(row))
    assert P.rank == r


@PROPS
@given(rows)
def test_nullspace_vectors_are_relations(M):
    vs = [as_sparse(row) for row in M]
    deps = nullspace(vs)
    assert len(deps) == len(vs) - rank_q(vs)
    for dep in deps:
        total = {}
        for i, c in dep.items():
            for k, x in vs[i].items():
                total[k] = total.get(k, 0) + c * x
        assert not any(total.values())
