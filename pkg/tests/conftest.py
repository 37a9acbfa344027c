import pytest
from hypothesis import strategies as st

from ainfty_forge import hochschild as H
from ainfty_forge.hpl import minimal_model
from ainfty_forge.superalg import TruncationPolicy, fermat

SMALL = TruncationPolicy(2, 6, 4)


@pytest.fixture(scope="session")
def model3():
    """Minimal model of the n=3 Fermat superpotential up to length 4."""
    return minimal_model(fermat(3), 3, SMALL)


@pytest.fixture(scope="session")
def model4():
    return minimal_model(fermat(4), 4, TruncationPolicy(1, 8, 4))


@st.composite
def cochains(draw, n=2, lengths=(1, 2, 3), size=4, parity=None, policy=SMALL):
    entries = []
    for _ in range(draw(st.integers(1, size))):
        s = draw(st.sampled_from(lengths))
        T = tuple(draw(st.integers(0, (1 << n) - 1)) for _ in range(s))
        c = tuple(draw(st.sampled_from([0, 0, 1])) for _ in range(n))
        entries.append((T, c, draw(st.integers(0, (1 << n) - 1)), draw(st.integers(-3, 3))))
    x = H.HochschildCochain.from_entries(n, entries, policy)
    if parity is not None:
        x = x.restrict(lambda T, c, K0: x.entry_sign(T, K0) == parity)
    return x


@st.composite
def diffeos(draw, n=2, policy=SMALL):
    """Identity plus higher-length terms and r-dependent linear terms, all of the parity of id."""
    ident = H.identity_cochain(n, policy)
    hi = draw(cochains(n, lengths=(2, 3), size=3, policy=policy))
    lin = draw(cochains(n, lengths=(1,), size=2, policy=policy)).restrict(lambda T, c, K0: any(c))
    F = ident + hi + lin
    return F.restrict(lambda T, c, K0: F.entry_sign(T, K0) == 1)
