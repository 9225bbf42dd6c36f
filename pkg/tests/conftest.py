from itertools import combinations, product

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from schubtan.exactlinalg import Field, Q, Subspace

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_PRIMES = (2, 3, 5, 7, 1009)
fields = st.one_of(st.just(Q), st.sampled_from(SMALL_PRIMES).map(Field))


@st.composite
def matrices(draw, fld=None, max_rows=5, max_cols=5):
    """``(field, rows, ncols)`` with small entries, biased toward rank deficiency."""
    fld = fld or draw(fields)
    n = draw(st.integers(0, max_rows))
    m = draw(st.integers(1, max_cols))
    entry = st.integers(-3, 3) if fld.p is None else st.integers(0, fld.p - 1)
    rows = [[fld(x) for x in draw(st.lists(entry, min_size=m, max_size=m))] for _ in range(n)]
    # repeat a combination of earlier rows now and then
    if n >= 2 and draw(st.booleans()):
        c = fld(draw(st.integers(1, 3)))
        rows[-1] = [fld(x + c * y) for x, y in zip(rows[0], rows[1])]
    return fld, rows, m


def grassmannian_points(fld, d, k):
    """Every k-dimensional subspace of F_p^d, one reduced echelon matrix per point."""
    for piv in combinations(range(d), k):
        free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, d) if c not in piv]
        for vals in product(range(fld.p), repeat=len(free)):
            rows = [[0] * d for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            yield Subspace(fld, d, tuple(tuple(r) for r in rows))
