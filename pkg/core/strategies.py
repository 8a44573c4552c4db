"""Hypothesis strategies shared by the test suites."""

import numpy as np
from hypothesis import strategies as st

from .structures import Tournament


@st.composite
def tournaments(draw, min_n: int = 1, max_n: int = 10) -> Tournament:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = n * (n - 1) // 2
    bits = draw(st.lists(st.booleans(), min_size=pairs, max_size=pairs))
    matrix = np.zeros((n, n), dtype=bool)
    rows, cols = np.triu_indices(n, k=1)
    forward = np.array(bits, dtype=bool)
    matrix[rows[forward], cols[forward]] = True
    matrix[cols[~forward], rows[~forward]] = True
    return Tournament(matrix)


@st.composite
def vertex_subsets(draw, n: int, min_size: int = 0) -> int:
    chosen = draw(st.sets(st.integers(min_value=0, max_value=n - 1), min_size=min_size, max_size=n))
    return sum(1 << v for v in chosen)
