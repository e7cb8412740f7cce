"""Brute-force tuple enumeration of the interlacing sums.

These functions are deliberately naive: they loop over index tuples exactly as
the sums are written and serve as ground truth for the fast kernels.  Every
count uses the ordered-tuple convention, so one undirected cycle of length L
contributes 2L tuples (L rotations times 2 directions).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import InvalidInputError, MalformedLineError
from .graph import Network, SignedNetwork

MAX_ORACLE_N = 12


@dataclass(frozen=True)
class OracleCounts:
    total: int
    abs_total: int
    balanced: int
    unbalanced: int


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, (Network, SignedNetwork)):
        mat = x.to_dense()
    else:
        mat = np.asarray(x, dtype=np.int64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidInputError("matrix must be square")
    if mat.shape[0] > MAX_ORACLE_N:
        raise InvalidInputError(f"oracle enumeration limited to n <= {MAX_ORACLE_N}, got {mat.shape[0]}")
    if np.any(np.diag(mat) != 0):
        raise MalformedLineError("oracle input must have zero diagonal")
    return mat


def brute_u(x, m: int) -> int:
    """Order-m interlacing sum over tuples with distinct odd and distinct even indices.

    With odd-position indices ``o_1..o_m`` and even-position indices
    ``e_1..e_m`` the summand is ``prod_t X[o_t, e_t] * X[o_{t+1}, e_t]``
    (indices of ``o`` taken cyclically).
    """
    if m not in (2, 3):
        raise InvalidInputError(f"order must be 2 or 3, got {m}")
    mat = _as_matrix(x)
    n = mat.shape[0]
    rows = mat.tolist()
    total = 0
    for odd in permutations(range(n), m):
        for even in permutations(range(n), m):
            prod = 1
            for t in range(m):
                e = even[t]
                prod *= rows[odd[t]][e] * rows[odd[(t + 1) % m]][e]
                if prod == 0:
                    break
            total += prod
    return total


def brute_c(g: Network, m: int) -> int:
    """The interlacing cycle count of an unsigned network."""
    return brute_u(g, m)


def cycle_balance_counts(x, m: int) -> OracleCounts:
    """Count ordered closed walks on m distinct nodes, split by sign of the edge product."""
    if m < 3:
        raise InvalidInputError(f"cycle length must be at least 3, got {m}")
    mat = _as_matrix(x)
    if not np.array_equal(mat, mat.T):
        raise InvalidInputError("cycle_balance_counts requires a symmetric matrix")
    rows = mat.tolist()
    pos = neg = 0
    for walk in permutations(range(mat.shape[0]), m):
        prod = 1
        for t in range(m):
            prod *= rows[walk[t]][walk[(t + 1) % m]]
            if prod == 0:
                break
        if prod > 0:
            pos += 1
        elif prod < 0:
            neg += 1
    return OracleCounts(total=pos - neg, abs_total=pos + neg, balanced=pos, unbalanced=neg)
