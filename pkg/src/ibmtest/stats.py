"""Exact order-2 and order-3 interlacing statistics and the standardized tests.

All kernels return exact Python integers.  Dense kernels run matrix products in
float64, which is exact here because every intermediate entry is an integer
bounded by n**2 < 2**53; reductions that could exceed int64 fall back to
arbitrary-precision integers.  A final result outside the signed 64-bit range
raises ``KernelOverflowError``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from statistics import NormalDist

import numpy as np
import scipy.sparse as sp

from .errors import (
    DegenerateDenominatorError,
    DirectednessMismatchError,
    InvalidInputError,
    KernelOverflowError,
    MalformedLineError,
)
from .graph import Network, SignedNetwork, diff

__all__ = [
    "TestReport",
    "q2",
    "q2_dense",
    "q2_sparse",
    "q3",
    "psi_test",
    "phi_test",
    "compare",
    "assemble_report",
    "normal_sf",
    "z_critical",
    "DENSE_MAX_N",
]

DENSE_MAX_N = 2048
_I64_MAX = 2**63 - 1
_SAFE = 2**62
_FLOAT_EXACT = 2**53


@dataclass(frozen=True)
class TestReport:
    n: int
    directed: bool
    order: int
    q_star: int
    q_a: int
    q_b: int
    statistic: float
    z_score: float
    p_value: float

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# -- input coercion -------------------------------------------------------


def _coerce(x) -> tuple[int, bool | None, sp.csr_matrix]:
    """Return (n, directed-or-None, int64 CSR) for any supported input."""
    if isinstance(x, (Network, SignedNetwork)):
        return x.n, x.directed, x.to_csr(np.int64)
    if sp.issparse(x):
        mat = sp.csr_matrix(x, dtype=np.int64)
    else:
        arr = np.asarray(x)
        if arr.ndim != 2:
            raise InvalidInputError("expected a square matrix")
        mat = sp.csr_matrix(arr.astype(np.int64))
    if mat.shape[0] != mat.shape[1]:
        raise InvalidInputError("expected a square matrix")
    mat.eliminate_zeros()
    if mat.nnz and not np.isin(mat.data, (-1, 1)).all():
        raise MalformedLineError("entries must lie in {-1, 0, +1}")
    if mat.diagonal().any():
        raise MalformedLineError("matrix must have zero diagonal")
    return mat.shape[0], None, mat


def _exact_sum(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    bound = int(np.abs(a).max()) * a.size
    if bound < _SAFE:
        return int(a.sum(dtype=np.int64))
    return sum(a.astype(object).ravel().tolist())


def _exact_dot(a: np.ndarray, b: np.ndarray) -> int:
    """sum(a * b) over integer arrays without silent overflow."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size == 0:
        return 0
    bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.size
    if bound < _SAFE:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return sum(x * y for x, y in zip(a.astype(object).tolist(), b.astype(object).tolist()))


def _checked(value: int) -> int:
    if not -_I64_MAX - 1 <= value <= _I64_MAX:
        raise KernelOverflowError(f"statistic {value} does not fit in 64 bits")
    return int(value)


def _to_int(a: np.ndarray) -> np.ndarray:
    return np.rint(a).astype(np.int64)


def _dense_float(mat: sp.csr_matrix, n: int) -> np.ndarray:
    if n * n >= _FLOAT_EXACT:
        raise KernelOverflowError(f"n={n} too large for exact dense products")
    return mat.toarray().astype(np.float64)


# -- order 2 --------------------------------------------------------------


def q2_dense(x) -> int:
    """q(X) = tr([XX']^2) - tr(XX' o XX') - tr(X'X o X'X) + 1'|X|1 via dense products."""
    n, _, mat = _coerce(x)
    if n == 0:
        return 0
    xf = _dense_float(mat, n)
    outer = _to_int(xf @ xf.T)  # XX', symmetric
    inner_diag = _to_int((xf * xf).sum(axis=0))  # diag(X'X) = column abs-sums
    outer_diag = np.diagonal(outer)
    # tr([XX']^2) = sum of squared entries of the symmetric matrix XX'
    value = (
        _exact_dot(outer, outer)
        - _exact_dot(outer_diag, outer_diag)
        - _exact_dot(inner_diag, inner_diag)
        + int(mat.nnz)
    )
    return _checked(value)


def q2_sparse(x) -> int:
    """Same value as :func:`q2_dense` via common out-neighbour tallies.

    For every ordered pair (i, j) with i != j, ``npos``/``nneg`` count the
    nodes k with X[i,k]*X[j,k] equal to +1/-1.  The pair contributes
    npos(npos-1) + nneg(nneg-1) - 2*npos*nneg.  Both tallies come out of sparse
    products of the positive and negative parts of X, so the cost is
    O(n * avg_degree * max_degree).
    """
    n, _, mat = _coerce(x)
    if mat.nnz == 0:
        return 0
    if n >= 2**31:
        raise KernelOverflowError("node count too large for packed tallies")
    pos = (mat > 0).astype(np.int64).tocsr()
    neg = (mat < 0).astype(np.int64).tocsr()
    same = pos @ pos.T
    cross = None
    if neg.nnz:
        same = same + neg @ neg.T
        cross = pos @ neg.T + neg @ pos.T
    # pack both tallies into one sparse matrix so their patterns align
    base = np.int64(2**31)
    packed = same * base
    if cross is not None:
        packed = packed + cross
    packed = packed.tocoo()
    off = packed.row != packed.col
    data = packed.data[off]
    npos = data // base
    nneg = data % base
    value = (
        _exact_dot(npos, npos - 1) + _exact_dot(nneg, nneg - 1) - 2 * _exact_dot(npos, nneg)
    )
    return _checked(value)


def q2(x, method: str = "auto") -> int:
    """Order-2 kernel; ``auto`` picks dense when n <= DENSE_MAX_N."""
    if method == "dense":
        return q2_dense(x)
    if method == "sparse":
        return q2_sparse(x)
    if method != "auto":
        raise InvalidInputError(f"unknown kernel method {method!r}")
    n = x.n if isinstance(x, (Network, SignedNetwork)) else np.shape(x)[0]
    return q2_dense(x) if n <= DENSE_MAX_N else q2_sparse(x)


# -- order 3 --------------------------------------------------------------


def _q3_terms_dense(mat: sp.csr_matrix, n: int) -> int:
    xf = _dense_float(mat, n)
    x2f = xf @ xf
    x3 = _to_int(x2f @ xf)
    x2 = _to_int(x2f)
    xi = mat.toarray()
    sq = xi * xi
    d2 = np.diagonal(x2)
    d4 = _to_int((x2f * x2f).sum(axis=1))  # (X^4)_ii for symmetric X
    row_b = sq.sum(axis=1)  # B 1 with B = X o X
    bb_diag = (sq * sq).sum(axis=1)  # ((X o X)^2)_ii for symmetric X
    return _q3_combine(
        tr6=_exact_dot(x3, x3),
        t24=_exact_dot(d2, d4),
        t222=_exact_dot(d2 * d2, d2),
        t333=_exact_dot(xi * sq, x3),
        bbb=_exact_dot(row_b, _to_int(sq.astype(np.float64) @ row_b.astype(np.float64))),
        tbb=_exact_dot(bb_diag, d2),
        s6=_exact_sum(sq * sq * sq),
    )


def _q3_terms_sparse(mat: sp.csr_matrix) -> int:
    x2 = (mat @ mat).tocsr()
    x3 = (x2 @ mat).tocsr()
    sq = mat.multiply(mat).tocsr()
    d2 = x2.diagonal()
    d4 = np.asarray(x2.multiply(x2).sum(axis=1)).ravel()
    row_b = np.asarray(sq.sum(axis=1)).ravel()
    bb_diag = np.asarray(sq.multiply(sq).sum(axis=1)).ravel()
    cube = mat.multiply(sq).tocsr()
    return _q3_combine(
        tr6=_exact_dot(x3.data, x3.data),
        t24=_exact_dot(d2, d4),
        t222=_exact_dot(d2 * d2, d2),
        t333=_exact_sum(cube.multiply(x3).tocsr().data),
        bbb=_exact_dot(row_b, sq @ row_b),
        tbb=_exact_dot(bb_diag, d2),
        s6=_exact_sum(sq.multiply(sq).multiply(sq).data),
    )


def _q3_combine(*, tr6, t24, t222, t333, bbb, tbb, s6) -> int:
    return tr6 - 6 * t24 + 4 * t222 + 6 * t333 + 3 * bbb - 12 * tbb + 4 * s6


def q3(x, method: str = "auto") -> int:
    """Order-3 interlacing sum of a symmetric matrix from its seven-term closed form."""
    n, directed, mat = _coerce(x)
    if directed or (mat != mat.T).nnz:
        raise DirectednessMismatchError("the order-3 statistic is defined for undirected input only")
    if mat.nnz == 0:
        return 0
    if method == "auto":
        method = "dense" if n <= DENSE_MAX_N else "sparse"
    if method == "dense":
        value = _q3_terms_dense(mat, n)
    elif method == "sparse":
        value = _q3_terms_sparse(mat)
    else:
        raise InvalidInputError(f"unknown kernel method {method!r}")
    return _checked(value)


# -- tests ----------------------------------------------------------------


def normal_sf(z: float) -> float:
    """Upper-tail probability P(N(0,1) >= z)."""
    z = float(z)
    if not math.isfinite(z):
        raise InvalidInputError(f"normal_sf needs a finite argument, got {z}")
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def z_critical(alpha: float) -> float:
    """The (1 - alpha) quantile of N(0,1)."""
    if not 0.0 < alpha < 1.0:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    return NormalDist().inv_cdf(1.0 - alpha)


def _check_pair(a: Network, b: Network) -> None:
    if a.n != b.n:
        diff(a, b)  # raises the mismatch error
    if a.directed != b.directed:
        diff(a, b)


def assemble_report(n: int, directed: bool, order: int, q_star: int, q_a: int, q_b: int) -> TestReport:
    """Standardize precomputed kernel values into a TestReport."""
    denom = q_a + q_b
    if denom <= 0:
        what = "interlacing quadrilateral" if order == 2 else "hexagonal interlacing configuration"
        raise DegenerateDenominatorError(f"q(A) + q(Ã) = {denom}: neither network contains an {what}")
    if order == 2:
        stat = q_star / (8.0 * math.sqrt(denom))
    else:
        stat = q_star / math.sqrt(384.0 * denom)
    z = math.sqrt(2.0) * stat if directed else stat
    return TestReport(n, directed, order, q_star, q_a, q_b, stat, z, normal_sf(z))


def psi_test(a: Network, b: Network, method: str = "auto") -> TestReport:
    """Order-2 test: psi = q(A - Ã) / (8 sqrt(q(A) + q(Ã))).

    The z-score is psi for undirected pairs and sqrt(2)*psi for directed pairs,
    whose null limit is N(0, 1/2).
    """
    star = diff(a, b)
    return assemble_report(a.n, a.directed, 2, q2(star, method), q2(a, method), q2(b, method))


def phi_test(a: Network, b: Network, method: str = "auto") -> TestReport:
    """Order-3 test for undirected pairs: phi = q3(A - Ã) / sqrt(384 (q3(A) + q3(Ã)))."""
    _check_pair(a, b)
    if a.directed:
        raise DirectednessMismatchError("the order-3 test supports undirected networks only")
    star = diff(a, b)
    return assemble_report(a.n, False, 3, q3(star, method), q3(a, method), q3(b, method))


def compare(a: Network, b: Network, order: int = 2, method: str = "auto") -> TestReport:
    if order == 2:
        return psi_test(a, b, method)
    if order == 3:
        return phi_test(a, b, method)
    raise InvalidInputError(f"order must be 2 or 3, got {order}")
