"""Graph data model: networks, signed difference graphs, edge-list I/O."""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .errors import (
    DimensionMismatchError,
    DirectednessMismatchError,
    DuplicateEdgeError,
    IndexRangeError,
    MalformedLineError,
    SelfLoopError,
)

__all__ = [
    "Network",
    "SignedNetwork",
    "DegreeStats",
    "load_edge_list",
    "dump_edge_list",
    "diff",
    "degree_stats",
]


def _frozen(a: np.ndarray, dtype) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=dtype)
    a.flags.writeable = False
    return a


def _sort_by_key(n: int, src: np.ndarray, dst: np.ndarray, *extra: np.ndarray):
    key = src * n + dst
    order = np.argsort(key, kind="stable")
    return (key[order], src[order], dst[order]) + tuple(e[order] for e in extra)


class _SparseGraph:
    """Shared plumbing for Network and SignedNetwork (sorted COO arrays)."""

    n: int
    directed: bool
    src: np.ndarray
    dst: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.src.size)

    @property
    def keys(self) -> np.ndarray:
        return self.src * self.n + self.dst

    def _values(self) -> np.ndarray:
        raise NotImplementedError

    def to_csr(self, dtype=np.int64) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self._values().astype(dtype), (self.src, self.dst)), shape=(self.n, self.n)
        )

    def to_dense(self, dtype=np.int64) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=dtype)
        out[self.src, self.dst] = self._values()
        return out


@dataclass(frozen=True, eq=False)
class Network(_SparseGraph):
    """Binary adjacency of one observed graph with zero diagonal.

    Edges are held as two sorted, read-only index arrays.  Undirected graphs
    carry both orientations of every edge so that all kernels can treat the
    adjacency as a full matrix.
    """

    n: int
    directed: bool
    src: np.ndarray
    dst: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n <= 0:
            raise IndexRangeError(f"node count must be positive, got {self.n}")
        src = np.asarray(self.src, dtype=np.int64).ravel()
        dst = np.asarray(self.dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise MalformedLineError("src and dst must have equal length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise IndexRangeError(f"edge index outside [0, {n})")
            loops = np.flatnonzero(src == dst)
            if loops.size:
                i = int(src[loops[0]])
                raise SelfLoopError(f"self-loop at node {i}")
        key, src, dst = _sort_by_key(n, src, dst)
        if key.size > 1:
            dup = np.flatnonzero(key[1:] == key[:-1])
            if dup.size:
                k = int(key[dup[0]])
                raise DuplicateEdgeError(f"duplicate edge ({k // n}, {k % n})")
        if not self.directed and key.size:
            rev = np.sort(dst * n + src)
            if not np.array_equal(rev, key):
                raise MalformedLineError("undirected network must have a symmetric edge set")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "directed", bool(self.directed))
        object.__setattr__(self, "src", _frozen(src, np.int64))
        object.__setattr__(self, "dst", _frozen(dst, np.int64))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], directed: bool) -> "Network":
        """Build from ordered pairs; undirected input may give either orientation.

        A pair repeated in the same orientation is a duplicate.  For undirected
        graphs ``(i, j)`` and ``(j, i)`` may both appear once and denote one edge.
        """
        arr = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(n, arr[:, 0], arr[:, 1], directed)

    @classmethod
    def from_arrays(cls, n: int, src, dst, directed: bool) -> "Network":
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if directed:
            return cls(n, True, src, dst)
        # check duplicates in the given orientation before symmetrizing
        if src.size:
            key = np.sort(src * n + dst)
            dup = np.flatnonzero(key[1:] == key[:-1])
            if dup.size:
                k = int(key[dup[0]])
                raise DuplicateEdgeError(f"duplicate edge ({k // n}, {k % n})")
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        und = np.unique(lo * n + hi) if src.size else np.zeros(0, np.int64)
        lo, hi = und // n, und % n
        return cls(n, False, np.concatenate([lo, hi]), np.concatenate([hi, lo]))

    @classmethod
    def from_dense(cls, adj, directed: bool) -> "Network":
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DimensionMismatchError("adjacency must be square")
        if not np.isin(adj, (0, 1)).all():
            raise MalformedLineError("adjacency entries must be 0 or 1")
        if not directed and not np.array_equal(adj, adj.T):
            raise MalformedLineError("undirected adjacency must be symmetric")
        src, dst = np.nonzero(adj)
        return cls(adj.shape[0], directed, src, dst)

    @classmethod
    def empty(cls, n: int, directed: bool) -> "Network":
        z = np.zeros(0, np.int64)
        return cls(n, directed, z, z)

    # -- views -----------------------------------------------------------

    def _values(self) -> np.ndarray:
        return np.ones(self.src.size, dtype=np.int64)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(zip(self.src.tolist(), self.dst.tolist()))

    def permute(self, perm) -> "Network":
        """Relabel node ``i`` as ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Network(self.n, self.directed, perm[self.src], perm[self.dst])

    def subgraph(self, m: int) -> "Network":
        """Induced subgraph on nodes ``0..m-1``."""
        keep = (self.src < m) & (self.dst < m)
        return Network(m, self.directed, self.src[keep], self.dst[keep])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.directed, self.keys.tobytes()))

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Network(n={self.n}, {kind}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class SignedNetwork(_SparseGraph):
    """Sparse matrix with entries in {-1, 0, +1} and zero diagonal."""

    n: int
    directed: bool
    src: np.ndarray
    dst: np.ndarray
    val: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        src = np.asarray(self.src, dtype=np.int64).ravel()
        dst = np.asarray(self.dst, dtype=np.int64).ravel()
        val = np.asarray(self.val, dtype=np.int64).ravel()
        if not (src.shape == dst.shape == val.shape):
            raise MalformedLineError("src, dst, val must have equal length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise IndexRangeError(f"entry index outside [0, {n})")
            if (src == dst).any():
                raise SelfLoopError("signed network must have zero diagonal")
            if not np.isin(val, (-1, 1)).all():
                raise MalformedLineError("stored entries must be -1 or +1")
        key, src, dst, val = _sort_by_key(n, src, dst, val)
        if key.size > 1 and (key[1:] == key[:-1]).any():
            raise DuplicateEdgeError("duplicate entry in signed network")
        if not self.directed and key.size:
            rkey = dst * n + src
            order = np.argsort(rkey)
            if not (np.array_equal(rkey[order], key) and np.array_equal(val[order], val)):
                raise MalformedLineError("undirected signed network must be symmetric")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "directed", bool(self.directed))
        object.__setattr__(self, "src", _frozen(src, np.int64))
        object.__setattr__(self, "dst", _frozen(dst, np.int64))
        object.__setattr__(self, "val", _frozen(val, np.int8))

    @classmethod
    def from_dense(cls, x, directed: bool | None = None) -> "SignedNetwork":
        x = np.asarray(x)
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise DimensionMismatchError("matrix must be square")
        if directed is None:
            directed = not np.array_equal(x, x.T)
        src, dst = np.nonzero(x)
        return cls(x.shape[0], directed, src, dst, x[src, dst])

    @classmethod
    def from_network(cls, g: Network) -> "SignedNetwork":
        return cls(g.n, g.directed, g.src, g.dst, np.ones(g.nnz, np.int64))

    def _values(self) -> np.ndarray:
        return self.val.astype(np.int64)

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(zip(zip(self.src.tolist(), self.dst.tolist()), self.val.tolist()))

    def __neg__(self) -> "SignedNetwork":
        return SignedNetwork(self.n, self.directed, self.src, self.dst, -self._values())

    def permute(self, perm) -> "SignedNetwork":
        perm = np.asarray(perm, dtype=np.int64)
        return SignedNetwork(self.n, self.directed, perm[self.src], perm[self.dst], self.val)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedNetwork):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.val, other.val)
        )

    __hash__ = None

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"SignedNetwork(n={self.n}, {kind}, nnz={self.nnz})"


@dataclass(frozen=True)
class DegreeStats:
    avg_degree: Fraction
    max_degree: int


def load_edge_list(
    text,
    n: int | None = None,
    directed: bool = False,
    one_based: bool = False,
) -> Network:
    """Parse whitespace-separated ``i j`` lines into a Network.

    ``text`` may be bytes, str or a binary/text file object.  Lines starting
    with ``#`` and blank lines are skipped.  When ``n`` is omitted it is
    inferred as one more than the largest index.
    """
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    src: list[int] = []
    dst: list[int] = []
    offset = 1 if one_based else 0
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            i, j = int(parts[0]) - offset, int(parts[1]) - offset
        except ValueError:
            raise MalformedLineError(f"line {lineno}: non-integer token in {line!r}") from None
        if i < 0 or j < 0:
            raise MalformedLineError(f"line {lineno}: negative node index in {line!r}")
        if i == j:
            raise SelfLoopError(f"line {lineno}: self-loop at node {i + offset}")
        if n is not None and (i >= n or j >= n):
            raise IndexRangeError(f"line {lineno}: index out of range for n={n}")
        src.append(i)
        dst.append(j)
    if n is None:
        n = 1 + max(max(src, default=-1), max(dst, default=-1))
        if n == 0:
            raise MalformedLineError("cannot infer node count from an empty edge list")
    return Network.from_arrays(n, src, dst, directed)


def dump_edge_list(g: Network, one_based: bool = False) -> str:
    """Serialize to edge-list text; undirected edges are written once as ``i < j``."""
    offset = 1 if one_based else 0
    kind = "directed" if g.directed else "undirected"
    lines = [f"# n={g.n} {kind}"]
    keep = np.ones(g.nnz, bool) if g.directed else g.src < g.dst
    for i, j in zip(g.src[keep].tolist(), g.dst[keep].tolist()):
        lines.append(f"{i + offset} {j + offset}")
    return "\n".join(lines) + "\n"


def diff(a: Network, b: Network) -> SignedNetwork:
    """The signed difference A - Ã, stored sparsely."""
    if a.n != b.n:
        raise DimensionMismatchError(f"node counts differ: {a.n} vs {b.n}")
    if a.directed != b.directed:
        raise DirectednessMismatchError("cannot compare a directed with an undirected network")
    ka, kb = a.keys, b.keys
    plus = np.setdiff1d(ka, kb, assume_unique=True)
    minus = np.setdiff1d(kb, ka, assume_unique=True)
    keys = np.concatenate([plus, minus])
    vals = np.concatenate([np.ones(plus.size, np.int64), -np.ones(minus.size, np.int64)])
    return SignedNetwork(a.n, a.directed, keys // a.n, keys % a.n, vals)


def degree_stats(g: Network) -> DegreeStats:
    """Average and maximum degree (out-degree for directed graphs)."""
    deg = np.bincount(g.src, minlength=g.n)
    return DegreeStats(Fraction(g.nnz, g.n), int(deg.max()) if g.n else 0)
