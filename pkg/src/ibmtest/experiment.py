"""Monte Carlo verification harness and pairwise scanning of network sequences."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .dcmm import build_omega, calibrate_b, case_is_directed, make_case, sample_network, snr
from .errors import DegenerateDenominatorError, DimensionMismatchError, DirectednessMismatchError, InvalidInputError
from .graph import Network, diff, load_edge_list
from .stats import assemble_report, compare, normal_sf, q2, q3

__all__ = [
    "ExperimentSpec",
    "McSummary",
    "ScanResult",
    "run_monte_carlo",
    "scan_pairwise",
    "export",
    "load_manifest",
    "load_edge_lists",
    "HIST_BINS",
]

HIST_BINS = 41
_NULL_VAR_FACTOR = {(2, False): 128, (2, True): 64, (3, False): 768}


@dataclass(frozen=True)
class ExperimentSpec:
    case_id: int
    n: int
    k: int
    beta: float
    replicates: int
    b: float | None = None
    target_snr: float | None = None
    alpha: float = 0.05
    order: int = 2
    seed: int = 0

    def __post_init__(self):
        case_is_directed(self.case_id)
        if (self.b is None) == (self.target_snr is None):
            raise InvalidInputError("set exactly one of b and target_snr")
        if int(self.replicates) < 1:
            raise InvalidInputError("replicates must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.order not in (2, 3):
            raise InvalidInputError(f"order must be 2 or 3, got {self.order}")
        if self.order == 3 and self.directed:
            raise DirectednessMismatchError("the order-3 test supports undirected cases only")

    @property
    def directed(self) -> bool:
        return case_is_directed(self.case_id)


@dataclass(frozen=True)
class McSummary:
    replicates: int
    b: float
    snr_theoretical: float
    null_mean: float | None
    null_sd: float | None
    alt_mean: float | None
    alt_sd: float | None
    type1: float | None
    power: float | None
    var_ratio: float | None
    null_degenerate: int
    alt_degenerate: int
    histogram: dict

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "McSummary":
        return cls(**d)


@dataclass(frozen=True, eq=False)
class ScanResult:
    t: int
    stats: np.ndarray
    pvalues: np.ndarray

    def cells(self):
        """(i, j, statistic, p_value) for i <= j; missing values are None."""
        for i in range(self.t):
            for j in range(i, self.t):
                s, p = self.stats[i, j], self.pvalues[i, j]
                yield i, j, None if np.isnan(s) else float(s), None if np.isnan(p) else float(p)

    def to_dict(self) -> dict:
        def rows(m):
            return [[None if (c < r or np.isnan(m[r, c])) else float(m[r, c]) for c in range(self.t)]
                    for r in range(self.t)]

        return {"t": self.t, "stats": rows(self.stats), "pvalues": rows(self.pvalues)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScanResult):
            return NotImplemented
        return (self.t == other.t and np.array_equal(self.stats, other.stats, equal_nan=True)
                and np.array_equal(self.pvalues, other.pvalues, equal_nan=True))


# -- Monte Carlo ----------------------------------------------------------------

# per-process state so the Bernoulli matrices are shipped to each worker once
_STATE: dict = {}


def _init_worker(omega, omega_t, directed, order, seed):
    _STATE.update(omega=omega, omega_t=omega_t, directed=directed, order=order, seed=seed)


def _replicate(r: int):
    """One replicate: null pair (A, A2) from Omega, alternative pair (A, Ã)."""
    st = _STATE
    kernel = q2 if st["order"] == 2 else q3
    a = sample_network(st["omega"], st["directed"], st["seed"], ("replicate", r, 0))
    a2 = sample_network(st["omega"], st["directed"], st["seed"], ("replicate", r, 1))
    at = sample_network(st["omega_t"], st["directed"], st["seed"], ("replicate", r, 2))
    q_a, q_a2, q_at = kernel(a), kernel(a2), kernel(at)
    out = []
    for other, q_other in ((a2, q_a2), (at, q_at)):
        q_star = kernel(diff(a, other))
        try:
            z = assemble_report(a.n, st["directed"], st["order"], q_star, q_a, q_other).z_score
        except DegenerateDenominatorError:
            z = None
        out.append((z, q_star, q_a + q_other))
    return out


def _moments(values: list[float]) -> tuple[float | None, float | None]:
    m = len(values)
    if m == 0:
        return None, None
    mean = math.fsum(values) / m
    if m < 2:
        return mean, None
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (m - 1))


def _exact_variance(values: list[int]) -> float | None:
    m = len(values)
    if m < 2:
        return None
    s1, s2 = sum(values), sum(v * v for v in values)
    return float(Fraction(m * s2 - s1 * s1, m * (m - 1)))


def _histogram(values: list[float], edges: np.ndarray) -> list[int]:
    if not values:
        return [0] * (len(edges) - 1)
    idx = np.searchsorted(edges, np.asarray(values), side="right") - 1
    idx = np.clip(idx, 0, len(edges) - 2)  # out-of-range values go to the end bins
    return np.bincount(idx, minlength=len(edges) - 1).tolist()


def run_monte_carlo(spec: ExperimentSpec, workers: int = 1) -> McSummary:
    """Simulate null and alternative replicates for one case and summarize them.

    Replicate ``r`` draws ``A`` and ``A2`` from Omega and ``Ã`` from Omega-tilde
    on its own random streams, and forms the null pair ``(A, A2)`` and the
    alternative pair ``(A, Ã)``.  Output does not depend on ``workers``.
    """
    if workers < 1:
        raise InvalidInputError("workers must be at least 1")
    directed = spec.directed
    b = spec.b if spec.b is not None else calibrate_b(
        spec.case_id, spec.n, spec.k, spec.beta, spec.target_snr, spec.seed)
    model, model_t = make_case(spec.case_id, spec.n, spec.k, spec.beta, b, spec.seed)
    omega, omega_t = build_omega(model), build_omega(model_t)
    snr_value = snr(omega, omega_t, directed).snr
    state = (omega, omega_t, directed, spec.order, spec.seed)
    reps = range(spec.replicates)
    if workers == 1:
        _init_worker(*state)
        results = [_replicate(r) for r in reps]
    else:
        chunk = max(1, spec.replicates // (4 * workers))
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=state) as pool:
            results = list(pool.map(_replicate, reps, chunksize=chunk))

    null = [res[0] for res in results]
    alt = [res[1] for res in results]
    null_z = [z for z, _, _ in null if z is not None]
    alt_z = [z for z, _, _ in alt if z is not None]
    null_mean, null_sd = _moments(null_z)
    alt_mean, alt_sd = _moments(alt_z)

    def rate(zs):
        if not zs:
            return None
        return sum(normal_sf(z) < spec.alpha for z in zs) / len(zs)

    var_q = _exact_variance([q for z, q, _ in null if z is not None])
    denom_sum = [c for z, _, c in null if z is not None]
    var_ratio = None
    if var_q is not None and denom_sum:
        mean_c = Fraction(sum(denom_sum), 2 * len(denom_sum))  # average of C and C-tilde
        if mean_c > 0:
            var_ratio = var_q / (_NULL_VAR_FACTOR[(spec.order, directed)] * float(mean_c))

    hi = max(5.0, snr_value + 4.0)
    edges = np.linspace(-5.0, hi, HIST_BINS + 1)
    histogram = {
        "edges": [float(e) for e in edges],
        "null": _histogram(null_z, edges),
        "alt": _histogram(alt_z, edges),
    }
    return McSummary(
        replicates=spec.replicates,
        b=float(b),
        snr_theoretical=float(snr_value),
        null_mean=null_mean,
        null_sd=null_sd,
        alt_mean=alt_mean,
        alt_sd=alt_sd,
        type1=rate(null_z),
        power=rate(alt_z),
        var_ratio=var_ratio,
        null_degenerate=len(null) - len(null_z),
        alt_degenerate=len(alt) - len(alt_z),
        histogram=histogram,
    )


# -- scanning -------------------------------------------------------------------


def scan_pairwise(graphs: Sequence[Network], order: int = 2) -> ScanResult:
    """Compare every pair (i, j), i <= j, of a network sequence.

    Self-comparisons get statistic 0 and p-value 0.5; pairs with a degenerate
    denominator are left as NaN.  The lower triangle is NaN.
    """
    graphs = list(graphs)
    if len(graphs) < 2:
        raise InvalidInputError("scan needs at least two networks")
    first = graphs[0]
    for g in graphs[1:]:
        if g.n != first.n:
            raise DimensionMismatchError(f"networks have different sizes: {first.n} vs {g.n}")
        if g.directed != first.directed:
            raise DirectednessMismatchError("networks mix directed and undirected")
    t = len(graphs)
    stats = np.full((t, t), np.nan)
    pvalues = np.full((t, t), np.nan)
    for i in range(t):
        stats[i, i], pvalues[i, i] = 0.0, 0.5
        for j in range(i + 1, t):
            try:
                rep = compare(graphs[i], graphs[j], order)
            except DegenerateDenominatorError:
                continue
            stats[i, j], pvalues[i, j] = rep.z_score, rep.p_value
    return ScanResult(t, stats, pvalues)


def load_edge_lists(texts: Sequence[bytes], directed: bool = False, n: int | None = None) -> list[Network]:
    """Parse several edge lists onto a common node set.

    The node count is ``n`` if given, otherwise one more than the largest
    index appearing in any of the lists.
    """
    if n is None:
        sizes = [load_edge_list(t, directed=directed).n for t in texts if _has_edges(t)]
        if not sizes:
            raise InvalidInputError("all edge lists are empty; node count unknown")
        n = max(sizes)
    return [load_edge_list(t, n=n, directed=directed) for t in texts]


def read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None


def load_manifest(path, directed: bool = False, n: int | None = None) -> list[Network]:
    """Load the edge lists named one per line in ``path``, in order.

    Relative names resolve against the manifest's folder; ``#`` lines and
    blank lines are skipped.
    """
    path = Path(path)
    lines = [line.strip() for line in read_bytes(path).decode("utf-8").splitlines()]
    files = [path.parent / e for e in lines if e and not e.startswith("#")]
    return load_edge_lists([read_bytes(f) for f in files], directed, n)


def _has_edges(text: bytes) -> bool:
    return any(line.strip() and not line.lstrip().startswith(b"#") for line in text.splitlines())


# -- export -----------------------------------------------------------------------


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


def export(result: McSummary | ScanResult, fmt: str = "json") -> bytes:
    """Serialize a summary or scan as JSON, or a scan as CSV rows ``i,j,statistic,p_value``."""
    if fmt == "json":
        return (json.dumps(result.to_dict(), sort_keys=True, allow_nan=False) + "\n").encode()
    if fmt == "csv":
        if not isinstance(result, ScanResult):
            raise InvalidInputError("CSV export is defined for scan results only")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "statistic", "p_value"])
        for i, j, s, p in result.cells():
            w.writerow([i, j, _fmt(s), _fmt(p)])
        return buf.getvalue().encode()
    raise InvalidInputError(f"unknown export format {fmt!r}")
