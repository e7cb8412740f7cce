"""DCMM and directed-DCMM models: construction, sampling, SNR, reparametrization.

Undirected models have Bernoulli matrix ``Omega = Theta Pi P Pi' Theta``;
directed ones ``Omega = Theta Pi P Gamma' Z``, with separate citer (theta, Pi)
and citee (zeta, Gamma) parameters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidInputError, InvalidModelError
from .graph import Network
from .rng import generator

__all__ = [
    "DcmmParams",
    "BernoulliMatrix",
    "SnrReport",
    "LeastFavorableSpec",
    "Calibration",
    "build_omega",
    "sample_network",
    "sample_dirichlet",
    "make_case",
    "shifted_block_pair",
    "snr",
    "snr_from_params",
    "calibrate",
    "calibrate_b",
    "solve_snr",
    "sinkhorn_normalize",
    "least_favorable",
    "case_is_directed",
]

_ROW_TOL = 1e-12


def _vec(a) -> np.ndarray:
    return np.asarray(a, dtype=np.float64).ravel()


def _mat(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    return a.reshape(1, 1) if a.ndim == 0 else a


def _check_membership(name: str, m: np.ndarray, n: int, k: int) -> None:
    if m.shape != (n, k):
        raise InvalidModelError(f"{name} must have shape ({n}, {k}), got {m.shape}")
    if (m < 0).any():
        raise InvalidModelError(f"{name} has negative entries")
    if np.abs(m.sum(axis=1) - 1.0).max(initial=0.0) > _ROW_TOL:
        raise InvalidModelError(f"rows of {name} must sum to 1")


@dataclass(frozen=True, eq=False)
class DcmmParams:
    n: int
    k: int
    directed: bool
    theta: np.ndarray
    pi: np.ndarray
    p: np.ndarray
    zeta: np.ndarray | None = None
    gamma: np.ndarray | None = None

    def __post_init__(self):
        n, k = int(self.n), int(self.k)
        theta, pi, p = _vec(self.theta), _mat(self.pi), _mat(self.p)
        if theta.shape != (n,) or not (theta > 0).all():
            raise InvalidModelError("theta must be a positive length-n vector")
        _check_membership("pi", pi, n, k)
        if p.shape != (k, k) or (p < 0).any():
            raise InvalidModelError("P must be a nonnegative K x K matrix")
        zeta = gamma = None
        if self.directed:
            if self.zeta is None or self.gamma is None:
                raise InvalidModelError("directed models need zeta and gamma")
            zeta, gamma = _vec(self.zeta), _mat(self.gamma)
            if zeta.shape != (n,) or not (zeta > 0).all():
                raise InvalidModelError("zeta must be a positive length-n vector")
            _check_membership("gamma", gamma, n, k)
        else:
            if self.zeta is not None or self.gamma is not None:
                raise InvalidModelError("undirected models take no zeta/gamma")
            if not np.allclose(p, p.T, rtol=0.0, atol=1e-14):
                raise InvalidModelError("undirected models need a symmetric P")
        for name, val in (("n", n), ("k", k), ("directed", bool(self.directed)),
                          ("theta", theta), ("pi", pi), ("p", p), ("zeta", zeta), ("gamma", gamma)):
            if isinstance(val, np.ndarray):
                val.flags.writeable = False
            object.__setattr__(self, name, val)

    @property
    def left(self) -> np.ndarray:
        """Theta Pi."""
        return self.theta[:, None] * self.pi

    @property
    def right(self) -> np.ndarray:
        """Z Gamma (Theta Pi for undirected models)."""
        if self.directed:
            return self.zeta[:, None] * self.gamma
        return self.left

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "directed": self.directed,
            "theta": self.theta.tolist(),
            "pi": self.pi.tolist(),
            "p": self.p.tolist(),
            "zeta": None if self.zeta is None else self.zeta.tolist(),
            "gamma": None if self.gamma is None else self.gamma.tolist(),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DcmmParams":
        return cls(**d)


@dataclass(frozen=True, eq=False)
class BernoulliMatrix:
    n: int
    omega: np.ndarray
    directed: bool = False

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=np.float64)
        if om.shape != (self.n, self.n):
            raise InvalidModelError(f"omega must be {self.n} x {self.n}")
        if not np.isfinite(om).all() or (om < 0).any():
            raise InvalidModelError("omega entries must be finite and nonnegative")
        if (om >= 1).any():
            i, j = np.argwhere(om >= 1)[0]
            raise InvalidModelError(f"omega[{i}, {j}] = {om[i, j]:.6g} is not a probability below 1")
        if not self.directed and not np.allclose(om, om.T, rtol=1e-12, atol=0.0):
            raise InvalidModelError("undirected omega must be symmetric")
        om.flags.writeable = False
        object.__setattr__(self, "omega", om)


@dataclass(frozen=True)
class SnrReport:
    trace_delta: float
    trace_delta_4: float
    trace_omega_4: float
    trace_omegatilde_4: float
    snr: float
    phase_ratio: float


@dataclass(frozen=True, eq=False)
class LeastFavorableSpec:
    epsilon: float
    sigma: np.ndarray
    base: DcmmParams

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=np.int64).ravel()
        if sigma.shape != (self.base.n,) or not np.isin(sigma, (-1, 1)).all():
            raise InvalidInputError("sigma must be a length-n vector of +-1")
        if not self.epsilon >= 0:
            raise InvalidInputError("epsilon must be nonnegative")
        object.__setattr__(self, "sigma", sigma)


# -- model construction ------------------------------------------------------


def build_omega(params: DcmmParams) -> BernoulliMatrix:
    """Dense Omega from the model factors (diagonal kept)."""
    omega = params.left @ params.p @ params.right.T
    if not params.directed:
        omega = 0.5 * (omega + omega.T)
    return BernoulliMatrix(params.n, omega, params.directed)


def sample_network(omega: BernoulliMatrix, directed: bool, seed: int, stream=()) -> Network:
    """Draw each off-diagonal edge independently with probability Omega[i, j]."""
    n = omega.n
    rng = generator(seed, "network", *stream)
    if directed:
        hit = rng.random((n, n)) < omega.omega
        np.fill_diagonal(hit, False)
        src, dst = np.nonzero(hit)
        return Network(n, True, src, dst)
    iu, ju = np.triu_indices(n, k=1)
    hit = rng.random(iu.size) < omega.omega[iu, ju]
    lo, hi = iu[hit], ju[hit]
    return Network(n, False, np.concatenate([lo, hi]), np.concatenate([hi, lo]))


def sample_dirichlet(alpha, seed: int, stream=()) -> np.ndarray:
    """One Dirichlet(alpha) weight vector from normalized gamma draws."""
    alpha = _vec(alpha)
    if alpha.size == 0 or not (alpha > 0).all():
        raise InvalidInputError("Dirichlet parameters must be positive")
    g = generator(seed, "dirichlet", *stream).standard_gamma(alpha)
    return g / g.sum()


def _memberships(alpha, n: int, seed: int, label: str) -> np.ndarray:
    return np.vstack([sample_dirichlet(alpha, seed, (label, i)) for i in range(n)])


def _degrees_uniform(n: int, beta: float, seed: int, label: str, low=2.0, high=3.0) -> np.ndarray:
    u = generator(seed, label).uniform(low, high, size=n)
    return beta * u / np.linalg.norm(u)


def _degrees_point_mass(n: int, beta: float, seed: int, label: str) -> np.ndarray:
    # 0.95 * delta_1 + 0.05 * delta_3
    u = np.where(generator(seed, label).random(n) < 0.05, 3.0, 1.0)
    return beta * u / np.linalg.norm(u)


def _block_p(k: int, b: float) -> np.ndarray:
    return (1.0 - b) * np.eye(k) + b * np.ones((k, k))


def _merge_pairs(split: np.ndarray) -> np.ndarray:
    return split[:, 0::2] + split[:, 1::2]


def case_is_directed(case_id: int) -> bool:
    if case_id not in range(1, 7):
        raise InvalidInputError(f"case must be 1..6, got {case_id}")
    return case_id >= 4


def make_case(case_id: int, n: int, k: int, beta: float, b: float, seed: int,
              directed: bool | None = None) -> tuple[DcmmParams, DcmmParams]:
    """Build the (Omega, Omega-tilde) parameter pair for simulation case 1..6.

    Cases 1-3 are undirected, 4-6 directed.  All cases use
    ``P = (1 - b) I + b 11'`` and degree vectors scaled to l2-norm ``beta``.
    Cases 3 and 6 require ``k == 2``.
    """
    is_dir = case_is_directed(case_id)
    if directed is not None and bool(directed) != is_dir:
        kind = "directed" if is_dir else "undirected"
        raise InvalidInputError(f"case {case_id} is {kind}")
    if n < 2 or k < 1:
        raise InvalidInputError("need n >= 2 and k >= 1")
    if not beta > 0:
        raise InvalidInputError("beta must be positive")
    if not 0.0 < b < 1.0:
        raise InvalidInputError(f"b must lie in (0, 1), got {b}")
    base = case_id - 3 if is_dir else case_id
    if base == 3 and k != 2:
        raise InvalidInputError(f"case {case_id} is defined for k = 2 only")

    theta = _degrees_uniform(n, beta, seed, "theta")
    zeta = _degrees_uniform(n, beta, seed, "zeta") if is_dir else None
    p = _block_p(k, b)
    ones = np.ones(k)

    def pair(theta_t, zeta_t, pi, gamma, pi_t, gamma_t, p_t, k_t):
        model = DcmmParams(n, k, is_dir, theta, pi, p, zeta, gamma)
        model_t = DcmmParams(n, k_t, is_dir, theta_t, pi_t, p_t, zeta_t, gamma_t)
        build_omega(model)
        build_omega(model_t)
        return model, model_t

    if base == 1:
        pi = _memberships(ones, n, seed, "pi")
        gamma = _memberships(ones, n, seed, "gamma") if is_dir else None
        theta_t = _degrees_point_mass(n, beta, seed, "theta_tilde")
        zeta_t = _degrees_point_mass(n, beta, seed, "zeta_tilde") if is_dir else None
        return pair(theta_t, zeta_t, pi, gamma, pi, gamma, p, k)
    if base == 2:
        pi_t = _memberships(np.ones(2 * k), n, seed, "pi_tilde")
        gamma_t = _memberships(np.ones(2 * k), n, seed, "gamma_tilde") if is_dir else None
        pi = _merge_pairs(pi_t)
        gamma = _merge_pairs(gamma_t) if is_dir else None
        return pair(theta, zeta, pi, gamma, pi_t, gamma_t, _block_p(2 * k, b), 2 * k)
    pi = _memberships([1.6, 0.4], n, seed, "pi")
    pi_t = _memberships([1.0, 1.0], n, seed, "pi_tilde")
    gamma = _memberships([1.6, 0.4], n, seed, "gamma") if is_dir else None
    gamma_t = _memberships([1.0, 1.0], n, seed, "gamma_tilde") if is_dir else None
    return pair(theta, zeta, pi, gamma, pi_t, gamma_t, p, k)


def shifted_block_pair(n: int, beta: float, b: float, b_tilde: float, seed: int,
                       shift: int = 10) -> tuple[DcmmParams, DcmmParams]:
    """Two-block SBM-style pair with near-constant degrees (configuration preset only)."""
    theta = _degrees_uniform(n, beta, seed, "theta", 0.9, 1.1)
    half = n // 2
    pi = np.zeros((n, 2))
    pi[:half, 0] = 1.0
    pi[half:, 1] = 1.0
    pi_t = np.zeros((n, 2))
    pi_t[: half + shift, 0] = 1.0
    pi_t[half + shift:, 1] = 1.0
    return (
        DcmmParams(n, 2, False, theta, pi, _block_p(2, b)),
        DcmmParams(n, 2, False, theta, pi_t, _block_p(2, b_tilde)),
    )


# -- SNR ---------------------------------------------------------------------


def _top_singular_value(m: np.ndarray, tol: float = 1e-8, max_iter: int = 200_000) -> float:
    """Largest singular value by power iteration on M'M.

    Stops once the eigen-residual of M'M is below ``tol`` times the current
    estimate of sigma^2, which bounds the relative error of sigma^2 by ``tol``.
    """
    if not m.any():
        return 0.0
    v = generator(0, "power-iteration").standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = m.T @ (m @ v)
        lam = float(v @ w)
        if lam <= 0.0:
            return 0.0
        if np.linalg.norm(w - lam * v) <= tol * lam:
            return math.sqrt(lam)
        v = w / np.linalg.norm(w)
    raise ConvergenceError("power iteration did not converge")


def _snr_scale(directed: bool) -> float:
    return 1.0 / (4.0 * math.sqrt(2.0)) if directed else 1.0 / 8.0


def _report(t2, t4, o4, ot4, d1, l1, lt1, directed) -> SnrReport:
    denom = math.sqrt(o4 + ot4)
    value = _snr_scale(directed) * t4 / denom if denom > 0 else 0.0
    lam = l1 + lt1
    ratio = d1 * d1 / lam if lam > 0 else 0.0
    return SnrReport(float(t2), float(t4), float(o4), float(ot4), max(float(value), 0.0), float(ratio))


def snr(omega: BernoulliMatrix, omegatilde: BernoulliMatrix, directed: bool) -> SnrReport:
    """Proxy signal-to-noise ratio of the order-2 test for a model pair.

    Undirected: tr(D^4) / (8 sqrt(tr(O^4) + tr(Ot^4))).  Directed:
    tr([DD']^2) / (4 sqrt(2) sqrt(tr([OO']^2) + tr([Ot Ot']^2))).  Both use
    the identity tr([XX']^2) = ||XX'||_F^2.
    """
    if omega.n != omegatilde.n:
        raise InvalidInputError(f"dimension mismatch: {omega.n} vs {omegatilde.n}")
    om, omt = omega.omega, omegatilde.omega
    delta = om - omt

    def t4(x):
        g = x @ x.T
        return float(np.sum(g * g))

    return _report(
        float(np.sum(delta * delta)),
        t4(delta),
        t4(om),
        t4(omt),
        _top_singular_value(delta),
        _top_singular_value(om),
        _top_singular_value(omt),
        directed,
    )


def _factor_gram(left, mid, right):
    """For X = left @ mid @ right.T return the small matrix whose eigenvalues are those of XX'."""
    b = mid @ (right.T @ right) @ mid.T
    return b @ (left.T @ left)


def snr_from_params(model: DcmmParams, model_t: DcmmParams) -> SnrReport:
    """Same quantities as :func:`snr`, computed in the low-rank factor space.

    Cost is O(n K^2) instead of O(n^3); used by the b-calibration search.
    """
    if model.n != model_t.n or model.directed != model_t.directed:
        raise InvalidInputError("model pair must share n and directedness")
    k, kt = model.k, model_t.k
    left = np.hstack([model.left, model_t.left])
    right = np.hstack([model.right, model_t.right])
    mid = np.zeros((k + kt, k + kt))
    mid[:k, :k] = model.p
    mid[k:, k:] = -model_t.p

    def stats(gram):
        return float(np.trace(gram)), float(np.trace(gram @ gram)), _top_eig(gram)

    t2, t4, d1sq = stats(_factor_gram(left, mid, right))
    _, o4, l1sq = stats(_factor_gram(model.left, model.p, model.right))
    _, ot4, lt1sq = stats(_factor_gram(model_t.left, model_t.p, model_t.right))
    return _report(t2, max(t4, 0.0), o4, ot4, math.sqrt(d1sq), math.sqrt(l1sq), math.sqrt(lt1sq),
                   model.directed)


def _top_eig(gram: np.ndarray) -> float:
    vals = np.linalg.eigvals(gram)
    return max(float(np.max(vals.real)), 0.0)


# -- calibration ------------------------------------------------------------


@dataclass(frozen=True)
class Calibration:
    b: float
    snr: float
    steps: int
    bracket: tuple[float, float]


_SCAN_POINTS = 32


def _pair_snr(build, x: float) -> float | None:
    try:
        model, model_t = build(x)
    except InvalidModelError:
        return None
    return snr_from_params(model, model_t).snr


def solve_snr(build, target_snr: float, lo: float, hi: float, tol: float = 1e-3,
              max_steps: int = 200) -> Calibration:
    """Find x in (lo, hi) with snr(build(x)) equal to ``target_snr`` up to relative ``tol``.

    ``build(x)`` returns a model pair.  A fixed grid of 32 interior points is
    scanned for a sign change of ``snr - target``, then the first bracket is
    bisected.  Values of x giving an invalid model are skipped in the scan.
    """
    if not target_snr > 0:
        raise InvalidInputError("target SNR must be positive")
    if not tol > 0:
        raise InvalidInputError("tolerance must be positive")
    grid = lo + (hi - lo) * (np.arange(_SCAN_POINTS) + 0.5) / _SCAN_POINTS
    values = [_pair_snr(build, float(x)) for x in grid]
    for x, v in zip(grid, values):
        if v is not None and abs(v - target_snr) <= tol * target_snr:
            return Calibration(float(x), v, 0, (float(x), float(x)))
    a = b = None
    for i in range(_SCAN_POINTS - 1):
        va, vb = values[i], values[i + 1]
        if va is None or vb is None:
            continue
        if (va - target_snr) * (vb - target_snr) < 0:
            a, b, f_a = float(grid[i]), float(grid[i + 1]), va - target_snr
            break
    if a is None:
        finite = [v for v in values if v is not None]
        span = f"[{min(finite):.4g}, {max(finite):.4g}]" if finite else "empty"
        raise InvalidInputError(
            f"target SNR {target_snr} not reachable on ({lo:g}, {hi:g}); achievable range {span}"
        )
    bracket = (a, b)
    for step in range(1, max_steps + 1):
        mid = 0.5 * (a + b)
        v = _pair_snr(build, mid)
        if v is None:
            raise InvalidModelError(f"model invalid at {mid} inside the bracket")
        if abs(v - target_snr) <= tol * target_snr:
            return Calibration(mid, v, step, bracket)
        if (v - target_snr) * f_a > 0:
            a, f_a = mid, v - target_snr
        else:
            b = mid
    raise ConvergenceError(f"bisection did not reach tolerance in {max_steps} steps")


def calibrate(case_id: int, n: int, k: int, beta: float, target_snr: float, seed: int,
              tol: float = 1e-3) -> Calibration:
    """Find b in (0, 1) whose case SNR matches ``target_snr`` to relative ``tol``."""
    make_case(case_id, n, k, beta, 0.5, seed)  # surface argument errors before scanning
    return solve_snr(lambda b: make_case(case_id, n, k, beta, b, seed), target_snr, 0.0, 1.0, tol)


def calibrate_b(case_id: int, n: int, k: int, beta: float, target_snr: float, seed: int,
                tol: float = 1e-3) -> float:
    return calibrate(case_id, n, k, beta, target_snr, seed, tol).b


# -- identifiability -----------------------------------------------------------


def sinkhorn_normalize(params: DcmmParams, tol: float = 1e-13, max_iter: int = 10_000) -> DcmmParams:
    """Reparametrize a directed model so P is doubly stochastic and ||theta|| = ||zeta||.

    Finds positive diagonal D1, D2 with D1 P D2 doubly stochastic, then moves
    D1^{-1} into the citer side and D2^{-1} into the citee side, renormalizing
    each membership row to unit sum.  Omega is unchanged.  Only the absence of
    zero rows/columns is checked; full indecomposability of P is assumed.
    """
    if not params.directed:
        raise InvalidInputError("sinkhorn_normalize expects a directed model")
    p = params.p
    if (p.sum(axis=1) <= 0).any() or (p.sum(axis=0) <= 0).any():
        raise InvalidModelError("P has a zero row or column")
    r = np.ones(params.k)
    c = np.ones(params.k)
    for _ in range(max_iter):
        r = 1.0 / (p @ c)
        c = 1.0 / (p.T @ r)
        scaled = r[:, None] * p * c[None, :]
        dev = max(np.abs(scaled.sum(axis=1) - 1).max(), np.abs(scaled.sum(axis=0) - 1).max())
        if dev <= tol:
            break
    else:
        raise ConvergenceError(f"Sinkhorn scaling did not converge in {max_iter} iterations")

    def absorb(deg, memb, scale):
        w = memb / scale[None, :]
        mass = w.sum(axis=1)
        return deg * mass, w / mass[:, None]

    theta, pi = absorb(params.theta, params.pi, r)
    zeta, gamma = absorb(params.zeta, params.gamma, c)
    s = math.sqrt(np.linalg.norm(zeta) / np.linalg.norm(theta))
    return DcmmParams(params.n, params.k, True, theta * s, pi, scaled, zeta / s, gamma)


# -- least-favorable construction ----------------------------------------------


def _split_last(memb: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    last = memb[:, -1]
    return np.hstack([memb[:, :-1], (last * (1 + sigma) / 2)[:, None], (last * (1 - sigma) / 2)[:, None]])


def _expand_p(p: np.ndarray, eps: float) -> np.ndarray:
    k = p.shape[0]
    out = np.zeros((k + 1, k + 1))
    out[: k - 1, : k - 1] = p[: k - 1, : k - 1]
    out[: k - 1, k - 1] = out[: k - 1, k] = p[: k - 1, k - 1]
    out[k - 1, : k - 1] = out[k, : k - 1] = p[k - 1, : k - 1]
    out[k - 1:, k - 1:] = [[1 + eps, 1 - eps], [1 - eps, 1 + eps]]
    return out


def _renormalize(memb_split: np.ndarray, memb: np.ndarray, scale: float):
    g = memb[:, :-1].sum(axis=1) + scale * memb[:, -1]
    d = np.ones(memb_split.shape[1])
    d[-2:] = scale
    return g, memb_split * d[None, :] / g[:, None]


def least_favorable(spec: LeastFavorableSpec) -> DcmmParams:
    """The randomized (K+1)-community perturbation of ``spec.base``.

    The result satisfies, entrywise,
    ``Omega_t[i, j] = Omega[i, j] + eps * s_i s_j * theta_i * w_j * Pi[i, K] * V[j, K]``
    with ``(w, V) = (theta, Pi)`` undirected and ``(zeta, Gamma)`` directed.
    Requires ``P[K, K] == 1`` and ``eps <= 1`` (``eps < 1`` for directed bases
    that need the 1 - eps rescaling).
    """
    base, eps, sigma = spec.base, float(spec.epsilon), spec.sigma
    k = base.k
    if abs(base.p[k - 1, k - 1] - 1.0) > 1e-12:
        raise InvalidModelError("the last diagonal entry of P must equal 1")
    if eps > 1:
        raise InvalidModelError(f"epsilon {eps} exceeds 1; split block would be negative")
    pi_c = _split_last(base.pi, sigma)
    p_c = _expand_p(base.p, eps)

    if not base.directed:
        scale = math.sqrt(1 + eps)
        g, pi_t = _renormalize(pi_c, base.pi, scale)
        d_inv = np.ones(k + 1)
        d_inv[-2:] = 1 / scale
        p_t = d_inv[:, None] * p_c * d_inv[None, :]
        p_t = 0.5 * (p_t + p_t.T)
        out = DcmmParams(base.n, k + 1, False, base.theta * g, pi_t, p_t)
        build_omega(out)
        return out

    gamma_c = _split_last(base.gamma, sigma)
    a_k = np.linalg.norm(base.theta * pi_c[:, -2])
    a_k1 = np.linalg.norm(base.theta * pi_c[:, -1])
    c_k = np.linalg.norm(base.zeta * gamma_c[:, -2])
    c_k1 = np.linalg.norm(base.zeta * gamma_c[:, -1])
    swap = [*range(k - 1), k, k - 1]
    if (a_k1 >= a_k) == (c_k1 >= c_k):
        # cases (i)/(ii): keep 1 +- eps on the diagonal; (ii) relabels the split pair
        if a_k1 < a_k:
            pi_c, gamma_c = pi_c[:, swap], gamma_c[:, swap]
            p_c = p_c[np.ix_(swap, swap)]
        scale = math.sqrt(1 + eps)
    else:
        # cases (iii)/(iv): swapping one side puts 1 - eps on the diagonal
        if eps >= 1:
            raise InvalidModelError("epsilon must be below 1 for this split")
        if a_k1 >= a_k:
            gamma_c, p_c = gamma_c[:, swap], p_c[:, swap]
        else:
            pi_c, p_c = pi_c[:, swap], p_c[swap, :]
        scale = math.sqrt(1 - eps)
    g, pi_t = _renormalize(pi_c, base.pi, scale)
    h, gamma_t = _renormalize(gamma_c, base.gamma, scale)
    d_inv = np.ones(k + 1)
    d_inv[-2:] = 1 / scale
    p_t = d_inv[:, None] * p_c * d_inv[None, :]
    out = DcmmParams(base.n, k + 1, True, base.theta * g, pi_t, p_t, base.zeta * h, gamma_t)
    build_omega(out)
    return out
