"""Classifier fitting: the weighted epsilon-insensitive dual QP and baselines.

Six families share two mechanisms. The dual-QP models (eps-l1vsvm,
eps-l1svm, csvm) are solved by one pairwise working-set engine that
maximizes

    W(b) = p.b - sum_i eps_i |b_i| - 0.5 b'Kb
    s.t.  sum_i b_i = 0,  lo_i <= b_i <= hi_i,

picking the maximal-KKT-violating index pair each step and solving the
two-variable restriction exactly (piecewise quadratic), so the objective
never decreases. The weighted epsilon-insensitive dual uses symmetric
per-sample boxes |b_i| <= gamma*v_i; the hinge-loss dual uses one-sided
boxes and eps = 0. The closed-form models (vsvm, lssvm, idlssvm) solve
small dense linear systems.

All fitted models expose scores f(x) = scale * (sum_i a_i K(x_i, x) + b)
+ shift so a single 0.5-threshold decision rule applies everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import Dataset, KernelSpec, Scaler
from .distribution import VMatrix, VWeights
from .kernels import GramMatrix, cross_gram

__all__ = [
    "ClosedFormModel",
    "DualModel",
    "SingularSystemError",
    "SolverConfig",
    "SolverError",
    "dual_objective",
    "fit_csvm",
    "fit_eps_l1_svm",
    "fit_eps_l1_vsvm",
    "fit_idlssvm",
    "fit_lssvm",
    "fit_vsvm",
    "load_model",
    "predict",
    "save_model",
]

MODEL_FORMAT = "cdfsvm-model"
MODEL_VERSION = 1


class SolverError(RuntimeError):
    """A fit could not be completed."""


class SingularSystemError(SolverError):
    """A closed-form linear system is numerically singular."""

    def __init__(self, message: str, cond: float | None = None):
        if cond is not None:
            message = f"{message} (condition estimate {cond:.3e})"
        super().__init__(message)
        self.cond = cond


@dataclass(frozen=True)
class SolverConfig:
    """Dual-solver settings: tradeoff gamma, tube epsilon, stopping rule."""

    gamma: float
    epsilon: float = 0.0
    tolerance: float = 1e-3
    max_iter: int = 100_000
    seed: int = 0
    debug_checks: bool = False

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError("gamma must be positive")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


# ---------------------------------------------------------------------------
# pairwise working-set engine

@dataclass
class PairwiseResult:
    beta: np.ndarray
    bias: float
    converged: bool
    iterations: int
    violation: float
    trace: list | None = None


def _pair_argmax(t0, s, t_lo, t_hi, ei, ej, g0, eta):
    """Exact maximizer of the two-variable restriction.

    phi(t) = g0*(t - t0) - ei*(|t| - |t0|) - ej*(|s - t| - |s - t0|)
             - 0.5*eta*(t - t0)**2   over t in [t_lo, t_hi].
    """
    knots = [t_lo, t_hi]
    if t_lo < 0.0 < t_hi:
        knots.append(0.0)
    if t_lo < s < t_hi:
        knots.append(s)
    knots.sort()
    abs_t0 = abs(t0)
    abs_s0 = abs(s - t0)

    best_t, best_val = t0, 0.0
    for u, w in zip(knots[:-1], knots[1:]):
        if w <= u:
            continue
        mid = 0.5 * (u + w)
        slope0 = g0 - (ei if mid >= 0.0 else -ei) + (ej if s - mid >= 0.0 else -ej)
        if eta > 0.0:
            t_star = t0 + slope0 / eta
            t_star = min(max(t_star, u), w)
        else:
            t_star = w if slope0 > 0.0 else u
        step = t_star - t0
        val = (g0 * step - ei * (abs(t_star) - abs_t0)
               - ej * (abs(s - t_star) - abs_s0) - 0.5 * eta * step * step)
        if val > best_val:
            best_val, best_t = val, t_star
    return best_t, best_val


def _recover_bias(beta, out, target, eps, lo, hi, edge):
    """Average the exact bias over free vectors; else take the midpoint of
    the KKT-feasible interval."""
    r = target - out
    free_pos = (beta > edge) & (beta < hi - edge)
    free_neg = (beta < -edge) & (beta > lo + edge)
    exact = np.concatenate([(r - eps)[free_pos], (r + eps)[free_neg]])
    if exact.size:
        return float(exact.mean())
    up = np.where(beta >= 0.0, r - eps, r + eps)
    dn = np.where(beta > 0.0, eps - r, -eps - r)
    up_ok = beta < hi - edge
    dn_ok = beta > lo + edge
    b_lo = float(np.max(up[up_ok])) if up_ok.any() else -np.inf
    b_hi = float(-np.max(dn[dn_ok])) if dn_ok.any() else np.inf
    if np.isfinite(b_lo) and np.isfinite(b_hi):
        return 0.5 * (b_lo + b_hi)
    if np.isfinite(b_lo):
        return b_lo
    if np.isfinite(b_hi):
        return b_hi
    return 0.0


_MASK = 1e100  # additive penalty hiding bound-pinned directions from argmax


def _solve_pairwise(K, target, eps, lo, hi, tolerance=1e-3, max_iter=100_000,
                    debug_checks=False, collect_trace=False) -> PairwiseResult:
    m = target.size
    beta = np.zeros(m)
    r = np.array(target, dtype=float)  # target - K@beta, kept incrementally
    edge = 1e-12 * np.maximum(hi - lo, 1.0)
    hi_edge = hi - edge
    lo_edge = lo + edge

    # Directional derivatives are up = r + up_off and dn = dn_off - r, where
    # the offsets carry the |beta| subgradient sign and a large negative
    # penalty for directions pinned at their bound. Only the two moved
    # entries change per step, so the offsets are patched in O(1).
    up_off = np.where(beta >= 0.0, -eps, eps) - _MASK * (beta >= hi_edge)
    dn_off = np.where(beta > 0.0, eps, -eps) - _MASK * (beta <= lo_edge)

    up_m = np.empty(m)
    dn_m = np.empty(m)
    tmp = np.empty(m)
    trace: list | None = [] if collect_trace else None

    converged = False
    violation = np.inf
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        np.add(r, up_off, out=up_m)
        np.subtract(dn_off, r, out=dn_m)
        i = int(np.argmax(up_m))
        j = int(np.argmax(dn_m))
        violation = up_m[i] + dn_m[j]
        if violation < tolerance:
            converged = True
            break

        t0 = beta[i]
        s = t0 + beta[j]
        t_lo = max(lo[i], s - hi[j])
        t_hi = min(hi[i], s - lo[j])
        eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 0.0)
        g0 = r[i] - r[j]
        t_new, gain = _pair_argmax(t0, s, t_lo, t_hi, eps[i], eps[j], g0, eta)
        if gain <= 0.0 or t_new == t0:
            break  # numerically stalled at a kink; KKT gap stays as recorded
        d = t_new - t0
        beta[i] = t_new
        beta[j] = s - t_new
        np.multiply(K[i], d, out=tmp)
        np.subtract(r, tmp, out=r)
        np.multiply(K[j], d, out=tmp)
        np.add(r, tmp, out=r)
        for idx in (i, j):
            b = beta[idx]
            e = eps[idx]
            up_off[idx] = (-e if b >= 0.0 else e) - (_MASK if b >= hi_edge[idx] else 0.0)
            dn_off[idx] = (e if b > 0.0 else -e) - (_MASK if b <= lo_edge[idx] else 0.0)
        if collect_trace:
            trace.append(gain)
        if debug_checks and iterations % 64 == 0:
            scale = max(1.0, float(np.abs(beta).max()))
            assert abs(float(beta.sum())) < 1e-8 * scale
            assert np.all(beta <= hi + 1e-9) and np.all(beta >= lo - 1e-9)

    bias = _recover_bias(beta, target - r, target, eps, lo, hi, edge)
    return PairwiseResult(beta=beta, bias=bias, converged=converged,
                          iterations=iterations, violation=float(violation),
                          trace=trace)


def dual_objective(beta, target, epsilon, K) -> float:
    """Value of the dual objective at coefficients beta = alpha* - alpha."""
    beta = np.asarray(beta, dtype=float)
    target = np.asarray(target, dtype=float)
    return float(target @ beta - epsilon * np.abs(beta).sum()
                 - 0.5 * beta @ (K @ beta))


# ---------------------------------------------------------------------------
# fitted-model containers

@dataclass(frozen=True)
class DualModel:
    """Support-coefficient model a_i = alpha*_i - alpha_i with bias.

    Feasibility (|a_i| <= cap_i), the zero-sum constraint, and pairwise
    complementarity min(alpha_i, alpha*_i) = 0 are validated on construction.
    """

    coefficients: np.ndarray
    bias: float
    support: np.ndarray
    kernel: KernelSpec
    caps: np.ndarray
    epsilon: float
    scaler: Scaler
    method: str
    converged: bool = True
    score_scale: float = 1.0
    score_shift: float = 0.0
    v_provenance: dict | None = None

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float)
        caps = np.array(self.caps, dtype=float)
        support = np.array(self.support, dtype=float)
        if coef.ndim != 1 or support.ndim != 2 or coef.size != support.shape[0]:
            raise ValueError("coefficient/support shape mismatch")
        if caps.shape != coef.shape:
            raise ValueError("caps must match coefficients")
        if np.any(np.abs(coef) > caps + 1e-9):
            raise ValueError("box feasibility violated: |a_i| > gamma*v_i")
        if abs(float(coef.sum())) > 1e-8:
            raise ValueError("equality constraint violated: sum a_i != 0")
        alpha = np.maximum(-coef, 0.0)
        alpha_star = np.maximum(coef, 0.0)
        if np.any(np.minimum(alpha, alpha_star) != 0.0):
            raise ValueError("complementary sparsity violated")
        for arr in (coef, caps, support):
            arr.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "support", support)

    @property
    def alpha(self) -> np.ndarray:
        return np.maximum(-self.coefficients, 0.0)

    @property
    def alpha_star(self) -> np.ndarray:
        return np.maximum(self.coefficients, 0.0)

    @property
    def intercept(self) -> float:
        return self.bias


@dataclass(frozen=True)
class ClosedFormModel:
    """Coefficient vector A and offset c of a closed-form (least-squares) fit."""

    coefficients: np.ndarray
    offset: float
    support: np.ndarray
    kernel: KernelSpec
    scaler: Scaler
    method: str
    converged: bool = True
    score_scale: float = 1.0
    score_shift: float = 0.0
    v_provenance: dict | None = None

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=float)
        support = np.array(self.support, dtype=float)
        if coef.ndim != 1 or support.ndim != 2 or coef.size != support.shape[0]:
            raise ValueError("coefficient/support shape mismatch")
        if not (np.all(np.isfinite(coef)) and np.isfinite(self.offset)):
            raise ValueError("non-finite closed-form solution")
        for arr in (coef, support):
            arr.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "support", support)

    @property
    def intercept(self) -> float:
        return self.offset


def predict(model, X) -> np.ndarray:
    """Scores f(x) = scale * (sum_i a_i K(x_i, x) + intercept) + shift."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.support.shape[1]:
        raise ValueError(
            f"expected (t, {model.support.shape[1]}) inputs, got {X.shape}"
        )
    cross = cross_gram(model.kernel, model.support, X)
    raw = model.coefficients @ cross + model.intercept
    return model.score_scale * raw + model.score_shift


def _score_with_cross(model, cross: np.ndarray) -> np.ndarray:
    # cross must be the (m_train, t) kernel matrix for model.support
    raw = model.coefficients @ cross + model.intercept
    return model.score_scale * raw + model.score_shift


# ---------------------------------------------------------------------------
# dual fits

def _check_fit_inputs(data: Dataset, K: GramMatrix, require_both_classes=True):
    if require_both_classes and not data.has_both_classes:
        raise ValueError("fit requires both classes present")
    if K.values.shape != (data.m, data.m):
        raise ValueError("Gram matrix does not match the dataset")


def _fit_weighted_tube(data: Dataset, K: GramMatrix, v: VWeights, cfg: SolverConfig,
                       method: str, provenance: dict | None) -> DualModel:
    _check_fit_inputs(data, K)
    vals = np.asarray(v.values, dtype=float)
    if vals.shape != (data.m,):
        raise ValueError("weight vector does not match the dataset")
    if np.any(vals <= 0.0):
        raise ValueError("non-positive distribution weight")
    caps = cfg.gamma * vals
    res = _solve_pairwise(
        K.values, data.labels.astype(float), np.full(data.m, cfg.epsilon),
        -caps, caps, tolerance=cfg.tolerance, max_iter=cfg.max_iter,
        debug_checks=cfg.debug_checks,
    )
    return DualModel(
        coefficients=res.beta, bias=res.bias, support=data.features,
        kernel=K.spec, caps=caps, epsilon=cfg.epsilon, scaler=data.scaler,
        method=method, converged=res.converged, v_provenance=provenance,
    )


def fit_eps_l1_vsvm(data: Dataset, K: GramMatrix, v: VWeights,
                    cfg: SolverConfig) -> DualModel:
    """Fit the distribution-weighted epsilon-insensitive model.

    Maximizes (a*-a)'Y - eps (a*+a)'1 - 0.5 (a*-a)'K(a*-a) subject to
    (a*-a)'1 = 0 and 0 <= a, a* <= gamma*v, to within cfg.tolerance of KKT
    optimality. The bias is recovered from free support vectors (average),
    falling back to the midpoint of the KKT-feasible interval.
    """
    return _fit_weighted_tube(data, K, v, cfg, "eps-l1vsvm", v.provenance())


def fit_eps_l1_svm(data: Dataset, K: GramMatrix, cfg: SolverConfig) -> DualModel:
    """Unweighted epsilon-insensitive fit: the all-ones weight vector."""
    return _fit_weighted_tube(data, K, VWeights.ones(data.m), cfg,
                              "eps-l1svm", None)


def fit_csvm(data: Dataset, K: GramMatrix, cfg: SolverConfig) -> DualModel:
    """Classical hinge-loss SVM via the same pairwise engine.

    Labels are mapped to +/-1 internally; in b_i = lambda_i z_i coordinates
    the dual becomes max z.b - 0.5 b'Kb over one-sided boxes (b_i in [0,
    gamma] for positives, [-gamma, 0] for negatives) with sum b_i = 0. The
    sign score is affinely mapped onto the 0.5-threshold convention.
    """
    _check_fit_inputs(data, K)
    z = 2.0 * data.labels.astype(float) - 1.0
    hi = np.where(z > 0.0, cfg.gamma, 0.0)
    lo = np.where(z < 0.0, -cfg.gamma, 0.0)
    res = _solve_pairwise(
        K.values, z, np.zeros(data.m), lo, hi,
        tolerance=cfg.tolerance, max_iter=cfg.max_iter,
        debug_checks=cfg.debug_checks,
    )
    return DualModel(
        coefficients=res.beta, bias=res.bias, support=data.features,
        kernel=K.spec, caps=np.full(data.m, cfg.gamma), epsilon=0.0,
        scaler=data.scaler, method="csvm", converged=res.converged,
        score_scale=0.5, score_shift=0.5,
    )


# ---------------------------------------------------------------------------
# closed-form fits

def fit_vsvm(data: Dataset, K: GramMatrix, V: VMatrix, gamma: float) -> ClosedFormModel:
    """Closed-form fit of the V-matrix-weighted least-squares objective.

        R(A, c) = (KA + c1 - Y)' V (KA + c1 - Y) + gamma A'KA

    Solution: A = A_b - c A_c with A_b = (VK + gamma I)^-1 V Y,
    A_c = (VK + gamma I)^-1 V 1, c = 1'V(K A_b - Y) / 1'V(K A_c - 1).
    """
    # single-class data is fine here: the constant fit f = c is exact then
    _check_fit_inputs(data, K, require_both_classes=False)
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    if V.values.shape != (data.m, data.m):
        raise ValueError("V-matrix does not match the dataset")
    Km = K.values
    Vm = V.values
    y = data.labels.astype(float)
    ones = np.ones(data.m)
    M = Vm @ Km + gamma * np.eye(data.m)
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > 1e10:
        raise SingularSystemError("VK + gamma*I is numerically singular", cond)
    rhs = np.column_stack([Vm @ y, Vm @ ones])
    sol = np.linalg.solve(M, rhs)
    A_b, A_c = sol[:, 0], sol[:, 1]
    den = float(ones @ (Vm @ (Km @ A_c - ones)))
    if abs(den) < 1e-12 * max(1.0, float(np.abs(Vm).sum())):
        raise SingularSystemError("offset denominator vanishes", cond)
    c = float(ones @ (Vm @ (Km @ A_b - y))) / den
    A = A_b - c * A_c
    resid = M @ A - Vm @ (y - c * ones)
    ref = max(float(np.linalg.norm(Vm @ (y - c * ones))), 1e-30)
    if float(np.linalg.norm(resid)) > 1e-8 * max(ref, 1.0):
        raise SingularSystemError("closed-form residual too large", cond)
    return ClosedFormModel(
        coefficients=A, offset=c, support=data.features, kernel=K.spec,
        scaler=data.scaler, method="vsvm",
        v_provenance={"g": V.g_spec.to_dict(), "mu": V.mu.describe()},
    )


def _solve_bordered(Km: np.ndarray, diag: np.ndarray, y: np.ndarray):
    """Solve [[K + diag, 1], [1', 0]] [alpha; b] = [y; 0]."""
    m = y.size
    B = np.empty((m + 1, m + 1))
    B[:m, :m] = Km + np.diag(diag)
    B[:m, m] = 1.0
    B[m, :m] = 1.0
    B[m, m] = 0.0
    rhs = np.concatenate([y, [0.0]])
    try:
        sol = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular bordered system: {exc}") from exc
    resid = float(np.linalg.norm(B @ sol - rhs))
    if resid > 1e-8 * max(float(np.linalg.norm(rhs)), 1.0):
        raise SingularSystemError("bordered system residual too large")
    return sol[:m], float(sol[m])


def fit_lssvm(data: Dataset, K: GramMatrix, gamma: float) -> ClosedFormModel:
    """Least-squares fit from the saddle system (K + I/gamma) a + b1 = Y, 1'a = 0."""
    _check_fit_inputs(data, K)
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    alpha, b = _solve_bordered(K.values, np.full(data.m, 1.0 / gamma),
                               data.labels.astype(float))
    return ClosedFormModel(coefficients=alpha, offset=b, support=data.features,
                           kernel=K.spec, scaler=data.scaler, method="lssvm")


def _density_weights(X: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Per-sample density rho_i = exp(-mean squared distance to the k nearest
    same-class neighbors, divided by the feature count)."""
    m, d = X.shape
    rho = np.empty(m)
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        if idx.size <= k:
            raise ValueError(f"class {cls} has {idx.size} members; needs more than k={k}")
        pts = X[idx]
        sq = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
        np.fill_diagonal(sq, np.inf)
        nearest = np.sort(sq, axis=1)[:, :k]
        rho[idx] = np.exp(-nearest.mean(axis=1) / d)
    return rho


def fit_idlssvm(data: Dataset, K: GramMatrix, gamma: float, k: int = 5) -> ClosedFormModel:
    """Density-weighted least-squares fit: (K + diag(1/(gamma*rho))) a + b1 = Y."""
    _check_fit_inputs(data, K)
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    rho = _density_weights(data.features, data.labels, k)
    alpha, b = _solve_bordered(K.values, 1.0 / (gamma * rho),
                               data.labels.astype(float))
    return ClosedFormModel(coefficients=alpha, offset=b, support=data.features,
                           kernel=K.spec, scaler=data.scaler, method="idlssvm")


# ---------------------------------------------------------------------------
# serialization

def save_model(model, path) -> None:
    """Write a fitted model as a versioned JSON document."""
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "family": "dual" if isinstance(model, DualModel) else "closed_form",
        "method": model.method,
        "kernel": model.kernel.to_dict(),
        "coefficients": model.coefficients.tolist(),
        "intercept": model.intercept,
        "support": model.support.tolist(),
        "scaler": model.scaler.to_dict(),
        "converged": model.converged,
        "score_scale": model.score_scale,
        "score_shift": model.score_shift,
        "v_provenance": model.v_provenance,
    }
    if isinstance(model, DualModel):
        payload["caps"] = model.caps.tolist()
        payload["epsilon"] = model.epsilon
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_model(path):
    """Reload a model written by save_model."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} document")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')}")
    kernel = KernelSpec.from_dict(payload["kernel"])
    scaler = Scaler.from_dict(payload["scaler"])
    common = dict(
        support=np.asarray(payload["support"], dtype=float),
        kernel=kernel, scaler=scaler, method=payload["method"],
        converged=payload["converged"], score_scale=payload["score_scale"],
        score_shift=payload["score_shift"], v_provenance=payload["v_provenance"],
    )
    coefficients = np.asarray(payload["coefficients"], dtype=float)
    if payload["family"] == "dual":
        return DualModel(coefficients=coefficients, bias=payload["intercept"],
                         caps=np.asarray(payload["caps"], dtype=float),
                         epsilon=payload["epsilon"], **common)
    return ClosedFormModel(coefficients=coefficients, offset=payload["intercept"],
                           **common)
