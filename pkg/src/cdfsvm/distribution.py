"""Distribution weights: per-sample v-vectors, out-of-sample v-values, V-matrices.

A weight is the integral of a distribution kernel G centered at a sample
against a measure mu. Closed forms cover the gaussian and step kernels
against uniform-box and gaussian measures; the empirical measure averages
the kernel over a reference sample; the degenerate point-mass measure
yields the all-ones vector (no distribution information).

For the gaussian-kernel/uniform-box pair the exact integral is used,

    (1/(2a)) * int_{-a}^{a} exp(-(u - x)^2 / (2 sigma^2)) du
        = (sigma * sqrt(2*pi) / (4a)) * (erf((a - x)/(sigma*sqrt(2)))
                                         + erf((a + x)/(sigma*sqrt(2)))),

with all constant prefactors folded into the normalization constant, since
only relative weights matter downstream.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, ndtr

from .core import GKernelSpec

__all__ = [
    "MeasureSpec",
    "VMatrix",
    "VWeights",
    "v_empirical",
    "v_gaussian_step",
    "v_matrix",
    "v_uniform_gaussian",
    "v_vector",
    "weights_to_csv",
]

_MEASURE_KINDS = ("uniform_box", "gaussian", "empirical", "point_mass")


def _opt_array(values, ndim, what):
    if values is None:
        return None
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MeasureSpec:
    """Measure over the input space used to integrate distribution kernels.

    kinds:
      uniform_box -- uniform on the product of [center_k - a_k, center_k + a_k]
      gaussian    -- independent per-dimension normal(mean_k, std_k**2)
      empirical   -- average over N reference points
      point_mass  -- degenerate: unit mass at the evaluation point itself
    """

    kind: str
    center: np.ndarray | None = None
    halfwidth: np.ndarray | None = None
    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    references: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        object.__setattr__(self, "center", _opt_array(self.center, 1, "box center"))
        object.__setattr__(self, "halfwidth", _opt_array(self.halfwidth, 1, "box halfwidth"))
        object.__setattr__(self, "mean", _opt_array(self.mean, 1, "gaussian mean"))
        object.__setattr__(self, "std", _opt_array(self.std, 1, "gaussian std"))
        object.__setattr__(self, "references", _opt_array(self.references, 2, "references"))
        if self.kind == "uniform_box":
            if self.center is None or self.halfwidth is None:
                raise ValueError("uniform_box measure needs center and halfwidth")
            if self.center.shape != self.halfwidth.shape:
                raise ValueError("box center/halfwidth length mismatch")
            if np.any(self.halfwidth <= 0.0):
                raise ValueError("degenerate box: halfwidth must be positive")
        elif self.kind == "gaussian":
            if self.mean is None or self.std is None:
                raise ValueError("gaussian measure needs mean and std")
            if self.mean.shape != self.std.shape:
                raise ValueError("gaussian mean/std length mismatch")
            if not np.all(np.isfinite(self.mean)):
                raise ValueError("gaussian mean must be finite")
            if np.any(self.std <= 0.0):
                raise ValueError("gaussian measure needs std > 0")
        elif self.kind == "empirical":
            if self.references is None or self.references.shape[0] < 1:
                raise ValueError("empirical measure needs at least one reference point")

    @classmethod
    def uniform_box(cls, halfwidth, center=None) -> "MeasureSpec":
        halfwidth = np.atleast_1d(np.asarray(halfwidth, dtype=float))
        if center is None:
            center = np.zeros_like(halfwidth)
        return cls("uniform_box", center=np.atleast_1d(center), halfwidth=halfwidth)

    @classmethod
    def unit_box(cls, d: int) -> "MeasureSpec":
        """Uniform on [0, 1]^d: the default for normalized data."""
        return cls.uniform_box(np.full(d, 0.5), np.full(d, 0.5))

    @classmethod
    def gaussian(cls, mean, std) -> "MeasureSpec":
        return cls("gaussian", mean=np.atleast_1d(mean), std=np.atleast_1d(std))

    @classmethod
    def empirical(cls, references) -> "MeasureSpec":
        return cls("empirical", references=np.asarray(references, dtype=float))

    @classmethod
    def point_mass(cls) -> "MeasureSpec":
        return cls("point_mass")

    def describe(self) -> str:
        if self.kind == "uniform_box":
            return f"uniform_box(halfwidth={self.halfwidth.tolist()})"
        if self.kind == "gaussian":
            return f"gaussian(mean={self.mean.tolist()}, std={self.std.tolist()})"
        if self.kind == "empirical":
            return f"empirical(N={self.references.shape[0]})"
        return "point_mass"


@dataclass(frozen=True)
class VWeights:
    """Per-sample distribution weights with provenance of the (G, mu) pair.

    ``values`` are in (0, 1] after normalization; ``norm_constant`` is the
    pre-normalization maximum so raw weights can be recovered.
    """

    values: np.ndarray
    combine: str
    g_spec: GKernelSpec
    mu: MeasureSpec
    norm_constant: float = 1.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("weights must form a vector")
        if np.any(vals < 0.0) or np.any(vals > 1.0 + 1e-12):
            raise ValueError("weights must lie in [0, 1]")
        if self.combine not in ("product", "additive"):
            raise ValueError(f"unknown combine mode {self.combine!r}")
        if not self.norm_constant > 0.0:
            raise ValueError("normalization constant must be positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.values.size

    def provenance(self) -> dict:
        return {
            "g": self.g_spec.to_dict(),
            "mu": self.mu.describe(),
            "combine": self.combine,
            "norm_constant": self.norm_constant,
        }

    @classmethod
    def ones(cls, m: int) -> "VWeights":
        return cls(np.ones(m), "product", GKernelSpec.step(), MeasureSpec.point_mass())


@dataclass(frozen=True)
class VMatrix:
    """Pairwise distribution weights V_ij = int G(x-x_i) G(x-x_j) dmu(x)."""

    values: np.ndarray
    g_spec: GKernelSpec
    mu: MeasureSpec

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ValueError("V-matrix must be square")
        if not np.array_equal(vals, vals.T):
            raise ValueError("V-matrix must be exactly symmetric")
        if np.any(vals < 0.0):
            raise ValueError("V-matrix entries must be non-negative")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# one-dimensional closed-form integrals (vectorized over samples x dimensions)

def _step_vs_gaussian(x, mean, std):
    # cumulative normal up to x, per dimension
    return ndtr((x - mean) / std)


def _step_vs_uniform(x, center, halfw):
    # box mass at or above x
    return np.clip((center + halfw - x) / (2.0 * halfw), 0.0, 1.0)


def _gauss_vs_uniform(x, center, halfw, sigma):
    xc = x - center
    rt2 = sigma * np.sqrt(2.0)
    pref = sigma * np.sqrt(2.0 * np.pi) / (4.0 * halfw)
    return pref * (erf((halfw - xc) / rt2) + erf((halfw + xc) / rt2))


def _gauss_vs_gaussian(x, mean, std, sigma):
    var = sigma**2 + std**2
    return (sigma / np.sqrt(var)) * np.exp(-((x - mean) ** 2) / (2.0 * var))


def _per_dim_integrals(samples: np.ndarray, g: GKernelSpec, mu: MeasureSpec) -> np.ndarray:
    """(m, d) matrix of one-dimensional kernel integrals for parametric mu."""
    if mu.kind == "uniform_box":
        if g.kind == "step":
            return _step_vs_uniform(samples, mu.center, mu.halfwidth)
        return _gauss_vs_uniform(samples, mu.center, mu.halfwidth, g.sigma)
    if mu.kind == "gaussian":
        if g.kind == "step":
            return _step_vs_gaussian(samples, mu.mean, mu.std)
        return _gauss_vs_gaussian(samples, mu.mean, mu.std, g.sigma)
    raise ValueError(f"no closed form for measure kind {mu.kind!r}")


# ---------------------------------------------------------------------------
# single-point estimators

def v_gaussian_step(mu: MeasureSpec, x) -> float:
    """Weight of a point under the step kernel and a gaussian measure.

    Product over dimensions of the normal CDF Phi((x_k - mean_k) / std_k),
    evaluated through the error function.
    """
    if mu.kind != "gaussian":
        raise ValueError("v_gaussian_step needs a gaussian measure")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != mu.mean.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {mu.mean.shape}")
    return float(np.prod(ndtr((x - mu.mean) / mu.std)))


def v_uniform_gaussian(mu: MeasureSpec, g: GKernelSpec, x, combine: str = "product") -> float:
    """Weight of a point under the gaussian kernel and a uniform-box measure."""
    if mu.kind != "uniform_box":
        raise ValueError("v_uniform_gaussian needs a uniform_box measure")
    if g.kind != "gaussian":
        raise ValueError("v_uniform_gaussian needs a gaussian distribution kernel")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != mu.halfwidth.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {mu.halfwidth.shape}")
    parts = _gauss_vs_uniform(x, mu.center, mu.halfwidth, g.sigma)
    if combine == "product":
        return float(np.prod(parts))
    if combine == "additive":
        return float(np.mean(parts))
    raise ValueError(f"unknown combine mode {combine!r}")


def v_empirical(mu: MeasureSpec, g: GKernelSpec, x, combine: str = "product") -> float:
    """Weight of a point under an empirical measure: average kernel value."""
    if mu.kind != "empirical":
        raise ValueError("v_empirical needs an empirical measure")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    refs = mu.references
    if x.size != refs.shape[1]:
        raise ValueError(f"dimension mismatch: {x.size} vs {refs.shape[1]}")
    return float(_empirical_values(x[None, :], g, refs, combine)[0])


def _empirical_values(samples, g, refs, combine):
    if combine == "product":
        if g.kind == "step":
            hits = np.all(refs[:, None, :] >= samples[None, :, :], axis=2)
            return hits.mean(axis=0)
        sq = np.sum((refs[:, None, :] - samples[None, :, :]) ** 2, axis=2)
        return np.exp(-sq / (2.0 * g.sigma**2)).mean(axis=0)
    if combine == "additive":
        diffs = refs[:, None, :] - samples[None, :, :]
        if g.kind == "step":
            parts = (diffs >= 0.0).astype(float)
        else:
            parts = np.exp(-(diffs**2) / (2.0 * g.sigma**2))
        return parts.mean(axis=2).mean(axis=0)
    raise ValueError(f"unknown combine mode {combine!r}")


# ---------------------------------------------------------------------------
# vector and matrix builders

def v_vector(samples, g: GKernelSpec, mu: MeasureSpec, combine: str = "product",
             normalize: bool = True) -> VWeights:
    """Distribution weights for a sample set.

    Per-dimension integrals are combined by product (default) or by their
    mean ("additive"), the latter being the well-conditioned high-dimension
    variant; both live in (0, 1]. With ``normalize`` the vector is divided
    by its maximum so max v_i = 1.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2:
        raise ValueError("samples must form an (m, d) matrix")
    if combine not in ("product", "additive"):
        raise ValueError(f"unknown combine mode {combine!r}")
    if mu.kind == "point_mass":
        values = np.ones(samples.shape[0])
    elif mu.kind == "empirical":
        if samples.shape[1] != mu.references.shape[1]:
            raise ValueError("sample/reference dimension mismatch")
        values = _empirical_values(samples, g, mu.references, combine)
    else:
        parts = _per_dim_integrals(samples, g, mu)
        values = np.prod(parts, axis=1) if combine == "product" else parts.mean(axis=1)
    norm_constant = 1.0
    if normalize:
        peak = float(values.max()) if values.size else 0.0
        if peak <= 0.0:
            raise ValueError("all distribution weights are zero for this (G, mu) pair")
        values = values / peak
        norm_constant = peak
    return VWeights(values, combine, g, mu, norm_constant)


def v_matrix(samples, g: GKernelSpec, mu: MeasureSpec) -> VMatrix:
    """Pairwise weight matrix V_ij = int G(x - x_i) G(x - x_j) dmu(x).

    Empirical measures use the reference average; parametric measures use
    per-dimension closed forms combined by product. The point-mass measure
    degenerates to the identity matrix.
    """
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2:
        raise ValueError("samples must form an (m, d) matrix")
    m, d = X.shape
    if mu.kind == "point_mass":
        return VMatrix(np.eye(m), g, mu)
    if mu.kind == "empirical":
        refs = mu.references
        if refs.shape[1] != d:
            raise ValueError("sample/reference dimension mismatch")
        if g.kind == "step":
            W = np.all(refs[:, None, :] >= X[None, :, :], axis=2).astype(float)
        else:
            sq = np.sum((refs[:, None, :] - X[None, :, :]) ** 2, axis=2)
            W = np.exp(-sq / (2.0 * g.sigma**2))
        vals = (W.T @ W) / refs.shape[0]
        return VMatrix(_mirror(vals), g, mu)

    vals = np.ones((m, m))
    for k in range(d):
        xk = X[:, k]
        hi = np.maximum.outer(xk, xk)
        if mu.kind == "uniform_box":
            c, a = mu.center[k], mu.halfwidth[k]
            if g.kind == "step":
                vals *= np.clip((c + a - hi) / (2.0 * a), 0.0, 1.0)
            else:
                s = g.sigma
                mid = 0.5 * np.add.outer(xk, xk) - c
                gap2 = np.subtract.outer(xk, xk) ** 2
                pref = s * np.sqrt(np.pi) / (4.0 * a)
                vals *= (np.exp(-gap2 / (4.0 * s**2)) * pref
                         * (erf((a - mid) / s) + erf((a + mid) / s)))
        else:  # gaussian measure
            mean, std = mu.mean[k], mu.std[k]
            if g.kind == "step":
                vals *= ndtr((mean - hi) / std)
            else:
                s = g.sigma
                mid = 0.5 * np.add.outer(xk, xk)
                gap2 = np.subtract.outer(xk, xk) ** 2
                var = 0.5 * s**2 + std**2
                vals *= (np.exp(-gap2 / (4.0 * s**2))
                         * (s / np.sqrt(2.0 * var))
                         * np.exp(-((mid - mean) ** 2) / (2.0 * var)))
    return VMatrix(_mirror(vals), g, mu)


def _mirror(vals: np.ndarray) -> np.ndarray:
    return np.triu(vals) + np.triu(vals, 1).T


def weights_to_csv(weights: VWeights, path) -> None:
    """Write (index, v-value) rows for inspection."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "v_value"])
        for i, value in enumerate(weights.values):
            writer.writerow([i, repr(float(value))])
