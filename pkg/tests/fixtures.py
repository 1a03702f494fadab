"""Dataset-sized synthetic fixtures for the benchmark smoke checks.

Shaped after two small public benchmark tables (sample counts, feature
counts, class balance) but generated locally so the suite needs no
downloads: one imbalanced continuous-feature set and one rule-plus-noise
set over small integer attributes.
"""

import numpy as np

from cdfsvm.core import Dataset, normalize


def echo_like(seed=0) -> Dataset:
    """131 samples, 10 features, roughly 2:1 imbalance, 3 informative dims."""
    rng = np.random.default_rng(seed)
    m, d, m_pos = 131, 10, 44
    labels = np.zeros(m, dtype=np.int64)
    labels[:m_pos] = 1
    raw = rng.normal(0.0, 1.0, (m, d))
    shift = np.zeros(d)
    shift[:3] = 1.4
    raw[labels == 1] += shift
    raw[:, 3] += 0.3 * raw[:, 0]  # one mildly correlated nuisance dimension
    feats, scaler = normalize(raw)
    return Dataset(feats, labels, scaler, name="echo-like")


def monks_like(seed=0) -> Dataset:
    """121 samples, 6 small-integer features, rule-based labels, 5% noise."""
    rng = np.random.default_rng(seed)
    m, d = 121, 6
    raw = rng.integers(0, 4, size=(m, d)).astype(float)
    labels = ((raw[:, 1] >= 2.0) ^ (raw[:, 4] == 0.0)).astype(np.int64)
    flip = rng.choice(m, size=max(1, m // 20), replace=False)
    labels[flip] = 1 - labels[flip]
    if labels.min() == labels.max():  # degenerate draw guard
        labels[0] = 1 - labels[0]
    feats, scaler = normalize(raw)
    return Dataset(feats, labels, scaler, name="monks-like")
