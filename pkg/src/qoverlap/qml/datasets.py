"""Synthetic phase datasets for the quantum-kernel classifier.

Points are 3-vectors of encoding phases, wrapped to ``[0, 2 pi)``.

* ``separate``: two isotropic Gaussians around ``(pi/2,)*3`` (label -1) and
  ``(3pi/2,)*3`` (label +1).
* ``spherical``: a small sphere (label -1) inside a larger shell (label +1),
  both centred on ``(pi,)*3`` with Gaussian radial jitter.
* ``overlapping``: two Gaussians whose centres sit ``gap`` apart in every
  coordinate around ``(pi,)*3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, ParameterError

TWO_PI = 2 * np.pi

DEFAULT_PARAMS = {
    "separate": {"sigma": 0.35},
    "spherical": {"inner_radius": 0.5, "outer_radius": 2.4, "jitter": 0.12},
    "overlapping": {"gap": 1.1, "sigma": 0.55},
}
KINDS = tuple(DEFAULT_PARAMS)


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray
    kind: str = ""

    def __post_init__(self):
        x = np.mod(np.asarray(self.x, dtype=float), TWO_PI)
        y = np.asarray(self.y, dtype=int)
        if x.ndim != 2 or x.shape[1] != 3 or y.shape != (x.shape[0],):
            raise ConfigurationError("dataset needs x of shape (n, 3) and n labels")
        if not np.all(np.isin(y, (-1, 1))):
            raise ConfigurationError("labels must be -1 or +1")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return len(self.y)

    def subset(self, idx):
        return Dataset(self.x[idx], self.y[idx], self.kind)

    def to_csv(self):
        lines = ["theta1,theta2,theta3,label"]
        lines += [f"{a!r},{b!r},{c!r},{int(l)}" for (a, b, c), l in zip(self.x.tolist(), self.y)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text, kind=""):
        rows = [r for r in text.strip().splitlines()[1:] if r.strip()]
        data = np.array([[float(v) for v in r.split(",")] for r in rows])
        return cls(data[:, :3], data[:, 3].astype(int), kind)


def _sphere(rng, n, radius, jitter, center):
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = np.abs(radius + rng.normal(0.0, jitter, (n, 1)))
    return center + r * d


def gen_dataset(kind, n=200, seed=0, **params):
    """Balanced labelled dataset of ``n`` points, shuffled."""
    if kind not in DEFAULT_PARAMS:
        raise ParameterError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    if n < 4 or n % 2:
        raise ParameterError("n must be even and at least 4")
    unknown = set(params) - set(DEFAULT_PARAMS[kind])
    if unknown:
        raise ConfigurationError(f"unknown parameters for {kind}: {sorted(unknown)}")
    p = {**DEFAULT_PARAMS[kind], **params}
    rng = np.random.default_rng(seed)
    h = n // 2
    if kind == "separate":
        neg = rng.normal(np.pi / 2, p["sigma"], (h, 3))
        pos = rng.normal(3 * np.pi / 2, p["sigma"], (h, 3))
    elif kind == "spherical":
        c = np.full(3, np.pi)
        neg = _sphere(rng, h, p["inner_radius"], p["jitter"], c)
        pos = _sphere(rng, h, p["outer_radius"], p["jitter"], c)
    else:
        neg = rng.normal(np.pi - p["gap"] / 2, p["sigma"], (h, 3))
        pos = rng.normal(np.pi + p["gap"] / 2, p["sigma"], (h, 3))
    x = np.vstack([neg, pos])
    y = np.concatenate([-np.ones(h, int), np.ones(h, int)])
    order = rng.permutation(n)
    return Dataset(x[order], y[order], kind)


def train_test_split(n, n_train, seed=0):
    """Random index split ``(train, test)``; both sorted."""
    if not 0 < n_train < n:
        raise ParameterError("n_train must lie strictly between 0 and n")
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])
