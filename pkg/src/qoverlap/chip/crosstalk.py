"""Parametric thermal-crosstalk model for the 10x10 phaseshifter grid.

Actual phases follow::

    theta_ij = t_ij + (sum_lm K_(ij),(lm) t_lm) (1 + eta_ij t_ij) + eps_ij

where ``t`` are the intended phases. ``K`` depends on the neighbour order of
the two shifters (see :func:`neighbor_order`) scaled by a per-pair factor
``xi ~ N(1, 0.05)``. A shifter does not heat itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, ParameterError

GRID = 10
N_SHIFTERS = GRID * GRID
DEFAULT_CROSSTALK = dict(k=(0.016, 0.004, 0.0016, 0.0005), eta=0.01, eps=0.02)
XI_STD = 0.05
ETA_REL_STD = 0.1
EPS_STD = 0.01


def neighbor_order(a, b):
    """Neighbour class of two phaseshifters on the grid.

    With ``di = |row difference|`` and ``dj = |column difference|``:

    * 1: same column, adjacent rows (this includes the two arms of one MZI);
    * 2: Chebyshev distance <= 2 and Manhattan distance <= 2, i.e. same-row
      neighbours up to the adjacent MZI column, diagonal neighbours and rows
      two apart in one column;
    * 3: the rest of the Chebyshev-2 ring;
    * 4: everything further away.
    """
    (i1, j1), (i2, j2) = a, b
    di, dj = abs(i1 - i2), abs(j1 - j2)
    if di == 0 and dj == 0:
        raise ConfigurationError(f"neighbour order undefined for identical addresses {tuple(a)}")
    if dj == 0 and di == 1:
        return 1
    cheb, manh = max(di, dj), di + dj
    if cheb <= 2 and manh <= 2:
        return 2
    if cheb <= 2:
        return 3
    return 4


def _order_matrix():
    rows, cols = np.divmod(np.arange(N_SHIFTERS), GRID)
    di = np.abs(rows[:, None] - rows[None, :])
    dj = np.abs(cols[:, None] - cols[None, :])
    cheb, manh = np.maximum(di, dj), di + dj
    order = np.full((N_SHIFTERS, N_SHIFTERS), 4)
    order[cheb <= 2] = 3
    order[(cheb <= 2) & (manh <= 2)] = 2
    order[(dj == 0) & (di == 1)] = 1
    order[(di == 0) & (dj == 0)] = 0
    return order


ORDER = _order_matrix()


@dataclass(frozen=True)
class CrosstalkModel:
    """Frozen realisation of the crosstalk model.

    Parameters
    ----------
    k : 4-tuple of float
        Baseline leak fractions for neighbour orders 1-4.
    eta : float
        Mean non-linear coefficient; per-shifter ``eta_ij ~ N(eta, 0.1 eta)``.
    eps : float
        Calibration-error scale in radians; ``eps_ij ~ N(+/-eps, 0.01)`` with
        a random sign. ``eps = 0`` disables the calibration error entirely.
    seed : int
        Seed of the realisation. ``None`` gives the mean model (``xi = 1``,
        ``eta_ij = eta``, ``eps_ij = +eps``).
    """

    k: tuple = DEFAULT_CROSSTALK["k"]
    eta: float = DEFAULT_CROSSTALK["eta"]
    eps: float = DEFAULT_CROSSTALK["eps"]
    seed: int | None = 0
    coupling: np.ndarray = field(init=False, repr=False, compare=False)
    eta_ij: np.ndarray = field(init=False, repr=False, compare=False)
    eps_ij: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = tuple(float(x) for x in self.k)
        if len(k) != 4 or min(k) < 0:
            raise ParameterError("need four non-negative K coefficients")
        if self.eta < 0 or self.eps < 0:
            raise ParameterError("eta and eps must be non-negative")
        object.__setattr__(self, "k", k)
        if self.seed is None:
            xi = np.ones((N_SHIFTERS, N_SHIFTERS))
            eta_ij = np.full((GRID, GRID), float(self.eta))
            eps_ij = np.full((GRID, GRID), float(self.eps))
        else:
            rng = np.random.default_rng(self.seed)
            xi = rng.normal(1.0, XI_STD, (N_SHIFTERS, N_SHIFTERS))
            eta_ij = rng.normal(self.eta, ETA_REL_STD * self.eta, (GRID, GRID))
            signs = rng.choice([-1.0, 1.0], size=(GRID, GRID))
            eps_ij = rng.normal(signs * self.eps, EPS_STD) if self.eps > 0 else np.zeros((GRID, GRID))
        base = np.concatenate([[0.0], k])[ORDER]
        coupling = base * xi
        for arr in (coupling, eta_ij, eps_ij):
            arr.setflags(write=False)
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "eta_ij", eta_ij)
        object.__setattr__(self, "eps_ij", eps_ij)

    @classmethod
    def noiseless(cls):
        return cls(k=(0.0, 0.0, 0.0, 0.0), eta=0.0, eps=0.0, seed=None)

    def apply(self, intended):
        """Actual phases for a 10x10 array of intended phases."""
        t = np.asarray(intended, dtype=float)
        if t.shape != (GRID, GRID):
            raise ConfigurationError(f"intended phases must be a {GRID}x{GRID} array")
        leak = (self.coupling @ t.ravel()).reshape(GRID, GRID)
        return t + leak * (1.0 + self.eta_ij * t) + self.eps_ij

    def to_json(self):
        return json.dumps({"k": list(self.k), "eta": self.eta, "eps": self.eps, "seed": self.seed}, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        unknown = set(d) - {"k", "eta", "eps", "seed"}
        if unknown:
            raise ConfigurationError(f"unknown crosstalk keys: {sorted(unknown)}")
        return cls(k=tuple(d["k"]), eta=d["eta"], eps=d["eps"], seed=d.get("seed"))


def apply_crosstalk(model: CrosstalkModel, intended):
    """Map intended to actual phases.

    ``intended`` is a 10x10 array or a mapping ``(i, j) -> phase``. Shifters
    absent from a mapping are undriven (phase 0). The return type matches the
    input: for a mapping, every shifter is reported.
    """
    if isinstance(intended, dict):
        arr = np.zeros((GRID, GRID))
        for (i, j), v in intended.items():
            if not (0 <= i < GRID and 0 <= j < GRID):
                raise ConfigurationError(f"phaseshifter ({i},{j}) outside the grid")
            arr[i, j] = v
        out = model.apply(arr)
        return {(i, j): float(out[i, j]) for i in range(GRID) for j in range(GRID)}
    return model.apply(intended)
