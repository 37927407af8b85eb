"""Catalogue of continuous-variable product states and their characteristic functions.

Convention: ``D(alpha) = exp(alpha a^dag - alpha^* a)`` and
``chi(alpha) = Tr[D(alpha) rho]``. Multi-mode states are products, so ``chi``
is the product of single-mode factors. Points ``alpha`` may carry leading
batch dimensions; the last axis indexes modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_laguerre

from ..errors import ConfigurationError, DimensionError, ParameterError


def _complex_vector(values, name):
    if isinstance(values, (int, float, complex, str)):
        values = [values]
    try:
        out = np.array([complex(v) for v in values], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{name}: {exc}") from None
    if out.size == 0 or not np.all(np.isfinite(out)):
        raise ConfigurationError(f"{name} must be a non-empty list of finite numbers")
    out.setflags(write=False)
    return out


def _real_vector(values, name, size=None):
    if isinstance(values, (int, float)):
        values = [values] * (size or 1)
    out = np.asarray(values, dtype=float).ravel()
    if out.size == 0 or not np.all(np.isfinite(out)):
        raise ConfigurationError(f"{name} must be a non-empty list of finite numbers")
    out.setflags(write=False)
    return out


class CvState:
    """Base class of the closed catalogue."""

    variant = ""

    @property
    def modes(self) -> int:
        raise NotImplementedError

    def _chi_modes(self, alpha):
        raise NotImplementedError

    def chi(self, alpha):
        a = np.asarray(alpha, dtype=np.complex128)
        if a.ndim == 0:
            a = a[None]
        if a.shape[-1] != self.modes:
            raise DimensionError(f"point has {a.shape[-1]} modes, state has {self.modes}")
        return np.prod(self._chi_modes(a), axis=-1)

    def mean_photons(self):
        """Mean photon number per mode."""
        raise NotImplementedError

    def to_descriptor(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Coherent(CvState):
    beta: np.ndarray
    variant = "coherent"

    def __post_init__(self):
        object.__setattr__(self, "beta", _complex_vector(self.beta, "beta"))

    @property
    def modes(self):
        return self.beta.size

    def _chi_modes(self, a):
        b = self.beta
        return np.exp(-0.5 * np.abs(a) ** 2 + a * np.conj(b) - np.conj(a) * b)

    def mean_photons(self):
        return np.abs(self.beta) ** 2

    def to_descriptor(self):
        return {"variant": self.variant, "beta": [str(complex(x)) for x in self.beta]}


@dataclass(frozen=True, eq=False)
class SqueezedVacuum(CvState):
    """``S(xi)|0>`` with ``S(xi) = exp((xi^* a^2 - xi a^dag^2)/2)`` and ``xi = r e^{i phi}``."""

    r: np.ndarray
    phi: np.ndarray = 0.0
    variant = "squeezed"

    def __post_init__(self):
        r = _real_vector(self.r, "r")
        if np.any(r < 0):
            raise ParameterError("squeezing r must be non-negative")
        phi = _real_vector(self.phi, "phi", r.size)
        if phi.size != r.size:
            raise ConfigurationError("r and phi must have the same length")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    @property
    def modes(self):
        return self.r.size

    def _chi_modes(self, a):
        c, s = np.cosh(2 * self.r), np.sinh(2 * self.r)
        return np.exp(-0.5 * (c * np.abs(a) ** 2 + s * np.real(a**2 * np.exp(-1j * self.phi))))

    def mean_photons(self):
        return np.sinh(self.r) ** 2

    def to_descriptor(self):
        return {"variant": self.variant, "r": self.r.tolist(), "phi": self.phi.tolist()}


@dataclass(frozen=True, eq=False)
class FockNumber(CvState):
    n: tuple
    variant = "fock"

    def __post_init__(self):
        n = (self.n,) if isinstance(self.n, (int, np.integer)) else tuple(self.n)
        if not n or any(int(x) != x or x < 0 for x in n):
            raise ConfigurationError("Fock occupations must be non-negative integers")
        object.__setattr__(self, "n", tuple(int(x) for x in n))

    @property
    def modes(self):
        return len(self.n)

    def _chi_modes(self, a):
        t = np.abs(a) ** 2
        return np.exp(-0.5 * t) * eval_laguerre(np.asarray(self.n), t)

    def mean_photons(self):
        return np.asarray(self.n, dtype=float)

    def to_descriptor(self):
        return {"variant": self.variant, "n": list(self.n)}


def _coherent_inner(g, d):
    # <g|d> for coherent states
    return np.exp(-0.5 * np.abs(g) ** 2 - 0.5 * np.abs(d) ** 2 + np.conj(g) * d)


@dataclass(frozen=True, eq=False)
class EvenCat(CvState):
    """Normalised ``|beta> + |-beta>`` in every mode."""

    beta: np.ndarray
    variant = "cat"

    def __post_init__(self):
        b = _complex_vector(self.beta, "beta")
        if np.any(b == 0):
            raise ParameterError("cat amplitude must be non-zero")
        object.__setattr__(self, "beta", b)

    @property
    def modes(self):
        return self.beta.size

    @property
    def norm2(self):
        return 1.0 / (2.0 + 2.0 * np.exp(-2.0 * np.abs(self.beta) ** 2))

    def _chi_modes(self, a):
        b = self.beta
        total = 0
        for s in (1, -1):
            for t in (1, -1):
                ket, bra = s * b, t * b
                total = total + np.exp((a * np.conj(ket) - np.conj(a) * ket) / 2) * _coherent_inner(bra, a + ket)
        return self.norm2 * total

    def mean_photons(self):
        x = np.abs(self.beta) ** 2
        return x * np.tanh(x)

    def to_descriptor(self):
        return {"variant": self.variant, "beta": [str(complex(x)) for x in self.beta]}


CATALOGUE = {"coherent": Coherent, "squeezed": SqueezedVacuum, "fock": FockNumber, "cat": EvenCat}


def char_fn(state: CvState, alpha):
    """Characteristic function ``Tr[D(alpha) rho]`` of a catalogue state."""
    return state.chi(alpha)


def is_self_reflective(state) -> bool:
    """Every catalogue variant is self-reflective; anything else is rejected."""
    if not isinstance(state, tuple(CATALOGUE.values())):
        raise ConfigurationError(f"{type(state).__name__} is not a catalogue state")
    return True


def state_from_descriptor(desc: dict) -> CvState:
    """Build a state from ``{"variant": ..., parameters}``."""
    desc = dict(desc)
    variant = desc.pop("variant", None)
    if variant not in CATALOGUE:
        raise ConfigurationError(f"unknown CV variant {variant!r}; expected one of {sorted(CATALOGUE)}")
    allowed = {"coherent": {"beta"}, "squeezed": {"r", "phi"}, "fock": {"n"}, "cat": {"beta"}}[variant]
    unknown = set(desc) - allowed
    if unknown:
        raise ConfigurationError(f"unknown keys for {variant}: {sorted(unknown)}")
    try:
        return CATALOGUE[variant](**desc)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None
