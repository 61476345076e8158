"""Per-pair coherence model of a photon pair on a balanced beam splitter.

Amplitudes are in units of the single-photon field E0 with the common
carrier phase factored out, so only the relative phase between the two
input photons survives.  Every function accepts scalars or numpy arrays:
an object exposing array-valued ``delta_omega`` / ``q_weight`` (such as
:class:`hom_coherence.ensemble.PairEnsemble`) broadcasts through unchanged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

#: Complex field amplitude in units of E0.  Python ``complex`` or numpy complex.
ComplexAmp = complex

SQRT1_2 = 1.0 / math.sqrt(2.0)


class Convention(enum.Enum):
    """Which tau-scaling the per-pair coincidence uses.

    ``EQ8`` uses cos^2(phi + theta0) with phi = w * delta_omega * tau.
    ``PRODUCT45`` multiplies the two output intensities, which gives
    cos^2(2 * phi + theta0): a dip twice as narrow in tau.
    """

    EQ8 = "eq8"
    PRODUCT45 = "product45"


@dataclass(frozen=True)
class SpdcPair:
    """One signal/idler pair at f0 +/- delta_omega / (2 pi).

    Attributes:
        delta_omega: signed angular detuning in rad/s; the partner photon
            sits at ``-delta_omega``.
        q_weight: dephasing weight multiplying the pair phase, in [0, 1].
    """

    delta_omega: float
    q_weight: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.delta_omega):
            raise ConfigError(f"delta_omega must be finite, got {self.delta_omega}")
        if not 0.0 <= self.q_weight <= 1.0:
            raise ConfigError(f"q_weight must lie in [0, 1], got {self.q_weight}")

    def partner(self) -> "SpdcPair":
        """The frequency-swapped pair (delta_omega -> -delta_omega)."""
        return SpdcPair(-self.delta_omega, self.q_weight)


@dataclass(frozen=True)
class ModelParams:
    theta0: float
    q: float = 0.0
    i0: float = 1.0
    convention: Convention = Convention.EQ8

    def __post_init__(self):
        if not math.isfinite(self.theta0):
            raise ConfigError(f"theta0 must be finite, got {self.theta0}")
        if not 0.0 <= self.q <= 1.0:
            raise ConfigError(f"q must lie in [0, 1], got {self.q}")
        if not (self.i0 > 0.0 and math.isfinite(self.i0)):
            raise ConfigError(f"i0 must be positive and finite, got {self.i0}")
        object.__setattr__(self, "convention", Convention(self.convention))


def pair_phase(pair, tau):
    """Pair phase Delta_j = q_weight * delta_omega * tau, in radians."""
    return pair.q_weight * pair.delta_omega * tau


def bs_transform(a, b):
    """Balanced beam splitter with i on reflection: (c, d) = (a + ib, ia + b) / sqrt2."""
    return (a + 1j * b) * SQRT1_2, (1j * a + b) * SQRT1_2


def pair_input_fields(pair, tau, p: ModelParams):
    """Input fields (a, b) = (1, exp(i(2 Delta_j + theta0)))."""
    psi = 2.0 * pair_phase(pair, tau) + p.theta0
    b = np.exp(1j * psi)
    a = np.ones_like(b)
    if np.ndim(b) == 0:
        return complex(a), complex(b)
    return a, b


def output_amplitudes(pair, tau, p: ModelParams):
    """Output fields at ports c and d.

    Written out, c = (1 + i e^{i psi}) / sqrt2 and d = i (1 - i e^{i psi}) / sqrt2
    with psi = 2 Delta_j + theta0.  Evaluated through :func:`bs_transform`
    so both routes agree to the last bit.
    """
    return bs_transform(*pair_input_fields(pair, tau, p))


def output_intensities(pair, tau, p: ModelParams):
    """(I_c, I_d) = I0 (1 -/+ sin(2 Delta_j + theta0))."""
    s = np.sin(2.0 * pair_phase(pair, tau) + p.theta0)
    return p.i0 * (1.0 - s), p.i0 * (1.0 + s)


def swapped_intensities(pair, tau, p: ModelParams):
    """Intensities of the second path-photon term: the sine changes sign."""
    s = np.sin(2.0 * pair_phase(pair, tau) + p.theta0)
    return p.i0 * (1.0 + s), p.i0 * (1.0 - s)


def _cos_squared(x):
    # (1 + cos 2x) / 2 rather than cos(x)**2: exact zero at x = +/-pi/2 in floats
    return 0.5 * (1.0 + np.cos(2.0 * x))


def pair_coincidence(pair, tau, p: ModelParams):
    """Single-pair coincidence term R_j in units of intensity squared."""
    if p.convention is Convention.PRODUCT45:
        ic, id_ = output_intensities(pair, tau, p)
        return ic * id_
    return p.i0 ** 2 * _cos_squared(pair_phase(pair, tau) + p.theta0)
