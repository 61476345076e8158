"""Two-photon amplitude calculation of the coincidence probability.

Independent of :mod:`hom_coherence.model`: the frequency-entangled input
state (|+d>_a |-d>_b + |-d>_a |+d>_b) / sqrt2 is pushed photon by photon
through the beam-splitter unitary, amplitudes of identical output
configurations are summed, and coincidence probability is read off the
configurations with one photon in each output port.  The idler arm carries
the delay tau, so a photon of detuning nu entering port b picks up
exp(i nu tau).  Photons are labelled by the sign of their detuning, which
keeps the two frequencies distinct even when delta_omega = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy import integrate

from .ensemble import Shape, _check_grid, _is_quadrature_phase, _map, as_ensemble
from .exceptions import DomainError
from .model import Convention, ModelParams, pair_coincidence

# rows: output port (c, d); columns: input port (a, b)
BS_UNITARY = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2.0)

_A, _B = 0, 1
_C, _D = 0, 1


@dataclass(frozen=True, eq=False)
class QuantumPairResult:
    """Coincidence probability plus the two interfering path amplitudes.

    The amplitudes belong to the outcome (+delta at c, -delta at d) and are
    scaled so that ``p_coincidence == |amp_both_transmitted + amp_both_reflected|**2``.
    """

    p_coincidence: object
    amp_both_transmitted: object
    amp_both_reflected: object


@dataclass(frozen=True)
class DeviationReport:
    max_abs_dev: float
    rms_dev: float
    n_samples: int
    convention: str


def _propagate(delta_omega, tau):
    """Map output configuration -> amplitude, plus the tt/rr split for (c+, d-)."""
    forward = np.exp(1j * delta_omega * tau)
    delay = {+1: forward, -1: np.conj(forward)}
    w = 1.0 / math.sqrt(2.0)
    state = [(w, ((_A, +1), (_B, -1))), (w, ((_A, -1), (_B, +1)))]

    outputs = {}
    tt = rr = 0.0
    for amp, ((m1, f1), (m2, f2)) in state:
        for o1, o2 in product((_C, _D), repeat=2):
            a = amp * BS_UNITARY[o1, m1] * BS_UNITARY[o2, m2]
            if m1 == _B:
                a = a * delay[f1]
            if m2 == _B:
                a = a * delay[f2]
            key = tuple(sorted(((o1, f1), (o2, f2))))
            outputs[key] = outputs.get(key, 0.0) + a
            if key == ((_C, +1), (_D, -1)):
                if o1 == m1 and o2 == m2:
                    tt = tt + a
                else:
                    rr = rr + a
    return outputs, tt, rr


def quantum_pair_coincidence(delta_omega, tau) -> QuantumPairResult:
    """Coincidence probability for a pair at +/-delta_omega with idler delay tau.

    Accepts scalars or broadcastable arrays.
    """
    outputs, tt, rr = _propagate(np.asarray(delta_omega, dtype=float), np.asarray(tau, dtype=float))
    p = 0.0
    for ((o1, _), (o2, _)), amp in outputs.items():
        if o1 != o2:
            p = p + np.abs(amp) ** 2
    # the mirror outcome (c-, d+) contributes the same probability
    tt, rr = tt * math.sqrt(2.0), rr * math.sqrt(2.0)
    if np.ndim(p) == 0:
        return QuantumPairResult(float(p), complex(tt), complex(rr))
    return QuantumPairResult(p, tt, rr)


def compare_models(pairs, tau_grid, p: ModelParams, workers=None) -> DeviationReport:
    """Per-pair, per-delay deviation between the coherence model and the oracle.

    Delays may be spread over ``workers`` threads; the per-delay partial
    results are combined in grid order, so the report does not depend on it.
    """
    if not _is_quadrature_phase(p.theta0):
        raise DomainError(f"compare_models needs theta0 = +/-pi/2, got {p.theta0}")
    if p.convention is not Convention.EQ8:
        raise DomainError(f"compare_models needs convention eq8, got {p.convention.value}")
    if p.q != 0.0:
        raise DomainError(f"compare_models needs q = 0, got {p.q}")
    ens = as_ensemble(pairs)
    if np.any(ens.q_weight != 1.0):
        raise DomainError("compare_models needs undephased pairs (all q_weight = 1)")
    tau = _check_grid(tau_grid)

    def deviations(t):
        model = pair_coincidence(ens, t, p) / p.i0 ** 2
        dev = np.abs(model - quantum_pair_coincidence(ens.delta_omega, t).p_coincidence)
        return float(dev.max()), float(np.sum(dev * dev))

    max_dev = 0.0
    sq_sum = 0.0
    for m, sq in _map(deviations, list(tau), workers):
        max_dev = max(max_dev, m)
        sq_sum += sq
    n = len(ens) * len(tau)
    return DeviationReport(max_dev, math.sqrt(sq_sum / n), n, p.convention.value)


def ensemble_dip(shape, bandwidth: float, tau: float) -> float:
    """Oracle coincidence averaged over the spectral density by quadrature, in units of 1/2."""
    shape = Shape(shape)
    x = bandwidth * tau

    def p_of(u):
        return quantum_pair_coincidence(u, x).p_coincidence

    if shape is Shape.RECT:
        val, _ = integrate.quad(lambda u: 0.5 * p_of(u), -1.0, 1.0,
                                limit=500, epsabs=1e-15, epsrel=1e-13)
    else:
        norm = 1.0 / math.sqrt(2.0 * math.pi)
        val, _ = integrate.quad(lambda u: norm * math.exp(-0.5 * u * u) * p_of(u), -40.0, 40.0,
                                limit=500, epsabs=1e-15, epsrel=1e-13)
    return 2.0 * val
