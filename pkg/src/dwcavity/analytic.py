"""Closed-form reference results for the frozen-tunneling dynamics.

With tunneling switched off, each atomic configuration |m> drags the field
into its own coherent state alpha_m(tau); everything below follows from that
structure and serves as an independent cross-check of the numerical engine.
All rates in units of kappa, times in units of 1/kappa.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InfiniteCoherenceTimeError, TruncationBreachError
from .model import HilbertSpace, ModelParams, TruncationConfig

WEAK_PUMP_ETA = 0.2  # advisory threshold for the weak-pump formulas


@dataclass(frozen=True)
class CoherentAmplitude:
    """Conditional field amplitude for atomic configuration m."""

    m: int
    value: complex
    asymptote: complex


def alpha_asymptote(m: int, params: ModelParams) -> complex:
    """alpha_m(inf) = -i eta / (kappa - i(delta - U0 m)), kappa = 1."""
    return -1j * params.eta / (1.0 - 1j * (params.delta - params.U0 * m))


def alpha_m(tau: float, m: int, params: ModelParams) -> CoherentAmplitude:
    """alpha_m(tau) = alpha_m(inf) (1 - exp(-(kappa - i(delta - U0 m)) tau))."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    a_inf = alpha_asymptote(m, params)
    rate = 1.0 - 1j * (params.delta - params.U0 * m)
    return CoherentAmplitude(
        m=m, value=a_inf * (1.0 - np.exp(-rate * tau)), asymptote=a_inf
    )


def _check_weights(weights):
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be a normalized probability array")
    return weights


def quasi_steady_photon(weights, params: ModelParams) -> float:
    """Photon number of the quasi-steady field for given |<m|G>|^2 weights:
    sum_m w_m eta^2 / (kappa^2 + (delta - U0 m)^2)."""
    weights = _check_weights(weights)
    m = np.arange(weights.size)
    lor = params.eta**2 / (1.0 + (params.delta - params.U0 * m) ** 2)
    return float(weights @ lor)


@dataclass(frozen=True)
class DecoherenceTime:
    """Characteristic decay time of the atomic coherence rho_a^{mn}."""

    m: int
    n: int
    tau_mn: float


def decoherence_time(m: int, n: int, params: ModelParams) -> DecoherenceTime:
    """tau_mn = [k^2 + (d - U0 m)^2][k^2 + (d - U0 n)^2] / (k U0^2 eta^2 (m-n)^2)."""
    if m == n:
        raise ValueError("decoherence time is defined for m != n")
    if params.eta == 0 or params.U0 == 0:
        raise InfiniteCoherenceTimeError(
            "eta = 0 or U0 = 0: no decoherence channel, tau_mn is infinite"
        )
    num = (1.0 + (params.delta - params.U0 * m) ** 2) * (
        1.0 + (params.delta - params.U0 * n) ** 2
    )
    return DecoherenceTime(
        m=m, n=n, tau_mn=num / (params.U0**2 * params.eta**2 * (m - n) ** 2)
    )


def coherent_state(alpha: complex, dim: int, tail_tolerance: float = 1e-8):
    """Truncated coherent-state vector, renormalized on the retained levels.

    Raises if the discarded top-level weight exceeds the tail tolerance.
    """
    amp = np.zeros(dim, dtype=complex)
    amp[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amp[n] = amp[n - 1] * alpha / math.sqrt(n)
    if abs(amp[-1]) ** 2 > tail_tolerance:
        raise TruncationBreachError(
            f"coherent state |alpha|={abs(alpha):.3g} has top-level weight "
            f"{abs(amp[-1])**2:.2e} at cutoff {dim - 1}"
        )
    return amp / np.linalg.norm(amp)


def classical_steady(weights, params: ModelParams, space: HilbertSpace,
                     truncation: TruncationConfig | None = None) -> np.ndarray:
    """Classically correlated late-time state with tunneling frozen:
    sum_m w_m |m><m| (x) |alpha_m(inf)><alpha_m(inf)|."""
    weights = _check_weights(weights)
    if weights.size != space.atom_dim:
        raise ValueError("weights length must be N + 1")
    tail = truncation.tail_tolerance if truncation else 1e-8
    D = space.dim
    rho = np.zeros((D, D), dtype=complex)
    for m in range(space.atom_dim):
        ket = coherent_state(alpha_asymptote(m, params), space.field_dim, tail)
        proj_a = np.zeros((space.atom_dim, space.atom_dim))
        proj_a[m, m] = 1.0
        rho += weights[m] * np.kron(proj_a, np.outer(ket, ket.conj()))
    return rho


def weak_pump_steady(params: ModelParams, space: HilbertSpace):
    """Weak-pump steady state: uniform populations 1/(N+1) over the
    conditional coherent states.  Returns (rho, photon_number)."""
    if params.eta > WEAK_PUMP_ETA:
        warnings.warn(
            f"eta/kappa = {params.eta:.3g} beyond the weak-pump advisory "
            f"threshold {WEAK_PUMP_ETA}", stacklevel=2,
        )
    if max(params.t, params.u) > 0.1:
        warnings.warn(
            "t or u not small against kappa; weak-pump formulas degrade",
            stacklevel=2,
        )
    weights = np.full(space.atom_dim, 1.0 / space.atom_dim)
    rho = classical_steady(weights, params, space)
    return rho, quasi_steady_photon(weights, params)


def steady_photon_from_populations(populations, params: ModelParams) -> float:
    """Steady photon number from the steady atomic populations alone:
    sum_m P_m eta^2 / (kappa^2 + (delta - U0 m)^2).  Valid at any pump."""
    return quasi_steady_photon(populations, params)


def photon_bound(params: ModelParams) -> float:
    """Upper bound eta^2/kappa^2 on the steady-state photon number."""
    return params.eta**2


def fit_decay_rate(taus, values, window=(None, None)):
    """Least-squares slope of -ln|values| vs tau over the given window.

    Returns the decay rate (positive for decaying envelopes).  Used to
    compare numerical coherence decay against 1/tau_mn; the proportionality
    constant of the envelope law is not specified, only the rate.
    """
    taus = np.asarray(taus, dtype=float)
    vals = np.abs(np.asarray(values))
    lo = window[0] if window[0] is not None else taus[0]
    hi = window[1] if window[1] is not None else taus[-1]
    mask = (taus >= lo) & (taus <= hi) & (vals > 0)
    if mask.sum() < 2:
        raise ValueError("fit window contains fewer than two samples")
    slope = np.polyfit(taus[mask], np.log(vals[mask]), 1)[0]
    return -float(slope)
