"""Energy spectra for state-transfer chains: generation, shifting, diagnostics.

A chain supports perfect state transfer (PST) at time tau when its ordered
eigenvalues satisfy exp(-i*lam_k*tau) = (-1)^k * exp(i*Phi) for a single
global phase Phi.  Nearly zero eigenvalues, injected by the sign-shift
lam -> lam - sgn(lam)*C, produce boundary states that make the transfer
robust against coupling imperfections.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from math import fsum

import numpy as np

from .errors import InvalidSpectrumError

__all__ = [
    "Family",
    "Spectrum",
    "PstReport",
    "BandModel",
    "generate_linear",
    "generate_inverted_quadratic",
    "generate_cosine",
    "shift_spectrum",
    "verify_pst",
    "boundary_metric",
    "band_condition",
    "DISTINCTNESS_RTOL",
    "SYMMETRY_ATOL",
    "PST_PHASE_TOL",
]

# Below this relative gap the product weights 1/prod(lam_k - lam_p) overflow
# and the inverse solver is invalid.
DISTINCTNESS_RTOL = 1e-12
SYMMETRY_ATOL = 1e-12
PST_PHASE_TOL = 1e-9


class Family(str, Enum):
    LINEAR = "linear"
    INVERTED_QUADRATIC = "inverted_quadratic"
    COSINE = "cosine"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ordered list of distinct target eigenvalues with provenance metadata.

    values are dimensionless energies (hbar = 1), strictly increasing, with
    every adjacent gap above DISTINCTNESS_RTOL * (max - min).  Non-custom
    families must be symmetric about zero (which makes all diagonal fields
    of the reconstructed chain vanish).
    """

    values: np.ndarray
    family: Family = Family.CUSTOM
    params: dict | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise InvalidSpectrumError("spectrum needs at least 2 values in a flat list")
        if not np.all(np.isfinite(vals)):
            raise InvalidSpectrumError("spectrum values must be finite")
        gaps = np.diff(vals)
        if np.any(gaps <= 0):
            raise InvalidSpectrumError("spectrum values must be strictly increasing")
        span = vals[-1] - vals[0]
        tight = np.nonzero(gaps <= DISTINCTNESS_RTOL * span)[0]
        if tight.size:
            k = int(tight[0])
            raise InvalidSpectrumError(
                f"eigenvalues {k} and {k + 1} closer than {DISTINCTNESS_RTOL:g} of the span; "
                "solver weights would overflow"
            )
        family = Family(self.family)
        if family is not Family.CUSTOM:
            asym = np.abs(vals + vals[::-1]).max()
            if asym > SYMMETRY_ATOL:
                raise InvalidSpectrumError(
                    f"{family.value} spectrum must be symmetric about zero (asymmetry {asym:.3e})"
                )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "family", family)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def to_dict(self) -> dict:
        d = {"values": self.values.tolist(), "family": self.family.value}
        if self.params is not None:
            d["params"] = dict(self.params)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        if "values" not in d:
            raise InvalidSpectrumError("spectrum JSON needs a 'values' array")
        return cls(
            np.asarray(d["values"], dtype=float),
            Family(d.get("family", "custom")),
            dict(d["params"]) if d.get("params") is not None else None,
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PstReport:
    """Result of checking the PST phase condition at a fixed transfer time."""

    is_pst: bool
    tau: float
    phi: float
    max_phase_error: float

    def to_dict(self) -> dict:
        return {
            "is_pst": self.is_pst,
            "tau": self.tau,
            "phi": self.phi,
            "max_phase_error": self.max_phase_error,
        }


@dataclass(frozen=True)
class BandModel:
    """Stepwise three-band spectrum: m central levels spaced delta, separated
    by gaps gamma from two peripheral bands of M levels spaced Delta."""

    delta: float
    gamma: float
    Delta: float
    m: int
    M: int

    def __post_init__(self):
        if min(self.delta, self.gamma, self.Delta) <= 0:
            raise ValueError("band spacings must be positive")
        if self.m < 1 or self.M < 1:
            raise ValueError("band counts must be at least 1")


def generate_linear(n: int, a: int) -> Spectrum:
    """Linear spectrum lam_k = A*k, k = -(n-1)/2 .. (n-1)/2 in unit steps.

    A must be an odd positive integer so that parity alternates at tau = pi.
    For even n the index k runs over half-integers, keeping the spacing A and
    the symmetry about zero.
    """
    if n < 2:
        raise InvalidSpectrumError("need n >= 2")
    if a < 1 or a != int(a) or int(a) % 2 == 0:
        raise InvalidSpectrumError("A must be an odd positive integer (even A breaks parity alternation at tau = pi)")
    k = np.arange(n) - (n - 1) / 2.0
    return Spectrum(int(a) * k, Family.LINEAR, {"A": int(a), "N": int(n)})


def generate_inverted_quadratic(n: int) -> Spectrum:
    """Inverted quadratic spectrum lam_k = k*(n-1-|k|) for odd n >= 3."""
    if n < 3:
        raise InvalidSpectrumError("need n >= 3")
    if n % 2 == 0:
        raise InvalidSpectrumError("inverted quadratic spectrum is defined for odd n only")
    k = np.arange(n) - (n - 1) // 2
    return Spectrum(k * (n - 1 - np.abs(k)), Family.INVERTED_QUADRATIC, {"N": int(n)})


def generate_cosine(n: int) -> Spectrum:
    """Cosine spectrum lam_k = 2*cos(pi*k/(n+1)); the uniform chain b_j = 1."""
    if n < 2:
        raise InvalidSpectrumError("need n >= 2")
    k = np.arange(n, 0, -1)  # descending k sorts the values increasing
    return Spectrum(2.0 * np.cos(np.pi * k / (n + 1)), Family.COSINE, {"N": int(n)})


def shift_spectrum(s: Spectrum, c: float) -> Spectrum:
    """Shift every eigenvalue toward zero: lam -> lam - sgn(lam)*C.

    Injects nearly zero eigenvalues (boundary states) without changing the
    chain length.  C must stay below the smallest nonzero |lam| so that no
    eigenvalue crosses zero; collisions of shifted values are rejected by the
    Spectrum distinctness check.
    """
    c = float(c)
    if c < 0:
        raise InvalidSpectrumError("shift C must be nonnegative")
    mags = np.abs(s.values)
    lam_min = mags[mags > 0].min()
    if c >= lam_min:
        raise InvalidSpectrumError(
            f"shift C = {c:g} must be below the smallest nonzero |eigenvalue| {lam_min:g}"
        )
    params = dict(s.params or {})
    params["C"] = c
    return Spectrum(s.values - np.sign(s.values) * c, Family.CUSTOM, params)


def _wrap_phase(phi: float) -> float:
    phi = math.remainder(phi, math.tau)
    if phi <= -math.pi:
        phi += math.tau
    return phi


def verify_pst(s: Spectrum, tau: float, tol: float = PST_PHASE_TOL) -> PstReport:
    """Check the phase condition exp(-i*lam_k*tau) = (-1)^k exp(i*Phi).

    Phi is free (it can be compensated by a constant field), so it is fitted
    by minimizing the maximum residual phase over k, with k counted in
    increasing-eigenvalue order.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    k = np.arange(s.n)
    z = np.exp(-1j * s.values * tau) * (-1.0) ** k
    phi = float(np.angle(np.sum(z)))
    resid = np.angle(z * np.exp(-1j * phi))
    phi += float(resid.max() + resid.min()) / 2.0  # Chebyshev recentering
    resid = np.angle(z * np.exp(-1j * phi))
    err = float(np.abs(resid).max())
    return PstReport(bool(err < tol), float(tau), _wrap_phase(phi), err)


def boundary_metric(s: Spectrum, central_count: int) -> float:
    """Boundary-state condition: weighted variance over lam_min^2.

    Returns rho = (sum_k w_k lam_k^2 / sum_k w_k) / lam_min^2 with the product
    weights w_k = 1/|prod_{p != k}(lam_k - lam_p)| taken over the full
    spectrum.  lam_min is the smallest-magnitude eigenvalue after excluding
    the central_count designated nearly-zero ones; exact zeros are always
    excluded (they are zero modes, and the reference gap is the smallest
    *nonzero* level).  rho << 1 signals transfer through boundary states.
    """
    if not 0 <= central_count < s.n:
        raise ValueError("central_count must be in [0, n)")
    from .solver import compute_weights  # runtime import: solver depends on this module

    w = compute_weights(s)
    wvar = fsum(w * s.values**2) / fsum(w)
    mags = np.abs(s.values)
    nonzero = np.sort(mags[mags > 1e-12 * mags.max()])
    if central_count >= nonzero.size:
        raise ValueError("all eigenvalues designated central; no reference gap left")
    lam_min = float(nonzero[central_count])
    return wvar / lam_min**2


def band_condition(b: BandModel) -> float:
    """Weight-ratio estimate (delta/gamma)^m * (gamma/Delta)^M.

    Values much below 1 indicate the boundary-state regime delta << gamma
    with Delta ~ gamma.
    """
    return (b.delta / b.gamma) ** b.m * (b.gamma / b.Delta) ** b.M
