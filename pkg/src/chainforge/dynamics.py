"""Exact single-excitation dynamics and the weak-coupling effective model.

The chain Hamiltonian is natively symmetric tridiagonal, so evolution uses
the full spectral decomposition: psi(t) = sum_k exp(-i lam_k t) |k><k|psi(0).
This is unitary to machine precision and costs O(N^2) for arbitrary t.

For chains whose outermost couplings are much weaker than the rest, transfer
is governed by a two- or three-level effective model built from the zero
modes of the decoupled Hamiltonian H0 (chain with b_1 = b_{N-1} = 0):
|1> and |N> are always zero modes, and the inner chain contributes one more
for odd N.  Transfer then happens at tau = pi/nu (odd N) or pi/Omega (even N).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigensolverError
from .solver import ChainCouplings

__all__ = [
    "EigenSystem",
    "StateVector",
    "EffectiveModel",
    "EffectiveModelValidityWarning",
    "eigendecompose",
    "evolve",
    "transfer_overlap",
    "overlap_trace",
    "average_fidelity",
    "effective_model",
    "central_splitting",
    "validate_effective_model",
]

# An eigenvector component only counts as the "first nonzero" for the sign
# convention if it clears the noise floor of the column.
_SIGN_EPS = 1e-8


class EffectiveModelValidityWarning(UserWarning):
    """Perturbative coupling is not small against the inner spectral gap."""


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Spectral decomposition: eigenvalues ascending, eigenvectors in columns.

    Sign convention: the first component of each eigenvector that exceeds the
    column's noise floor is positive.  For persymmetric chains the
    eigenvectors then alternate parity under index reversal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        vec = np.asarray(self.eigenvectors, dtype=float)
        if lam.ndim != 1 or vec.shape != (lam.size, lam.size):
            raise ValueError("need N eigenvalues and an N x N eigenvector matrix")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", vec)

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def validate(self, c: "ChainCouplings | None" = None) -> None:
        """Assert orthonormality (1e-10) and, given the couplings, residuals (1e-9 * ||H||)."""
        gram = self.eigenvectors.T @ self.eigenvectors
        err = np.abs(gram - np.eye(self.n)).max()
        if err > 1e-10:
            raise AssertionError(f"eigenvectors not orthonormal: Gram deviation {err:.3e}")
        if c is not None:
            h = np.diag(c.a) + np.diag(c.b, 1) + np.diag(c.b, -1)
            resid = h @ self.eigenvectors - self.eigenvectors * self.eigenvalues
            h_scale = np.abs(self.eigenvalues).max()
            if np.abs(resid).max() > 1e-9 * h_scale:
                raise AssertionError("eigenpair residual above 1e-9 * ||H||")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes c_j in the site basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a flat nonempty array")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: sum |c_j|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return int(self.amplitudes.size)

    @classmethod
    def site(cls, n: int, j: int) -> "StateVector":
        """Basis state |j> (0-based site index)."""
        amps = np.zeros(n, dtype=complex)
        amps[j] = 1.0
        return cls(amps)

    def to_json(self, **kwargs) -> str:
        pairs = [[z.real, z.imag] for z in self.amplitudes]
        return json.dumps(pairs, **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        pairs = json.loads(text)
        return cls(np.array([complex(re, im) for re, im in pairs]))


@dataclass(frozen=True)
class EffectiveModel:
    """Weak-coupling transfer parameters.

    nu couples |1>, |N> to the inner zero mode via V_01 = V_0N = nu/sqrt(2)
    (odd N only); omega is the magnitude of the second-order Rabi frequency
    -2 sum_k V_1k V_kN / xi_k^2 over the nonzero inner modes.  The detunings
    vanish identically by symmetry.  Note the second-order sum cancels
    exactly for even N (the +/-xi partner modes contribute with opposite
    sign), in which case omega = 0 and predicted_tau = inf; compare against
    central_splitting for the exact answer.
    """

    nu: float
    omega: float
    detunings: tuple[float, float]
    parity: str  # "odd_N" | "even_N"
    predicted_tau: float
    xi_min: float

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "omega": self.omega,
            "detunings": list(self.detunings),
            "parity": self.parity,
            "predicted_tau": self.predicted_tau,
            "xi_min": self.xi_min,
        }


def eigendecompose(c: ChainCouplings) -> EigenSystem:
    """Full spectral decomposition of the chain's tridiagonal Hamiltonian.

    Delegates to LAPACK's implicit-shift QL/QR for symmetric tridiagonal
    matrices; convergence failure surfaces as EigensolverError.
    """
    try:
        lam, vec = scipy.linalg.eigh_tridiagonal(c.a, c.b)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    order = np.argsort(lam)
    lam = lam[order]
    vec = vec[:, order]
    # deterministic sign: first above-noise component of each column positive
    mags = np.abs(vec)
    lead = np.argmax(mags > _SIGN_EPS * mags.max(axis=0), axis=0)
    signs = np.sign(vec[lead, np.arange(vec.shape[1])])
    return EigenSystem(lam, vec * signs)


def evolve(es: EigenSystem, psi0: StateVector, t: float) -> StateVector:
    """psi(t) = sum_k exp(-i lam_k t) |lam_k><lam_k|psi(0)>."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    coeffs = es.eigenvectors.T @ psi0.amplitudes
    return StateVector(es.eigenvectors @ (np.exp(-1j * es.eigenvalues * t) * coeffs))


def transfer_overlap(es: EigenSystem, t: float) -> float:
    """f_{1,N}(t) = |<N| exp(-i H t) |1>|, in [0, 1]."""
    weights = es.eigenvectors[0] * es.eigenvectors[-1]
    amp = np.sum(np.exp(-1j * es.eigenvalues * t) * weights)
    return min(float(np.abs(amp)), 1.0)


def overlap_trace(es: EigenSystem, t_grid) -> np.ndarray:
    """Pointwise transfer overlap on a sorted time grid."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a flat nonempty array")
    if np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be sorted")
    weights = es.eigenvectors[0] * es.eigenvectors[-1]
    amps = np.exp(-1j * np.outer(t, es.eigenvalues)) @ weights
    return np.minimum(np.abs(amps), 1.0)


def average_fidelity(f: float) -> float:
    """Bloch-sphere-averaged transfer fidelity F = 1/2 + f/3 + f^2/6."""
    if not 0.0 <= f <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    return (3.0 + 2.0 * f + f * f) / 6.0  # same polynomial, exact at f = 0 and 1


def effective_model(c: ChainCouplings) -> EffectiveModel:
    """Build the weak-coupling two/three-level model for a chain with a_j = 0.

    Requires matching end couplings b_1 = b_{N-1} (the analyzed symmetric
    case).  Warns when nu or omega is not below 0.1 * xi_min, the smallest
    nonzero inner eigenvalue, where the perturbative picture degrades.
    """
    n = c.n
    if n < 3:
        raise ValueError("effective model needs an inner chain (n >= 3)")
    b_end = float(c.b[0])
    if abs(c.b[0] - c.b[-1]) > 1e-12 * max(abs(c.b[0]), abs(c.b[-1])):
        raise ValueError(f"end couplings must match: b_1 = {c.b[0]:g}, b_(N-1) = {c.b[-1]:g}")
    if np.abs(c.a).max() > 1e-12 * np.abs(c.b).max():
        raise ValueError("effective model assumes vanishing local fields a_j")

    # decoupled inner chain: sites 2..N-1
    if n == 3:
        xi = np.zeros(1)
        modes = np.ones((1, 1))
    else:
        inner = ChainCouplings(c.a[1:-1], c.b[1:-1], persymmetric=False)
        inner_es = eigendecompose(inner)
        xi, modes = inner_es.eigenvalues, inner_es.eigenvectors

    scale = np.abs(xi).max() if np.abs(xi).max() > 0 else 1.0
    is_zero = np.abs(xi) <= 1e-10 * scale
    nonzero = ~is_zero
    xi_min = float(np.abs(xi[nonzero]).min()) if np.any(nonzero) else math.inf

    odd = n % 2 == 1
    nu = 0.0
    if odd:
        (k0,) = np.nonzero(is_zero)[0]
        nu = math.sqrt(2.0) * b_end * float(modes[0, k0])

    # V|xi_k> projects onto |1>, |N> through the first/last inner components
    v1k = b_end * modes[0, nonzero]
    vkn = b_end * modes[-1, nonzero]
    terms = v1k * vkn / xi[nonzero] ** 2
    omega_sum = -2.0 * float(np.sum(terms))
    if abs(omega_sum) < 1e-12 * 2.0 * float(np.sum(np.abs(terms), initial=0.0)):
        omega_sum = 0.0  # exact +/-xi cancellation (always hit for even N)
    omega = abs(omega_sum)

    if odd:
        predicted_tau = math.pi / nu
    else:
        predicted_tau = math.pi / omega if omega > 0 else math.inf
    if max(nu, omega) >= 0.1 * xi_min:
        warnings.warn(
            f"perturbative couplings (nu = {nu:.3g}, omega = {omega:.3g}) not small against "
            f"the inner gap xi_min = {xi_min:.3g}; effective model unreliable",
            EffectiveModelValidityWarning,
            stacklevel=2,
        )
    return EffectiveModel(
        nu=nu,
        omega=omega,
        detunings=(0.0, 0.0),
        parity="odd_N" if odd else "even_N",
        predicted_tau=predicted_tau,
        xi_min=xi_min,
    )


def central_splitting(c: ChainCouplings) -> float:
    """Half-splitting of the central eigenvalues of the full chain.

    Odd N: half the gap between the neighbors of the central eigenvalue
    (equals nu in the weak-coupling limit).  Even N: half the central
    doublet gap (the exact Rabi frequency).
    """
    lam = eigendecompose(c).eigenvalues
    n = lam.size
    if n % 2:
        mid = n // 2
        return float(lam[mid + 1] - lam[mid - 1]) / 2.0
    return float(lam[n // 2] - lam[n // 2 - 1]) / 2.0


def validate_effective_model(c: ChainCouplings, model: EffectiveModel) -> float:
    """Relative discrepancy between predicted_tau and the exact-splitting time."""
    tau_exact = math.pi / central_splitting(c)
    return abs(model.predicted_tau - tau_exact) / tau_exact
