"""Exact small-dimension simulation of symmetric time evolution.

A toy universe is a Hermitian pair (H_F, H_B = T H_F T^-1) on C^d, an initial
state psi0 and a step tau.  Time reversal T is complex conjugation in the
standard basis, so H_B = conj(H_F) and T violation is i[H_F, H_B] != 0.

One step of symmetric evolution applies U_F(tau) + U_B(tau) with
U_F = exp(-i tau H_F) and U_B = exp(+i tau H_B).  N steps expand into S_{N-n,n},
the sum over all orderings of n forward and N-n backward factors.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, EnumerationCapExceeded, NotHermitian
from .interference import PathCount, interference_qrecursion

MAX_DIM = 16
ENUMERATION_CAP = 10**5
HERMITIAN_TOL = 1e-12
SPECTRAL_GAP_TOL = 1e-9


def _is_hermitian(h, tol=HERMITIAN_TOL):
    scale = max(1.0, float(np.max(np.abs(h))))
    return np.allclose(h, h.conj().T, rtol=0.0, atol=tol * scale)


def expm_hermitian(h, t):
    """exp(-1j * t * h) for Hermitian h, via its eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def time_reverse(h):
    """T h T^-1 with T = complex conjugation in the standard basis."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or not _is_hermitian(h):
        raise NotHermitian("time_reverse expects a square Hermitian matrix")
    return h.conj()


@dataclass(frozen=True, eq=False)
class ToyUniverse:
    h_forward: np.ndarray
    h_backward: np.ndarray
    psi0: np.ndarray
    tau: float

    def __post_init__(self):
        hf = np.array(self.h_forward, dtype=complex)
        hb = np.array(self.h_backward, dtype=complex)
        psi0 = np.array(self.psi0, dtype=complex).reshape(-1)
        d = psi0.shape[0]
        if not 1 <= d <= MAX_DIM:
            raise DomainError(f"dimension must be in 1..{MAX_DIM}, got {d}")
        for name, h in (("H_F", hf), ("H_B", hb)):
            if h.shape != (d, d):
                raise DomainError(f"{name} has shape {h.shape}, expected {(d, d)}")
            if not _is_hermitian(h):
                raise NotHermitian(f"{name} is not Hermitian")
        if abs(np.linalg.norm(psi0) - 1.0) > HERMITIAN_TOL:
            raise DomainError(f"psi0 must have unit norm, got {np.linalg.norm(psi0)}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise DomainError(f"tau must be finite and positive, got {self.tau}")
        for arr in (hf, hb, psi0):
            arr.setflags(write=False)
        object.__setattr__(self, "h_forward", hf)
        object.__setattr__(self, "h_backward", hb)
        object.__setattr__(self, "psi0", psi0)
        object.__setattr__(self, "tau", float(self.tau))

    @classmethod
    def from_forward(cls, h_forward, psi0, tau) -> ToyUniverse:
        """Build the universe with H_B = T H_F T^-1."""
        return cls(h_forward, time_reverse(h_forward), psi0, tau)

    @property
    def dim(self) -> int:
        return self.psi0.shape[0]

    def commutator(self):
        """i[H_F, H_B], a Hermitian matrix."""
        hf, hb = self.h_forward, self.h_backward
        return 1j * (hf @ hb - hb @ hf)


def random_hermitian(dim: int, rng) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_universe(dim: int, seed: int, tau: float, normalize: bool = False) -> ToyUniverse:
    """Random H_F (Gaussian real and imaginary parts, symmetrised) and random psi0.

    With ``normalize`` H_F is divided by its spectral norm.
    """
    rng = np.random.default_rng(seed)
    hf = random_hermitian(dim, rng)
    if normalize:
        hf = hf / np.linalg.norm(hf, 2)
    psi0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return ToyUniverse.from_forward(hf, psi0 / np.linalg.norm(psi0), tau)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli_universe(tau: float, scale: float = 1.0, psi0=(1.0, 0.0)) -> ToyUniverse:
    """H_F = scale * (sigma_x + sigma_y)/2, for which i[H_F, H_B] = scale^2 * sigma_z."""
    psi0 = np.asarray(psi0, dtype=complex)
    return ToyUniverse.from_forward(scale * (SIGMA_X + SIGMA_Y) / 2, psi0 / np.linalg.norm(psi0), tau)


def step_operators(u: ToyUniverse):
    """(U_F, U_B) = (exp(-i tau H_F), exp(+i tau H_B))."""
    return expm_hermitian(u.h_forward, u.tau), expm_hermitian(u.h_backward, -u.tau)


class EvolutionRecord(NamedTuple):
    N: int
    state: np.ndarray
    components: list


def path_components(u: ToyUniverse, N: int) -> list:
    """[S_{N-n,n} psi0 for n = 0..N], built by the exact recurrence on the last factor.

    S^{(N)}_n = U_F S^{(N-1)}_{n-1} + U_B S^{(N-1)}_n, O(N^2) matrix-vector products.
    """
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    uf, ub = step_operators(u)
    comps = [u.psi0.copy()]
    for _ in range(N):
        nxt = [ub @ comps[0]]
        for n in range(1, len(comps)):
            nxt.append(uf @ comps[n - 1] + ub @ comps[n])
        nxt.append(uf @ comps[-1])
        comps = nxt
    return comps


def symmetric_evolve(u: ToyUniverse, N: int) -> EvolutionRecord:
    """(U_F + U_B)^N psi0 by repeated application, plus its S_{N-n,n} psi0 parts."""
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    uf, ub = step_operators(u)
    step = uf + ub
    state = u.psi0.copy()
    for _ in range(N):
        state = step @ state
    return EvolutionRecord(N, state, path_components(u, N))


def check_enumeration_cap(m: int, n: int, cap: int = ENUMERATION_CAP):
    count = math.comb(m + n, n)
    if count > cap:
        raise EnumerationCapExceeded(f"C({m + n},{n}) = {count} orderings exceeds cap {cap}")


def enumerate_S(u: ToyUniverse, m: int, n: int, cap: int = ENUMERATION_CAP):
    """S_{m,n}: explicit sum over every ordering of m U_B and n U_F factors."""
    check_enumeration_cap(m, n, cap)
    uf, ub = step_operators(u)
    total = np.zeros((u.dim, u.dim), dtype=complex)
    for forward_slots in itertools.combinations(range(m + n), n):
        chosen = set(forward_slots)
        prod = np.eye(u.dim, dtype=complex)
        for slot in range(m + n):
            prod = prod @ (uf if slot in chosen else ub)
        total += prod
    return total


def _reorder_prefix(u: ToyUniverse, m: int, n: int):
    """U_B(m tau) U_F(n tau)."""
    return expm_hermitian(u.h_backward, -m * u.tau) @ expm_hermitian(u.h_forward, n * u.tau)


def reordered_S_approx(u: ToyUniverse, m: int, n: int, cap: int = ENUMERATION_CAP):
    """U_B(m tau) U_F(n tau) * sum over the nested indices of exp(s tau^2 [H_F, H_B]).

    Equal to S_{m,n} up to O(tau^3).  exp(s tau^2 [H_F, H_B]) is evaluated
    exactly as exp(-i s tau^2 K) with K = i[H_F, H_B] Hermitian.
    """
    check_enumeration_cap(m, n, cap)
    k = u.commutator()
    counts = Counter(
        sum(seq) for seq in itertools.combinations_with_replacement(range(m + 1), n)
    )
    total = np.zeros((u.dim, u.dim), dtype=complex)
    for s, count in counts.items():
        total += count * expm_hermitian(k, s * u.tau**2)
    return _reorder_prefix(u, m, n) @ total


class CommutatorSpectrum(NamedTuple):
    eigenvalues: np.ndarray
    projectors: list


def commutator_spectrum(u: ToyUniverse, gap_tol: float = SPECTRAL_GAP_TOL) -> CommutatorSpectrum:
    """Distinct eigenvalues of i[H_F, H_B] with their orthogonal projectors.

    Eigenvalues closer than gap_tol * ||i[H_F, H_B]|| are merged into one
    eigenspace, represented by the mean eigenvalue.
    """
    k = u.commutator()
    k = (k + k.conj().T) / 2
    w, v = np.linalg.eigh(k)
    tol = gap_tol * np.linalg.norm(k, 2)
    groups = [[0]]
    for idx in range(1, len(w)):
        if w[idx] - w[groups[-1][-1]] <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    eigenvalues = np.array([w[g].mean() for g in groups])
    projectors = [v[:, g] @ v[:, g].conj().T for g in groups]
    return CommutatorSpectrum(eigenvalues, projectors)


def spectral_S(u: ToyUniverse, m: int, n: int, spectrum: CommutatorSpectrum | None = None):
    """U_B(m tau) U_F(n tau) * sum_j I_{m,n}(tau^2 lambda_j) Pi_j."""
    if spectrum is None:
        spectrum = commutator_spectrum(u)
    pc = PathCount.from_mn(m, n)
    total = np.zeros((u.dim, u.dim), dtype=complex)
    for lam, proj in zip(spectrum.eigenvalues, spectrum.projectors):
        total += interference_qrecursion(pc, u.tau**2 * lam) * proj
    return _reorder_prefix(u, m, n) @ total


def zero_eigenspace_projector(u: ToyUniverse, spectrum: CommutatorSpectrum | None = None,
                              band: float = SPECTRAL_GAP_TOL):
    """Projector onto eigenvalues |lambda| <= band * ||i[H_F, H_B]|| (zero matrix if none)."""
    if spectrum is None:
        spectrum = commutator_spectrum(u)
    # floor at rounding level so a commutator that is zero up to roundoff counts as zero
    floor = 64 * np.finfo(float).eps * np.linalg.norm(u.h_forward, 2) * np.linalg.norm(u.h_backward, 2)
    cut = max(band * np.linalg.norm(u.commutator(), 2), floor)
    proj = np.zeros((u.dim, u.dim), dtype=complex)
    for lam, p in zip(spectrum.eigenvalues, spectrum.projectors):
        if abs(lam) <= cut:
            proj += p
    return proj


def check_nonzero_eigenvalue_condition(u: ToyUniverse, tol: float = 1e-9) -> bool:
    """True iff psi0 has (numerically) no component in the zero eigenspace of i[H_F, H_B]."""
    return bool(np.linalg.norm(zero_eigenspace_projector(u) @ u.psi0) <= tol)


def bievolution_reference(u: ToyUniverse, N: int):
    """[U_F(N tau) + U_B(N tau)] psi0, unnormalised."""
    if N < 0:
        raise DomainError(f"N must be non-negative, got {N}")
    t = N * u.tau
    return (expm_hermitian(u.h_forward, t) + expm_hermitian(u.h_backward, -t)) @ u.psi0


class BievolutionReport(NamedTuple):
    fidelity_deficit: float
    boundary_mass_fraction: float
    norm_ratio: float


def boundary_mass_fraction(components, band: int = 1) -> float:
    """Share of sum_n ||S_{N-n,n} psi0||^2 carried by n <= band or n >= N - band."""
    weights = np.array([np.vdot(c, c).real for c in components])
    N = len(components) - 1
    n = np.arange(N + 1)
    edge = (n <= band) | (n >= N - band)
    total = weights.sum()
    return float(weights[edge].sum() / total) if total > 0 else 1.0


def bievolution_error(u: ToyUniverse, N: int, band: int = 1, enumerate_paths: bool = False,
                      cap: int = ENUMERATION_CAP) -> BievolutionReport:
    """How far the N-step state is from the bievolution approximation.

    fidelity_deficit = 1 - |<Psi|Phi>| for the normalised full state Psi and
    normalised reference Phi; boundary_mass_fraction as in
    :func:`boundary_mass_fraction`; norm_ratio = ||Psi|| / ||Phi||.  With
    ``enumerate_paths`` the components come from explicit enumeration of the
    orderings (subject to ``cap``) instead of the recurrence.
    """
    if enumerate_paths:
        check_enumeration_cap(N - N // 2, N // 2, cap)
        comps = [enumerate_S(u, N - n, n, cap) @ u.psi0 for n in range(N + 1)]
        state = np.sum(comps, axis=0)
    else:
        record = symmetric_evolve(u, N)
        comps, state = record.components, record.state
    ref = bievolution_reference(u, N)
    norm_state, norm_ref = np.linalg.norm(state), np.linalg.norm(ref)
    if norm_state == 0 or norm_ref == 0:
        deficit = 1.0
    else:
        overlap = abs(np.vdot(ref, state)) / (norm_state * norm_ref)
        deficit = float(min(1.0, max(0.0, 1.0 - overlap)))
    ratio = norm_state / norm_ref if norm_ref > 0 else math.inf
    return BievolutionReport(deficit, boundary_mass_fraction(comps, band), float(ratio))
