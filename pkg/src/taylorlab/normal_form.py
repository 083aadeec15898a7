"""Homological equation on the low eigenfield band, and the conjugation.

Given the band of eigenfields phi_plus(j), j in [-2N, 2N+1], with
eigenvalues lambda_j, the band matrix Q solves

    (lambda_j - lambda_i) Q[j, i] = rhs(i, j)
    rhs(i, j) = -<C phi_i, phi_j> + <C_m P0 phi_i, P0 phi_j>,

where C is the symmetric drive, C_m its local part, and P0 the componentwise
profile projection.  Resonant pairs (lambda_i = lambda_j) fall into exactly
three structural families - the diagonal, the pair {0, 1}, and the pairs
{2k, -2k+1} - and on each of them the right-hand side vanishes; this module
verifies that numerically and raises if it fails, since a nonzero resonant
right-hand side would make the equation unsolvable.

By construction the solved equation is the band compression of

    [A, Q_N] = -P_N C P_N + S,     S = P0-compressed C_m on the band,

(A applied first in the bracket; the residual of this identity is the
stored commutator diagnostic).  S is independent of eps; the quadratic form
of S/eps on constrained fields stays bounded as eps shrinks, which is what
the scaling suite measures.

The conjugation d = (Id + eps Q_N) b and its inverse are well conditioned
only while eps ||Q|| < 1/2; outside that regime both directions raise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegimeViolation, ResonanceViolation
from .operators import (
    ModeField,
    OperatorMatrix,
    assemble_matrix,
    field_to_vector,
    proj_profile,
    vector_to_field,
)
from . import operators
from .spectral import SpectralBasis, band_matrix

__all__ = [
    "NormalFormData",
    "resonant_pairs",
    "homological_rhs",
    "build_normal_form",
    "conjugate",
    "unconjugate",
    "laplacian_commutator_norm",
]


def resonant_pairs(band: int):
    """Index pairs (i, j) in the band with structurally equal eigenvalues.

    Three families: the diagonal; the zero-eigenvalue pair {0, 1}; and
    {2k, -2k+1} for k != 0.  Returned sorted and deduplicated.
    """
    lo, hi = -2 * band, 2 * band + 1
    pairs = {(j, j) for j in range(lo, hi + 1)}
    pairs.add((0, 1))
    pairs.add((1, 0))
    for k in range(-band, band + 1):
        if k == 0:
            continue
        i, j = 2 * k, -2 * k + 1
        if lo <= i <= hi and lo <= j <= hi:
            pairs.add((i, j))
            pairs.add((j, i))
    return tuple(sorted(pairs))


def homological_rhs(ctx, basis: SpectralBasis, i: int, j: int) -> complex:
    """Right-hand side scalar, computed through operator applications.

    This functional route exists as the per-pair oracle; the batch
    construction in build_normal_form goes through dense matrices instead.
    """
    m = basis.truncation
    phi_i = basis.phi_plus(i)
    phi_j = basis.phi_plus(j)
    drive = operators.symmetric_drive(ctx, phi_i, out_truncation=m)
    first = -drive.inner(phi_j)
    local = operators.magnetostrophic_symmetric(ctx, proj_profile(ctx, phi_i), out_truncation=m)
    second = local.inner(proj_profile(ctx, phi_j))
    return complex(first + second)


@dataclass(frozen=True, eq=False)
class NormalFormData:
    """Band matrices of the homological construction, with diagnostics."""

    basis: SpectralBasis
    band: int
    lam: np.ndarray  # (4*band+2,) eigenvalues along the band indices
    q: np.ndarray  # (4*band+2)^2 solution of the homological equation
    s: np.ndarray  # same shape; eps-independent profile-compressed drive
    c_band: np.ndarray  # band compression of the symmetric drive
    resonant: tuple  # index pairs (i, j)
    resonance_residuals: np.ndarray  # |rhs| per resonant pair
    commutator_residual: float
    q_norm: float

    def __post_init__(self):
        for name in ("lam", "q", "s", "c_band", "resonance_residuals"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def indices(self) -> range:
        return range(-2 * self.band, 2 * self.band + 2)

    def position(self, j: int) -> int:
        if not (-2 * self.band <= j <= 2 * self.band + 1):
            raise IndexError(f"band index {j} outside [{-2 * self.band}, {2 * self.band + 1}]")
        return j + 2 * self.band

    def resonance_rows(self):
        """CSV-ready rows (i, j, lambda_i, lambda_j, |rhs|)."""
        rows = []
        for (i, j), res in zip(self.resonant, self.resonance_residuals):
            li = self.lam[self.position(i)]
            lj = self.lam[self.position(j)]
            rows.append((i, j, complex(li), complex(lj), float(res)))
        return rows

    def to_json(self) -> dict:
        def cmat(mat):
            return [[[float(z.real), float(z.imag)] for z in row] for row in mat]

        return {
            "band": self.band,
            "lambda": [[float(z.real), float(z.imag)] for z in self.lam],
            "q": cmat(self.q),
            "s": cmat(self.s),
            "resonant_pairs": [list(p) for p in self.resonant],
            "resonance_residuals": [float(r) for r in self.resonance_residuals],
            "commutator_residual": self.commutator_residual,
            "q_norm": self.q_norm,
        }


def _profile_projector_blocks(basis: SpectralBasis) -> np.ndarray:
    """Dense matrix of the componentwise profile projection at the window."""
    e0 = basis.ctx.e0.resample(basis.truncation).coeffs
    scalar = np.outer(e0, e0[::-1])
    w = scalar.shape[0]
    out = np.zeros((3 * w, 3 * w), dtype=np.complex128)
    for c in range(3):
        out[c * w : (c + 1) * w, c * w : (c + 1) * w] = scalar
    return out


def build_normal_form(
    ctx,
    basis: SpectralBasis,
    band: int,
    drive_matrix: OperatorMatrix | np.ndarray | None = None,
    local_matrix: OperatorMatrix | np.ndarray | None = None,
    resonance_tol: float = 1e-8,
) -> NormalFormData:
    """Solve the homological equation on the band; verify all vanishing claims.

    Dense route: compress the drive and its local part to the band, divide
    by eigenvalue differences off resonance, zero on resonance.  Raises
    ResonanceViolation if a resonant right-hand side fails to vanish, which
    would indicate a defect in the drive operator, not in this solver.
    """
    m = basis.truncation
    if drive_matrix is None:
        drive_matrix = assemble_matrix(
            lambda b: operators.symmetric_drive(ctx, b, out_truncation=m), m, label="drive"
        )
    if local_matrix is None:
        local_matrix = assemble_matrix(
            lambda b: operators.magnetostrophic_symmetric(ctx, b, out_truncation=m), m, label="local"
        )
    c_entries = drive_matrix.entries if isinstance(drive_matrix, OperatorMatrix) else drive_matrix
    m_entries = local_matrix.entries if isinstance(local_matrix, OperatorMatrix) else local_matrix

    phi = band_matrix(basis, band)
    indices = range(-2 * band, 2 * band + 2)
    lam = np.array([basis.lam(j) for j in indices])

    c_band = phi.conj().T @ (c_entries @ phi)
    p0_phi = _profile_projector_blocks(basis) @ phi
    s = p0_phi.conj().T @ (m_entries @ p0_phi)
    rhs = -c_band + s

    pairs = resonant_pairs(band)
    offset = 2 * band
    res_mask = np.zeros(rhs.shape, dtype=bool)
    residuals = np.zeros(len(pairs))
    for n, (i, j) in enumerate(pairs):
        res_mask[j + offset, i + offset] = True
        residuals[n] = abs(rhs[j + offset, i + offset])
    worst = residuals.max() if len(pairs) else 0.0
    if worst >= resonance_tol:
        raise ResonanceViolation(
            f"resonant right-hand side {worst:.3e} >= {resonance_tol:.1e}; "
            "the drive operator violates the vanishing structure"
        )

    denom = lam[:, None] - lam[None, :]  # (j, i) -> lambda_j - lambda_i
    safe = ~res_mask & (np.abs(denom) > 1e-13)
    q = np.zeros_like(rhs)
    q[safe] = rhs[safe] / denom[safe]

    commutator = np.diag(lam) @ q - q @ np.diag(lam) + c_band - s
    return NormalFormData(
        basis=basis,
        band=band,
        lam=lam,
        q=q,
        s=s,
        c_band=c_band,
        resonant=pairs,
        resonance_residuals=residuals,
        commutator_residual=float(np.linalg.norm(commutator, ord=2)),
        q_norm=float(np.linalg.norm(q, ord=2)),
    )


def _check_regime(nf: NormalFormData, eps: float):
    if eps * nf.q_norm >= 0.5:
        raise RegimeViolation(
            f"eps * ||Q|| = {eps * nf.q_norm:.3f} >= 0.5; the conjugation "
            "is outside its perturbative regime"
        )


def conjugate(nf: NormalFormData, b: ModeField, eps: float | None = None) -> ModeField:
    """d = b + eps * Q_N b with Q_N the band extension-by-zero of Q."""
    eps = nf.basis.ctx.eps if eps is None else eps
    _check_regime(nf, eps)
    phi = band_matrix(nf.basis, nf.band)
    vec = field_to_vector(b.resample(nf.basis.truncation))
    out = vec + eps * (phi @ (nf.q @ (phi.conj().T @ vec)))
    return vector_to_field(out, nf.basis.truncation)


def unconjugate(nf: NormalFormData, d: ModeField, eps: float | None = None) -> ModeField:
    """Invert the conjugation by a direct band-coordinate solve."""
    eps = nf.basis.ctx.eps if eps is None else eps
    _check_regime(nf, eps)
    phi = band_matrix(nf.basis, nf.band)
    vec = field_to_vector(d.resample(nf.basis.truncation))
    coords = phi.conj().T @ vec
    eye = np.eye(nf.q.shape[0])
    solved = np.linalg.solve(eye + eps * nf.q, coords)
    out = vec - eps * (phi @ (nf.q @ solved))
    return vector_to_field(out, nf.basis.truncation)


def laplacian_commutator_norm(nf: NormalFormData) -> float:
    """Operator norm of [Q_N, d33] on the ambient window."""
    phi = band_matrix(nf.basis, nf.band)
    m = nf.basis.truncation
    factors = (2j * np.pi * np.arange(-m, m + 1)) ** 2
    d2 = np.tile(factors, 3)
    q_full = phi @ nf.q @ phi.conj().T
    comm = q_full * d2[None, :] - d2[:, None] * q_full
    return float(np.linalg.norm(comm, ord=2))
