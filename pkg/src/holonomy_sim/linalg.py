"""Dense complex linear algebra for small Hermitian problems (dim <= 8).

Everything the simulator needs from linear algebra lives here: a cyclic
Jacobi eigensolver for complex Hermitian matrices (scalar and stacked
variants), the Hermitian matrix exponential built on it, and the state
bookkeeping helpers (fidelity, populations, norm checks).  All functions
are pure and operate on plain numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 8

# Relative off-diagonal Frobenius norm at which a Jacobi sweep stops.
_JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 50

# Eigenvalue clusters closer than this (relative to the spectral scale)
# are treated as degenerate and re-orthonormalized.
_DEGENERACY_GAP = 1e-9


class HermiticityError(ValueError):
    """Operator fails the Hermiticity contract."""


class NormalizationError(ValueError):
    """State vector is not normalized to the required tolerance."""


class BasisError(ValueError):
    """Supplied basis is not orthonormal (or has the wrong shape)."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    values are sorted ascending; vectors holds the matching orthonormal
    eigenvectors as columns.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def require_hermitian(H: np.ndarray, rtol: float = 1e-12, name: str = "operator") -> np.ndarray:
    """Validate that ``H`` is square, small and Hermitian; return it as complex.

    Raises HermiticityError naming the worst off-symmetry entry.
    """
    A = np.asarray(H, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise HermiticityError(f"{name} must be a square matrix, got shape {A.shape}")
    if A.shape[0] > MAX_DIM:
        raise HermiticityError(f"{name} has dim {A.shape[0]}, supported maximum is {MAX_DIM}")
    dev = np.abs(A - A.conj().T)
    scale = np.max(np.abs(A))
    if scale > 0.0:
        k = np.unravel_index(int(np.argmax(dev)), dev.shape)
        if dev[k] >= rtol * scale:
            raise HermiticityError(
                f"{name} is not Hermitian: |H[{k[0]},{k[1]}] - conj(H[{k[1]},{k[0]}])| "
                f"= {dev[k]:.3e} exceeds {rtol:.1e} * max|H| = {rtol * scale:.3e}"
            )
    return A


def require_normalized(psi: np.ndarray, atol: float = 1e-9, name: str = "state") -> np.ndarray:
    """Validate unit norm (|norm^2 - 1| <= atol); return as a complex 1-d array."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    nrm2 = float(np.sum(v.real**2 + v.imag**2))
    if abs(nrm2 - 1.0) > atol:
        raise NormalizationError(f"{name} has squared norm {nrm2!r}, expected 1 within {atol:.1e}")
    return v


def eigh_stack(H: np.ndarray, max_sweeps: int = _JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a stack of Hermitian matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    H : array, shape (m, n, n) or (n, n)
        Hermitian matrices.  Hermiticity is checked against the 1e-12
        relative contract before any work is done.

    Returns
    -------
    values : (m, n) real, ascending along the last axis
    vectors : (m, n, n) complex, orthonormal columns matching ``values``

    Sweeps run until the off-diagonal Frobenius norm of every matrix in
    the stack falls below 1e-14 of its total Frobenius norm (at most 50
    sweeps).  The construction applies only exact unitary plane rotations,
    so the eigenvector columns are orthonormal to round-off regardless of
    degeneracies in the spectrum.
    """
    A = np.asarray(H, dtype=complex)
    squeeze = A.ndim == 2
    if squeeze:
        A = A[None]
    m, n, n2 = A.shape
    if n != n2:
        raise HermiticityError(f"expected square matrices, got shape {A.shape}")
    if n > MAX_DIM:
        raise HermiticityError(f"dim {n} exceeds supported maximum {MAX_DIM}")
    scale = np.max(np.abs(A), axis=(1, 2))
    dev = np.max(np.abs(A - np.conj(np.transpose(A, (0, 2, 1)))), axis=(1, 2))
    bad = dev > 1e-12 * np.where(scale == 0.0, 1.0, scale)
    if np.any(bad):
        k = int(np.argmax(bad))
        require_hermitian(A[k], name=f"stack element {k}")
    A = A.copy()
    V = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()
    fro = np.sqrt(np.sum(A.real**2 + A.imag**2, axis=(1, 2)))
    tol = _JACOBI_TOL * np.where(fro == 0.0, 1.0, fro)
    # Elements this far below the matrix scale cannot move a double-precision
    # eigenvalue; rotating them only risks overflow in the rotation angles.
    skip = 0.01 * np.finfo(float).eps * fro
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(max_sweeps):
        offsq = np.zeros(m)
        for p, q in pairs:
            offsq += A[:, p, q].real ** 2 + A[:, p, q].imag ** 2
        if np.all(np.sqrt(2.0 * offsq) <= tol):
            break
        for p, q in pairs:
            apq = A[:, p, q].copy()
            r = np.abs(apq)
            act = r > skip
            rsafe = np.where(act, r, 1.0)
            phase = np.where(act, apq, rsafe) / rsafe
            tau = (A[:, q, q].real - A[:, p, p].real) / (2.0 * rsafe)
            t = np.where(tau == 0.0, 1.0, np.sign(tau)) / (np.abs(tau) + np.hypot(1.0, tau))
            cth = 1.0 / np.hypot(1.0, t)
            sth = np.where(act, t * cth, 0.0)
            cth = np.where(act, cth, 1.0)
            # Plane rotation J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on (p, q).
            jpp = cth
            jpq = sth
            jqp = -sth * np.conj(phase)
            jqq = cth * np.conj(phase)
            colp = A[:, :, p] * jpp[:, None] + A[:, :, q] * jqp[:, None]
            colq = A[:, :, p] * jpq[:, None] + A[:, :, q] * jqq[:, None]
            A[:, :, p] = colp
            A[:, :, q] = colq
            rowp = np.conj(jpp)[:, None] * A[:, p, :] + np.conj(jqp)[:, None] * A[:, q, :]
            rowq = np.conj(jpq)[:, None] * A[:, p, :] + np.conj(jqq)[:, None] * A[:, q, :]
            A[:, p, :] = rowp
            A[:, q, :] = rowq
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            A[:, p, p] = A[:, p, p].real
            A[:, q, q] = A[:, q, q].real
            vcolp = V[:, :, p] * jpp[:, None] + V[:, :, q] * jqp[:, None]
            vcolq = V[:, :, p] * jpq[:, None] + V[:, :, q] * jqq[:, None]
            V[:, :, p] = vcolp
            V[:, :, q] = vcolq
    w = np.einsum("kii->ki", A).real.copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    if squeeze:
        return w[0], V[0]
    return w, V


def _reorthonormalize_clusters(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Gram-Schmidt within numerically degenerate eigenvalue clusters.

    Jacobi already returns orthonormal columns; this pass only pins down
    the guarantee that no downstream code depends on the particular basis
    chosen inside a degenerate cluster.
    """
    n = values.shape[0]
    scale = max(float(np.max(np.abs(values))), 1e-300)
    out = vectors.copy()
    start = 0
    for k in range(1, n + 1):
        boundary = k == n or (values[k] - values[k - 1]) > _DEGENERACY_GAP * scale
        if boundary:
            if k - start > 1:
                block, _ = np.linalg.qr(out[:, start:k])
                # keep the phase convention of the incoming columns
                for j in range(block.shape[1]):
                    ov = np.vdot(block[:, j], out[:, start + j])
                    if abs(ov) > 0:
                        block[:, j] *= ov / abs(ov)
                out[:, start:k] = block
            start = k
    return out


def hermitian_eig(H: np.ndarray) -> EigenSystem:
    """Eigendecomposition of one Hermitian matrix (dim <= 8).

    Eigenvalues come back ascending with orthonormal eigenvector columns;
    output is a deterministic function of the input.
    """
    A = require_hermitian(H, name="hermitian_eig input")
    w, V = eigh_stack(A)
    V = _reorthonormalize_clusters(w, V)
    return EigenSystem(values=w, vectors=V)


def expm_i_hermitian(H: np.ndarray, s: float) -> np.ndarray:
    """Unitary exp(-i * s * H) for Hermitian H via eigendecomposition."""
    if not np.isfinite(s):
        raise ValueError(f"duration must be finite, got {s!r}")
    eig = hermitian_eig(H)
    phases = np.exp(-1j * float(s) * eig.values)
    return (eig.vectors * phases) @ eig.vectors.conj().T


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized states of equal dimension.

    Symmetric in its arguments and invariant under global phases.
    """
    va = require_normalized(a, atol=1e-8, name="first state")
    vb = require_normalized(b, atol=1e-8, name="second state")
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape[0]} vs {vb.shape[0]}")
    return float(abs(np.vdot(va, vb)) ** 2)


def _basis_matrix(basis: EigenSystem | np.ndarray) -> np.ndarray:
    cols = basis.vectors if isinstance(basis, EigenSystem) else np.asarray(basis, dtype=complex)
    if cols.ndim != 2:
        raise BasisError(f"basis must be a matrix of column vectors, got shape {cols.shape}")
    gram = cols.conj().T @ cols
    if np.max(np.abs(gram - np.eye(cols.shape[1]))) > 1e-9:
        raise BasisError("basis columns are not orthonormal within 1e-9")
    return cols


def populations(psi: np.ndarray, basis: EigenSystem | np.ndarray) -> np.ndarray:
    """Projections |<basis_k|psi>|^2 onto an orthonormal column set.

    Sums to 1 (within round-off) when the basis is complete and psi is
    normalized.
    """
    v = np.asarray(psi, dtype=complex).reshape(-1)
    cols = _basis_matrix(basis)
    if cols.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: state {v.shape[0]}, basis {cols.shape[0]}")
    amps = cols.conj().T @ v
    return (amps.real**2 + amps.imag**2).astype(float)
