"""Lifted batch form of the finite-horizon plant.

Stacking the states X = [x_1; ...; x_N] and inputs U = [u_0; ...; u_{N-1}]
gives X = Phi Bbar U + Psi x0 with

* ``Phi``   block lower-triangular, block (i, j) = A^(i-j),
* ``Psi``   = [A; A^2; ...; A^N],
* ``Bbar``  = I_N (x) B,

and block-diagonal weights Qbar = diag(Q_1..Q_N) (Q_0 enters the cost
only through an additive constant) and Rbar = diag(R_0..R_{N-1}).

Restricting the input to a schedule S = {t_1 < ... < t_p} is expressed by
the selection matrices Stilde (rows of I_N) and S = Stilde (x) I_m.

For each control instant ``w`` the module also precomputes the PSD
"atom" of the cost expression,

    K({w}) = Qh Phi Bbar (E_w (x) R_w^{-1}) Bbar' Phi' Qh,

where Qh = Qbar^(1/2) and E_w is the single-entry diagonal matrix.  Each
atom has rank at most m and K(S) is simply the sum of the atoms of S,
which is what makes greedy evaluation and the certificate cheap.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DefinitenessError, NumericError
from .model import Instance, Schedule


def psd_sqrt(M: np.ndarray) -> np.ndarray:
    """Symmetric square root of a PSD matrix.

    Eigenvalues below zero (tiny negatives from roundoff) are clamped.
    """
    w, V = np.linalg.eigh((M + M.T) / 2.0)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def pd_inv_sqrt(M: np.ndarray) -> np.ndarray:
    """Symmetric inverse square root of a PD matrix."""
    w, V = np.linalg.eigh((M + M.T) / 2.0)
    if w[0] <= 0.0:
        raise DefinitenessError("matrix is not positive definite")
    return (V / np.sqrt(w)) @ V.T


def time_selector(schedule: Schedule, N: int) -> np.ndarray:
    """Stilde(S): one row of I_N per scheduled instant, in increasing order."""
    St = np.zeros((len(schedule), N))
    for row, t in enumerate(schedule):
        St[row, t] = 1.0
    return St


def selection_matrix(schedule: Schedule, N: int, m: int) -> np.ndarray:
    """S(S) = Stilde(S) (x) I_m, picking the scheduled input blocks out of U."""
    return np.kron(time_selector(schedule, N), np.eye(m))


@dataclass(frozen=True)
class LiftedSystem:
    """Precomputed batch matrices for one instance.

    ``W = Qbar^(1/2) Phi Bbar`` maps stacked inputs to weighted stacked
    states; ``PsiW = Qbar^(1/2) Psi`` maps the initial state likewise.
    ``atom_factors[w]`` is the (N*n, m) factor C_w with
    atoms[w] = C_w C_w'; the factors let callers form trace quantities
    without touching the full (N*n)^2 products.
    """

    inst: Instance
    Phi: np.ndarray
    Psi: np.ndarray
    Bbar: np.ndarray
    QbarHalf: np.ndarray
    Rbar: np.ndarray
    RbarInv: np.ndarray
    W: np.ndarray
    PsiW: np.ndarray
    atom_factors: np.ndarray  # (N, N*n, m)
    atoms: np.ndarray         # (N, N*n, N*n), atoms[w] PSD of rank <= m

    def k_sum(self, schedule: Schedule) -> np.ndarray:
        """K(S): sum of the atoms of the scheduled instants."""
        Nn = self.atoms.shape[1]
        if not schedule:
            return np.zeros((Nn, Nn))
        return self.atoms[list(schedule)].sum(axis=0)


def k_atom(lift: LiftedSystem, omega: int) -> np.ndarray:
    """K({omega}): the PSD rank-<=m contribution of one actuation instant."""
    omega = int(omega)
    if not 0 <= omega < lift.inst.N:
        raise ValueError(f"instant {omega} outside horizon of {lift.inst.N}")
    return lift.atoms[omega]


def _sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2.0


def build_lifted(inst: Instance) -> LiftedSystem:
    """Assemble the batch matrices and per-instant atoms for an instance.

    Raises NumericError if the powers of A overflow to non-finite values
    (very unstable plant over a long horizon).
    """
    n, m, N = inst.n, inst.m, inst.N
    A, B = inst.A, inst.B

    powers = [np.eye(n)]
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(N):
            powers.append(powers[-1] @ A)
    if not all(np.all(np.isfinite(P)) for P in powers):
        raise NumericError("powers of A overflow over this horizon")

    Phi = np.zeros((N * n, N * n))
    Psi = np.zeros((N * n, n))
    for i in range(N):
        Psi[i * n:(i + 1) * n] = powers[i + 1]
        for j in range(i + 1):
            Phi[i * n:(i + 1) * n, j * n:(j + 1) * n] = powers[i - j]

    Bbar = np.kron(np.eye(N), B)
    QbarHalf = scipy.linalg.block_diag(*(psd_sqrt(Q) for Q in inst.Qs[1:]))
    Rbar = scipy.linalg.block_diag(*inst.Rs)
    r_inv_halves = [pd_inv_sqrt(R) for R in inst.Rs]
    RbarInv = scipy.linalg.block_diag(*(_sym(Rh @ Rh) for Rh in r_inv_halves))

    W = QbarHalf @ Phi @ Bbar
    PsiW = QbarHalf @ Psi
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(PsiW))):
        raise NumericError("lifted matrices are not finite")

    atom_factors = np.empty((N, N * n, m))
    atoms = np.empty((N, N * n, N * n))
    for w in range(N):
        C = W[:, w * m:(w + 1) * m] @ r_inv_halves[w]
        atom_factors[w] = C
        atoms[w] = _sym(C @ C.T)

    for arr in (Phi, Psi, Bbar, QbarHalf, Rbar, RbarInv, W, PsiW,
                atom_factors, atoms):
        arr.flags.writeable = False

    return LiftedSystem(inst=inst, Phi=Phi, Psi=Psi, Bbar=Bbar,
                        QbarHalf=QbarHalf, Rbar=Rbar, RbarInv=RbarInv,
                        W=W, PsiW=PsiW, atom_factors=atom_factors,
                        atoms=atoms)
