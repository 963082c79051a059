"""
Quantum numbers, q-deformed 6j symbols and q-Clebsch-Gordan coefficients
for U_q(sl2) at real q > 0.

Spins are passed as doubled integers (``two_j``), so spin 1/2 is ``1``.
"""

import logging
from functools import lru_cache
from typing import Dict

import numpy as np
from scipy.linalg import null_space

logger = logging.getLogger(__name__)


def qnumber(n: float, q: float) -> float:
    """[n]_q = (q^n - q^-n) / (q - q^-1); equals n at q = 1."""
    if abs(q - 1.0) < 1e-14:
        return float(n)
    return (q ** n - q ** (-n)) / (q - 1.0 / q)


@lru_cache(maxsize=4096)
def qfactorial(n: int, q: float) -> float:
    if n < 0:
        raise ValueError(f"negative q-factorial argument {n}")
    out = 1.0
    for k in range(2, n + 1):
        out *= qnumber(k, q)
    return out


def is_triad(two_a: int, two_b: int, two_c: int) -> bool:
    """Triangle condition with integer total spin."""
    return (
        (two_a + two_b + two_c) % 2 == 0
        and abs(two_a - two_b) <= two_c <= two_a + two_b
    )


def _delta(two_a: int, two_b: int, two_c: int, q: float) -> float:
    num = (
        qfactorial((two_a + two_b - two_c) // 2, q)
        * qfactorial((two_a - two_b + two_c) // 2, q)
        * qfactorial((-two_a + two_b + two_c) // 2, q)
    )
    return np.sqrt(num / qfactorial((two_a + two_b + two_c) // 2 + 1, q))


@lru_cache(maxsize=65536)
def q6j(j1: int, j2: int, j3: int, j4: int, j5: int, j6: int, q: float) -> float:
    """q-deformed 6j symbol {j1 j2 j3; j4 j5 j6} by the Racah single sum.

    Triads are (j1 j2 j3), (j1 j5 j6), (j4 j2 j6) and (j4 j5 j3). Returns 0
    when any triad is violated.
    """
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(is_triad(*t) for t in triads):
        return 0.0

    alphas = [sum(t) // 2 for t in triads]
    betas = [
        (j1 + j2 + j4 + j5) // 2,
        (j2 + j3 + j5 + j6) // 2,
        (j3 + j1 + j6 + j4) // 2,
    ]
    total = 0.0
    for t in range(max(alphas), min(betas) + 1):
        den = 1.0
        for a in alphas:
            den *= qfactorial(t - a, q)
        for b in betas:
            den *= qfactorial(b - t, q)
        total += (-1) ** t * qfactorial(t + 1, q) / den

    prefactor = 1.0
    for t in triads:
        prefactor *= _delta(*t, q)
    return prefactor * total


def recoupling(two_a: int, two_b: int, two_c: int, two_d: int,
               two_e: int, two_f: int, q: float) -> float:
    """Overlap <((ab)e c) d | (a (bc)f) d> of coupled q-spin states."""
    phase = (two_a + two_b + two_c + two_d) // 2
    return ((-1) ** phase) * np.sqrt(
        qnumber(two_e + 1, q) * qnumber(two_f + 1, q)
    ) * q6j(two_a, two_b, two_e, two_c, two_d, two_f, q)


def spin_operators(two_j: int, q: float):
    """(E, F, K) on the spin-j module; basis index k has m = j - k."""
    dim = two_j + 1
    E = np.zeros((dim, dim))
    K = np.zeros((dim, dim))
    for k in range(dim):
        two_m = two_j - 2 * k
        K[k, k] = q ** (two_m / 2.0)
        if k > 0:
            # E |m> = sqrt([j-m][j+m+1]) |m+1>
            E[k - 1, k] = np.sqrt(
                qnumber((two_j - two_m) // 2, q) * qnumber((two_j + two_m) // 2 + 1, q)
            )
    return E, E.T.copy(), K


@lru_cache(maxsize=1024)
def q_clebsch_gordan(two_a: int, two_b: int, q: float) -> Dict[int, np.ndarray]:
    """q-Clebsch-Gordan coefficients <a m_a; b m_b | c m_c>.

    Returns ``{two_c: C}`` with ``C[ia, ib, ic]`` in the index convention of
    :func:`spin_operators`. Each highest-weight vector has a positive
    component at m_a = a.
    """
    Ea, Fa, Ka = spin_operators(two_a, q)
    Eb, Fb, Kb = spin_operators(two_b, q)
    Kai, Kbi = np.linalg.inv(Ka), np.linalg.inv(Kb)
    dE = np.kron(Ea, Kb) + np.kron(Kai, Eb)
    dF = np.kron(Fa, Kb) + np.kron(Kai, Fb)

    da, db = two_a + 1, two_b + 1
    two_m_of = np.array(
        [(two_a - 2 * ia) + (two_b - 2 * ib) for ia in range(da) for ib in range(db)]
    )

    out: Dict[int, np.ndarray] = {}
    for two_c in range(abs(two_a - two_b), two_a + two_b + 1, 2):
        sub = np.flatnonzero(two_m_of == two_c)
        up = np.flatnonzero(two_m_of == two_c + 2)
        if len(up):
            kernel = null_space(dE[np.ix_(up, sub)])
        else:
            kernel = np.eye(len(sub))
        if kernel.shape[1] != 1:
            raise ArithmeticError(
                f"highest weight space for c={two_c}/2 in {two_a}/2 x {two_b}/2 "
                f"has dimension {kernel.shape[1]}"
            )
        hw = np.zeros(da * db)
        hw[sub] = kernel[:, 0]
        anchor = (two_b - (two_c - two_a)) // 2  # ia = 0 (m_a = a), m_b = c - a
        if hw[anchor] < 0:
            hw = -hw
        hw /= np.linalg.norm(hw)

        coeffs = np.zeros((da, db, two_c + 1))
        vec = hw
        for ic in range(two_c + 1):
            coeffs[:, :, ic] = vec.reshape(da, db)
            two_m = two_c - 2 * ic
            if ic < two_c:
                norm = np.sqrt(
                    qnumber((two_c + two_m) // 2, q) * qnumber((two_c - two_m) // 2 + 1, q)
                )
                vec = dF @ vec / norm
        out[two_c] = coeffs
    logger.debug(f"🔧 q-CG {two_a}/2 x {two_b}/2 at q={q}: channels {sorted(out)}")
    return out


def spin_label(two_j: int) -> str:
    """Canonical object label for a doubled spin: 0, 1/2, 1, 3/2, ..."""
    return str(two_j // 2) if two_j % 2 == 0 else f"{two_j}/2"


def parse_spin_label(label: str) -> int:
    text = str(label)
    if text.endswith("/2"):
        return int(text[:-2])
    return 2 * int(text)
