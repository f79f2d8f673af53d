"""Periodic 1d hopping chain with commutator-generated diagonal bonds.

Nearest-neighbor bonds split into two mutually commuting halves (even
and odd bonds); their commutator produces the alternating imaginary
next-nearest-neighbor bonds of the effective Hamiltonian. Everything
runs in the single-particle sector, where each Hamiltonian is an LxL
matrix on modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..certify import ScanResult, fit_loglog
from ..errors import InvalidInputError
from ..formula import GeneratorPair
from ..matcore import commutator, expm, spectral_norm
from .common import f_r_signed, quiet_small_r

DEFAULT_STEP_GRID = (8, 16, 32, 64, 128, 256)


@dataclass(frozen=True)
class ChainConfig:
    L: int
    t1: float
    t2: float
    T: float
    n: int | None = None

    def __post_init__(self) -> None:
        if self.L < 4 or self.L % 2 != 0:
            raise InvalidInputError("chain length must be even and at least 4")
        if not (self.T > 0.0) or not math.isfinite(self.T):
            raise InvalidInputError("total time must be positive and finite")
        if self.t1 == 0.0:
            raise InvalidInputError("nearest-neighbor amplitude must be nonzero")
        if self.n is not None and self.n < 1:
            raise InvalidInputError("step count must be at least 1")


def chain_hoppings(cfg: ChainConfig) -> tuple[np.ndarray, np.ndarray]:
    """Even-bond and odd-bond halves of the nearest-neighbor hopping.

    Each half is a real-symmetric permutation-like matrix whose 2x2
    bond blocks have disjoint support, so its terms pairwise commute.
    The odd half carries the periodic wrap bond.
    """
    L = cfg.L
    h0 = np.zeros((L, L), dtype=complex)
    h1 = np.zeros((L, L), dtype=complex)
    for j in range(0, L, 2):
        h0[j, j + 1] = h0[j + 1, j] = 1.0
    for j in range(1, L, 2):
        k = (j + 1) % L
        h1[j, k] = h1[k, j] = 1.0
    return h0, h1


def chain_heff(cfg: ChainConfig) -> np.ndarray:
    """Effective Hamiltonian: both bond halves plus their weighted commutator."""
    h0, h1 = chain_hoppings(cfg)
    return cfg.t1 * (h0 + h1) + 1j * cfg.t2 * commutator(h0, h1)


def chain_gate_count(cfg: ChainConfig, n: int) -> int:
    """Elementary bond exponentials for an n-step run: 6 blocks of L/2 each."""
    return 3 * n * cfg.L


def chain_error(cfg: ChainConfig, n: int) -> float:
    """Distance of the n-step product from the exact effective evolution.

    One step is the signed 6-gate sum-plus-commutator formula at
    argument -t1*T/n with weight chosen so the n-fold product targets
    exp(-i*T*Heff); the weight grows linearly with n, which is what
    limits the composite to 1/n convergence.
    """
    h0, h1 = chain_hoppings(cfg)
    gens = GeneratorPair(1j * h0, 1j * h1)
    alpha = -cfg.t1 * cfg.T
    beta = -cfg.t2 * cfg.T
    R = beta * n / alpha**2
    with quiet_small_r():
        step = f_r_signed(R).evaluate(gens, alpha / n)
    product = np.linalg.matrix_power(step, n)
    exact = expm(-1j * cfg.T * chain_heff(cfg))
    return spectral_norm(product - exact)


def chain_simulate(cfg: ChainConfig, ns: Sequence[int] | None = None) -> ScanResult:
    """Error of the n-step product over a grid of step counts.

    The log-log fit of error against n runs over the full grid; the
    expected slope is -1.
    """
    if ns is None:
        ns = (cfg.n,) if cfg.n is not None else DEFAULT_STEP_GRID
    grid = [int(n) for n in ns]
    if not grid or any(n < 1 for n in grid):
        raise InvalidInputError("step grid must contain positive counts")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInputError("step grid must be strictly increasing")
    rows = tuple((float(n), chain_error(cfg, n)) for n in grid)
    window = (float(grid[0]), float(grid[-1]))
    slope, intercept = fit_loglog(rows, window)
    return ScanResult(rows=rows, fit_window=window, slope=slope,
                      intercept=intercept, target="custom")
