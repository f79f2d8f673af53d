"""Empirical certification of product formulas.

Error scans against an exact target, log-log order fits, the smallest
repetition count reaching a requested accuracy, and a finite-stencil
extraction of the leading terms of log(f(x)).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import matcore
from .errors import (BudgetExceededError, DegenerateScanError, DomainError,
                     InvalidInputError)
from .formula import GeneratorPair, ProductFormula, concat, repeat

NOISE_FLOOR = 1e-14
DEFAULT_XS = tuple(np.logspace(-2.0, -1.0, 20).tolist())
DEFAULT_WINDOW = (DEFAULT_XS[10], DEFAULT_XS[-1])


def _thread_count() -> int:
    raw = os.environ.get("TROTTERION_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise InvalidInputError("TROTTERION_THREADS must be an integer")
        return max(1, n)
    return os.cpu_count() or 1


def _map_grid(fn: Callable[[float], float], xs: Sequence[float]) -> list[float]:
    """Evaluate fn over the grid, in grid order; points are independent."""
    workers = _thread_count()
    if workers <= 1 or len(xs) < 4:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, xs))


@dataclass(frozen=True)
class ScanResult:
    """Rows of (x, error) plus the log-log fit over a window."""

    rows: tuple[tuple[float, float], ...]
    fit_window: tuple[float, float] | None
    slope: float | None
    intercept: float | None
    target: str

    def to_csv(self) -> str:
        lines = ["x,error"]
        for x, err in self.rows:
            lines.append(f"{x:.17g},{err:.17g}")
        return "\n".join(lines) + "\n"


def fit_loglog(rows: Sequence[tuple[float, float]],
               window: tuple[float, float] | None) -> tuple[float | None, float | None]:
    """Least-squares slope and intercept of log(err) vs log(x) in a window."""
    if window is None:
        selected = list(rows)
    else:
        lo, hi = window
        selected = [(x, e) for x, e in rows if lo <= x <= hi]
    selected = [(x, e) for x, e in selected if e > 0.0]
    if len(selected) < 2:
        return None, None
    logx = np.log([x for x, _ in selected])
    loge = np.log([e for _, e in selected])
    slope, intercept = np.polyfit(logx, loge, 1)
    return float(slope), float(intercept)


def commutator_target(gens: GeneratorPair) -> Callable[[float], np.ndarray]:
    comm = matcore.commutator(gens.a, gens.b)
    return lambda x: matcore.expm((x * x) * comm)


def sum_commutator_target(gens: GeneratorPair, R: float) -> Callable[[float], np.ndarray]:
    comm = matcore.commutator(gens.a, gens.b)
    base = gens.a + gens.b
    return lambda x: matcore.expm(x * base + (R * x * x) * comm)


def _resolve_target(gens: GeneratorPair, target, R: float | None):
    if callable(target):
        return target, "custom"
    if target == "commutator":
        return commutator_target(gens), "commutator"
    if target == "sum-commutator":
        if R is None:
            raise InvalidInputError("sum-commutator target needs a commutator weight R")
        return sum_commutator_target(gens, R), f"sum-commutator[R={R:.12g}]"
    raise InvalidInputError(f"unknown scan target {target!r}")


def error_scan(f: ProductFormula, gens: GeneratorPair,
               xs: Sequence[float] | None = None,
               target="commutator", R: float | None = None,
               window: tuple[float, float] | None = None) -> ScanResult:
    """Spectral-norm error ||f(x) - T(x)||_2 over a grid of x.

    The grid must be strictly increasing and positive. The log-log fit
    runs over `window` when given, otherwise over every row.
    """
    grid = list(DEFAULT_XS) if xs is None else [float(x) for x in xs]
    if not grid or any(x <= 0.0 for x in grid):
        raise InvalidInputError("scan grid must contain positive x values")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInputError("scan grid must be strictly increasing")
    target_fn, target_name = _resolve_target(gens, target, R)

    def one_point(x: float) -> float:
        return matcore.spectral_norm(f.evaluate(gens, x) - target_fn(x))

    errors = _map_grid(one_point, grid)
    rows = tuple(zip(grid, errors))
    slope, intercept = fit_loglog(rows, window)
    return ScanResult(rows=rows, fit_window=window, slope=slope,
                      intercept=intercept, target=target_name)


def estimate_order(f: ProductFormula, gens: GeneratorPair,
                   target="commutator", R: float | None = None) -> float:
    """Empirical order: log-log slope minus one on the standard grid.

    Scans the 20-point log grid on [0.01, 0.1] and fits the last 10
    points. An order-n formula has error O(x^(n+1)), so the returned
    value is slope - 1.
    """
    result = error_scan(f, gens, None, target=target, R=R, window=DEFAULT_WINDOW)
    if all(err < NOISE_FLOOR for _, err in result.rows):
        raise DegenerateScanError("scan errors sit at the noise floor; no order signal")
    if result.slope is None:
        raise DegenerateScanError("not enough usable points in the fit window")
    return result.slope - 1.0


def gates_to_accuracy(f: ProductFormula, gens: GeneratorPair, x: float,
                      eps: float, cap: int = 10**6) -> tuple[int, int]:
    """Smallest repetition count r with the repeated formula within eps.

    The error of r sqrt-scaled copies against exp(x^2 [A,B]) is probed by
    doubling r until it passes, then binary search for the first passing
    r. Returns (r, gate count of the simplified repeated formula).
    """
    if eps <= 0.0:
        raise InvalidInputError("accuracy eps must be positive")
    target = commutator_target(gens)(x)

    def err(r: int) -> float:
        # the r copies are identical matrices, so the repeated product is
        # a matrix power; this keeps large-r probes cheap
        step = f.evaluate(gens, x / math.sqrt(r))
        return matcore.spectral_norm(np.linalg.matrix_power(step, r) - target)

    r = 1
    while err(r) > eps:
        r *= 2
        if r > cap:
            raise BudgetExceededError(f"no repetition count up to {cap} reaches eps={eps}")
    lo, hi = max(1, r // 2), r
    while lo < hi:
        mid = (lo + hi) // 2
        if err(mid) <= eps:
            hi = mid
        else:
            lo = mid + 1
    return lo, _repeat_gate_count(f, lo)


def _repeat_gate_count(f: ProductFormula, r: int) -> int:
    """Gate count of repeat(f, r) without materializing the long formula.

    Simplification only merges across copy junctions, so the count is
    affine in r; the three-copy probe guards against junction merges
    that cascade further.
    """
    g1 = f.simplify().gate_count()
    if r == 1:
        return g1
    g2 = concat([f, f]).simplify().gate_count()
    drop = 2 * g1 - g2
    if r == 2:
        return g2
    g3 = concat([f, f, f]).simplify().gate_count()
    if g3 != 3 * g1 - 2 * drop:
        return repeat(f, r).gate_count()
    return r * g1 - (r - 1) * drop


@dataclass(frozen=True)
class BCHCoefficients:
    """Leading matrix coefficients of log(f(x)) = M1 x + M2 x^2 + M3 x^3 + ..."""

    order1: np.ndarray
    order2: np.ndarray
    order3: np.ndarray


def _stencil_logs(f: ProductFormula, gens: GeneratorPair, h: float) -> list[np.ndarray]:
    nodes = [h, 2.0 * h, 3.0 * h]
    logs = []
    for x in nodes:
        logs.append(matcore.logm_near_identity(f.evaluate(gens, x)))
        logs.append(matcore.logm_near_identity(f.evaluate(gens, -x)))
    return logs


def extract_bch(f: ProductFormula, gens: GeneratorPair,
                step: float = 1e-2) -> BCHCoefficients:
    """Extract M1, M2, M3 of log(f(x)) from a symmetric stencil.

    Evaluates log(f(x)) at +-(1, 2, 3) * step, splits into odd and even
    parts, and solves the scaled Vandermonde systems for the x, x^3, x^5
    and x^2, x^4, x^6 coefficients; aliasing of the first truncated term
    enters at O(step^4) relative. If the largest stencil point leaves the
    principal-log domain the stencil shrinks tenfold, once.
    """
    if step <= 0.0:
        raise InvalidInputError("stencil step must be positive")
    try:
        logs = _stencil_logs(f, gens, step)
    except DomainError:
        step /= 10.0
        logs = _stencil_logs(f, gens, step)
    dim = gens.dim
    odd = [(logs[2 * i] - logs[2 * i + 1]) / 2.0 for i in range(3)]
    even = [(logs[2 * i] + logs[2 * i + 1]) / 2.0 for i in range(3)]
    # Work in t = x / step so the 3x3 solves stay well conditioned.
    t = np.array([1.0, 2.0, 3.0])
    vand_odd = np.stack([t, t**3, t**5], axis=1)
    vand_even = np.stack([t**2, t**4, t**6], axis=1)
    rhs_odd = np.stack([m.reshape(-1) for m in odd])
    rhs_even = np.stack([m.reshape(-1) for m in even])
    sol_odd = np.linalg.solve(vand_odd, rhs_odd)
    sol_even = np.linalg.solve(vand_even, rhs_even)
    m1 = sol_odd[0].reshape(dim, dim) / step
    m3 = sol_odd[1].reshape(dim, dim) / step**3
    m2 = sol_even[0].reshape(dim, dim) / step**2
    return BCHCoefficients(order1=m1, order2=m2, order3=m3)
