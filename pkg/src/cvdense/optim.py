"""Deterministic 1-D maximization and root finding.

Golden-section search and bisection only: identical inputs give bit-identical
outputs, which keeps capacity tables and emitted CSV files reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

from .errors import BracketError, ContractViolationError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_MAX_TOL = 1e-8
DEFAULT_ROOT_TOL = 1e-6


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ContractViolationError(f"bracket requires hi > lo, got [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ContractViolationError(f"tolerance must be positive, got {self.tol}")


def _check_finite(fx: float, x: float) -> float:
    if math.isnan(fx):
        raise ContractViolationError(f"objective returned NaN at x={x}")
    return fx


def maximize_scalar(f: Callable[[float], float], bracket: Bracket) -> Tuple[float, float]:
    """Golden-section maximization of f on [lo, hi] to interval width <= tol.

    For a unimodal f the returned point is within tol of the true maximizer.
    -inf values are allowed (infeasible regions); NaN raises.
    """
    lo, hi = bracket.lo, bracket.hi
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc = _check_finite(f(c), c)
    fd = _check_finite(f(d), d)
    while hi - lo > bracket.tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = _check_finite(f(c), c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = _check_finite(f(d), d)
    # best of the interior probes and the endpoints of the original bracket
    candidates = [(c, fc), (d, fd), (bracket.lo, _check_finite(f(bracket.lo), bracket.lo)),
                  (bracket.hi, _check_finite(f(bracket.hi), bracket.hi))]
    x_opt, f_opt = max(candidates, key=lambda p: p[1])
    return x_opt, f_opt


def find_root_bisect(f: Callable[[float], float], bracket: Bracket) -> float:
    """Bisection root of f on [lo, hi]; endpoints must have opposite signs."""
    lo, hi = bracket.lo, bracket.hi
    flo = _check_finite(f(lo), lo)
    fhi = _check_finite(f(hi), hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})")
    while hi - lo > bracket.tol:
        mid = 0.5 * (lo + hi)
        fm = _check_finite(f(mid), mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def sign_change_scan(f: Callable[[float], float], lo: float, hi: float,
                     steps: int, tol: float = DEFAULT_ROOT_TOL) -> List[float]:
    """Scan [lo, hi] on a uniform grid and refine every sign change by bisection.

    Returns roots in ascending order; grid points where f is exactly zero are
    emitted once.  An empty list means no sign change was seen.
    """
    if steps < 2:
        raise ContractViolationError(f"need at least 2 scan steps, got {steps}")
    xs = [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]
    fs = [_check_finite(f(x), x) for x in xs]
    roots: List[float] = []
    for k in range(steps - 1):
        if fs[k] == 0.0:
            if not roots or abs(roots[-1] - xs[k]) > tol:
                roots.append(xs[k])
            continue
        if (fs[k] > 0) != (fs[k + 1] > 0) and fs[k + 1] != 0.0:
            roots.append(find_root_bisect(f, Bracket(xs[k], xs[k + 1], tol)))
    if fs[-1] == 0.0 and (not roots or abs(roots[-1] - xs[-1]) > tol):
        roots.append(xs[-1])
    return roots


def maximize_alternating(f: Callable[[float, float], float],
                         bracket_x: Bracket, bracket_y: Bracket,
                         coord_tol: float = 1e-6,
                         max_sweeps: int = 200) -> Tuple[Tuple[float, float], float]:
    """Alternating golden-section maximization of a two-variable function.

    Converges when both coordinates move by less than coord_tol across a full
    sweep.  Suited to smooth objectives with a single interior optimum.
    """
    x = 0.5 * (bracket_x.lo + bracket_x.hi)
    y = bracket_y.lo
    for _ in range(max_sweeps):
        x_new, _ = maximize_scalar(lambda u: f(u, y), bracket_x)
        y_new, _ = maximize_scalar(lambda v: f(x_new, v), bracket_y)
        moved = max(abs(x_new - x), abs(y_new - y))
        x, y = x_new, y_new
        if moved < coord_tol:
            break
    return (x, y), f(x, y)
