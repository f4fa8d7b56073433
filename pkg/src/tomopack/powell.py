"""Derivative-free minimization: Powell's direction-set method (1964)
with a bracketing line search refined by golden-section/parabolic steps.

No gradients anywhere; the only structure assumed of the objective is that
it is finite at the start point.  Everything is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GOLDEN_RATIO",
    "PowellConfig",
    "LineResult",
    "PowellResult",
    "line_minimize",
    "powell_minimize",
]

GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0
_CGOLD = 2.0 - GOLDEN_RATIO  # golden-section fraction 0.381966...
_TINY = 1e-20


@dataclass(frozen=True)
class PowellConfig:
    """Knobs for one Powell run.

    max_iterations counts full direction sweeps.  f_tol is the relative
    objective decrease over a sweep below which the run stops; x_tol is the
    line-search parameter tolerance.
    """

    max_iterations: int = 200
    f_tol: float = 1e-10
    x_tol: float = 1e-10
    bracket_growth: float = GOLDEN_RATIO
    max_line_evals: int = 100

    def __post_init__(self):
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.f_tol <= 0 or self.x_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.bracket_growth <= 1.0:
            raise ValueError("bracket_growth must exceed 1")
        if self.max_line_evals <= 0:
            raise ValueError("max_line_evals must be positive")


@dataclass(frozen=True)
class LineResult:
    t: float
    fval: float
    evals: int
    bracketed: bool


@dataclass
class PowellResult:
    x: np.ndarray
    fun: float
    nit: int
    nfev: int
    converged: bool
    history: list = field(default_factory=list)  # objective after each sweep


def line_minimize(
    f,
    t0: float = 1.0,
    *,
    x_tol: float = 1e-10,
    growth: float = GOLDEN_RATIO,
    max_evals: int = 100,
    f_origin: float | None = None,
) -> LineResult:
    """Minimize a 1-D function starting from the points t=0 and t=t0.

    First brackets a minimum by geometric expansion downhill from (0, t0)
    (searching toward negative t if f(t0) > f(0)), then refines inside the
    bracket with Brent-style parabolic/golden steps down to x_tol.  If no
    bracket is found within max_evals the best sampled point is returned
    with ``bracketed=False``.  The result never lies above f(0).
    """
    if t0 == 0.0:
        raise ValueError("t0 must be nonzero")
    evals = 0

    def call(t):
        nonlocal evals
        evals += 1
        return float(f(t))

    a, fa = 0.0, (call(0.0) if f_origin is None else float(f_origin))
    f0 = fa
    b, fb = float(t0), call(t0)
    if fb > fa:
        a, b = b, a
        fa, fb = fb, fa
    c = b + growth * (b - a)
    fc = call(c)
    while fc < fb:
        if evals >= max_evals:
            # still descending; report the farthest (best) sample
            t_best, f_best = (c, fc) if fc <= f0 else (0.0, f0)
            return LineResult(t=t_best, fval=f_best, evals=evals, bracketed=False)
        a, fa = b, fb
        b, fb = c, fc
        c = b + growth * (b - a)
        fc = call(c)

    lo, hi = (a, c) if a < c else (c, a)
    x, fx = b, fb
    # Brent refinement: parabolic step when trustworthy, golden otherwise.
    w = v = x
    fw = fv = fx
    d = e = 0.0
    while evals < max_evals:
        m = 0.5 * (lo + hi)
        tol1 = x_tol * abs(x) + x_tol
        tol2 = 2.0 * tol1
        if abs(x - m) <= tol2 - 0.5 * (hi - lo):
            break
        use_golden = True
        if abs(e) > tol1:
            # parabola through (x, fx), (w, fw), (v, fv)
            r = (x - w) * (fx - fv)
            qd = (x - v) * (fx - fw)
            p = (x - v) * qd - (x - w) * r
            qd = 2.0 * (qd - r)
            if qd > 0.0:
                p = -p
            qd = abs(qd)
            e_prev = e
            e = d
            if abs(p) < abs(0.5 * qd * e_prev) and qd * (lo - x) < p < qd * (hi - x):
                d = p / qd
                u = x + d
                if (u - lo) < tol2 or (hi - u) < tol2:
                    d = tol1 if x < m else -tol1
                use_golden = False
        if use_golden:
            e = (hi - x) if x < m else (lo - x)
            d = _CGOLD * e
        u = x + (d if abs(d) >= tol1 else (tol1 if d > 0 else -tol1))
        fu = call(u)
        if fu <= fx:
            if u >= x:
                lo = x
            else:
                hi = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                lo = u
            else:
                hi = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    if fx > f0:
        return LineResult(t=0.0, fval=f0, evals=evals, bracketed=True)
    return LineResult(t=x, fval=fx, evals=evals, bracketed=True)


def _directions_degenerate(directions: np.ndarray) -> bool:
    """True when the direction set has (numerically) lost full rank."""
    norms = np.linalg.norm(directions, axis=1)
    if np.any(norms == 0.0):
        return True
    sign, logdet = np.linalg.slogdet(directions / norms[:, None])
    return sign == 0 or logdet < np.log(1e-12)


def powell_minimize(f, x0, cfg: PowellConfig = PowellConfig(), callback=None) -> PowellResult:
    """Minimize f from x0 by Powell's method of successive line searches.

    Each sweep line-minimizes along every direction in the current set,
    then applies Powell's acceptance test on the extrapolated point to
    decide whether the sweep's net displacement replaces the direction of
    largest decrease.  The set is reset to the coordinate axes if it ever
    degenerates.  Stops when the relative decrease over a full sweep falls
    below f_tol or after max_iterations sweeps.

    ``callback(x, fval, nfev, sweep)`` runs after every sweep.
    """
    x = np.array(x0, dtype=float).reshape(-1).copy()
    n = x.size
    nfev = 0

    def ff(z):
        nonlocal nfev
        nfev += 1
        return float(f(z))

    f_cur = ff(x)
    if not np.isfinite(f_cur):
        raise ValueError(f"objective is not finite at x0 ({f_cur})")

    directions = np.eye(n)
    history: list[float] = []
    converged = False
    nit = 0
    for sweep in range(1, cfg.max_iterations + 1):
        nit = sweep
        f_start = f_cur
        x_start = x.copy()
        delta = 0.0
        big = 0
        for i in range(n):
            u = directions[i]
            f_prev = f_cur
            line = line_minimize(
                lambda t: ff(x + t * u),
                t0=1.0,
                x_tol=cfg.x_tol,
                growth=cfg.bracket_growth,
                max_evals=cfg.max_line_evals,
                f_origin=f_prev,
            )
            if line.fval < f_cur and line.t != 0.0:
                x = x + line.t * u
                f_cur = line.fval
            if f_prev - f_cur > delta:
                delta = f_prev - f_cur
                big = i
        history.append(f_cur)
        if callback is not None:
            callback(x, f_cur, nfev, sweep)
        if 2.0 * (f_start - f_cur) <= cfg.f_tol * (abs(f_start) + abs(f_cur)) + _TINY:
            converged = True
            break
        # Powell's test on the extrapolated point 2x - x_start decides whether
        # the sweep displacement is worth keeping as a search direction.
        disp = x - x_start
        f_ext = ff(x + disp)
        if f_ext < f_start:
            t = 2.0 * (f_start - 2.0 * f_cur + f_ext) * (f_start - f_cur - delta) ** 2
            t -= delta * (f_start - f_ext) ** 2
            if t < 0.0:
                line = line_minimize(
                    lambda s: ff(x + s * disp),
                    t0=1.0,
                    x_tol=cfg.x_tol,
                    growth=cfg.bracket_growth,
                    max_evals=cfg.max_line_evals,
                    f_origin=f_cur,
                )
                if line.fval < f_cur and line.t != 0.0:
                    x = x + line.t * disp
                    f_cur = line.fval
                new_dir = line.t * disp
                norm = np.linalg.norm(new_dir)
                if norm > 0.0:
                    directions[big] = directions[n - 1]
                    directions[n - 1] = new_dir / norm
                    if _directions_degenerate(directions):
                        directions = np.eye(n)
    return PowellResult(x=x, fun=f_cur, nit=nit, nfev=nfev, converged=converged, history=history)
