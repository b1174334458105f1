"""Randomised falsification of convexity-type shapes of a utility.

Only counterexamples are conclusive: finding none within the sampling
budget says nothing about membership of the shape class.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from monfg.errors import InvalidInputError
from monfg.game import Monfg
from monfg.utility import as_utility, compile_program, eval_utility, max_variable

DEFAULT_TRIALS = 100_000
DEFAULT_TOL = 1e-9
STRICT_DELTA = 1e-3
_CHUNK = 8192


class Shape(str, enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    QUASICONVEX = "quasiconvex"
    QUASICONCAVE = "quasiconcave"
    STRICTLY_CONVEX = "strictly-convex"
    STRICTLY_CONCAVE = "strictly-concave"
    STRICTLY_QUASICONVEX = "strictly-quasiconvex"
    STRICTLY_QUASICONCAVE = "strictly-quasiconcave"

    @property
    def strict(self) -> bool:
        return self.value.startswith("strictly-")

    @property
    def base(self) -> str:
        return self.value.removeprefix("strictly-")


@dataclass(frozen=True)
class BoxDomain:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise InvalidInputError("box bounds must have the same, non-zero length")
        if not all(np.isfinite(lo + hi)) or any(a > b for a, b in zip(lo, hi)):
            raise InvalidInputError(f"invalid box [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)


@dataclass(frozen=True)
class ShapeCounterexample:
    shape: Shape
    x1: tuple[float, ...]
    x2: tuple[float, ...]
    lam: float
    lhs: float
    rhs: float
    violation_margin: float

    def to_dict(self) -> dict:
        return {"shape": self.shape.value, "x1": list(self.x1), "x2": list(self.x2),
                "lambda": self.lam, "lhs": self.lhs, "rhs": self.rhs,
                "violation_margin": self.violation_margin}


def default_box(game: Monfg) -> BoxDomain:
    """Bounding box of every payoff vector in the game, padded on each side
    by 10% of its width and at least 0.1."""
    pts = game.flat_payoffs().reshape(-1, game.num_objectives)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = np.maximum(0.1 * (hi - lo), 0.1)
    return BoxDomain(tuple(lo - pad), tuple(hi + pad))


def shape_sides(shape, f1, f2, fm, lam):
    """Both sides of the defining inequality and the signed amount by which
    it fails (positive means the non-strict inequality is broken)."""
    shape = Shape(shape)
    base = shape.base
    if base == "convex":
        rhs = lam * f1 + (1 - lam) * f2
        gap = fm - rhs
    elif base == "concave":
        rhs = lam * f1 + (1 - lam) * f2
        gap = rhs - fm
    elif base == "quasiconvex":
        rhs = np.maximum(f1, f2)
        gap = fm - rhs
    else:
        rhs = np.minimum(f1, f2)
        gap = rhs - fm
    return fm, rhs, gap


def falsify_shape(u, shape, box: BoxDomain, trials: int = DEFAULT_TRIALS, seed: int = 0,
                  tol: float = DEFAULT_TOL, delta: float = STRICT_DELTA):
    """Search for ``(x1, x2, lam)`` breaking the defining inequality of ``shape``.

    Points are drawn uniformly from ``box`` and ``lam`` from ``[0, 1]``, or
    from ``[delta, 1 - delta]`` with ``x1 != x2`` for the strict shapes. A
    non-strict shape is violated when the inequality fails by more than
    ``tol``; a strict one when it does not hold with a margin of at least
    ``tol``. Returns the first violating draw, or ``None``.
    """
    u = as_utility(u)
    shape = Shape(shape)
    if trials < 1 or tol <= 0:
        raise InvalidInputError("need trials >= 1 and tol > 0")
    if max_variable(u) > box.dim:
        raise InvalidInputError(f"utility uses p{max_variable(u)} but the box has {box.dim} dimensions")
    prog = compile_program(u)
    rng = np.random.default_rng(seed)
    lo, hi = np.array(box.lo), np.array(box.hi)
    done = 0
    while done < trials:
        c = min(_CHUNK, trials - done)
        x1 = lo + (hi - lo) * rng.random((c, box.dim))
        x2 = lo + (hi - lo) * rng.random((c, box.dim))
        lam = rng.random(c)
        if shape.strict:
            lam = delta + (1 - 2 * delta) * lam
        xm = lam[:, None] * x1 + (1 - lam)[:, None] * x2
        vals = prog(np.concatenate([x1, x2, xm]))
        f1, f2, fm = vals[:c], vals[c:2 * c], vals[2 * c:]
        lhs, rhs, gap = shape_sides(shape, f1, f2, fm, lam)
        if shape.strict:
            bad = (gap > -tol) & np.any(x1 != x2, axis=1)
        else:
            bad = gap > tol
        hits = np.flatnonzero(bad)
        if hits.size:
            k = hits[0]
            margin = gap[k] + tol if shape.strict else gap[k]
            return ShapeCounterexample(shape, tuple(x1[k]), tuple(x2[k]), float(lam[k]),
                                       float(lhs[k]), float(rhs[k]), float(margin))
        done += c
    return None


def check_triple(u, shape, x1, x2, lam, tol: float = DEFAULT_TOL):
    """Evaluate one explicit triple; returns a counterexample or ``None``."""
    u = as_utility(u)
    shape = Shape(shape)
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    f1, f2 = eval_utility(u, x1), eval_utility(u, x2)
    fm = eval_utility(u, lam * x1 + (1 - lam) * x2)
    lhs, rhs, gap = shape_sides(shape, f1, f2, fm, lam)
    if shape.strict:
        if gap <= -tol or np.array_equal(x1, x2):
            return None
        margin = gap + tol
    elif gap > tol:
        margin = gap
    else:
        return None
    return ShapeCounterexample(shape, tuple(x1), tuple(x2), float(lam),
                               float(lhs), float(rhs), float(margin))


def jensen_gap_strict_quasiconvex(u, points, weights) -> tuple[float, float]:
    """Return ``(u(sum_k w_k x_k), max_k u(x_k))`` for a strict convex combination.

    For a strictly quasiconvex ``u`` the first value is below the second.
    """
    u = as_utility(u)
    pts = np.asarray(points, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2 or w.shape != (pts.shape[0],):
        raise InvalidInputError("need k >= 2 points and one weight per point")
    if np.any(w <= 0) or np.any(w >= 1) or abs(w.sum() - 1.0) > 1e-9:
        raise InvalidInputError("weights must lie in (0, 1) and sum to 1")
    if np.all(pts == pts[0]):
        raise InvalidInputError("points must not all be equal")
    mix = np.zeros(pts.shape[1])
    for wk, xk in zip(w, pts):
        mix = mix + wk * xk
    return eval_utility(u, mix), max(eval_utility(u, x) for x in pts)

