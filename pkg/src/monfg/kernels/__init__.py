"""Hot numeric loops, with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports; set ``MONFG_DISABLE_NUMBA=1``
to force the numpy path. Both backends expose the same functions:

``eval_program(code, consts, X)``
    evaluate a compiled utility on every row of ``X``.
``hull_values(code, consts, W, V)``
    evaluate the utility at ``W @ V`` row by row (mixed strategies ``W``
    over the action payoff vectors ``V``).
``pattern_search(code, consts, V, starts, step0, min_step, budget)``
    maximise the utility over the simplex from each start.
``psne_mask(table, counts, tol)``
    flag the joint actions of a scalar game that no player can improve on.
``pair_values(code, consts, G1, G2, P)``
    utility of the expected payoff for every pair of grid strategies in a
    two-player game.
"""
import os

_TRUTHY = {"1", "true", "yes", "on"}


def _numba_wanted() -> bool:
    if os.environ.get("MONFG_DISABLE_NUMBA", "").strip().lower() in _TRUTHY:
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


if _numba_wanted():
    from monfg.kernels import _numba as _impl

    BACKEND = "numba"
else:
    from monfg.kernels import _numpy as _impl

    BACKEND = "numpy"

eval_program = _impl.eval_program
hull_values = _impl.hull_values
pattern_search = _impl.pattern_search
psne_mask = _impl.psne_mask
pair_values = _impl.pair_values

__all__ = ["BACKEND", "eval_program", "hull_values", "pattern_search", "psne_mask", "pair_values"]
