"""Grid-and-refine search for mixed epsilon-equilibria of small two-player games.

The search is a probe, not a solver: every returned profile is certified by
:func:`monfg.equilibrium.verify_ne`, but an empty result only means that
nothing was found within the budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from monfg import kernels
from monfg.criteria import Criterion, as_assignment, scalarised_table, value
from monfg.equilibrium import (DEFAULT_EPSILON, BestResponseConfig, VerificationReport,
                               best_response, simplex_grid, simplex_grid_size, verify_ne)
from monfg.errors import UnsupportedInputError
from monfg.game import Monfg, as_profile
from monfg.utility import check_utilities, compile_program

MAX_ACTIONS = 4
DEFAULT_GRID = 50


@dataclass(frozen=True)
class MixedSearchConfig:
    grid: int | None = None  # None picks the finest grid up to 50 within max_points
    epsilon: float = DEFAULT_EPSILON
    dedup_radius: float = 1e-3
    max_candidates: int = 16
    refine_budget: int = 400
    max_points: int = 4_000_000
    refine_br: BestResponseConfig = BestResponseConfig(grid=20, restarts=2, budget=400)
    verify_br: BestResponseConfig = BestResponseConfig()


@dataclass
class MixedSearchResult:
    equilibria: list[tuple[tuple[np.ndarray, ...], VerificationReport]]
    grid: int
    scanned: int
    candidates: int
    min_coarse_exploitability: float
    notes: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.equilibria)

    def __len__(self):
        return len(self.equilibria)


def _check_size(game: Monfg):
    if game.num_players != 2:
        raise UnsupportedInputError(f"mixed search handles 2 players, got {game.num_players}")
    if max(game.action_counts) > MAX_ACTIONS:
        raise UnsupportedInputError(
            f"mixed search handles at most {MAX_ACTIONS} actions per player, "
            f"got {game.action_counts}")


def choose_grid(counts, cfg: MixedSearchConfig) -> int:
    def points(g):
        return simplex_grid_size(counts[0], g) * simplex_grid_size(counts[1], g)

    if cfg.grid is not None:
        if cfg.grid < 2:
            raise UnsupportedInputError("grid needs at least 2 subdivisions")
        if points(cfg.grid) > cfg.max_points:
            raise UnsupportedInputError(
                f"grid {cfg.grid} gives {points(cfg.grid)} profiles for actions {tuple(counts)}, "
                f"above the limit of {cfg.max_points}; use a coarser grid")
        return cfg.grid
    g = DEFAULT_GRID
    while g > 2 and points(g) > cfg.max_points:
        g -= 1
    return g


def _neighbours(grid: np.ndarray, g: int) -> np.ndarray:
    """Index of the grid point reached by moving 1/g of mass from action k to
    action j, for every ordered pair (j, k); -1 where that leaves the simplex."""
    counts = np.rint(grid * g).astype(np.int64)
    m = counts.shape[1]
    radix = (g + 1) ** np.arange(m, dtype=np.int64)
    keys = counts @ radix
    order = np.argsort(keys)
    out = []
    for j in range(m):
        for k in range(m):
            if j == k:
                continue
            moved = counts.copy()
            moved[:, j] += 1
            moved[:, k] -= 1
            ok = moved[:, k] >= 0
            pos = np.searchsorted(keys[order], moved @ radix)
            pos = np.clip(pos, 0, len(keys) - 1)
            idx = order[pos]
            out.append(np.where(ok & (keys[idx] == moved @ radix), idx, -1))
    if not out:
        return np.full((len(grid), 0), -1, dtype=np.int64)
    return np.stack(out, axis=1)


def coarse_exploitability(game, us, crit, G1, G2):
    """Max exploitability over both players at every pair of grid strategies,
    with best responses restricted to the grid."""
    U = []
    for i in range(2):
        if crit[i] is Criterion.ESR:
            U.append(G1 @ scalarised_table(game, us[i], i) @ G2.T)
        else:
            prog = compile_program(us[i])
            P = np.ascontiguousarray(game.payoffs[i])
            U.append(kernels.pair_values(prog.code, prog.consts, G1, G2, P))
    e1 = U[0].max(axis=0, keepdims=True) - U[0]
    e2 = U[1].max(axis=1, keepdims=True) - U[1]
    return np.maximum(e1, e2)


def _local_minima(E, n1, n2):
    mask = np.ones(E.shape, dtype=bool)
    for t in range(n1.shape[1]):
        idx = n1[:, t]
        other = np.where((idx >= 0)[:, None], E[np.maximum(idx, 0), :], np.inf)
        mask &= E <= other
    for t in range(n2.shape[1]):
        idx = n2[:, t]
        other = np.where((idx >= 0)[None, :], E[:, np.maximum(idx, 0)], np.inf)
        mask &= E <= other
    return mask


def _exploitability(game, us, crit, s, cfg):
    worst = -np.inf
    for i in range(2):
        starts = [s[i]] if crit[i] is Criterion.SER else ()
        br = best_response(game, us, i, s, crit[i], cfg, starts=starts)
        worst = max(worst, br.value - value(game, us, s, i, crit[i]))
    return worst


def refine(game, us, crit, s, step, cfg: MixedSearchConfig):
    """Pattern search on the joint strategy space, minimising the larger of
    the two players' exploitabilities."""
    s = [np.array(x, dtype=float) for x in s]
    f = _exploitability(game, us, crit, s, cfg.refine_br)
    evals = 1
    moves = [(p, j, k) for p in range(2) for j in range(len(s[p]))
             for k in range(len(s[p])) if j != k]
    while step >= 1e-10 and evals < cfg.refine_budget and f > 0:
        best, best_f = None, f
        for p, j, k in moves:
            if s[p][k] <= 0:
                continue
            t = min(step, s[p][k])
            cand = [x.copy() for x in s]
            cand[p][j] += t
            cand[p][k] -= t
            fc = _exploitability(game, us, crit, cand, cfg.refine_br)
            evals += 1
            if fc < best_f:
                best, best_f = cand, fc
        if best is None:
            step *= 0.5
        else:
            s, f = best, best_f
    return [x / x.sum() for x in s], f


def search_mixed_ne_2p(game: Monfg, utilities, assignment=Criterion.SER,
                       cfg: MixedSearchConfig | None = None) -> MixedSearchResult:
    """Scan the product of both players' simplex grids for low exploitability,
    refine the best local minima, and return the certified epsilon-equilibria.

    Profiles closer than ``dedup_radius`` in max-norm are merged, keeping the
    less exploitable one. Exhaustiveness is not guaranteed.
    """
    cfg = cfg or MixedSearchConfig()
    _check_size(game)
    us = check_utilities(utilities, 2, game.num_objectives)
    crit = as_assignment(assignment, 2)
    g = choose_grid(game.action_counts, cfg)
    G1 = simplex_grid(game.action_counts[0], g)
    G2 = simplex_grid(game.action_counts[1], g)
    E = coarse_exploitability(game, us, crit, G1, G2)
    minima = _local_minima(E, _neighbours(G1, g), _neighbours(G2, g))
    flat = np.flatnonzero(minima.ravel())
    flat = flat[np.argsort(E.ravel()[flat], kind="stable")][:cfg.max_candidates]

    found = []
    for f in flat:
        k1, k2 = divmod(int(f), G2.shape[0])
        s, _ = refine(game, us, crit, (G1[k1], G2[k2]), 1.0 / g, cfg)
        s = as_profile(game, s)
        rep = verify_ne(game, us, s, crit, cfg.epsilon, cfg.verify_br)
        if rep.is_epsilon_ne:
            found.append((s, rep))

    found.sort(key=lambda item: item[1].max_exploitability)
    kept = []
    for s, rep in found:
        flat_s = np.concatenate(s)
        if all(np.max(np.abs(flat_s - np.concatenate(t))) > cfg.dedup_radius for t, _ in kept):
            kept.append((s, rep))
    kept.sort(key=lambda item: tuple(-np.concatenate(item[0])))

    notes = []
    if not kept:
        notes.append(f"no epsilon-equilibrium (epsilon={cfg.epsilon:g}) found within the search "
                     "budget; this does not show that none exists")
    return MixedSearchResult(kept, g, E.size, len(flat), float(E.min()), notes)
