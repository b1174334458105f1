"""Trade-off reduction, pure equilibrium enumeration, best responses and
epsilon-Nash verification under any per-player criterion assignment."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from monfg import kernels
from monfg.criteria import (DEFAULT_TOL, Criterion, as_assignment, as_criterion,
                            scalarised_table, value)
from monfg.errors import InvalidInputError
from monfg.game import (ActionProfile, Monfg, Nfg, action_payoff_vectors, as_profile,
                        as_strategy, check_player, joint_action_profiles, pure_profile)
from monfg.shapes import Shape, ShapeCounterexample, default_box, falsify_shape
from monfg.utility import check_utilities, compile_program

DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True, eq=False)
class TradeOffGame:
    """Scalar game whose payoff at ``a`` is ``u_i(p_i(a))``."""

    nfg: Nfg
    source: Monfg
    utilities: tuple

    @property
    def table(self) -> np.ndarray:
        return self.nfg.table


@dataclass(frozen=True)
class PsneSet:
    profiles: tuple[ActionProfile, ...]
    mode: str = "all"  # "all" or "sample"

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)

    def __contains__(self, a):
        return tuple(a) in self.profiles


@dataclass(frozen=True)
class BestResponseConfig:
    grid: int = 50
    restarts: int = 8
    budget: int = 2000  # objective evaluations per refinement start
    min_step: float = 1e-10

    def __post_init__(self):
        if self.grid < 2 or self.restarts < 1 or self.budget < 1 or self.min_step <= 0:
            raise InvalidInputError(f"invalid best-response configuration {self}")


@dataclass(frozen=True)
class BestResponseResult:
    strategy: np.ndarray
    value: float
    criterion: Criterion
    exact: bool
    grid: int = 0
    restarts: int = 0
    iterations: int = 0
    evaluations: int = 0

    def to_dict(self) -> dict:
        return {"strategy": self.strategy.tolist(), "value": self.value,
                "criterion": self.criterion.value, "exact": self.exact,
                "search": {"grid": self.grid, "restarts": self.restarts,
                           "iterations": self.iterations, "evaluations": self.evaluations}}


@dataclass(frozen=True)
class VerificationReport:
    exploitability: tuple[float, ...]
    values: tuple[float, ...]
    best_responses: tuple[BestResponseResult, ...]
    is_epsilon_ne: bool
    epsilon: float
    assignment: tuple[Criterion, ...]

    @property
    def max_exploitability(self) -> float:
        return max(self.exploitability)

    def to_dict(self) -> dict:
        return {
            "is_epsilon_ne": self.is_epsilon_ne,
            "epsilon": self.epsilon,
            "assignment": [c.value for c in self.assignment],
            "values": list(self.values),
            "exploitability": list(self.exploitability),
            "max_exploitability": self.max_exploitability,
            # SER deviations come from a search, so their gains are lower bounds
            "exploitability_is_lower_bound": [not br.exact for br in self.best_responses],
            "best_responses": [br.to_dict() for br in self.best_responses],
        }


@dataclass
class MonfgPsneResult:
    psne: PsneSet
    mode: str
    valid_for: str
    warnings: list[str] = field(default_factory=list)
    counterexamples: dict[int, ShapeCounterexample] = field(default_factory=dict)
    rejected: list[tuple[ActionProfile, VerificationReport]] = field(default_factory=list)


def reduce_monfg(game: Monfg, utilities) -> TradeOffGame:
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    table = np.stack([scalarised_table(game, us[i], i) for i in range(game.num_players)])
    return TradeOffGame(Nfg(table, game.labels), game, us)


def _scalar_game(nfg) -> Nfg:
    if isinstance(nfg, TradeOffGame):
        return nfg.nfg
    if nfg.num_objectives != 1:
        raise InvalidInputError("PSNE enumeration needs a scalar game; reduce it first")
    return nfg


def compute_all_psne(nfg, tol: float = DEFAULT_TOL) -> PsneSet:
    g = _scalar_game(nfg)
    table = np.ascontiguousarray(g.payoffs.reshape(g.num_players, -1))
    mask = kernels.psne_mask(table, np.array(g.action_counts, dtype=np.int64), tol)
    profiles = joint_action_profiles(g)
    return PsneSet(tuple(profiles[k] for k in np.flatnonzero(mask)), "all")


def compute_sample_psne(nfg, tol: float = DEFAULT_TOL) -> ActionProfile | None:
    found = compute_all_psne(nfg, tol).profiles
    return found[0] if found else None


def simplex_grid(m: int, g: int) -> np.ndarray:
    """All strategies over ``m`` actions with probabilities in multiples of 1/g."""
    if m == 1:
        return np.ones((1, 1))
    bars = np.array(list(itertools.combinations(range(g + m - 1), m - 1)), dtype=np.int64)
    edges = np.concatenate([np.full((len(bars), 1), -1), bars,
                            np.full((len(bars), 1), g + m - 1)], axis=1)
    return (np.diff(edges, axis=1) - 1) / g


def simplex_grid_size(m: int, g: int) -> int:
    return math.comb(g + m - 1, m - 1)


def _opponents(game, i, fixed):
    fixed = list(fixed)
    if len(fixed) == game.num_players - 1:
        fixed.insert(i, None)
    if len(fixed) != game.num_players:
        raise InvalidInputError("need the strategies of all other players")
    return fixed


def best_response(game: Monfg, utilities, i: int, fixed, criterion,
                  cfg: BestResponseConfig | None = None, starts=()) -> BestResponseResult:
    """Best response of player ``i`` to the other players' strategies.

    ``fixed`` lists either every player's strategy (entry ``i`` is ignored)
    or only the opponents'. Under ESR the answer is exact: the best pure
    action, lowest index on ties. Under SER the utility of the expected
    payoff is maximised by a grid scan followed by pattern-search refinement
    from the best grid points and from any extra ``starts``; the value found
    is a lower bound on the true optimum.
    """
    cfg = cfg or BestResponseConfig()
    i = check_player(game, i)
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    criterion = as_criterion(criterion)
    s = _opponents(game, i, fixed)
    m = game.action_counts[i]

    if criterion is Criterion.ESR:
        t = np.moveaxis(scalarised_table(game, us[i], i), i, 0)
        for j, sj in enumerate(s):
            if j != i:
                t = np.tensordot(t, as_strategy(sj, game.action_counts[j]), axes=(1, 0))
        best = int(np.flatnonzero(t >= t.max() - DEFAULT_TOL)[0])
        return BestResponseResult(pure_profile([best], [m])[0], float(t[best]), criterion, True)

    V = action_payoff_vectors(game, s, i)
    prog = compile_program(us[i])
    if m == 1:
        w = np.ones(1)
        return BestResponseResult(w, float(prog(V)[0]), criterion, False)
    grid = simplex_grid(m, cfg.grid)
    vals = kernels.hull_values(prog.code, prog.consts, grid, V)
    order = np.argsort(-vals, kind="stable")[:cfg.restarts]
    init = [grid[order]]
    if len(starts):
        init.append(np.array([as_strategy(x, m) for x in starts]))
    init = np.ascontiguousarray(np.concatenate(init))
    W, f, iters, evals = kernels.pattern_search(prog.code, prog.consts, V, init,
                                                1.0 / cfg.grid, cfg.min_step, cfg.budget)
    k = int(np.argmax(f))
    w = np.clip(W[k], 0.0, None)
    return BestResponseResult(w / w.sum(), float(f[k]), criterion, False, cfg.grid,
                              len(init), int(iters.sum()), int(evals.sum()) + len(grid))


def verify_ne(game: Monfg, utilities, s, assignment, epsilon: float = DEFAULT_EPSILON,
              cfg: BestResponseConfig | None = None) -> VerificationReport:
    """Exploitability of every player at ``s`` under their assigned criterion.

    Each SER search is also started from the player's current strategy, so
    its exploitability never drops below zero by more than rounding.
    """
    if epsilon < 0:
        raise InvalidInputError("epsilon must be non-negative")
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    s = as_profile(game, s)
    crit = as_assignment(assignment, game.num_players)
    vals, brs, expl = [], [], []
    for i in range(game.num_players):
        cur = value(game, us, s, i, crit[i])
        starts = [s[i]] if crit[i] is Criterion.SER else ()
        br = best_response(game, us, i, s, crit[i], cfg, starts=starts)
        vals.append(cur)
        brs.append(br)
        expl.append(br.value - cur)
    return VerificationReport(tuple(expl), tuple(vals), tuple(brs),
                              max(expl) <= epsilon, epsilon, crit)


def psne_monfg(game: Monfg, utilities, mode: str = "trusted",
               epsilon: float = DEFAULT_EPSILON, cfg: BestResponseConfig | None = None,
               trials: int = 100_000, seed: int = 0, tol: float = DEFAULT_TOL) -> MonfgPsneResult:
    """Pure equilibria of a multi-objective game via its trade-off game.

    With quasiconvex utilities the trade-off game's pure equilibria are
    exactly the pure equilibria under ESR, SER and every blended assignment.
    Each utility is first probed for a quasiconvexity counterexample on the
    game's default box; if one turns up the result holds for ESR only and a
    warning says so. In ``"verified"`` mode each candidate is additionally
    checked as an epsilon-equilibrium with every player on SER, and only
    the survivors are returned.
    """
    if mode not in ("trusted", "verified"):
        raise InvalidInputError(f"unknown mode {mode!r}; expected 'trusted' or 'verified'")
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    box = default_box(game)
    out = MonfgPsneResult(PsneSet(()), mode, "ESR, SER and every blended assignment")
    for i, u in enumerate(us):
        cx = falsify_shape(u, Shape.QUASICONVEX, box, trials=trials, seed=seed, tol=tol)
        if cx is not None:
            out.counterexamples[i] = cx
            out.warnings.append(
                f"utility of player {i} is not quasiconvex on the sampled box "
                f"(u({_fmt(cx.x1)}) and u({_fmt(cx.x2)}) mixed at lambda={cx.lam:.6g} "
                f"give {cx.lhs:.6g} > {cx.rhs:.6g}); the trade-off equilibria are "
                f"guaranteed for ESR only, not for SER or blended assignments")
    if out.counterexamples:
        out.valid_for = "ESR"
    candidates = compute_all_psne(reduce_monfg(game, us), tol).profiles
    if mode == "trusted":
        out.psne = PsneSet(candidates)
        return out
    kept = []
    for a in candidates:
        rep = verify_ne(game, us, pure_profile(a, game.action_counts), Criterion.SER, epsilon, cfg)
        if rep.is_epsilon_ne:
            kept.append(a)
        else:
            out.rejected.append((a, rep))
    out.psne = PsneSet(tuple(kept))
    # a pure SER equilibrium is a pure ESR equilibrium, and under blended
    # assignments ESR players cannot gain where SER players cannot
    out.valid_for = "ESR, SER and every blended assignment"
    return out


def _fmt(x):
    return "(" + ", ".join(f"{v:.4g}" for v in x) + ")"
