"""Games with vectorial payoffs, mixed strategies and expected payoff vectors.

Payoffs are held in one dense array of shape ``(n, m_1, ..., m_n, d)``:
``payoffs[i][a]`` is the length-``d`` vector player ``i`` receives at the
joint action ``a``. A scalar normal-form game is the special case ``d == 1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from monfg.errors import InvalidInputError

PROB_TOL = 1e-12

ActionProfile = tuple[int, ...]
StrategyProfile = tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class Monfg:
    payoffs: np.ndarray
    labels: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        p = np.array(self.payoffs, dtype=np.float64)
        if p.ndim < 3:
            raise InvalidInputError("payoff array needs shape (n, m_1, ..., m_n, d)")
        n = p.shape[0]
        if p.ndim != n + 2:
            raise InvalidInputError(
                f"{n} players need a payoff array of rank {n + 2}, got rank {p.ndim}")
        if any(m < 1 for m in p.shape[1:]):
            raise InvalidInputError("every player needs at least one action and d >= 1")
        if not np.all(np.isfinite(p)):
            raise InvalidInputError("payoffs must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "payoffs", p)
        if self.labels is not None:
            labels = tuple(tuple(str(x) for x in row) for row in self.labels)
            if len(labels) != n or any(len(row) != m for row, m in zip(labels, p.shape[1:-1])):
                raise InvalidInputError("action labels must match the action counts")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_flat(cls, action_counts, payoffs, labels=None):
        """Build from per-player lists in row-major joint-action order."""
        counts = tuple(int(m) for m in action_counts)
        arr = np.asarray(payoffs, dtype=np.float64)
        n, total = len(counts), math.prod(counts)
        if arr.ndim != 3 or arr.shape[0] != n or arr.shape[1] != total:
            raise InvalidInputError(
                f"expected payoffs of shape ({n}, {total}, d), got {arr.shape}")
        return cls(arr.reshape((n,) + counts + (arr.shape[2],)), labels)

    @property
    def num_players(self) -> int:
        return self.payoffs.shape[0]

    @property
    def action_counts(self) -> tuple[int, ...]:
        return self.payoffs.shape[1:-1]

    @property
    def num_objectives(self) -> int:
        return self.payoffs.shape[-1]

    def flat_payoffs(self) -> np.ndarray:
        """Payoffs as ``(n, prod(m), d)`` in row-major joint-action order."""
        return self.payoffs.reshape(self.num_players, -1, self.num_objectives)

    def label(self, i: int, action: int) -> str:
        if self.labels is None:
            return str(action)
        return self.labels[i][action]


class Nfg(Monfg):
    """A single-objective game; ``table[i][a]`` is a scalar."""

    def __post_init__(self):
        p = np.asarray(self.payoffs, dtype=np.float64)
        if p.ndim >= 2 and p.ndim == p.shape[0] + 1:
            # accept scalar tables of shape (n, m_1, ..., m_n)
            object.__setattr__(self, "payoffs", p[..., None])
        super().__post_init__()
        if self.num_objectives != 1:
            raise InvalidInputError("a normal-form game has exactly one objective")

    @property
    def table(self) -> np.ndarray:
        return self.payoffs[..., 0]


def joint_action_profiles(game: Monfg) -> list[ActionProfile]:
    return list(itertools.product(*(range(m) for m in game.action_counts)))


def check_player(game: Monfg, i: int) -> int:
    if not 0 <= int(i) < game.num_players:
        raise InvalidInputError(f"player index {i} out of range for {game.num_players} players")
    return int(i)


def check_action_profile(game: Monfg, a: Sequence[int]) -> ActionProfile:
    a = tuple(int(x) for x in a)
    if len(a) != game.num_players:
        raise InvalidInputError(f"action profile {a} has the wrong length")
    for ai, m in zip(a, game.action_counts):
        if not 0 <= ai < m:
            raise InvalidInputError(f"action profile {a} is out of range for {game.action_counts}")
    return a


def as_strategy(probs, num_actions: int) -> np.ndarray:
    s = np.array(probs, dtype=np.float64).reshape(-1)
    if s.shape[0] != num_actions or num_actions < 1:
        raise InvalidInputError(f"strategy {probs!r} needs {num_actions} probabilities")
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        raise InvalidInputError(f"strategy {probs!r} has negative or non-finite entries")
    total = s.sum()
    if abs(total - 1.0) > PROB_TOL:
        raise InvalidInputError(f"strategy {probs!r} sums to {total!r}, not 1")
    s = s / total
    s.setflags(write=False)
    return s


def as_profile(game: Monfg, s) -> StrategyProfile:
    if len(s) != game.num_players:
        raise InvalidInputError(
            f"profile has {len(s)} strategies for {game.num_players} players")
    return tuple(as_strategy(si, m) for si, m in zip(s, game.action_counts))


def pure_profile(a: Sequence[int], action_counts: Sequence[int]) -> StrategyProfile:
    out = []
    for ai, m in zip(a, action_counts):
        s = np.zeros(m)
        s[ai] = 1.0
        s.setflags(write=False)
        out.append(s)
    return tuple(out)


def pure_payoff_vector(game: Monfg, a: Sequence[int], i: int) -> np.ndarray:
    i = check_player(game, i)
    return game.payoffs[(i,) + check_action_profile(game, a)]


def expected_payoff_vector(game: Monfg, s, i: int) -> np.ndarray:
    i = check_player(game, i)
    s = as_profile(game, s)
    t = game.payoffs[i]
    for sj in s:
        t = np.tensordot(sj, t, axes=(0, 0))
    return t


def action_payoff_vectors(game: Monfg, s, i: int) -> np.ndarray:
    """Expected payoff vector of each of player ``i``'s actions against ``s_{-i}``.

    Returns an ``(m_i, d)`` array; entry ``i`` of ``s`` is ignored.
    """
    i = check_player(game, i)
    if len(s) != game.num_players:
        raise InvalidInputError(
            f"profile has {len(s)} strategies for {game.num_players} players")
    t = np.moveaxis(game.payoffs[i], i, 0)
    for j, sj in enumerate(s):
        if j == i:
            continue
        # axis 1 is always the next opponent still to be contracted
        t = np.tensordot(t, as_strategy(sj, game.action_counts[j]), axes=(1, 0))
    return np.ascontiguousarray(t)
