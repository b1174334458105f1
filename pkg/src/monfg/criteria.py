"""Scalar value of a strategy profile for one player under ESR or SER.

ESR takes the expectation of the utility of each outcome; SER applies the
utility to the expected payoff vector. The two agree on pure profiles and
for linear utilities, and differ in general.
"""
from __future__ import annotations

import enum
import os
from typing import Sequence

import numpy as np

from monfg.errors import InvalidInputError
from monfg.game import Monfg, as_profile, check_player, expected_payoff_vector
from monfg.utility import check_utilities, compile_program, eval_utility

DEFAULT_TOL = float(os.environ.get("MONFG_TOL", "1e-9"))


class Criterion(str, enum.Enum):
    ESR = "ESR"
    SER = "SER"


def as_criterion(c) -> Criterion:
    try:
        return Criterion(str(c.value if isinstance(c, Criterion) else c).upper())
    except ValueError:
        raise InvalidInputError(f"unknown criterion {c!r}; expected ESR or SER") from None


def as_assignment(assignment, num_players: int) -> tuple[Criterion, ...]:
    """Per-player criteria; a single criterion is broadcast to every player."""
    if isinstance(assignment, (str, Criterion)):
        return (as_criterion(assignment),) * num_players
    out = tuple(as_criterion(c) for c in assignment)
    if len(out) != num_players:
        raise InvalidInputError(f"assignment has {len(out)} criteria for {num_players} players")
    return out


def scalarised_table(game: Monfg, u, i: int) -> np.ndarray:
    """``u(p_i(a))`` for every joint action, shaped like the action grid."""
    flat = game.payoffs[i].reshape(-1, game.num_objectives)
    return compile_program(u)(flat).reshape(game.action_counts)


def esr_value(game: Monfg, utilities: Sequence, s, i: int) -> float:
    i = check_player(game, i)
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    s = as_profile(game, s)
    t = scalarised_table(game, us[i], i)
    for sj in s:
        t = np.tensordot(sj, t, axes=(0, 0))
    return float(t)


def ser_value(game: Monfg, utilities: Sequence, s, i: int) -> float:
    i = check_player(game, i)
    us = check_utilities(utilities, game.num_players, game.num_objectives)
    return eval_utility(us[i], expected_payoff_vector(game, s, i))


def value(game: Monfg, utilities: Sequence, s, i: int, criterion) -> float:
    if as_criterion(criterion) is Criterion.ESR:
        return esr_value(game, utilities, s, i)
    return ser_value(game, utilities, s, i)
