"""JSON game files.

A game file holds ``players``, ``actions`` (one count per player),
``objectives`` and ``payoffs``: one list per player with an entry for every
joint action in row-major order (the last player's action changes fastest),
each entry a list of ``objectives`` numbers. Optional keys: ``utilities``
(one s-expression per player), ``criteria`` (``"ESR"``/``"SER"`` per
player), ``labels`` (action names per player) and ``name``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from monfg.criteria import Criterion, as_assignment
from monfg.errors import InvalidInputError, ParseError
from monfg.game import Monfg
from monfg.utility import check_utilities, parse_utility, to_sexpr


@dataclass(frozen=True, eq=False)
class GameFile:
    game: Monfg
    utilities: tuple | None = None
    criteria: tuple[Criterion, ...] | None = None
    name: str | None = None
    digest: str = ""


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def loads_game(text: str | bytes) -> GameFile:
    raw = text.encode() if isinstance(text, str) else text
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict):
        raise InvalidInputError("a game file must be a JSON object")
    missing = [k for k in ("players", "actions", "objectives", "payoffs") if k not in doc]
    if missing:
        raise InvalidInputError(f"game file is missing {', '.join(missing)}")
    n, counts, d = doc["players"], doc["actions"], doc["objectives"]
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError("'players' must be a positive integer")
    if not isinstance(counts, list) or len(counts) != n or not all(
            isinstance(m, int) and m >= 1 for m in counts):
        raise InvalidInputError(f"'actions' must list {n} positive integers")
    if not isinstance(d, int) or d < 1:
        raise InvalidInputError("'objectives' must be a positive integer")
    total = math.prod(counts)
    payoffs = doc["payoffs"]
    if not isinstance(payoffs, list) or len(payoffs) != n:
        raise InvalidInputError(f"'payoffs' must hold one list per player ({n})")
    for i, rows in enumerate(payoffs):
        if not isinstance(rows, list) or len(rows) != total:
            raise InvalidInputError(
                f"payoffs of player {i} need {total} joint-action entries, "
                f"got {len(rows) if isinstance(rows, list) else 'none'}")
        for k, vec in enumerate(rows):
            if not isinstance(vec, list) or len(vec) != d or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool) for v in vec):
                raise InvalidInputError(
                    f"payoff {k} of player {i} must be a list of {d} numbers")
    game = Monfg.from_flat(counts, np.array(payoffs, dtype=np.float64), doc.get("labels"))

    utilities = None
    if doc.get("utilities") is not None:
        texts = doc["utilities"]
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise InvalidInputError("'utilities' must be a list of strings")
        parsed = []
        for i, t in enumerate(texts):
            try:
                parsed.append(parse_utility(t))
            except ParseError as exc:
                raise ParseError(f"utility of player {i}: {exc}") from None
        utilities = check_utilities(parsed, n, d)
    criteria = None
    if doc.get("criteria") is not None:
        criteria = as_assignment(doc["criteria"], n)
    return GameFile(game, utilities, criteria, doc.get("name"), digest_bytes(raw))


def load_game(path) -> GameFile:
    return loads_game(Path(path).read_bytes())


def game_to_dict(game: Monfg, utilities=None, criteria=None, name=None) -> dict:
    doc = {}
    if name is not None:
        doc["name"] = name
    doc.update({
        "players": game.num_players,
        "actions": list(game.action_counts),
        "objectives": game.num_objectives,
        "payoffs": [[[_num(v) for v in vec] for vec in rows] for rows in game.flat_payoffs()],
    })
    if utilities is not None:
        doc["utilities"] = [u if isinstance(u, str) else to_sexpr(u) for u in utilities]
    if criteria is not None:
        doc["criteria"] = [Criterion(c).value for c in criteria]
    if game.labels is not None:
        doc["labels"] = [list(row) for row in game.labels]
    return doc


def dumps_game(game: Monfg, utilities=None, criteria=None, name=None) -> str:
    """Serialise with one line per key and one line per player's payoffs."""
    doc = game_to_dict(game, utilities, criteria, name)
    lines = []
    for key, val in doc.items():
        if key == "payoffs":
            rows = ",\n".join(f"    {json.dumps(r)}" for r in val)
            lines.append(f'  "payoffs": [\n{rows}\n  ]')
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _num(v):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2 ** 53 else v
