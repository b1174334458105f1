"""Command-line interface: ``monfg <command> GAME [options]``.

Every command prints a JSON report with the keys ``command``,
``inputs-digest``, ``results``, ``warnings`` and ``config``. A game argument
is a path to a game file, or ``@name`` for a bundled game (``monfg games``
lists them). Players and actions are 0-based indices.

Exit codes: 0 success, 2 usage or parse error, 3 invalid game or input,
4 unsupported input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from monfg import games, kernels
from monfg.criteria import DEFAULT_TOL, as_assignment, as_criterion
from monfg.equilibrium import (DEFAULT_EPSILON, BestResponseConfig, best_response,
                               psne_monfg, reduce_monfg, verify_ne)
from monfg.errors import InvalidInputError, MonfgError, ParseError, UnsupportedInputError
from monfg.gamefile import digest_bytes, dumps_game, load_game
from monfg.mixed import MixedSearchConfig, search_mixed_ne_2p
from monfg.shapes import (DEFAULT_TRIALS, BoxDomain, Shape, check_triple, default_box,
                          falsify_shape)
from monfg.utility import parse_utility, to_sexpr


class UsageError(MonfgError):
    pass


def _open_game(spec: str):
    if spec.startswith("@"):
        try:
            return load_game(games.path(spec[1:]))
        except FileNotFoundError as exc:
            raise UsageError(str(exc)) from None
    if not Path(spec).is_file():
        raise UsageError(f"game file not found: {spec}")
    return load_game(spec)


def _number(tok: str, what: str) -> float:
    try:
        return float(Fraction(tok.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed {what}: bad number {tok.strip()!r}") from None


def parse_profile(text: str) -> list[list[float]]:
    """``"0.55,0.45;1,0"`` -> one probability list per player."""
    if not text or not text.strip():
        raise UsageError("malformed profile: empty")
    out = []
    for part in text.split(";"):
        if not part.strip():
            raise UsageError(f"malformed profile: empty strategy in {text!r}")
        out.append([_number(tok, "profile") for tok in part.split(",")])
    return out


def _parse_box(text: str) -> BoxDomain:
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError(f"malformed box {text!r}: expected 'lo1,lo2,...;hi1,hi2,...'")
    lo, hi = ([_number(t, "box") for t in p.split(",")] for p in parts)
    return BoxDomain(tuple(lo), tuple(hi))


def _pick(args, *names):
    return {n: getattr(args, n) for n in names}


def _profile_entry(game, a):
    return {"actions": list(a), "labels": [game.label(i, ai) for i, ai in enumerate(a)]}


def _br_config(args) -> BestResponseConfig:
    return BestResponseConfig(grid=args.grid, restarts=args.restarts, budget=args.budget)


def _utilities(gf):
    if gf.utilities is None:
        raise UsageError("the game file has no 'utilities'")
    return gf.utilities


def _assignment(args, gf):
    if args.assignment:
        return as_assignment([c.strip() for c in args.assignment.split(",")], gf.game.num_players)
    if gf.criteria is not None:
        return gf.criteria
    return as_assignment("SER", gf.game.num_players)


def _report(command, digest, results, warnings, config):
    config = dict(config)
    config["backend"] = kernels.BACKEND
    return {"command": command, "inputs-digest": digest, "results": results,
            "warnings": warnings, "config": config}


def cmd_reduce(args):
    gf = _open_game(args.game)
    t = reduce_monfg(gf.game, _utilities(gf))
    text = dumps_game(t.nfg, ["p1"] * t.nfg.num_players, None,
                      f"trade-off game of {gf.name}" if gf.name else None)
    Path(args.output).write_text(text)
    results = {"output": str(args.output), "objectives": 1,
               "payoffs": [[float(v) for v in row] for row in t.table.reshape(t.nfg.num_players, -1)]}
    return _report("reduce", gf.digest, results, [], {})


def cmd_psne(args):
    gf = _open_game(args.game)
    res = psne_monfg(gf.game, _utilities(gf), mode=args.mode, epsilon=args.epsilon,
                     cfg=_br_config(args), trials=args.trials, seed=args.seed, tol=args.tol)
    warnings = [{"player": i, "message": msg, "counterexample": cx.to_dict()}
                for (i, cx), msg in zip(sorted(res.counterexamples.items()), res.warnings)]
    rejected = []
    for a, rep in res.rejected:
        worst = int(np.argmax(rep.exploitability))
        rejected.append({**_profile_entry(gf.game, a),
                         "max_exploitability": rep.max_exploitability,
                         "explanation": f"player {worst} gains {rep.exploitability[worst]:.6g} by "
                                        f"deviating under SER"})
    box = default_box(gf.game)
    results = {"mode": res.mode, "valid_for": res.valid_for,
               # quasiconvexity is only probed on this box
               "shape_check_box": {"lo": list(box.lo), "hi": list(box.hi)},
               "profiles": [_profile_entry(gf.game, a) for a in res.psne],
               "count": len(res.psne), "rejected": rejected}
    config = _pick(args, "mode", "epsilon", "seed", "trials", "tol", "grid", "restarts", "budget")
    return _report("psne", gf.digest, results, warnings, config)


def cmd_verify(args):
    gf = _open_game(args.game)
    profile = parse_profile(args.profile)
    crit = _assignment(args, gf)
    rep = verify_ne(gf.game, _utilities(gf), profile, crit, args.epsilon, _br_config(args))
    results = {"profile": profile, **rep.to_dict()}
    warnings = []
    if any(not br.exact for br in rep.best_responses):
        warnings.append("SER deviation gains come from a search and are lower bounds: "
                        "a negative verdict is certain, a positive one holds up to search quality")
    config = {"assignment": [c.value for c in crit],
              **_pick(args, "epsilon", "grid", "restarts", "budget")}
    return _report("verify", gf.digest, results, warnings, config)


def cmd_best_response(args):
    gf = _open_game(args.game)
    opponents = parse_profile(args.opponents)
    if not 0 <= args.player < gf.game.num_players:
        raise InvalidInputError(f"player {args.player} out of range")
    crit = as_criterion(args.criterion) if args.criterion else _assignment(args, gf)[args.player]
    br = best_response(gf.game, _utilities(gf), args.player, opponents, crit, _br_config(args))
    results = {"player": args.player, "opponents": opponents, **br.to_dict()}
    warnings = [] if br.exact else ["SER best response found by search; the value is a lower bound"]
    config = {"criterion": crit.value, **_pick(args, "grid", "restarts", "budget")}
    return _report("best-response", gf.digest, results, warnings, config)


def cmd_search_mixed(args):
    gf = _open_game(args.game)
    crit = _assignment(args, gf)
    cfg = MixedSearchConfig(grid=args.grid, epsilon=args.epsilon, dedup_radius=args.dedup_radius,
                            max_candidates=args.max_candidates)
    res = search_mixed_ne_2p(gf.game, _utilities(gf), crit, cfg)
    eqs = [{"profile": [s.tolist() for s in prof], "values": list(rep.values),
            "exploitability": list(rep.exploitability),
            "max_exploitability": rep.max_exploitability} for prof, rep in res]
    results = {"found": len(eqs), "equilibria": eqs, "grid": res.grid, "scanned": res.scanned,
               "candidates": res.candidates,
               "min_coarse_exploitability": res.min_coarse_exploitability,
               "exhaustive": False}
    config = {"assignment": [c.value for c in crit], "grid": res.grid,
              **_pick(args, "epsilon", "dedup_radius", "max_candidates")}
    return _report("search-mixed", gf.digest, results, res.notes, config)


def cmd_classify_utility(args):
    u = parse_utility(args.utility)
    shape = Shape(args.shape)
    digest = digest_bytes(args.utility.encode())
    if args.box:
        box = _parse_box(args.box)
    elif args.game:
        gf = _open_game(args.game)
        box, digest = default_box(gf.game), gf.digest
    else:
        d = max(1, _max_dim(u))
        box = BoxDomain((-1.0,) * d, (1.0,) * d)
    results = {"utility": to_sexpr(u), "shape": shape.value,
               "box": {"lo": list(box.lo), "hi": list(box.hi)}}
    if args.triple:
        x1, x2, lam = _parse_triple(args.triple)
        cx = check_triple(u, shape, x1, x2, lam, args.tol)
    else:
        cx = falsify_shape(u, shape, box, args.trials, args.seed, args.tol)
    results["counterexample"] = cx.to_dict() if cx else None
    results["verdict"] = ("violated" if cx else
                          "no counterexample found (this does not prove the shape holds)")
    config = _pick(args, "trials", "seed", "tol", "triple")
    return _report("classify-utility", digest, results, [], config)


def _max_dim(u):
    from monfg.utility import max_variable
    return max_variable(u)


def _parse_triple(text):
    parts = text.split(";")
    if len(parts) != 3:
        raise UsageError(f"malformed triple {text!r}: expected 'x1;x2;lambda'")
    x1 = [_number(t, "triple") for t in parts[0].split(",")]
    x2 = [_number(t, "triple") for t in parts[1].split(",")]
    lam = _number(parts[2], "triple")
    if len(x1) != len(x2) or not 0.0 <= lam <= 1.0:
        raise UsageError(f"malformed triple {text!r}")
    return x1, x2, lam


def cmd_games(args):
    results = {"games": [{"name": n, "path": str(games.path(n))} for n in games.names()]}
    return _report("games", None, results, [], {})


def _add_br_flags(p):
    p.add_argument("--grid", type=int, default=BestResponseConfig.grid,
                   help="simplex grid subdivisions for SER best responses")
    p.add_argument("--restarts", type=int, default=BestResponseConfig.restarts)
    p.add_argument("--budget", type=int, default=BestResponseConfig.budget,
                   help="evaluations per refinement start")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monfg", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="write the trade-off game")
    p.add_argument("game")
    p.add_argument("output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("psne", help="all pure Nash equilibria")
    p.add_argument("game")
    p.add_argument("--mode", choices=["trusted", "verified"], default="trusted")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_br_flags(p)
    p.set_defaults(func=cmd_psne)

    p = sub.add_parser("verify", help="check a profile for an epsilon-Nash equilibrium")
    p.add_argument("game")
    p.add_argument("--profile", required=True, help="e.g. '0.55,0.45;1,0'")
    p.add_argument("--assignment", help="e.g. 'ESR,SER'; defaults to the file's criteria")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    _add_br_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("best-response", help="best response of one player")
    p.add_argument("game")
    p.add_argument("--player", type=int, required=True)
    p.add_argument("--opponents", required=True, help="other players' strategies, e.g. '1,0'")
    p.add_argument("--criterion", choices=["ESR", "SER", "esr", "ser"])
    p.add_argument("--assignment", help=argparse.SUPPRESS)
    _add_br_flags(p)
    p.set_defaults(func=cmd_best_response)

    p = sub.add_parser("search-mixed", help="probe a 2-player game for mixed equilibria")
    p.add_argument("game")
    p.add_argument("--assignment")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--dedup-radius", type=float, default=MixedSearchConfig.dedup_radius)
    p.add_argument("--max-candidates", type=int, default=MixedSearchConfig.max_candidates)
    p.set_defaults(func=cmd_search_mixed)

    p = sub.add_parser("classify-utility", help="look for a shape counterexample")
    p.add_argument("utility", help="s-expression, e.g. '(* p1 p2)'")
    p.add_argument("--shape", required=True, choices=[s.value for s in Shape])
    p.add_argument("--box", help="'lo1,lo2;hi1,hi2'")
    p.add_argument("--game", help="use the padded payoff box of this game")
    p.add_argument("--triple", help="check one triple 'x1;x2;lambda' instead of sampling")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_classify_utility)

    p = sub.add_parser("games", help="list bundled game files")
    p.set_defaults(func=cmd_games)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"monfg: error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedInputError as exc:
        print(f"monfg: unsupported input: {exc}", file=sys.stderr)
        return 4
    except (InvalidInputError, MonfgError) as exc:
        print(f"monfg: invalid input: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"monfg: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
