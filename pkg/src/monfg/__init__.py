"""Multi-objective normal-form games.

Expected scalarised returns (ESR) and scalarised expected returns (SER),
utility functions written as s-expressions, sampled shape falsification,
reduction to a scalar trade-off game, pure equilibrium enumeration, best
responses, epsilon-Nash verification and a mixed-equilibrium probe for small
two-player games.
"""
from monfg.criteria import Criterion, esr_value, ser_value, value
from monfg.equilibrium import (BestResponseConfig, BestResponseResult, MonfgPsneResult, PsneSet,
                               TradeOffGame, VerificationReport, best_response, compute_all_psne,
                               compute_sample_psne, psne_monfg, reduce_monfg, simplex_grid,
                               verify_ne)
from monfg.errors import InvalidInputError, MonfgError, ParseError, UnsupportedInputError
from monfg.game import (Monfg, Nfg, action_payoff_vectors, expected_payoff_vector,
                        joint_action_profiles, pure_payoff_vector, pure_profile)
from monfg.gamefile import GameFile, dumps_game, load_game, loads_game
from monfg.mixed import MixedSearchConfig, MixedSearchResult, search_mixed_ne_2p
from monfg.shapes import (BoxDomain, Shape, ShapeCounterexample, check_triple, default_box,
                          falsify_shape, jensen_gap_strict_quasiconvex)
from monfg.utility import (compile_program, eval_utility, linear_utility, parse_utility,
                           to_sexpr)

__version__ = "0.1.0"
