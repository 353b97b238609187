"""Exact combinatorial VCG auctions under interval valuation uncertainty.

The engine is exact end to end: valuations are rational tables over all
bundles, winner determination is a subset DP with a canonical tie-break, and
the worst-case regret of any pure report is computed by an exact rational
simplex over adversary welfare curves, with replayable certificates.
"""
from .curves import WelfareCurve, curve_of_opponents, realize_curve
from .generate import derive_seed, gen_box, gen_instance
from .kernels import HAVE_SPEEDUPS
from .mechanism import (Allocation, Outcome, max_welfare, msw_without,
                        social_welfare, utility, vcg_outcome)
from .model import AuctionInstance, CandidateBox, Valuation
from .money import (DEFAULT_SCALE, Money, MoneyFormatError, format_money,
                    parse_money)
from .regret import (OracleCapError, RegretCertificate, regret_bruteforce,
                     regret_exact_box, regret_structured, replay_certificate)
from .scenario import (ScenarioDoc, ScenarioError, load_scenario,
                       read_scenario, save_scenario)
from .verify import (LocalizationResult, ProofTrace, SearchResult, SweepReport,
                     TrialRow, certified_report, compute_trace,
                     localization_check, localization_sweep,
                     midpoint_bound_sweep, search_low_regret,
                     welfare_bound_sweep)

__version__ = "0.1.0"

__all__ = [
    "Allocation", "AuctionInstance", "CandidateBox", "DEFAULT_SCALE",
    "HAVE_SPEEDUPS", "LocalizationResult", "Money", "MoneyFormatError",
    "OracleCapError", "Outcome", "ProofTrace", "RegretCertificate",
    "ScenarioDoc", "ScenarioError", "SearchResult", "SweepReport", "TrialRow",
    "Valuation", "WelfareCurve", "certified_report", "compute_trace",
    "curve_of_opponents", "derive_seed", "format_money", "gen_box",
    "gen_instance", "load_scenario", "localization_check",
    "localization_sweep", "max_welfare", "midpoint_bound_sweep", "msw_without",
    "parse_money", "read_scenario", "realize_curve", "regret_bruteforce",
    "regret_exact_box", "regret_structured", "replay_certificate",
    "save_scenario", "search_low_regret", "social_welfare", "utility",
    "vcg_outcome", "__version__",
]
