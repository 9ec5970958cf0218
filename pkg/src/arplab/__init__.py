"""Exact solver and Q_n laboratory for the airplane refueling problem."""

from .enumeration import (SolveReport, SwapWitness, adjacent_swap_delta, count_qn,
                          enumerate_sequential_feasible, is_sequential_feasible, solve)
from .errors import *  # noqa: F401,F403
from .experiments import (Family, GeneratorSpec, SweepRow, gen_random, gen_theorem2_family,
                          qn_sweep, regime_report, validate_theorem2_preconditions)
from .model import (Airplane, Evaluation, Instance, Kind, cumulative_consumption, evaluate,
                    make_instance, nvep_distance, reduce_nvep_to_arp, verify_certificate)
from .oracle import OracleReport, brute_force_count_stable, brute_force_solve

__version__ = "0.1.0"
