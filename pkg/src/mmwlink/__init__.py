"""Throughput model for a mm-wave link under transient blockage.

The link hops between a best-aligned sector, lower-rate suboptimal
sectors reached after imperfect recovery, and a blocked state, driven
by pedestrian blockage events and periodic sector sweeps. This package
derives the slot-level state chain for a scenario, computes the
long-run throughput mean and fluctuation analytically, validates both
against seeded Monte Carlo simulation, and fits the model to measured
throughput traces.
"""

from ._kernels import BACKEND
from .chain import (MarkovChain, build_chain, chain_from_rates, state_labels,
                    stationary, transition_csv)
from .metrics import ThroughputSummary, summarize
from .probability import (dwell_pmf, stay_probability,
                          sweep_preemption_mc, sweep_preemption_probability)
from .scenario import (BlockageProcess, ConfigError, LinkRates, QueueParams,
                       Scenario, ScenarioConfig, SweepPolicy, TimingParams,
                       channel_access_time, load_config,
                       load_from_aggregation_factor, overhead_factor,
                       parse_config_text, physical_block_duration, validate)
from .simulate import (SimulationResult, series_csv, simulate_chain,
                       simulate_events)
from .sweep import SweepRow, SweepSpec, rows_to_csv, run_sweep
from .throughput import (BlockageOutcome, StateThroughput,
                         aggregation_capacity, blockage_effect,
                         queue_fixed_point, state_throughput)
from .trace import (EmpiricalModel, ThroughputTrace, TraceFormatError,
                    extract_levels, load_trace, to_config_fragment)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlockageOutcome",
    "BlockageProcess",
    "ConfigError",
    "EmpiricalModel",
    "LinkRates",
    "MarkovChain",
    "QueueParams",
    "Scenario",
    "ScenarioConfig",
    "SimulationResult",
    "StateThroughput",
    "SweepPolicy",
    "SweepRow",
    "SweepSpec",
    "ThroughputSummary",
    "ThroughputTrace",
    "TimingParams",
    "TraceFormatError",
    "aggregation_capacity",
    "blockage_effect",
    "build_chain",
    "chain_from_rates",
    "channel_access_time",
    "dwell_pmf",
    "extract_levels",
    "load_config",
    "load_from_aggregation_factor",
    "load_trace",
    "overhead_factor",
    "parse_config_text",
    "physical_block_duration",
    "queue_fixed_point",
    "rows_to_csv",
    "run_sweep",
    "series_csv",
    "simulate_chain",
    "simulate_events",
    "state_labels",
    "state_throughput",
    "stationary",
    "summarize",
    "sweep_preemption_mc",
    "sweep_preemption_probability",
    "to_config_fragment",
    "transition_csv",
    "validate",
    "__version__",
]
