from ._dynaa import (
    ConfigError,
    ExperimentConfig,
    ParseError,
    RunReport,
    aggregate,
    kl_divergence,
    parse_config,
    run_experiment,
    synthesize,
    write_outputs,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ParseError",
    "RunReport",
    "aggregate",
    "kl_divergence",
    "parse_config",
    "run_experiment",
    "synthesize",
    "write_outputs",
]
