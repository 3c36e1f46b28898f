"""Python access to the rtsec analysis and optimization core."""

from ._rtsec import (
    InputError,
    JointSolution,
    RtTask,
    SecTask,
    ServerParams,
    TaskSet,
    co_optimize,
    derive_seed,
    exhaustive_search,
    generate,
    load_taskset,
    parse_taskset,
    response_times,
    run_cli,
    simulate,
    solution_json,
)

__all__ = [
    "InputError",
    "JointSolution",
    "RtTask",
    "SecTask",
    "ServerParams",
    "TaskSet",
    "co_optimize",
    "derive_seed",
    "exhaustive_search",
    "generate",
    "load_taskset",
    "parse_taskset",
    "response_times",
    "run_cli",
    "simulate",
    "solution_json",
]
