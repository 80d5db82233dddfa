"""
@generated by mypy-protobuf.  Do not edit manually!
isort:skip_file
Solver configuration for decoyforge, in protobuf text format."""

from google.protobuf import descriptor as _descriptor
from google.protobuf import message as _message
import builtins as _builtins
import sys
import typing as _typing

if sys.version_info >= (3, 11):
    from typing import TypeAlias as _TypeAlias, Never as _Never
else:
    from typing_extensions import TypeAlias as _TypeAlias, Never as _Never

DESCRIPTOR: _descriptor.FileDescriptor

@_typing.final
class VerifierConfig(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    TOLERANCE_FIELD_NUMBER: _builtins.int
    MAX_ITERATIONS_FIELD_NUMBER: _builtins.int
    DIRECT_MAX_STATES_FIELD_NUMBER: _builtins.int
    tolerance: _builtins.float
    max_iterations: _builtins.int
    direct_max_states: _builtins.int
    """Chains with more (state, node) pairs are solved iteratively."""
    def __init__(
        self,
        *,
        tolerance: _builtins.float | None = ...,
        max_iterations: _builtins.int | None = ...,
        direct_max_states: _builtins.int | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["direct_max_states", b"direct_max_states", "max_iterations", b"max_iterations", "tolerance", b"tolerance"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["direct_max_states", b"direct_max_states", "max_iterations", b"max_iterations", "tolerance", b"tolerance"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___VerifierConfig: _TypeAlias = VerifierConfig  # noqa: Y015

@_typing.final
class OptimizerConfig(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    MAX_NODES_FIELD_NUMBER: _builtins.int
    MAX_SECONDS_FIELD_NUMBER: _builtins.int
    BRUTE_FORCE_LIMIT_FIELD_NUMBER: _builtins.int
    max_nodes: _builtins.int
    """0 means unlimited."""
    max_seconds: _builtins.float
    brute_force_limit: _builtins.int
    def __init__(
        self,
        *,
        max_nodes: _builtins.int | None = ...,
        max_seconds: _builtins.float | None = ...,
        brute_force_limit: _builtins.int | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["brute_force_limit", b"brute_force_limit", "max_nodes", b"max_nodes", "max_seconds", b"max_seconds"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["brute_force_limit", b"brute_force_limit", "max_nodes", b"max_nodes", "max_seconds", b"max_seconds"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___OptimizerConfig: _TypeAlias = OptimizerConfig  # noqa: Y015

@_typing.final
class SimulationConfig(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    EPISODES_FIELD_NUMBER: _builtins.int
    HORIZON_FACTOR_FIELD_NUMBER: _builtins.int
    THREADS_FIELD_NUMBER: _builtins.int
    SEED_FIELD_NUMBER: _builtins.int
    episodes: _builtins.int
    horizon_factor: _builtins.int
    """The horizon is this factor times the number of (state, node) pairs."""
    threads: _builtins.int
    seed: _builtins.int
    def __init__(
        self,
        *,
        episodes: _builtins.int | None = ...,
        horizon_factor: _builtins.int | None = ...,
        threads: _builtins.int | None = ...,
        seed: _builtins.int | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["episodes", b"episodes", "horizon_factor", b"horizon_factor", "seed", b"seed", "threads", b"threads"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["episodes", b"episodes", "horizon_factor", b"horizon_factor", "seed", b"seed", "threads", b"threads"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___SimulationConfig: _TypeAlias = SimulationConfig  # noqa: Y015

@_typing.final
class MilpConfig(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    SPARSE_FIELD_NUMBER: _builtins.int
    PRUNE_UNREACHABLE_FIELD_NUMBER: _builtins.int
    PIN_UNREACHABLE_FIELD_NUMBER: _builtins.int
    CERTIFY_REACHABILITY_FIELD_NUMBER: _builtins.int
    sparse: _builtins.bool
    prune_unreachable: _builtins.bool
    pin_unreachable: _builtins.bool
    certify_reachability: _builtins.bool
    """Flow rows that only let z be positive on triples with a path to a decoy."""
    def __init__(
        self,
        *,
        sparse: _builtins.bool | None = ...,
        prune_unreachable: _builtins.bool | None = ...,
        pin_unreachable: _builtins.bool | None = ...,
        certify_reachability: _builtins.bool | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["certify_reachability", b"certify_reachability", "pin_unreachable", b"pin_unreachable", "prune_unreachable", b"prune_unreachable", "sparse", b"sparse"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["certify_reachability", b"certify_reachability", "pin_unreachable", b"pin_unreachable", "prune_unreachable", b"prune_unreachable", "sparse", b"sparse"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___MilpConfig: _TypeAlias = MilpConfig  # noqa: Y015

@_typing.final
class Config(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    VERIFIER_FIELD_NUMBER: _builtins.int
    OPTIMIZER_FIELD_NUMBER: _builtins.int
    SIMULATION_FIELD_NUMBER: _builtins.int
    MILP_FIELD_NUMBER: _builtins.int
    SOLVER_COMMAND_FIELD_NUMBER: _builtins.int
    solver_command: _builtins.str
    """External MILP solver; {lp} and {solution} are replaced by file names."""
    @_builtins.property
    def verifier(self) -> Global___VerifierConfig: ...
    @_builtins.property
    def optimizer(self) -> Global___OptimizerConfig: ...
    @_builtins.property
    def simulation(self) -> Global___SimulationConfig: ...
    @_builtins.property
    def milp(self) -> Global___MilpConfig: ...
    def __init__(
        self,
        *,
        verifier: Global___VerifierConfig | None = ...,
        optimizer: Global___OptimizerConfig | None = ...,
        simulation: Global___SimulationConfig | None = ...,
        milp: Global___MilpConfig | None = ...,
        solver_command: _builtins.str | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["milp", b"milp", "optimizer", b"optimizer", "simulation", b"simulation", "solver_command", b"solver_command", "verifier", b"verifier"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["milp", b"milp", "optimizer", b"optimizer", "simulation", b"simulation", "solver_command", b"solver_command", "verifier", b"verifier"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Config: _TypeAlias = Config  # noqa: Y015
