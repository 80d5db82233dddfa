"""
@generated by mypy-protobuf.  Do not edit manually!
isort:skip_file
Scenario documents: a POMDP, a finite-state controller, alteration costs
and the decoy set.
"""

from collections import abc as _abc
from google.protobuf import descriptor as _descriptor
from google.protobuf import message as _message
from google.protobuf.internal import containers as _containers
import builtins as _builtins
import sys
import typing as _typing

if sys.version_info >= (3, 11):
    from typing import TypeAlias as _TypeAlias, Never as _Never
else:
    from typing_extensions import TypeAlias as _TypeAlias, Never as _Never

DESCRIPTOR: _descriptor.FileDescriptor

@_typing.final
class Successor(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    STATE_FIELD_NUMBER: _builtins.int
    PROB_FIELD_NUMBER: _builtins.int
    state: _builtins.str
    prob: _builtins.float
    def __init__(
        self,
        *,
        state: _builtins.str | None = ...,
        prob: _builtins.float | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["prob", b"prob", "state", b"state"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["prob", b"prob", "state", b"state"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Successor: _TypeAlias = Successor  # noqa: Y015

@_typing.final
class Transition(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    STATE_FIELD_NUMBER: _builtins.int
    ACTION_FIELD_NUMBER: _builtins.int
    SUCCESSORS_FIELD_NUMBER: _builtins.int
    state: _builtins.str
    action: _builtins.str
    @_builtins.property
    def successors(self) -> _containers.RepeatedCompositeFieldContainer[Global___Successor]: ...
    def __init__(
        self,
        *,
        state: _builtins.str | None = ...,
        action: _builtins.str | None = ...,
        successors: _abc.Iterable[Global___Successor] | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["action", b"action", "state", b"state"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["action", b"action", "state", b"state", "successors", b"successors"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Transition: _TypeAlias = Transition  # noqa: Y015

@_typing.final
class Rule(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    NODE_FIELD_NUMBER: _builtins.int
    OBSERVATION_FIELD_NUMBER: _builtins.int
    ACTION_FIELD_NUMBER: _builtins.int
    NEXT_NODE_FIELD_NUMBER: _builtins.int
    node: _builtins.str
    observation: _builtins.str
    action: _builtins.str
    next_node: _builtins.str
    def __init__(
        self,
        *,
        node: _builtins.str | None = ...,
        observation: _builtins.str | None = ...,
        action: _builtins.str | None = ...,
        next_node: _builtins.str | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["action", b"action", "next_node", b"next_node", "node", b"node", "observation", b"observation"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["action", b"action", "next_node", b"next_node", "node", b"node", "observation", b"observation"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Rule: _TypeAlias = Rule  # noqa: Y015

@_typing.final
class Controller(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    NODES_FIELD_NUMBER: _builtins.int
    INITIAL_NODE_FIELD_NUMBER: _builtins.int
    RULES_FIELD_NUMBER: _builtins.int
    initial_node: _builtins.str
    @_builtins.property
    def nodes(self) -> _containers.RepeatedScalarFieldContainer[_builtins.str]: ...
    @_builtins.property
    def rules(self) -> _containers.RepeatedCompositeFieldContainer[Global___Rule]: ...
    def __init__(
        self,
        *,
        nodes: _abc.Iterable[_builtins.str] | None = ...,
        initial_node: _builtins.str | None = ...,
        rules: _abc.Iterable[Global___Rule] | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["initial_node", b"initial_node"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["initial_node", b"initial_node", "nodes", b"nodes", "rules", b"rules"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Controller: _TypeAlias = Controller  # noqa: Y015

@_typing.final
class Cost(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    FROM_FIELD_NUMBER: _builtins.int
    TO_FIELD_NUMBER: _builtins.int
    COST_FIELD_NUMBER: _builtins.int
    FORBIDDEN_FIELD_NUMBER: _builtins.int
    to: _builtins.str
    cost: _builtins.float
    forbidden: _builtins.bool
    """Only meaningful for identity pairs, which are otherwise implied free."""
    def __init__(
        self,
        *,
        to: _builtins.str | None = ...,
        cost: _builtins.float | None = ...,
        forbidden: _builtins.bool | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["cost", b"cost", "forbidden", b"forbidden", "from", b"from", "to", b"to"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["cost", b"cost", "forbidden", b"forbidden", "from", b"from", "to", b"to"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Cost: _TypeAlias = Cost  # noqa: Y015

@_typing.final
class Scenario(_message.Message):
    DESCRIPTOR: _descriptor.Descriptor

    @_typing.final
    class ObsOfEntry(_message.Message):
        DESCRIPTOR: _descriptor.Descriptor

        KEY_FIELD_NUMBER: _builtins.int
        VALUE_FIELD_NUMBER: _builtins.int
        key: _builtins.str
        value: _builtins.str
        def __init__(
            self,
            *,
            key: _builtins.str | None = ...,
            value: _builtins.str | None = ...,
        ) -> None: ...
        _HasFieldArgType: _TypeAlias = _typing.Literal["key", b"key", "value", b"value"]  # noqa: Y015
        def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
        _ClearFieldArgType: _TypeAlias = _typing.Literal["key", b"key", "value", b"value"]  # noqa: Y015
        def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
        def WhichOneof(self, oneof_group: _Never) -> None: ...

    STATES_FIELD_NUMBER: _builtins.int
    ACTIONS_FIELD_NUMBER: _builtins.int
    OBSERVATIONS_FIELD_NUMBER: _builtins.int
    INITIAL_STATE_FIELD_NUMBER: _builtins.int
    OBS_OF_FIELD_NUMBER: _builtins.int
    TRANSITIONS_FIELD_NUMBER: _builtins.int
    FSC_FIELD_NUMBER: _builtins.int
    COSTS_FIELD_NUMBER: _builtins.int
    BUDGET_FIELD_NUMBER: _builtins.int
    DECOY_FIELD_NUMBER: _builtins.int
    initial_state: _builtins.str
    budget: _builtins.float
    @_builtins.property
    def states(self) -> _containers.RepeatedScalarFieldContainer[_builtins.str]: ...
    @_builtins.property
    def actions(self) -> _containers.RepeatedScalarFieldContainer[_builtins.str]: ...
    @_builtins.property
    def observations(self) -> _containers.RepeatedScalarFieldContainer[_builtins.str]: ...
    @_builtins.property
    def obs_of(self) -> _containers.ScalarMap[_builtins.str, _builtins.str]: ...
    @_builtins.property
    def transitions(self) -> _containers.RepeatedCompositeFieldContainer[Global___Transition]: ...
    @_builtins.property
    def fsc(self) -> Global___Controller: ...
    @_builtins.property
    def costs(self) -> _containers.RepeatedCompositeFieldContainer[Global___Cost]: ...
    @_builtins.property
    def decoy(self) -> _containers.RepeatedScalarFieldContainer[_builtins.str]: ...
    def __init__(
        self,
        *,
        states: _abc.Iterable[_builtins.str] | None = ...,
        actions: _abc.Iterable[_builtins.str] | None = ...,
        observations: _abc.Iterable[_builtins.str] | None = ...,
        initial_state: _builtins.str | None = ...,
        obs_of: _abc.Mapping[_builtins.str, _builtins.str] | None = ...,
        transitions: _abc.Iterable[Global___Transition] | None = ...,
        fsc: Global___Controller | None = ...,
        costs: _abc.Iterable[Global___Cost] | None = ...,
        budget: _builtins.float | None = ...,
        decoy: _abc.Iterable[_builtins.str] | None = ...,
    ) -> None: ...
    _HasFieldArgType: _TypeAlias = _typing.Literal["budget", b"budget", "fsc", b"fsc", "initial_state", b"initial_state"]  # noqa: Y015
    def HasField(self, field_name: _HasFieldArgType) -> _builtins.bool: ...
    _ClearFieldArgType: _TypeAlias = _typing.Literal["actions", b"actions", "budget", b"budget", "costs", b"costs", "decoy", b"decoy", "fsc", b"fsc", "initial_state", b"initial_state", "obs_of", b"obs_of", "observations", b"observations", "states", b"states", "transitions", b"transitions"]  # noqa: Y015
    def ClearField(self, field_name: _ClearFieldArgType) -> None: ...
    def WhichOneof(self, oneof_group: _Never) -> None: ...

Global___Scenario: _TypeAlias = Scenario  # noqa: Y015
