# -*- coding: utf-8 -*-
# Generated by the protocol buffer compiler.  DO NOT EDIT!
# NO CHECKED-IN PROTOBUF GENCODE
# source: decoyforge/scenario.proto
# Protobuf Python Version: 6.30.2
"""Generated protocol buffer code."""
from google.protobuf import descriptor as _descriptor
from google.protobuf import descriptor_pool as _descriptor_pool
from google.protobuf import runtime_version as _runtime_version
from google.protobuf import symbol_database as _symbol_database
from google.protobuf.internal import builder as _builder
_runtime_version.ValidateProtobufRuntimeVersion(
    _runtime_version.Domain.PUBLIC,
    6,
    30,
    2,
    '',
    'decoyforge/scenario.proto'
)
# @@protoc_insertion_point(imports)

_sym_db = _symbol_database.Default()




DESCRIPTOR = _descriptor_pool.Default().AddSerializedFile(b'\n\x19\x64\x65\x63oyforge/scenario.proto\x12\ndecoyforge\"(\n\tSuccessor\x12\r\n\x05state\x18\x01 \x01(\t\x12\x0c\n\x04prob\x18\x02 \x01(\x01\"V\n\nTransition\x12\r\n\x05state\x18\x01 \x01(\t\x12\x0e\n\x06\x61\x63tion\x18\x02 \x01(\t\x12)\n\nsuccessors\x18\x03 \x03(\x0b\x32\x15.decoyforge.Successor\"L\n\x04Rule\x12\x0c\n\x04node\x18\x01 \x01(\t\x12\x13\n\x0bobservation\x18\x02 \x01(\t\x12\x0e\n\x06\x61\x63tion\x18\x03 \x01(\t\x12\x11\n\tnext_node\x18\x04 \x01(\t\"R\n\nController\x12\r\n\x05nodes\x18\x01 \x03(\t\x12\x14\n\x0cinitial_node\x18\x02 \x01(\t\x12\x1f\n\x05rules\x18\x03 \x03(\x0b\x32\x10.decoyforge.Rule\"H\n\x04\x43ost\x12\x0c\n\x04\x66rom\x18\x01 \x01(\t\x12\n\n\x02to\x18\x02 \x01(\t\x12\x0c\n\x04\x63ost\x18\x03 \x01(\x01\x12\x18\n\tforbidden\x18\x04 \x01(\x08:\x05\x66\x61lse\"\xc9\x02\n\x08Scenario\x12\x0e\n\x06states\x18\x01 \x03(\t\x12\x0f\n\x07\x61\x63tions\x18\x02 \x03(\t\x12\x14\n\x0cobservations\x18\x03 \x03(\t\x12\x15\n\rinitial_state\x18\x04 \x01(\t\x12/\n\x06obs_of\x18\x05 \x03(\x0b\x32\x1f.decoyforge.Scenario.ObsOfEntry\x12+\n\x0btransitions\x18\x06 \x03(\x0b\x32\x16.decoyforge.Transition\x12#\n\x03\x66sc\x18\x07 \x01(\x0b\x32\x16.decoyforge.Controller\x12\x1f\n\x05\x63osts\x18\x08 \x03(\x0b\x32\x10.decoyforge.Cost\x12\x0e\n\x06\x62udget\x18\t \x01(\x01\x12\r\n\x05\x64\x65\x63oy\x18\n \x03(\t\x1a,\n\nObsOfEntry\x12\x0b\n\x03key\x18\x01 \x01(\t\x12\r\n\x05value\x18\x02 \x01(\t:\x02\x38\x01')

_globals = globals()
_builder.BuildMessageAndEnumDescriptors(DESCRIPTOR, _globals)
_builder.BuildTopDescriptorsAndMessages(DESCRIPTOR, 'decoyforge.scenario_pb2', _globals)
if not _descriptor._USE_C_DESCRIPTORS:
  DESCRIPTOR._loaded_options = None
  _globals['_SCENARIO_OBSOFENTRY']._loaded_options = None
  _globals['_SCENARIO_OBSOFENTRY']._serialized_options = b'8\001'
  _globals['_SUCCESSOR']._serialized_start=41
  _globals['_SUCCESSOR']._serialized_end=81
  _globals['_TRANSITION']._serialized_start=83
  _globals['_TRANSITION']._serialized_end=169
  _globals['_RULE']._serialized_start=171
  _globals['_RULE']._serialized_end=247
  _globals['_CONTROLLER']._serialized_start=249
  _globals['_CONTROLLER']._serialized_end=331
  _globals['_COST']._serialized_start=333
  _globals['_COST']._serialized_end=405
  _globals['_SCENARIO']._serialized_start=408
  _globals['_SCENARIO']._serialized_end=737
  _globals['_SCENARIO_OBSOFENTRY']._serialized_start=693
  _globals['_SCENARIO_OBSOFENTRY']._serialized_end=737
# @@protoc_insertion_point(module_scope)
