# -*- coding: utf-8 -*-
# Generated by the protocol buffer compiler.  DO NOT EDIT!
# NO CHECKED-IN PROTOBUF GENCODE
# source: decoyforge/config.proto
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
    'decoyforge/config.proto'
)
# @@protoc_insertion_point(imports)

_sym_db = _symbol_database.Default()




DESCRIPTOR = _descriptor_pool.Default().AddSerializedFile(b'\n\x17\x64\x65\x63oyforge/config.proto\x12\ndecoyforge\"m\n\x0eVerifierConfig\x12\x18\n\ttolerance\x18\x01 \x01(\x01:\x05\x31\x65-12\x12\x1f\n\x0emax_iterations\x18\x02 \x01(\x03:\x07\x31\x30\x30\x30\x30\x30\x30\x12 \n\x11\x64irect_max_states\x18\x03 \x01(\x03:\x05\x32\x30\x30\x30\x30\"d\n\x0fOptimizerConfig\x12\x14\n\tmax_nodes\x18\x01 \x01(\x03:\x01\x30\x12\x16\n\x0bmax_seconds\x18\x02 \x01(\x01:\x01\x30\x12#\n\x11\x62rute_force_limit\x18\x03 \x01(\x03:\x08\x31\x36\x37\x37\x37\x32\x31\x36\"n\n\x10SimulationConfig\x12\x18\n\x08\x65pisodes\x18\x01 \x01(\x03:\x06\x31\x30\x30\x30\x30\x30\x12\x1b\n\x0ehorizon_factor\x18\x02 \x01(\x03:\x03\x31\x30\x30\x12\x12\n\x07threads\x18\x03 \x01(\x05:\x01\x31\x12\x0f\n\x04seed\x18\x04 \x01(\x03:\x01\x30\"\x87\x01\n\nMilpConfig\x12\x14\n\x06sparse\x18\x01 \x01(\x08:\x04true\x12 \n\x11prune_unreachable\x18\x02 \x01(\x08:\x05\x66\x61lse\x12\x1d\n\x0fpin_unreachable\x18\x03 \x01(\x08:\x04true\x12\"\n\x14\x63\x65rtify_reachability\x18\x04 \x01(\x08:\x04true\"\xd6\x01\n\x06\x43onfig\x12,\n\x08verifier\x18\x01 \x01(\x0b\x32\x1a.decoyforge.VerifierConfig\x12.\n\toptimizer\x18\x02 \x01(\x0b\x32\x1b.decoyforge.OptimizerConfig\x12\x30\n\nsimulation\x18\x03 \x01(\x0b\x32\x1c.decoyforge.SimulationConfig\x12$\n\x04milp\x18\x04 \x01(\x0b\x32\x16.decoyforge.MilpConfig\x12\x16\n\x0esolver_command\x18\x05 \x01(\t')

_globals = globals()
_builder.BuildMessageAndEnumDescriptors(DESCRIPTOR, _globals)
_builder.BuildTopDescriptorsAndMessages(DESCRIPTOR, 'decoyforge.config_pb2', _globals)
if not _descriptor._USE_C_DESCRIPTORS:
  DESCRIPTOR._loaded_options = None
  _globals['_VERIFIERCONFIG']._serialized_start=39
  _globals['_VERIFIERCONFIG']._serialized_end=148
  _globals['_OPTIMIZERCONFIG']._serialized_start=150
  _globals['_OPTIMIZERCONFIG']._serialized_end=250
  _globals['_SIMULATIONCONFIG']._serialized_start=252
  _globals['_SIMULATIONCONFIG']._serialized_end=362
  _globals['_MILPCONFIG']._serialized_start=365
  _globals['_MILPCONFIG']._serialized_end=500
  _globals['_CONFIG']._serialized_start=503
  _globals['_CONFIG']._serialized_end=717
# @@protoc_insertion_point(module_scope)
