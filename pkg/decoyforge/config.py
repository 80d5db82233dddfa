#!/usr/bin/python3
# Copyright (C) 2026 The DecoyForge Authors
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA 02110-1301 USA

__all__ = [
    "Config",
    "read_config",
    "default_config",
    "load_config",
    "format_config",
]

import logging
import os
import sys
from typing import Optional

from google.protobuf import text_format  # type: ignore

from . import config_pb2

if sys.version_info >= (3, 10):
    from typing import TypeAlias

    Config: TypeAlias = config_pb2.Config
else:
    Config = config_pb2.Config

DEFAULT_CONFIG_PATH = "decoyforge.conf"


def read_config(f):
    data = f.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return text_format.Parse(data, config_pb2.Config())


def default_config():
    return config_pb2.Config()


def load_config(path: Optional[str]):
    """Load the configuration at path.

    A missing file is only an error if the path was given explicitly; the
    default location is optional and falls back to the built-in defaults.
    """
    if path is None:
        if not os.path.exists(DEFAULT_CONFIG_PATH):
            return default_config()
        path = DEFAULT_CONFIG_PATH
    logging.debug("Reading configuration from %s", path)
    with open(path) as f:
        return read_config(f)


def format_config(config) -> str:
    """Render every field, including unset defaults, on a single line."""
    parts = []
    for section_name in ("verifier", "optimizer", "simulation", "milp"):
        section = getattr(config, section_name)
        for field in section.DESCRIPTOR.fields:
            parts.append(
                "%s.%s=%s" % (section_name, field.name, getattr(section, field.name))
            )
    parts.append("solver_command=%r" % config.solver_command)
    return " ".join(parts)
