#!/usr/bin/python
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

"""Cost-bounded observation alterations that steer a controller to a decoy."""

import shlex

__version__ = (0, 1, 0)
version_string = ".".join(map(str, __version__))


def splitout_env(command: str) -> tuple[dict[str, str], str]:
    """Split leading NAME=value assignments off a shell command line.

    Returns the environment overrides and the remaining command, requoted.
    """
    args = shlex.split(command)
    env = {}
    while len(args) > 0 and "=" in args[0] and not args[0].startswith("="):
        (key, value) = args.pop(0).split("=", 1)
        env[key] = value
    return env, shlex.join(args)
