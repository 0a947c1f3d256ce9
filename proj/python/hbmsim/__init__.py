# Copyright 2026 The hbmsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""HBM and DDR4 benchmarking simulator."""

import json

from . import _hbmsim

__all__ = ["Error", "list_presets", "run_preset", "run_config", "normalize_config", "gen_address", "decode"]


class Error(Exception):
    """Raised for invalid configs and simulation errors."""

    def __init__(self, message, kind="", field=""):
        super().__init__(message)
        self.kind = kind
        self.field = field


def _call(fn, *args):
    try:
        return fn(*args)
    except _hbmsim.Error as e:
        raise Error(*e.args) from None


def _result(pair):
    summary, files = pair
    return json.loads(summary), dict(files)


def list_presets():
    """Names and descriptions of the built-in experiments."""
    return list(_hbmsim.list_presets())


def run_preset(name):
    """Run a preset; returns (summary dict, {file name: contents})."""
    return _result(_call(_hbmsim.run_preset, name))


def run_config(config):
    """Run a config given as a dict or JSON string; a sweep when it has a sweep block."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _result(_call(_hbmsim.run_config, text))


def normalize_config(config):
    """The fully expanded form of a config."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_call(_hbmsim.normalize_config, text))


def gen_address(A, B, S, W, N, i):
    return _call(_hbmsim.gen_address, A, B, S, W, N, i)


def decode(policy, memory, addr):
    return _call(_hbmsim.decode, policy, memory, addr)
