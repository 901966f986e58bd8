"""The worked seven-state plant and its attack scenarios, as model-file text."""
from __future__ import annotations

from casct.modelfile import ModelFile, parse_model

_PLANT = """\
alphabet: alpha beta eta mu lambda
states: 1 2 3 4 5 6 7
initial: 1
marked: 1 2 3 4 5 6 7
trans: 1 beta 2
trans: 2 eta 3
trans: 3 alpha 4
trans: 4 mu 6
trans: 4 lambda 5
trans: 6 beta 7
attack: 3 alpha 4 { eps, alpha, alpha alpha }
spec-states: 1 2 3 4 6 7
"""

_CLASSES = {
    # sensor and actuator attacks together
    "example1": "controllable: alpha beta eta mu lambda\nattackable-controllable: beta lambda\n",
    # conventional supervisor meets an actuator attack on mu
    "example2": "controllable: alpha beta eta mu lambda\nattackable-controllable: mu\n",
    "case1": "controllable: alpha beta eta mu lambda\nattackable-controllable: beta\n",
    "case2": "controllable: alpha eta mu lambda\n",
}

_COMMON = "observable: alpha beta mu lambda\nattackable-observable: alpha\n"


def model_text(name: str) -> str:
    if name not in _CLASSES:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(_CLASSES)}")
    return _CLASSES[name] + _COMMON + _PLANT


def scenario(name: str) -> ModelFile:
    return parse_model(model_text(name))


SCENARIOS = tuple(_CLASSES)
