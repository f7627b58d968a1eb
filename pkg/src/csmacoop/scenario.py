"""Scenario files: network plus default run parameters.

A scenario is a sectioned plain-text file; `#` starts a comment, tokens
are whitespace-separated, sections may appear in any order:

    [nodes]         node ids, one or more per line
    [ap-rates]      <node> <rate>           uplink rate towards the AP
    [link-rates]    <from> <to> <rate>      inter-node link (directed)
    [power]         <watts>                 common transmit power
    [defaults]      <key> <value>           optional run defaults; keys:
                                            sigma tau pending forward-max
                                            phases seed

Rates are in bit/s with 1-bit packets, so 1/rate is a packet airtime.
The writer emits a canonical form that re-parses to an equal scenario.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError
from .topology import Network

_DEFAULT_KEYS = ("sigma", "tau", "pending", "forward-max", "phases", "seed")
_SECTIONS = ("nodes", "ap-rates", "link-rates", "power", "defaults")


@dataclass(frozen=True)
class ScenarioDefaults:
    sigma: float | None = None
    tau: float | None = None
    pending: int | None = None
    forward_max: int | None = None
    phases: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class Scenario:
    network: Network
    defaults: ScenarioDefaults


def _fail(name: str, lineno: int, message: str):
    raise ValidationError(f"{name}:{lineno}: {message}")


def _parse_float(name, lineno, field, token) -> float:
    try:
        return float(token)
    except ValueError:
        _fail(name, lineno, f"{field}: expected a number, got {token!r}")


def _parse_int(name, lineno, field, token) -> int:
    try:
        return int(token)
    except ValueError:
        _fail(name, lineno, f"{field}: expected an integer, got {token!r}")


def parse_scenario_text(text: str, name: str = "<scenario>") -> Scenario:
    nodes: list[str] = []
    ap_rate: dict[str, float] = {}
    link_rate: dict[tuple[str, str], float] = {}
    power: float | None = None
    defaults: dict[str, object] = {}
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                _fail(name, lineno, f"unknown section {section!r}")
            continue
        tokens = line.split()
        if section is None:
            _fail(name, lineno, "directive before any [section] header")
        elif section == "nodes":
            for tok in tokens:
                if tok in nodes:
                    _fail(name, lineno, f"nodes: duplicate node {tok!r}")
                nodes.append(tok)
        elif section == "ap-rates":
            if len(tokens) != 2:
                _fail(name, lineno, "ap-rates: expected '<node> <rate>'")
            node, rate = tokens[0], _parse_float(name, lineno, "ap-rates", tokens[1])
            if node in ap_rate:
                _fail(name, lineno, f"ap-rates: duplicate entry for {node!r}")
            if rate <= 0:
                _fail(name, lineno, f"ap-rates: rate of {node!r} must be positive")
            ap_rate[node] = rate
        elif section == "link-rates":
            if len(tokens) != 3:
                _fail(name, lineno, "link-rates: expected '<from> <to> <rate>'")
            key = (tokens[0], tokens[1])
            rate = _parse_float(name, lineno, "link-rates", tokens[2])
            if key in link_rate:
                _fail(name, lineno, f"link-rates: duplicate entry for {key[0]!r} -> {key[1]!r}")
            if rate <= 0:
                _fail(name, lineno, f"link-rates: rate {key[0]!r} -> {key[1]!r} must be positive")
            link_rate[key] = rate
        elif section == "power":
            if len(tokens) != 1 or power is not None:
                _fail(name, lineno, "power: expected a single value on one line")
            power = _parse_float(name, lineno, "power", tokens[0])
            if power <= 0:
                _fail(name, lineno, "power: must be positive")
        elif section == "defaults":
            if len(tokens) != 2:
                _fail(name, lineno, "defaults: expected '<key> <value>'")
            key, value = tokens
            if key not in _DEFAULT_KEYS:
                _fail(name, lineno, f"defaults: unknown key {key!r} (known: {' '.join(_DEFAULT_KEYS)})")
            if key in defaults:
                _fail(name, lineno, f"defaults: duplicate key {key!r}")
            if key == "sigma":
                v = _parse_float(name, lineno, "defaults", value)
                if v <= 0:
                    _fail(name, lineno, "defaults: sigma must be positive")
            elif key == "tau":
                v = _parse_float(name, lineno, "defaults", value)
                if not 0 < v < 1:
                    _fail(name, lineno, "defaults: tau must lie strictly in (0, 1)")
            else:
                v = _parse_int(name, lineno, "defaults", value)
                minimum = 1 if key == "phases" else 0
                if v < minimum:
                    _fail(name, lineno, f"defaults: {key} must be >= {minimum}")
            defaults[key.replace("-", "_")] = v

    if not nodes:
        raise ValidationError(f"{name}: no nodes defined")
    if power is None:
        raise ValidationError(f"{name}: no [power] section")
    try:
        network = Network(
            nodes=tuple(nodes), ap_rate=ap_rate, link_rate=link_rate, power=power
        )
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}") from None
    return Scenario(network=network, defaults=ScenarioDefaults(**defaults))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read scenario {path}: {exc}") from None
    return parse_scenario_text(text, name=str(path))


def format_scenario(scenario: Scenario) -> str:
    """Canonical text form; parsing it yields an equal Scenario."""
    net = scenario.network
    out = ["[nodes]"]
    out.extend(net.nodes)
    out.append("")
    out.append("[ap-rates]")
    out.extend(f"{k} {net.ap_rate[k]!r}" for k in net.nodes)
    out.append("")
    if net.link_rate:
        order = {k: i for i, k in enumerate(net.nodes)}
        out.append("[link-rates]")
        out.extend(
            f"{a} {b} {net.link_rate[(a, b)]!r}"
            for a, b in sorted(net.link_rate, key=lambda ab: (order[ab[0]], order[ab[1]]))
        )
        out.append("")
    out.append("[power]")
    out.append(repr(net.power))
    values = [
        (key, getattr(scenario.defaults, key.replace("-", "_")))
        for key in _DEFAULT_KEYS
    ]
    if any(v is not None for _, v in values):
        out.append("")
        out.append("[defaults]")
        for key, value in values:
            if value is not None:
                out.append(f"{key} {value!r}")
    out.append("")
    return "\n".join(out)
