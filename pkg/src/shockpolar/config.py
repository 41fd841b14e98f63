"""Run configuration: an INI-style ``key = value`` file parsed with :mod:`configparser`.

See ``docs/config.md`` for the grammar. Example::

    [upstream]
    model = euler-ideal
    M0 = 5.0

    [eos]
    branch1 = polytropic 0.001 5.3 1.5
    branch2 = borderline-convex 5.3 5.6 auto
    branch3 = polytropic 5.6 10000 auto

    [run]
    n = 512
    plane = u
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .eos_barotropic import BarotropicEos
from .eos_ideal import PiecewiseIdealEos
from .errors import ValidationError
from .polar_euler import EulerUpstream
from .polar_potential import PotentialUpstream

MODELS = ("euler-polytropic", "euler-ideal", "potential")
ANALYSES = ("convexity", "critical", "sonic", "residuals")
OUTPUTS = ("csv", "svg", "report")
PLANES = ("u", "j")

_KEYS = {
    "upstream": {"model", "m0", "t0"},
    "eos": {"gamma", "r"},
    "run": {"n", "plane", "analyses", "outputs", "out"},
    "sweep": {"parameter", "values", "range"},
}
_INDEXED = re.compile(r"^(branch|segment)(\d+)$")


def parse_number(text: str, key: str = "value") -> float:
    """Float, or an exact fraction such as ``5/3``."""
    s = text.strip()
    try:
        if "/" in s:
            return float(Fraction(s))
        return float(s)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{key}: not a number: {text!r}") from None


def _parse_list(text: str, allowed, key: str) -> tuple:
    items = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in items if x not in allowed]
    if bad:
        raise ValidationError(f"{key}: unknown entries {bad}; allowed: {', '.join(allowed)}")
    return items


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class RunConfig:
    model: str
    M0: float
    T0: float = 1.0
    gamma: Optional[float] = None
    R: float = 1.0
    branches: tuple = ()   # (kind, T_lo, T_hi, parameter or None)
    segments: tuple = ()   # (gamma, V_lo, V_hi)
    n: int = 512
    plane: str = "u"
    analyses: tuple = ANALYSES
    outputs: tuple = OUTPUTS
    out: Optional[str] = None
    sweep: Optional[SweepSpec] = None
    source: str = field(default="<config>", compare=False)

    def validate(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ValidationError(f"model must be one of {', '.join(MODELS)}, got {self.model!r}")
        if not (math.isfinite(self.M0) and self.M0 > 1):
            raise ValidationError(f"M0 must exceed 1, got {self.M0}")
        if self.n < 16:
            raise ValidationError(f"n must be at least 16, got {self.n}")
        if self.plane not in PLANES:
            raise ValidationError(f"plane must be u or j, got {self.plane!r}")
        if self.model == "euler-polytropic":
            if self.gamma is None:
                raise ValidationError("euler-polytropic needs eos.gamma")
            if self.branches or self.segments:
                raise ValidationError("euler-polytropic takes only eos.gamma")
        elif self.model == "euler-ideal":
            if self.segments:
                raise ValidationError("euler-ideal takes branch<N> lines, not segment<N>")
            if (self.gamma is None) == (not self.branches):
                raise ValidationError("euler-ideal needs either eos.gamma or branch<N> lines")
        else:
            if self.branches:
                raise ValidationError("potential takes segment<N> lines, not branch<N>")
            if (self.gamma is None) == (not self.segments):
                raise ValidationError("potential needs either eos.gamma or segment<N> lines")
        self.upstream()
        return self

    def eos(self):
        if self.model == "euler-ideal":
            if self.branches:
                return PiecewiseIdealEos.from_branches(self.branches, R=self.R)
            return PiecewiseIdealEos.polytropic(self.gamma, R=self.R)
        if self.model == "potential":
            if self.segments:
                return BarotropicEos.from_segments(self.segments)
            return BarotropicEos.gamma_law(self.gamma)
        return None

    def upstream(self):
        if self.model == "euler-polytropic":
            return EulerUpstream(self.M0, gamma=self.gamma)
        if self.model == "euler-ideal":
            return EulerUpstream(self.M0, eos=self.eos(), T0=self.T0)
        return PotentialUpstream(self.M0, self.eos())

    def with_parameter(self, name: str, value: float) -> "RunConfig":
        """Copy with one sweepable parameter replaced."""
        if name == "M0":
            return replace(self, M0=value)
        if name == "T0":
            return replace(self, T0=value)
        if name == "gamma":
            if self.gamma is None:
                raise ValidationError("gamma is not set in this configuration")
            return replace(self, gamma=value)
        m = re.match(r"^(branch|segment)(\d+)\.(param|gamma)$", name)
        if m:
            kind, idx, fld = m.group(1), int(m.group(2)) - 1, m.group(3)
            items = list(self.branches if kind == "branch" else self.segments)
            if not 0 <= idx < len(items):
                raise ValidationError(f"{name}: no such {kind}")
            if kind == "branch" and fld == "param":
                k, lo, hi, _ = items[idx]
                items[idx] = (k, lo, hi, value)
                return replace(self, branches=tuple(items))
            if kind == "segment" and fld == "gamma":
                _, lo, hi = items[idx]
                items[idx] = (value, lo, hi)
                return replace(self, segments=tuple(items))
        raise ValidationError(
            f"cannot sweep {name!r}; use M0, T0, gamma, branch<N>.param or segment<N>.gamma")


def _parse_branch(key, text):
    parts = text.split()
    if len(parts) != 4:
        raise ValidationError(f"{key}: expected 'kind T_lo T_hi parameter', got {text!r}")
    kind, lo, hi, par = parts
    param = None if par == "auto" else parse_number(par, key)
    return kind, parse_number(lo, key), parse_number(hi, key), param


def _parse_segment(key, text):
    parts = text.split()
    if len(parts) != 3:
        raise ValidationError(f"{key}: expected 'gamma V_lo V_hi', got {text!r}")
    return tuple(parse_number(p, key) for p in parts)


def _parse_range(text: str) -> tuple:
    parts = [p.strip() for p in text.split(":")]
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
        raise ValidationError(f"range: expected 'start:stop:count[:lin|log]', got {text!r}")
    start, stop = parse_number(parts[0], "range"), parse_number(parts[1], "range")
    try:
        count = int(parts[2])
    except ValueError:
        raise ValidationError(f"range: count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise ValidationError("range: empty range")
    if count == 1:
        return (start,)
    if len(parts) == 4 and parts[3] == "log":
        if start <= 0 or stop <= 0:
            raise ValidationError("range: log spacing needs positive ends")
        r = (stop / start) ** (1.0 / (count - 1))
        return tuple(start * r ** i for i in range(count - 1)) + (stop,)
    step = (stop - start) / (count - 1)
    return tuple(start + step * i for i in range(count - 1)) + (stop,)


def parse_sweep(parameter: str, values: Optional[str] = None, range_: Optional[str] = None) -> SweepSpec:
    if (values is None) == (range_ is None):
        raise ValidationError("sweep needs exactly one of values or range")
    if values is not None:
        vals = tuple(parse_number(v, "values") for v in values.split(",") if v.strip())
    else:
        vals = _parse_range(range_)
    if not vals:
        raise ValidationError("sweep: empty range")
    return SweepSpec(parameter.strip(), vals)


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                   comment_prefixes=("#", ";"), default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ValidationError(f"{source}: {exc}") from None

    for sec in cp.sections():
        if sec not in _KEYS:
            raise ValidationError(f"{source}: unknown section [{sec}]")
        for key in cp[sec]:
            if key.lower() in _KEYS[sec]:
                continue
            if sec == "eos" and _INDEXED.match(key):
                continue
            raise ValidationError(f"{source}: unknown key {key!r} in [{sec}]")

    def get(sec, key):
        if not cp.has_section(sec):
            return None
        for k in cp[sec]:
            if k.lower() == key:
                return cp[sec][k]
        return None

    if get("upstream", "model") is None or get("upstream", "m0") is None:
        raise ValidationError(f"{source}: [upstream] needs model and M0")
    kw = dict(model=get("upstream", "model").strip(), M0=parse_number(get("upstream", "m0"), "M0"), source=source)
    if get("upstream", "t0") is not None:
        kw["T0"] = parse_number(get("upstream", "t0"), "T0")
    if get("eos", "gamma") is not None:
        kw["gamma"] = parse_number(get("eos", "gamma"), "gamma")
    if get("eos", "r") is not None:
        kw["R"] = parse_number(get("eos", "r"), "R")
    if cp.has_section("eos"):
        indexed = {"branch": [], "segment": []}
        for key in cp["eos"]:
            m = _INDEXED.match(key)
            if m:
                indexed[m.group(1)].append((int(m.group(2)), key))
        kw["branches"] = tuple(_parse_branch(k, cp["eos"][k]) for _, k in sorted(indexed["branch"]))
        kw["segments"] = tuple(_parse_segment(k, cp["eos"][k]) for _, k in sorted(indexed["segment"]))
    if get("run", "n") is not None:
        try:
            kw["n"] = int(get("run", "n"))
        except ValueError:
            raise ValidationError(f"n must be an integer, got {get('run', 'n')!r}") from None
    if get("run", "plane") is not None:
        kw["plane"] = get("run", "plane").strip()
    if get("run", "analyses") is not None:
        kw["analyses"] = _parse_list(get("run", "analyses"), ANALYSES, "analyses")
    if get("run", "outputs") is not None:
        kw["outputs"] = _parse_list(get("run", "outputs"), OUTPUTS, "outputs")
    if get("run", "out") is not None:
        kw["out"] = get("run", "out").strip()
    if cp.has_section("sweep"):
        if get("sweep", "parameter") is None:
            raise ValidationError(f"{source}: [sweep] needs parameter")
        kw["sweep"] = parse_sweep(get("sweep", "parameter"), get("sweep", "values"), get("sweep", "range"))
    return RunConfig(**kw).validate()


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, source=path)
