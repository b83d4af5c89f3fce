"""Reinforcement schedules: how many balls reinforce the drawn color at each step.

A schedule maps each integer draw time t >= 1 to a finite real amount >= 0 of
extra ball mass added to the drawn color.  Mass is real-valued, not integer,
so logarithmic and rational schedules are representable.  A value of 0 is
allowed: the step then adds only the new unit-mass color.

Schedule-string grammar (used by the CLI and config files):

    const:<float>          constant amount
    ln                     amount ln(t) at time t (so 0 at t = 1)
    step:t1=v1,t2=v2,...   right-open constant segments: v_i applies on
                           [t_{i-1}, t_i) with t_0 = 0; the final breakpoint
                           may be "inf", and the final value always extends
                           to infinity
    table:<path>           explicit per-time values, one float per line
                           (line n holds the amount for time n)
    paper-f                bundled increasing step preset used by the
                           figure-reproduction commands
    paper-g                bundled decreasing piecewise-rational preset used
                           by the figure-reproduction commands
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ScheduleParseError, ScheduleRangeError


class Schedule:
    """Base class: a map from integer time t >= 1 to reinforcement mass."""

    def value(self, t: int):
        """Reinforcement mass at time t."""
        raise NotImplementedError

    def values(self, horizon: int) -> np.ndarray:
        """Masses for times 1..horizon as a float array."""
        return np.array([float(self.value(t)) for t in range(1, horizon + 1)])

    def cumulative(self, horizon: int) -> np.ndarray:
        """Prefix sums: out[n] = sum of masses for times 1..n, out[0] = 0."""
        out = np.zeros(horizon + 1)
        np.cumsum(self.values(horizon), out=out[1:])
        return out


def _require_time(t: int, minimum: int = 1) -> None:
    if t < minimum:
        raise ScheduleRangeError(f"schedule evaluated at time {t} < {minimum}")


@dataclass(frozen=True)
class Constant(Schedule):
    """The same mass at every time.

    The mass may be any nonnegative number type, including a Fraction, which
    keeps forced-draw replays exact.
    """

    delta: float

    def __post_init__(self):
        if self.delta < 0:
            raise ScheduleRangeError(f"negative reinforcement {self.delta}")

    def value(self, t: int):
        _require_time(t, minimum=0)
        return self.delta

    def values(self, horizon: int) -> np.ndarray:
        return np.full(horizon, float(self.delta))


@dataclass(frozen=True)
class NaturalLog(Schedule):
    """Mass ln(t) at time t; ln(1) = 0 is accepted as a valid zero step."""

    def value(self, t: int) -> float:
        _require_time(t)
        return math.log(t)

    def values(self, horizon: int) -> np.ndarray:
        return np.log(np.arange(1, horizon + 1, dtype=float))


@dataclass(frozen=True)
class Stepped(Schedule):
    """Right-open constant segments covering [0, infinity).

    Segment i holds ``levels[i]`` on [ends[i-1], ends[i]) with ends[-1]
    implicitly 0.  The final level extends to infinity whether or not the
    final breakpoint is finite.
    """

    ends: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        if len(self.ends) != len(self.levels) or not self.ends:
            raise ValueError("ends and levels must be equal-length and nonempty")
        if any(b <= a for a, b in zip(self.ends, self.ends[1:])):
            raise ValueError(f"breakpoints not strictly ascending: {self.ends}")
        if any(v < 0 for v in self.levels):
            raise ScheduleRangeError(f"negative reinforcement in {self.levels}")

    def value(self, t: int) -> float:
        _require_time(t, minimum=0)
        idx = bisect.bisect_right(self.ends, t)
        return self.levels[min(idx, len(self.levels) - 1)]

    def values(self, horizon: int) -> np.ndarray:
        ts = np.arange(1, horizon + 1)
        idx = np.searchsorted(np.asarray(self.ends), ts, side="right")
        idx = np.minimum(idx, len(self.levels) - 1)
        return np.asarray(self.levels, dtype=float)[idx]


@dataclass(frozen=True)
class RationalSegments(Schedule):
    """Segments that are either constant or of the form a/t.

    Segment i covers times up to and including ``ends[i]``; a time on a
    shared endpoint therefore belongs to the earlier segment.  The final
    segment extends to infinity.
    """

    ends: tuple[float, ...]
    kinds: tuple[str, ...]  # "const" or "over_t"
    params: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.ends) == len(self.kinds) == len(self.params)) or not self.ends:
            raise ValueError("segment fields must be equal-length and nonempty")
        if any(k not in ("const", "over_t") for k in self.kinds):
            raise ValueError(f"unknown segment kind in {self.kinds}")
        if any(p < 0 for p in self.params):
            raise ScheduleRangeError(f"negative reinforcement in {self.params}")

    def value(self, t: int) -> float:
        _require_time(t, minimum=0)
        idx = bisect.bisect_left(self.ends, t)
        idx = min(idx, len(self.ends) - 1)
        if self.kinds[idx] == "const":
            return self.params[idx]
        _require_time(t)  # a/t needs t >= 1
        return self.params[idx] / t

    def values(self, horizon: int) -> np.ndarray:
        ts = np.arange(1, horizon + 1)
        idx = np.searchsorted(np.asarray(self.ends), ts, side="left")
        idx = np.minimum(idx, len(self.ends) - 1)
        params = np.asarray(self.params, dtype=float)[idx]
        out = params.astype(float)
        over = np.asarray(self.kinds)[idx] == "over_t"
        out[over] = params[over] / ts[over]
        return out


@dataclass(frozen=True)
class Table(Schedule):
    """Explicit per-time masses; entry n-1 is the mass at time n.

    The domain is bounded by the table length; evaluating beyond it raises,
    and config loading checks the table covers the experiment horizon.
    """

    entries: tuple[float, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.entries):
            raise ScheduleRangeError("negative reinforcement in table")

    def value(self, t: int) -> float:
        _require_time(t)
        if t > len(self.entries):
            raise ScheduleRangeError(
                f"table covers times 1..{len(self.entries)}, got {t}"
            )
        return self.entries[t - 1]

    def values(self, horizon: int) -> np.ndarray:
        if horizon > len(self.entries):
            raise ScheduleRangeError(
                f"table covers times 1..{len(self.entries)}, need {horizon}"
            )
        return np.asarray(self.entries[:horizon], dtype=float)


def paper_f() -> Stepped:
    """The bundled increasing step preset: 1, then 10 from 1000, then 100 from 2500."""
    return Stepped(ends=(1000.0, 2500.0, math.inf), levels=(1.0, 10.0, 100.0))


def paper_g() -> RationalSegments:
    """The bundled decreasing preset: 10, 1e4/t, 5, 1.5e4/t, then 3.75 from 4000."""
    return RationalSegments(
        ends=(1000.0, 2000.0, 3000.0, 4000.0, math.inf),
        kinds=("const", "over_t", "const", "over_t", "const"),
        params=(10.0, 1.0e4, 5.0, 1.5e4, 3.75),
    )


def _parse_float(text: str, position: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ScheduleParseError(f"expected a number, got {text!r}", position) from None
    if not math.isfinite(value):
        raise ScheduleParseError(f"non-finite value {text!r}", position)
    if value < 0:
        raise ScheduleRangeError(f"negative reinforcement {value}")
    return value


def _parse_step(body: str, offset: int) -> Stepped:
    ends: list[float] = []
    levels: list[float] = []
    pos = offset
    pairs = body.split(",")
    for i, pair in enumerate(pairs):
        if "=" not in pair:
            raise ScheduleParseError(f"expected t=value, got {pair!r}", pos)
        t_text, v_text = pair.split("=", 1)
        if t_text == "inf":
            if i != len(pairs) - 1:
                raise ScheduleParseError("'inf' is only allowed as the last breakpoint", pos)
            end = math.inf
        else:
            try:
                end = float(int(t_text))
            except ValueError:
                raise ScheduleParseError(
                    f"expected an integer breakpoint, got {t_text!r}", pos
                ) from None
            if end <= 0:
                raise ScheduleParseError(f"breakpoint must be positive, got {t_text}", pos)
        ends.append(end)
        levels.append(_parse_float(v_text, pos + len(t_text) + 1))
        pos += len(pair) + 1
    if any(b <= a for a, b in zip(ends, ends[1:])):
        raise ScheduleParseError("breakpoints must be strictly ascending", offset)
    return Stepped(ends=tuple(ends), levels=tuple(levels))


def parse_schedule(spec: str) -> Schedule:
    """Parse a schedule string (see the module docstring for the grammar)."""
    spec = spec.strip()
    if spec == "ln":
        return NaturalLog()
    if spec == "paper-f":
        return paper_f()
    if spec == "paper-g":
        return paper_g()
    if spec.startswith("const:"):
        return Constant(_parse_float(spec[len("const:"):], len("const:")))
    if spec.startswith("step:"):
        body = spec[len("step:"):]
        if not body:
            raise ScheduleParseError("empty step schedule", len("step:"))
        return _parse_step(body, len("step:"))
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        entries = []
        for line in path.read_text().splitlines():
            line = line.strip()
            if line:
                entries.append(_parse_float(line, 0))
        if not entries:
            raise ScheduleParseError(f"empty table file {path}", len("table:"))
        return Table(entries=tuple(entries))
    raise ScheduleParseError(f"unrecognized schedule spec {spec!r}", 0)
