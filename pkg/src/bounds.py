"""
Asymptotic bounds: q-ary entropy, the Gilbert-Varshamov curve, the
algebraic-geometry line and the constructive envelope of the
concatenation and expansion families.
"""
import csv
import io
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from src.config import config
from src.construct_a import BoundLine, line_eq6, table1
from src.construct_b import line_eq7
from src.helper.exceptions import ParameterError

logger = logging.getLogger(__name__)

BISECTION_TOLERANCE = 1e-6
RM_M_VALUES = (3, 5, 7)
FIGURE1_HEADER = ["label", "delta", "rate"]

Number = Union[float, Fraction]


class BoundPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: float
    rate: float
    label: str

    @model_validator(mode="after")
    def check_point(self) -> "BoundPoint":
        if not 0 <= self.delta <= 1 or not 0 <= self.rate <= 1:
            raise ParameterError(f"point ({self.delta}, {self.rate}) outside the unit square")
        return self


# ======================
# ENTROPY AND GV
# ======================

def entropy_h(q: int, x: Number) -> float:
    """x log_q(q-1) - x log_q x - (1-x) log_q(1-x), with 0 log 0 = 0"""
    if q < 2:
        raise ParameterError(f"q must be >= 2, got {q}")
    x = float(x)
    if not 0 <= x <= (q - 1) / q + 1e-12:
        raise ParameterError(f"x={x} outside [0, (q-1)/q] for q={q}")
    if x == 0:
        return 0.0
    value = x * math.log(q - 1) - x * math.log(x)
    if x < 1:
        value -= (1 - x) * math.log(1 - x)
    return value / math.log(q)


def gv_curve(q: int, num_samples: int) -> List[BoundPoint]:
    """
    (δ, 1 - H_q(δ)) on [0, (q-1)/q], endpoints included, followed by the
    same curve labelled gv-so and restricted to rates <= 1/2
    """
    if num_samples < 2:
        raise ParameterError(f"need at least 2 samples, got {num_samples}")
    top = Fraction(q - 1, q)
    points = []
    for i in range(num_samples):
        delta = top * Fraction(i, num_samples - 1)
        rate = max(0.0, 1 - entropy_h(q, delta))
        points.append(BoundPoint(delta=float(delta), rate=rate, label="gv"))
    points.extend(
        BoundPoint(delta=p.delta, rate=p.rate, label="gv-so") for p in points if p.rate <= 0.5
    )
    return points


def inverse_entropy(q: int, y: float) -> float:
    """δ in [0, (q-1)/q] with 1 - H_q(δ) = y, by bisection"""
    if not 0 <= y <= 1:
        raise ParameterError(f"rate must lie in [0, 1], got {y}")
    lo, hi = 0.0, (q - 1) / q
    while hi - lo > BISECTION_TOLERANCE:
        mid = (lo + hi) / 2
        if 1 - entropy_h(q, mid) > y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def tvz_line(l: int) -> BoundLine:
    """R + δ = 1 - 1/(l-1) for algebraic-geometry codes over GF(l^2)"""
    if l < 3 or l & (l - 1):
        raise ParameterError(f"l must be a power of two >= 4, got {l}")
    return BoundLine(slope=Fraction(1), intercept=1 - Fraction(1, l - 1), label=f"tvz-l{l}")


# ======================
# CONSTRUCTIVE ENVELOPE
# ======================

def concatenation_lines() -> List[BoundLine]:
    lines = [row.line for row in table1(verify_inner=False)]
    lines.extend(line_eq6(m) for m in RM_M_VALUES)
    return lines


def expansion_lines(t_max: Optional[int] = None) -> List[BoundLine]:
    t_max = config.envelope_t_max if t_max is None else t_max
    return [line_eq7(t) for t in range(2, t_max + 1)]


def constructive_lines(t_max: Optional[int] = None) -> List[BoundLine]:
    """The default family: tabulated concatenation lines, RM lines and expansion lines"""
    return concatenation_lines() + expansion_lines(t_max)


def envelope_rate(lines: Sequence[BoundLine], delta: Fraction) -> Fraction:
    """Best rate at δ over all lines, clipped at 0"""
    return max([Fraction(0)] + [line.rate_at(delta) for line in lines])


def envelope_delta_at_rate(lines: Sequence[BoundLine], rate: Number) -> Optional[Fraction]:
    """Best δ at the given rate, None when no line reaches it"""
    rate = Fraction(rate)
    reachable = [line.delta_at(rate) for line in lines if 0 <= rate <= line.intercept]
    return max(reachable) if reachable else None


def envelope_vertices(lines: Sequence[BoundLine]) -> List[Tuple[Fraction, Fraction]]:
    """
    Corners of the upper envelope from δ = 0 to the last zero crossing,
    found among pairwise intersections and zero crossings in exact arithmetic
    """
    if not lines:
        return []
    candidates = {Fraction(0)}
    candidates.update(line.delta_intercept for line in lines)
    for i, a in enumerate(lines):
        for b in lines[i + 1:]:
            if a.slope != b.slope:
                delta = (a.intercept - b.intercept) / (a.slope - b.slope)
                if delta > 0:
                    candidates.add(delta)
    end = max(line.delta_intercept for line in lines)
    points = [(d, envelope_rate(lines, d)) for d in sorted(candidates) if d <= end]

    # drop points interior to a straight piece
    vertices = [points[0]]
    for prev, here, nxt in zip(points, points[1:], points[2:]):
        left = (here[1] - prev[1]) / (here[0] - prev[0])
        right = (nxt[1] - here[1]) / (nxt[0] - here[0])
        if left != right:
            vertices.append(here)
    if len(points) > 1:
        vertices.append(points[-1])
    return vertices


def envelope(lines: Sequence[BoundLine], samples: int) -> List[BoundPoint]:
    """Envelope sampled at evenly spaced δ; values exact until emission"""
    if samples < 2:
        raise ParameterError(f"need at least 2 samples, got {samples}")
    end = max(line.delta_intercept for line in lines)
    return [
        BoundPoint(delta=float(d), rate=float(envelope_rate(lines, d)), label="envelope")
        for d in (end * Fraction(i, samples - 1) for i in range(samples))
    ]


class FamilyComparison(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rate: Fraction
    concatenation: Optional[Fraction] = None
    expansion: Optional[Fraction] = None

    @property
    def winner(self) -> Optional[str]:
        if self.concatenation is None and self.expansion is None:
            return None
        if self.expansion is None or (self.concatenation or 0) > self.expansion:
            return "concatenation"
        if self.concatenation is None or self.expansion > self.concatenation:
            return "expansion"
        return "tie"


def family_comparison(rate: Number, t_max: Optional[int] = None) -> FamilyComparison:
    """Best δ of each constructive family at one rate"""
    rate = Fraction(rate)
    return FamilyComparison(
        rate=rate,
        concatenation=envelope_delta_at_rate(concatenation_lines(), rate),
        expansion=envelope_delta_at_rate(expansion_lines(t_max), rate),
    )


# ======================
# FIGURE DATA
# ======================

def _line_points(line: BoundLine, samples: int) -> List[BoundPoint]:
    end = line.delta_intercept
    return [
        BoundPoint(delta=float(d), rate=float(line.rate_at(d)), label=line.label)
        for d in (end * Fraction(i, samples - 1) for i in range(samples))
    ]


def figure1_data(samples: int, t_max: Optional[int] = None) -> List[BoundPoint]:
    """
    GV and gv-so curves, every constructive line sampled from its rate
    intercept to its δ intercept, then the exact envelope corners
    """
    if samples < 2:
        raise ParameterError(f"need at least 2 samples, got {samples}")
    lines = constructive_lines(t_max)
    points = gv_curve(2, samples)
    for line in lines:
        points.extend(_line_points(line, samples))
    points.extend(
        BoundPoint(delta=float(d), rate=float(r), label="envelope")
        for d, r in envelope_vertices(lines)
    )
    logger.info(f"Figure data: {len(points)} points over {len(lines)} lines")
    return points


def figure1_csv(points: Sequence[BoundPoint]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FIGURE1_HEADER)
    for p in points:
        writer.writerow([p.label, f"{float(p.delta):.6f}", f"{p.rate:.6f}"])
    return buffer.getvalue()
