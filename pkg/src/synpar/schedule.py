"""Dependence distance vectors, skew+tile legality and wavefront plans.

Dependences live on the 2-D ``(k, i)`` instance space of a loop nest; the
innermost ``j`` loop is folded into the macro-statement. A dependence may be
tagged with an assumption id: it then only constrains the schedule if the
assumption (e.g. "no pivoting happens") is not relied upon.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .numerics.intdiv import floord

INF = math.inf


@dataclass(frozen=True)
class IntervalInt:
    """Closed integer interval; ``lo`` may be ``-inf`` and ``hi`` may be ``inf``."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo == INF or self.hi == -INF:
            raise ValueError(f"degenerate interval [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v: int) -> IntervalInt:
        return cls(v, v)

    def scale(self, c: int) -> IntervalInt:
        if c == 0:
            return IntervalInt(0, 0)
        a, b = c * self.lo, c * self.hi
        return IntervalInt(min(a, b), max(a, b))

    def __add__(self, other: IntervalInt) -> IntervalInt:
        return IntervalInt(self.lo + other.lo, self.hi + other.hi)

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    def __str__(self):
        if self.lo == self.hi:
            return _fmt_bound(self.lo)
        return f"[{_fmt_bound(self.lo)},{_fmt_bound(self.hi)}]"


def _fmt_bound(v) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return str(int(v))


def _as_interval(c) -> IntervalInt:
    if isinstance(c, IntervalInt):
        return c
    if isinstance(c, tuple):
        return IntervalInt(*c)
    return IntervalInt.point(c)


@dataclass(frozen=True)
class DistanceVector:
    """A dependence distance, optionally conditional on a named assumption.

    ``assumption=None`` means the dependence always holds (weight 1).
    Components may be ints, ``(lo, hi)`` pairs or ``IntervalInt``.
    """

    components: tuple
    assumption: str | None = None
    weight: float = 1.0

    def __post_init__(self):
        comps = tuple(_as_interval(c) for c in self.components)
        if not comps:
            raise ValueError("a distance vector needs at least one component")
        object.__setattr__(self, "components", comps)
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"weight must lie in [0, 1], got {self.weight}")
        if self.assumption is None and self.weight != 1.0:
            raise ValueError("an unconditional dependence has weight 1")

    @property
    def always(self) -> bool:
        return self.assumption is None

    def __len__(self):
        return len(self.components)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class SkewTileSchedule:
    skew: tuple = ((1, 0), (1, 1))
    tile: tuple = (32, 32)

    def __post_init__(self):
        skew = tuple(tuple(int(x) for x in row) for row in self.skew)
        tile = tuple(int(t) for t in self.tile)
        if len(skew) != 2 or any(len(r) != 2 for r in skew):
            raise ValueError("only 2x2 skews are supported")
        if abs(skew[0][0] * skew[1][1] - skew[0][1] * skew[1][0]) != 1:
            raise ValueError(f"skew {skew} is not unimodular")
        if len(tile) != 2 or min(tile) < 1:
            raise ValueError(f"tile sizes must be two positive ints, got {tile}")
        object.__setattr__(self, "skew", skew)
        object.__setattr__(self, "tile", tile)

    @property
    def dims(self) -> int:
        return 2

    def inverse(self) -> tuple:
        (a, b), (c, d) = self.skew
        det = a * d - b * c
        return ((d * det, -b * det), (-c * det, a * det))

    def map_point(self, k: int, i: int) -> tuple[int, int]:
        (a, b), (c, d) = self.skew
        return a * k + b * i, c * k + d * i


IDENTITY = ((1, 0), (0, 1))
SKEW = ((1, 0), (1, 1))


@dataclass(frozen=True)
class Legal:
    def __str__(self):
        return "Legal"


@dataclass(frozen=True)
class LegalUnderAssumptions:
    assumptions: frozenset

    def __post_init__(self):
        if not self.assumptions:
            raise ValueError("LegalUnderAssumptions needs at least one assumption")
        object.__setattr__(self, "assumptions", frozenset(self.assumptions))

    def __str__(self):
        return "LegalUnderAssumptions {" + ", ".join(sorted(self.assumptions)) + "}"


@dataclass(frozen=True)
class Illegal:
    violating: DistanceVector

    def __str__(self):
        return f"Illegal {self.violating}"


Verdict = Legal | LegalUnderAssumptions | Illegal


def apply_skew(schedule: SkewTileSchedule, d: DistanceVector) -> DistanceVector:
    if len(d) != schedule.dims:
        raise ValueError(f"dependence has {len(d)} components, schedule has {schedule.dims}")
    comps = []
    for row in schedule.skew:
        acc = IntervalInt(0, 0)
        for coef, c in zip(row, d.components):
            acc = acc + c.scale(coef)
        comps.append(acc)
    return DistanceVector(tuple(comps), d.assumption, d.weight)


def is_satisfied(schedule: SkewTileSchedule, d: DistanceVector) -> bool:
    """True when every skewed component is nonnegative (full permutability)."""
    return all(c.lo >= 0 for c in apply_skew(schedule, d).components)


def check_schedule(deps: Iterable[DistanceVector], schedule: SkewTileSchedule) -> Verdict:
    needed = set()
    for d in deps:
        if is_satisfied(schedule, d):
            continue
        if d.always:
            return Illegal(d)
        needed.add(d.assumption)
    return LegalUnderAssumptions(frozenset(needed)) if needed else Legal()


def speculative_partition(deps: Sequence[DistanceVector], threshold: float):
    """Split ``deps`` into (kept, speculated).

    Assumed dependences less likely than ``threshold`` are speculated away;
    everything else is kept. Input order is preserved in both lists.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    kept, speculated = [], []
    for d in deps:
        (speculated if not d.always and d.weight < threshold else kept).append(d)
    return kept, speculated


# -- iteration domains and wavefront plans -------------------------------------


@dataclass(frozen=True)
class AffineDomain:
    """``{(k, i) : k_lo <= k < k_hi, i_lo(k) <= i < i_hi(k)}`` with affine i bounds.

    ``i_lo`` and ``i_hi`` are ``(offset, slope)`` pairs: ``i_lo(k) = off + slope*k``.
    """

    k_lo: int
    k_hi: int
    i_lo: tuple = (0, 0)
    i_hi: tuple = (0, 0)

    def i_range(self, k: int) -> tuple[int, int]:
        return self.i_lo[0] + self.i_lo[1] * k, self.i_hi[0] + self.i_hi[1] * k

    def contains(self, k: int, i: int) -> bool:
        if not self.k_lo <= k < self.k_hi:
            return False
        lo, hi = self.i_range(k)
        return lo <= i < hi

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """All points in lexicographic (k, i) order, as two int64 arrays."""
        ks, is_ = [], []
        for k in range(self.k_lo, self.k_hi):
            lo, hi = self.i_range(k)
            if hi > lo:
                ks.append(np.full(hi - lo, k, dtype=np.int64))
                is_.append(np.arange(lo, hi, dtype=np.int64))
        if not ks:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        return np.concatenate(ks), np.concatenate(is_)

    def size(self) -> int:
        return sum(max(0, hi - lo) for lo, hi in map(self.i_range, range(self.k_lo, self.k_hi)))


def rect_domain(rows: int, cols: int) -> AffineDomain:
    return AffineDomain(0, rows, (0, 0), (cols, 0))


def givens_domain(m: int, n: int) -> AffineDomain:
    """``0 <= k < n``, ``0 <= i < m-1-k``."""
    return AffineDomain(0, n, (0, 0), (m - 1, -1))


def gaussj_domain(n: int, k0: int = 0) -> AffineDomain:
    """Update statements of steps ``k0 <= k < n-1``: ``k+1 <= i < n``."""
    return AffineDomain(k0, n - 1, (1, 1), (n, 0))


@dataclass
class WavefrontPlan:
    """Tiles grouped by ``t0 + t1``; wavefront ``w`` holds sum ``base + w``."""

    wavefronts: list
    domain: AffineDomain
    schedule: SkewTileSchedule
    base: int = 0

    def __len__(self):
        return len(self.wavefronts)

    def tiles(self):
        for wf in self.wavefronts:
            yield from wf

    @property
    def n_tiles(self) -> int:
        return sum(len(wf) for wf in self.wavefronts)


@njit(cache=True)
def _tile_grid(k_lo, k_hi, ilo0, ilo1, ihi0, ihi1, s00, s01, s10, s11, T0, T1):
    # Two passes: bounding box of tile coordinates, then occupancy.
    big = 1 << 62
    mn0, mx0, mn1, mx1 = big, -big, big, -big
    for k in range(k_lo, k_hi):
        for i in range(ilo0 + ilo1 * k, ihi0 + ihi1 * k):
            t0 = (s00 * k + s01 * i) // T0
            t1 = (s10 * k + s11 * i) // T1
            mn0 = min(mn0, t0)
            mx0 = max(mx0, t0)
            mn1 = min(mn1, t1)
            mx1 = max(mx1, t1)
    if mn0 > mx0:
        return np.zeros((0, 0), dtype=np.bool_), 0, 0
    occ = np.zeros((mx0 - mn0 + 1, mx1 - mn1 + 1), dtype=np.bool_)
    for k in range(k_lo, k_hi):
        for i in range(ilo0 + ilo1 * k, ihi0 + ihi1 * k):
            t0 = (s00 * k + s01 * i) // T0
            t1 = (s10 * k + s11 * i) // T1
            occ[t0 - mn0, t1 - mn1] = True
    return occ, mn0, mn1


def wavefronts(domain: AffineDomain, schedule: SkewTileSchedule) -> WavefrontPlan:
    """Group the tiles touched by ``domain`` into parallel wavefronts.

    A tile is ``(floord(c0, T0), floord(c1, T1))`` for skewed points ``c``.
    Within a wavefront tiles are sorted by ``t1``.
    """
    (s00, s01), (s10, s11) = schedule.skew
    T0, T1 = schedule.tile
    occ, mn0, mn1 = _tile_grid(
        domain.k_lo, domain.k_hi, domain.i_lo[0], domain.i_lo[1], domain.i_hi[0], domain.i_hi[1],
        s00, s01, s10, s11, T0, T1,
    )
    t0s, t1s = np.nonzero(occ)
    if t0s.size == 0:
        return WavefrontPlan([], domain, schedule, 0)
    t0s = t0s + mn0
    t1s = t1s + mn1
    sums = t0s + t1s
    base = int(sums.min())
    waves = [[] for _ in range(int(sums.max()) - base + 1)]
    order = np.lexsort((t1s, sums))
    for idx in order:
        waves[sums[idx] - base].append((int(t0s[idx]), int(t1s[idx])))
    return WavefrontPlan(waves, domain, schedule, base)


def tile_of(schedule: SkewTileSchedule, k: int, i: int) -> tuple[int, int]:
    c0, c1 = schedule.map_point(k, i)
    return floord(c0, schedule.tile[0]), floord(c1, schedule.tile[1])


def tile_points(plan: WavefrontPlan, tile: tuple[int, int]) -> list[tuple[int, int]]:
    """Domain points of ``tile`` in lexicographic (k, i) order (generic, slow)."""
    T0, T1 = plan.schedule.tile
    inv = plan.schedule.inverse()
    pts = []
    for c0 in range(tile[0] * T0, tile[0] * T0 + T0):
        for c1 in range(tile[1] * T1, tile[1] * T1 + T1):
            k = inv[0][0] * c0 + inv[0][1] * c1
            i = inv[1][0] * c0 + inv[1][1] * c1
            if plan.domain.contains(k, i):
                pts.append((k, i))
    pts.sort()
    return pts


def assert_wavefront_independence(deps: Sequence[DistanceVector], plan: WavefrontPlan,
                                  schedule: SkewTileSchedule | None = None) -> bool:
    """Brute force: no dependence joins two distinct tiles of one wavefront.

    Quadratic in the number of domain points; meant for small domains.
    """
    schedule = schedule or plan.schedule
    ks, is_ = plan.domain.points()
    if ks.size == 0 or not deps:
        return True
    (s00, s01), (s10, s11) = schedule.skew
    T0, T1 = schedule.tile
    t0 = (s00 * ks + s01 * is_) // T0
    t1 = (s10 * ks + s11 * is_) // T1
    same_wave = (t0 + t1)[:, None] == (t0 + t1)[None, :]
    other_tile = (t0[:, None] != t0[None, :]) | (t1[:, None] != t1[None, :])
    suspect = same_wave & other_tile
    if not suspect.any():
        return True
    dk = ks[None, :] - ks[:, None]
    di = is_[None, :] - is_[:, None]
    for d in deps:
        if len(d) != 2:
            raise ValueError("only 2-D dependences are supported")
        c0, c1 = d.components
        hit = (dk >= c0.lo) & (dk <= c0.hi) & (di >= c1.lo) & (di <= c1.hi)
        if np.any(hit & suspect):
            return False
    return True


# -- presets and the text format ---------------------------------------------

NO_PIVOT = "no-pivot"


def givens_dependences() -> list[DistanceVector]:
    return [DistanceVector(c) for c in ((0, 1), (1, -1), (1, 0), (1, 1))]


def gaussj_dependences(pivot_weight: float = 0.01) -> list[DistanceVector]:
    return [
        DistanceVector((1, 0)),
        DistanceVector((1, (1, INF))),
        DistanceVector((1, (-INF, INF)), NO_PIVOT, pivot_weight),
    ]


PRESETS = {"givens": givens_dependences, "gaussj": gaussj_dependences}

_BOUND = r"\s*(-?inf|-?\d+)\s*"
_INTERVAL = re.compile(rf"^\[{_BOUND},{_BOUND}\]$")


def _parse_bound(tok: str):
    tok = tok.strip()
    if tok in ("inf", "+inf"):
        return INF
    if tok == "-inf":
        return -INF
    return int(tok)


def _parse_component(tok: str) -> IntervalInt:
    m = _INTERVAL.match(tok)
    if m:
        return IntervalInt(_parse_bound(m.group(1)), _parse_bound(m.group(2)))
    return IntervalInt.point(int(tok))


class DependenceParseError(ValueError):
    pass


def parse_dependences(text: str, dims: int = 2) -> list[DistanceVector]:
    """Parse one vector per line: ``[lo,hi] [lo,hi] tag [weight]``.

    ``tag`` is ``always`` or an assumption id (``assumed:`` prefix optional).
    Plain integers stand for point intervals; ``#`` starts a comment.
    """
    deps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (dims + 1, dims + 2):
            raise DependenceParseError(f"line {lineno}: expected {dims} components, a tag and a weight")
        try:
            comps = tuple(_parse_component(t) for t in toks[:dims])
            tag = toks[dims]
            weight = float(toks[dims + 1]) if len(toks) == dims + 2 else 1.0
            if tag == "always":
                deps.append(DistanceVector(comps, None, weight))
            else:
                deps.append(DistanceVector(comps, tag.removeprefix("assumed:"), weight))
        except ValueError as exc:
            raise DependenceParseError(f"line {lineno}: {exc}") from None
    return deps


def format_dependences(deps: Iterable[DistanceVector]) -> str:
    lines = []
    for d in deps:
        comps = " ".join(f"[{_fmt_bound(c.lo)},{_fmt_bound(c.hi)}]" for c in d.components)
        lines.append(f"{comps} {'always' if d.always else d.assumption} {d.weight!r}")
    return "\n".join(lines) + ("\n" if lines else "")
