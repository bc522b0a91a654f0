"""Bench-test geometry for the tether pull-off angle.

On the bench the tether is anchored at height H above the floor and a
weight on its free end sits at height h'; the tether of length l then
leaves the anchor at

    theta = asin((H - h') / l)

from the horizontal.  At full scale the extreme angles come from the
wave trough and crest displacements h measured from the mean line
(trough negative), so the trough uses H + |h_min| and the crest
H - h_max.  `scale_to_bench` maps full-scale extreme angles onto weight
heights that a bench of a given height can reproduce.

Angles returned by this module are degrees; the published reference
table they are checked against quotes two decimals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleGeometryError


@dataclass(frozen=True)
class BenchGeometry:
    """One tether rig, full-scale or bench.

    tether_length  l [m]
    anchor_height  H, anchor (or mean-line) height [m]
    trough_excursion  wave trough displacement (full scale, negative
                      below the mean line) or bench weight height [m]
    crest_excursion   wave crest displacement or bench weight height [m]
    """

    tether_length: float
    anchor_height: float
    trough_excursion: float
    crest_excursion: float

    def __post_init__(self) -> None:
        if self.tether_length <= 0.0:
            raise ValueError(
                f"tether_length must be positive, got {self.tether_length}"
            )
        if self.anchor_height <= 0.0:
            raise ValueError(
                f"anchor_height must be positive, got {self.anchor_height}"
            )


# Published reference rig: full-scale assumptions and the bench that
# approximated them, with the angles quoted for each.
REFERENCE_REAL = BenchGeometry(
    tether_length=1.27, anchor_height=0.762,
    trough_excursion=-0.50, crest_excursion=0.50,
)
REFERENCE_BENCH = BenchGeometry(
    tether_length=0.537, anchor_height=0.762,
    trough_excursion=0.152, crest_excursion=0.532,
)
REFERENCE_ANGLES_DEG = {"trough": 83.57, "crest": 16.66}


def _asin_deg(ratio: float, what: str) -> float:
    if not -1.0 <= ratio <= 1.0:
        raise InfeasibleGeometryError(
            f"geometry infeasible: {what} needs asin of {ratio:.6g}, "
            "outside [-1, 1]"
        )
    return math.degrees(math.asin(ratio))


def theta_trough(geom: BenchGeometry) -> float:
    """Full-scale trough angle asin((H + |h_min|) / l) [deg]."""
    ratio = (geom.anchor_height + abs(geom.trough_excursion)) / geom.tether_length
    return _asin_deg(ratio, "trough angle")


def theta_crest(geom: BenchGeometry) -> float:
    """Full-scale crest angle asin((H - h_max) / l) [deg]."""
    ratio = (geom.anchor_height - geom.crest_excursion) / geom.tether_length
    return _asin_deg(ratio, "crest angle")


def theta_experimental(geom: BenchGeometry, weight_height: float) -> float:
    """Bench angle asin((H - h') / l) for a weight resting at h' [deg]."""
    ratio = (geom.anchor_height - weight_height) / geom.tether_length
    return _asin_deg(ratio, f"bench angle at h'={weight_height:.6g} m")


def scale_to_bench(
    real: BenchGeometry,
    bench_height: float,
    bench_tether: float | None = None,
) -> BenchGeometry:
    """Pick a bench rig reproducing the full-scale extreme angles.

    With no tether given, uses the longest tether for which the steeper
    (trough) angle is still reachable with the weight on the floor:
    l = bench_height * sin(theta_trough).  Returns a BenchGeometry whose
    excursions are the weight heights h' for trough and crest.  Raises
    InfeasibleGeometryError when the bench cannot reach an angle.
    """
    if bench_height <= 0.0:
        raise InfeasibleGeometryError(
            f"bench height must be positive, got {bench_height}"
        )
    t_trough = math.radians(theta_trough(real))
    t_crest = math.radians(theta_crest(real))
    if bench_tether is not None:
        length = bench_tether
    else:
        # longest tether that still reaches the steep trough angle with
        # the weight at floor level (anchor_height > 0 keeps this > 0)
        length = bench_height * math.sin(t_trough)
    heights = []
    for name, angle in (("trough", t_trough), ("crest", t_crest)):
        h = bench_height - length * math.sin(angle)
        if h < 0.0:
            raise InfeasibleGeometryError(
                f"geometry infeasible: reaching the {name} angle "
                f"{math.degrees(angle):.2f} deg with l={length:.4g} m needs "
                f"weight height {h:.4g} m below the floor"
            )
        heights.append(h)
    return BenchGeometry(
        tether_length=length,
        anchor_height=bench_height,
        trough_excursion=heights[0],
        crest_excursion=heights[1],
    )


@dataclass(frozen=True)
class ReportRow:
    """One cell of the consistency report."""

    rig: str            # "real" or "bench"
    quantity: str       # "trough" or "crest"
    computed: float | None  # [deg]; None when the rig cannot reach it
    expected: float     # published value [deg]
    difference: float | None
    feasible: bool

    @property
    def matches(self) -> bool:
        return self.feasible and self.difference is not None and (
            abs(self.difference) <= 0.05
        )


def consistency_report(
    real: BenchGeometry = REFERENCE_REAL,
    bench: BenchGeometry = REFERENCE_BENCH,
    expected: dict[str, float] | None = None,
) -> list[ReportRow]:
    """Recompute the published angle table and compare, cell by cell.

    The real rig uses the trough/crest formulas on wave displacements;
    the bench rig uses the weight-height formula.  Cells the geometry
    cannot reach are flagged infeasible instead of raising.
    """
    if expected is None:
        expected = REFERENCE_ANGLES_DEG
    rows: list[ReportRow] = []
    cells = [
        ("real", "trough", lambda: theta_trough(real)),
        ("real", "crest", lambda: theta_crest(real)),
        ("bench", "trough", lambda: theta_experimental(bench, bench.trough_excursion)),
        ("bench", "crest", lambda: theta_experimental(bench, bench.crest_excursion)),
    ]
    for rig, quantity, compute in cells:
        want = expected[quantity]
        try:
            got = compute()
        except InfeasibleGeometryError:
            rows.append(ReportRow(rig, quantity, None, want, None, False))
            continue
        rows.append(ReportRow(rig, quantity, got, want, got - want, True))
    return rows


def format_report(rows: list[ReportRow]) -> str:
    """Human-readable aligned text for a list of report rows."""
    lines = [
        f"{'rig':<6} {'quantity':<8} {'computed':>10} {'expected':>10} "
        f"{'diff':>8}  status"
    ]
    for r in rows:
        computed = f"{r.computed:10.2f}" if r.computed is not None else f"{'--':>10}"
        diff = f"{r.difference:+8.2f}" if r.difference is not None else f"{'--':>8}"
        status = ("match" if r.matches else "off") if r.feasible else "infeasible"
        lines.append(
            f"{r.rig:<6} {r.quantity:<8} {computed} {r.expected:10.2f} {diff}  {status}"
        )
    return "\n".join(lines)


def report_csv(rows: list[ReportRow]) -> str:
    """The same report as delimited text (header + one line per cell)."""
    out = ["rig,quantity,computed_deg,expected_deg,difference_deg,feasible"]
    for r in rows:
        computed = f"{r.computed:.2f}" if r.computed is not None else ""
        diff = f"{r.difference:.2f}" if r.difference is not None else ""
        out.append(
            f"{r.rig},{r.quantity},{computed},{r.expected:.2f},{diff},"
            f"{int(r.feasible)}"
        )
    return "\n".join(out) + "\n"
