"""Piecewise-linear value curves over the SLR axis.

A curve maps achieved (or projected) schedule length ratio to the fraction
of a job's maximum value that is earned: flat at 1.0 up to the initial
deadline, linearly interpolated through non-increasing interior points,
and 0 from the final deadline on. Deadlines and point coordinates are in
SLR units so one curve template scales to jobs of any size.
"""

from __future__ import annotations

from bisect import bisect_right


class CurveError(ValueError):
    """Invalid curve definition."""


class ValueCurve:
    """Non-increasing piecewise-linear factor curve with materialized anchors.

    The point list always starts at (d_initial, 1.0) and ends at
    (d_final, 0.0); interior points live strictly between the deadlines.
    Immutable after construction.
    """

    __slots__ = ("d_initial", "d_final", "xs", "ys", "_suffix_area")

    def __init__(self, d_initial: float, d_final: float,
                 points: list[tuple[float, float]] = ()):
        if not d_initial > 1.0:
            raise CurveError(f"d_initial must exceed 1, got {d_initial}")
        if not d_final > d_initial:
            raise CurveError(f"d_final ({d_final}) must exceed d_initial ({d_initial})")
        xs = [d_initial]
        ys = [1.0]
        for slr, fac in points:
            if not d_initial < slr < d_final:
                raise CurveError(f"interior point slr={slr} outside ({d_initial}, {d_final})")
            if slr <= xs[-1]:
                raise CurveError(f"point slr coordinates must be strictly increasing at {slr}")
            if not 0.0 <= fac <= 1.0:
                raise CurveError(f"factor {fac} outside [0, 1]")
            if fac > ys[-1]:
                raise CurveError(f"factor sequence must be non-increasing at slr={slr}")
            xs.append(float(slr))
            ys.append(float(fac))
        xs.append(float(d_final))
        ys.append(0.0)
        self.d_initial = float(d_initial)
        self.d_final = float(d_final)
        self.xs = tuple(xs)
        self.ys = tuple(ys)
        # suffix_area[i] = exact area under the factor curve from xs[i] to d_final
        suffix = [0.0] * len(xs)
        for i in range(len(xs) - 2, -1, -1):
            seg = (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]) / 2.0
            suffix[i] = suffix[i + 1] + seg
        self._suffix_area = tuple(suffix)

    def __repr__(self):
        return f"ValueCurve(d_initial={self.d_initial}, d_final={self.d_final}, points={len(self.xs) - 2})"

    def factor(self, slr: float) -> float:
        """Interpolated factor for d_initial < slr < d_final."""
        assert self.d_initial < slr < self.d_final, f"factor() called outside deadlines: {slr}"
        return self._interp(slr)

    def _interp(self, slr: float) -> float:
        # rightmost point at or left of slr; valid for d_initial <= slr < d_final
        i = bisect_right(self.xs, slr) - 1
        t_low, t_high = self.xs[i], self.xs[i + 1]
        v_low, v_high = self.ys[i], self.ys[i + 1]
        return v_low + (slr - t_low) / (t_high - t_low) * (v_high - v_low)

    def value(self, vmax: float, slr: float) -> float:
        """Value earned by a job with this curve finishing (or projected) at slr.

        Projections for tasks off the critical path may sit below SLR 1;
        the flat region before d_initial covers them.
        """
        assert slr >= 0.0, f"value() called with negative slr {slr}"
        if slr <= self.d_initial:
            return vmax
        if slr >= self.d_final:
            return 0.0
        return vmax * self._interp(slr)

    def remaining_area(self, vmax: float, from_slr: float) -> float:
        """Exact area under the vmax-scaled curve from max(from_slr, 1) to d_final.

        Trapezoids are exact on a piecewise-linear curve. The flat region
        between the start and d_initial is included when the start precedes
        the initial deadline.
        """
        if from_slr >= self.d_final:
            return 0.0
        s = max(from_slr, 1.0)
        area = 0.0
        if s <= self.d_initial:
            area += (self.d_initial - s) * vmax
            return area + vmax * self._suffix_area[0]
        i = bisect_right(self.xs, s) - 1
        f_s = self._interp(s)
        partial = (self.xs[i + 1] - s) * (f_s + self.ys[i + 1]) / 2.0
        return vmax * (partial + self._suffix_area[i + 1])

    # Workload-file form: interior points only, anchors are implied.
    def to_dict(self) -> dict:
        interior = [[x, y] for x, y in zip(self.xs[1:-1], self.ys[1:-1])]
        return {"d_initial": self.d_initial, "d_final": self.d_final, "points": interior}

    @classmethod
    def from_dict(cls, d: dict) -> "ValueCurve":
        return cls(d["d_initial"], d["d_final"], [tuple(p) for p in d["points"]])
