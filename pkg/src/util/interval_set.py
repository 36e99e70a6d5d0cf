from bisect import bisect_right


class IntervalSet:
    """
    Finite union of disjoint half-open intervals [a, b).

    Intervals are kept sorted and merged, so two sets describing the same
    points have the same representation. Pieces not longer than `min_length`
    are dropped on construction.
    """

    def __init__(self, intervals=(), min_length: float = 0.0):
        pieces = sorted((float(a), float(b)) for a, b in intervals if b - a > min_length)
        merged: list[tuple[float, float]] = []
        for a, b in pieces:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        self._intervals = tuple(merged)
        self._starts = [a for a, _ in merged]

    @property
    def intervals(self) -> tuple[tuple[float, float], ...]:
        return self._intervals

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __repr__(self):
        return f"IntervalSet({list(self._intervals)})"

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self._intervals == other._intervals

    def is_empty(self) -> bool:
        return not self._intervals

    def lower_bound(self) -> float | None:
        return self._intervals[0][0] if self._intervals else None

    def upper_bound(self) -> float | None:
        return self._intervals[-1][1] if self._intervals else None

    def measure(self) -> float:
        return sum(b - a for a, b in self._intervals)

    def measure_below(self, s: float) -> float:
        """Lebesgue measure of the set intersected with [0, s]."""
        total = 0.0
        for a, b in self._intervals:
            if a >= s:
                break
            total += min(b, s) - a
        return total

    def contains(self, x: float) -> bool:
        idx = bisect_right(self._starts, x) - 1
        return idx >= 0 and x < self._intervals[idx][1]

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._intervals + other._intervals)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        pieces = []
        i = j = 0
        while i < len(self._intervals) and j < len(other._intervals):
            a1, b1 = self._intervals[i]
            a2, b2 = other._intervals[j]
            a, b = max(a1, a2), min(b1, b2)
            if a < b:
                pieces.append((a, b))
            if b1 < b2:
                i += 1
            else:
                j += 1
        return IntervalSet(pieces)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        pieces = []
        for a, b in self._intervals:
            start = a
            for c, d in other._intervals:
                if d <= start or c >= b:
                    continue
                if c > start:
                    pieces.append((start, c))
                start = max(start, d)
                if start >= b:
                    break
            if start < b:
                pieces.append((start, b))
        return IntervalSet(pieces)

    def take_measure(self, start: float, amount: float, upper: float = 1.0) -> tuple["IntervalSet", float]:
        """
        Walks right from `start` over the points NOT in this set and collects
        `amount` of Lebesgue measure. Returns the collected set and the point
        where the walk stopped (capped at `upper`).
        """
        free = IntervalSet([(start, upper)]).difference(self)
        collected = []
        remaining = amount
        end = start
        for a, b in free:
            if remaining <= 0:
                break
            length = b - a
            if length >= remaining:
                end = a + remaining
                collected.append((a, end))
                remaining = 0.0
                break
            collected.append((a, b))
            remaining -= length
            end = b
        if remaining > 0:
            end = upper
        return IntervalSet(collected), end

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self._intervals]
