"""Random designs on the real line with a sorted view.

Observations are always passed in sampling order. A `Design` remembers which
input positions survived duplicate collapsing and how to sort them, so values
never have to be permuted by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DegenerateDesign

DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class Design:
    """A finite set of distinct design points.

    Attributes:
        raw: distinct points in sampling order.
        owner: for each original input, the input position that represents it
            after collapsing near-duplicates (the first occurrence).
    """

    raw: NDArray[np.float64]
    owner: NDArray[np.intp] = field(repr=False)

    @classmethod
    def from_points(cls, points: ArrayLike, tol: float = DUPLICATE_TOL) -> Design:
        """Build a design, collapsing points closer than ``tol`` (first kept)."""
        x = np.atleast_1d(np.asarray(points, dtype=float))
        if x.ndim != 1:
            raise ValueError("design points must be a 1-d sequence")
        if not np.all(np.isfinite(x)):
            raise ValueError("design points must be finite")
        owner = np.arange(x.size)
        if x.size > 1:
            order = np.argsort(x, kind="stable")
            gaps = np.diff(x[order])
            run_starts = np.concatenate(([0], np.flatnonzero(gaps >= tol) + 1, [x.size]))
            for a, b in zip(run_starts[:-1], run_starts[1:]):
                if b - a > 1:
                    run = order[a:b]
                    owner[run] = run.min()
        kept = np.flatnonzero(owner == np.arange(x.size))
        raw = x[kept]
        raw.setflags(write=False)
        owner.setflags(write=False)
        return cls(raw=raw, owner=owner)

    @classmethod
    def empty(cls) -> Design:
        return cls.from_points(np.empty(0))

    @property
    def n(self) -> int:
        return int(self.raw.size)

    def __len__(self) -> int:
        return self.n

    @property
    def n_input(self) -> int:
        return int(self.owner.size)

    @property
    def kept(self) -> NDArray[np.intp]:
        """Input positions of the points in ``raw``."""
        return np.flatnonzero(self.owner == np.arange(self.n_input))

    @property
    def order(self) -> NDArray[np.intp]:
        """Permutation sorting ``raw`` ascending."""
        return np.argsort(self.raw, kind="stable")

    @property
    def sorted(self) -> NDArray[np.float64]:
        return self.raw[self.order]

    @property
    def ghost_left(self) -> float:
        """Mirror of the smallest point about 0."""
        return -float(self.sorted[0])

    @property
    def ghost_right(self) -> float:
        """Mirror of the largest point about 1."""
        return 2.0 - float(self.sorted[-1])

    def take(self, values: ArrayLike) -> NDArray[np.float64]:
        """Restrict input-ordered ``values`` to the points in ``raw``.

        Raises DegenerateDesign when collapsed points carry different values.
        """
        v = np.atleast_1d(np.asarray(values, dtype=float))
        if v.shape != (self.n_input,):
            raise ValueError(f"expected {self.n_input} values, got shape {v.shape}")
        clash = np.flatnonzero(v != v[self.owner])
        if clash.size:
            j = int(clash[0])
            k = int(self.owner[j])
            raise DegenerateDesign(
                f"inputs {k} and {j} are the same design point but carry values {v[k]!r} and {v[j]!r}"
            )
        return v[self.kept]

    def sorted_values(self, values: ArrayLike) -> NDArray[np.float64]:
        """Input-ordered values rearranged to match ``sorted``."""
        return self.take(values)[self.order]


def as_design(points: Design | ArrayLike) -> Design:
    return points if isinstance(points, Design) else Design.from_points(points)
