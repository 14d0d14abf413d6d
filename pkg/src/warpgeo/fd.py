"""Finite-difference engine.

All derivatives in the package flow through :class:`DiffEngine`, which
evaluates central-difference stencils on scalar-, vector- or matrix-valued
functions of coordinates and shrinks its step automatically when a stencil
would leave the chart's coordinate box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StencilError

SCHEMES = ("central2", "central4", "richardson")

# farthest stencil point, in units of the step
_REACH = {"central2": 1.0, "central4": 2.0, "richardson": 1.0}


@dataclass(frozen=True)
class DiffEngine:
    """Central differences with automatic step shrinking near box edges.

    scheme: "central2" (2nd order), "central4" (4th order) or "richardson"
    (central2 extrapolated from steps h and h/2, 4th order).
    """

    scheme: str = "central2"
    step: float = 1e-5
    fd_check_tol: float = 1e-5
    min_step: float = 1e-10

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.step <= 0:
            raise ValueError("step must be positive")

    def _fit_step(self, room: float) -> float:
        """Largest usable step given the distance to the nearest bound."""
        h = self.step
        limit = 0.5 * room / _REACH[self.scheme]
        if np.isfinite(limit):
            h = min(h, limit)
        if h < self.min_step:
            raise StencilError(
                f"stencil does not fit: room to boundary {room:.3e} allows step "
                f"{h:.3e} < min_step {self.min_step:.3e}"
            )
        return h

    def _combine(self, at: Callable[[float], np.ndarray], h: float):
        if self.scheme == "central2":
            return (at(h) - at(-h)) / (2.0 * h)
        if self.scheme == "central4":
            return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h)
        d_h = (at(h) - at(-h)) / (2.0 * h)
        d_half = (at(0.5 * h) - at(-0.5 * h)) / h
        return (4.0 * d_half - d_h) / 3.0

    def partial(self, fn, coords, axis: int, lower, upper):
        """d(fn)/d(coords[axis]). fn may return a float or an ndarray."""
        coords = np.asarray(coords, dtype=float)
        x = float(coords[axis])
        room = min(x - float(lower[axis]), float(upper[axis]) - x)
        h = self._fit_step(room)

        def at(t: float):
            shifted = coords.copy()
            shifted[axis] = x + t
            return np.asarray(fn(shifted), dtype=float)

        return self._combine(at, h)

    def partials(self, fn, coords, lower, upper) -> np.ndarray:
        """All coordinate partials of a scalar fn, as a vector."""
        return np.array(
            [float(self.partial(fn, coords, i, lower, upper)) for i in range(len(coords))]
        )

    def jacobian(self, fn, coords, lower, upper) -> np.ndarray:
        """Jacobian of a vector-valued fn; rows index outputs, columns inputs."""
        cols = [self.partial(fn, coords, i, lower, upper) for i in range(len(coords))]
        return np.column_stack([np.atleast_1d(c) for c in cols])

    def directional(self, fn, coords, direction, lower, upper) -> float:
        """Derivative of a scalar fn along a straight line through coords."""
        coords = np.asarray(coords, dtype=float)
        d = np.asarray(direction, dtype=float)
        if not np.any(d):
            return 0.0
        room = np.inf
        for i, di in enumerate(d):
            if di == 0.0:
                continue
            lo = float(lower[i])
            hi = float(upper[i])
            gap = min(
                (hi - coords[i]) / abs(di) if np.isfinite(hi) else np.inf,
                (coords[i] - lo) / abs(di) if np.isfinite(lo) else np.inf,
            )
            room = min(room, gap)
        h = self._fit_step(room)

        def at(t: float):
            return np.asarray(fn(coords + t * d), dtype=float)

        return float(self._combine(at, h))
