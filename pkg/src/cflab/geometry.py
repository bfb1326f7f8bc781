"""Points of C^n and P^n, affine charts, and the catalog of hypersurfaces.

Every surface is stored in the affine chart its computations live in:

* ``eta``  -- n = 1, coordinates (eta, x) with eta = xi0/xi1;
* ``U2``   -- n = 2, coordinates (y0, y1, x1, x2) with y_j = xi_j/xi2;
* ``U1``   -- n = 2, coordinates (w0, w2, x1, x2) with w_j = xi_j/xi1.

Defining functions are polynomials with hand-written gradients, so the
transversality margin carries no finite-difference tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (ChartDomainError, DimensionMismatchError, InputError,
                     PreconditionError)

Point = tuple[complex, ...]

CHART_COORDS = {
    "eta": ("eta", "x"),
    "U2": ("y0", "y1", "x1", "x2"),
    "U1": ("w0", "w2", "x1", "x2"),
}


def as_projective_point(xi: Sequence[complex]) -> Point:
    xi = tuple(complex(c) for c in xi)
    if len(xi) < 2:
        raise InputError("a projective point needs at least two homogeneous coordinates")
    if all(c == 0 for c in xi):
        raise InputError("homogeneous coordinates must not all vanish")
    return xi


def as_affine_point(x: Sequence[complex]) -> Point:
    x = tuple(complex(c) for c in x)
    if len(x) < 1:
        raise InputError("an affine point needs at least one coordinate")
    return x


def dual_pairing(xi: Sequence[complex], x: Sequence[complex]) -> complex:
    """The pairing xi.x = xi0 + xi1*x1 + ... + xin*xn."""
    xi = as_projective_point(xi)
    x = as_affine_point(x)
    if len(xi) != len(x) + 1:
        raise DimensionMismatchError(
            f"xi has {len(xi)} homogeneous coordinates but x has {len(x)} affine ones")
    return xi[0] + sum(xi[k + 1] * x[k] for k in range(len(x)))


def affine_chart(xi: Sequence[complex], k: int) -> Point:
    """Coordinates xi_j/xi_k for j != k, in index order."""
    xi = as_projective_point(xi)
    if not 0 <= k < len(xi):
        raise InputError(f"chart index {k} outside 0..{len(xi) - 1}")
    if xi[k] == 0:
        raise ChartDomainError(f"xi_{k} vanishes; point outside the chart")
    return tuple(xi[j] / xi[k] for j in range(len(xi)) if j != k)


# ------------------------------------------------------------ surface specs

@dataclass(frozen=True)
class SurfaceSpec:
    """A hypersurface as a chart defining function with analytic gradient."""

    name: str
    chart: str
    params: tuple[complex, ...]
    value: Callable[[Point], complex] = field(repr=False)
    gradient: Callable[[Point], Point] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(CHART_COORDS[self.chart])


def _spec(name, chart, params, value, gradient):
    return SurfaceSpec(name=name, chart=chart, params=tuple(params),
                       value=value, gradient=gradient)


SURFACE_NAMES = ("P", "Q", "S_A", "S_B", "S_C1", "S_C2", "S_D", "S_E")

_DEFAULT_CHART = {
    "S_A": "eta", "S_B": "eta",
    "S_C1": "U2", "S_C2": "U2", "S_D": "U2", "S_E": "U2",
}


def surface_catalog(name: str, params: Sequence[complex] = (),
                    chart: str | None = None) -> SurfaceSpec:
    """Defining function and gradient for one of the catalog hypersurfaces.

    ``params`` supplies ``a`` for S_A and the base point ``z`` for P (default
    z = 0).  P and Q exist in every chart; the example surfaces live in the
    chart their computations use (S_D additionally in ``U1``, where its
    degeneracy over (x1, x2) = (1, 0) is visible).
    """
    params = tuple(complex(c) for c in params)
    if name not in SURFACE_NAMES:
        raise InputError(f"unknown surface {name!r}")
    if chart is None:
        chart = _DEFAULT_CHART.get(name)
    if name == "P":
        if chart is None:
            chart = "eta" if len(params) <= 1 else "U2"
        return _surface_P(params, chart)
    if name == "Q":
        if chart is None:
            raise InputError("Q needs an explicit chart ('eta' or 'U2')")
        return _surface_Q(chart)
    builder = _BUILDERS.get((name, chart))
    if builder is None:
        raise InputError(f"surface {name} is not available in chart {chart!r}")
    return builder(params)


def _surface_P(params, chart):
    z = params if params else None
    if chart == "eta":
        z0 = z[0] if z else 0j
        return _spec("P", "eta", (z0,),
                     lambda p: p[0] + z0,
                     lambda p: (1 + 0j, 0j))
    if chart == "U2":
        z1, z2 = (z if z else (0j, 0j))
        return _spec("P", "U2", (z1, z2),
                     lambda p: p[0] + p[1] * z1 + z2,
                     lambda p: (1 + 0j, z1, 0j, 0j))
    if chart == "U1":
        z1, z2 = (z if z else (0j, 0j))
        # xi.z / xi1 with coordinates (w0, w2) = (xi0/xi1, xi2/xi1)
        return _spec("P", "U1", (z1, z2),
                     lambda p: p[0] + z1 + p[1] * z2,
                     lambda p: (1 + 0j, z2, 0j, 0j))
    raise InputError(f"no chart {chart!r} for P")


def _surface_Q(chart):
    if chart == "eta":
        return _spec("Q", "eta", (),
                     lambda p: p[0] + p[1],
                     lambda p: (1 + 0j, 1 + 0j))
    if chart == "U2":
        return _spec("Q", "U2", (),
                     lambda p: p[0] + p[1] * p[2] + p[3],
                     lambda p: (1 + 0j, p[2], p[1], 1 + 0j))
    if chart == "U1":
        # xi.x / xi1 = w0 + x1 + w2*x2
        return _spec("Q", "U1", (),
                     lambda p: p[0] + p[2] + p[1] * p[3],
                     lambda p: (1 + 0j, p[3], 1 + 0j, p[1]))
    raise InputError(f"no chart {chart!r} for Q")


def _surface_S_A(params):
    if len(params) != 1:
        raise InputError("S_A needs the parameter a")
    a = params[0]
    return _spec("S_A", "eta", (a,),
                 lambda p: a * p[0] + p[1] - 1,
                 lambda p: (a, 1 + 0j))


def _surface_S_B(params):
    return _spec("S_B", "eta", (),
                 lambda p: p[0] ** 2 + (p[0] + 1) * (p[1] - 1),
                 lambda p: (2 * p[0] + p[1] - 1, p[0] + 1))


def _surface_S_C1(params):
    return _spec("S_C1", "U2", (),
                 lambda p: p[0] ** 3 + p[1] ** 3 * (p[2] - 1) + (p[3] - 2),
                 lambda p: (3 * p[0] ** 2, 3 * p[1] ** 2 * (p[2] - 1),
                            p[1] ** 3, 1 + 0j))


def _surface_S_C2(params):
    return _spec("S_C2", "U2", (),
                 lambda p: (p[0] ** 3 + p[1] ** 3 * (p[2] - 1)
                            + (p[3] - 2) + 2 * p[1] ** 2),
                 lambda p: (3 * p[0] ** 2,
                            3 * p[1] ** 2 * (p[2] - 1) + 4 * p[1],
                            p[1] ** 3, 1 + 0j))


def _surface_S_D_U2(params):
    return _spec("S_D", "U2", (),
                 lambda p: (p[0] ** 2 + p[1] * (p[1] + 1) * (p[2] - 1) * p[3]
                            + p[3] ** 2 + 1),
                 lambda p: (2 * p[0],
                            (2 * p[1] + 1) * (p[2] - 1) * p[3],
                            p[1] * (p[1] + 1) * p[3],
                            p[1] * (p[1] + 1) * (p[2] - 1) + 2 * p[3]))


def _surface_S_D_U1(params):
    # Same surface divided by xi1^2: w0^2 + (1+w2)(x1-1)x2 + w2^2(x2^2+1).
    return _spec("S_D", "U1", (),
                 lambda p: (p[0] ** 2 + (1 + p[1]) * (p[2] - 1) * p[3]
                            + p[1] ** 2 * (p[3] ** 2 + 1)),
                 lambda p: (2 * p[0],
                            (p[2] - 1) * p[3] + 2 * p[1] * (p[3] ** 2 + 1),
                            (1 + p[1]) * p[3],
                            (1 + p[1]) * (p[2] - 1) + 2 * p[1] ** 2 * p[3]))


def _surface_S_E(params):
    def quad(p):
        return p[1] ** 2 + 3 * p[1] * p[3] + 2 * p[3] ** 2

    return _spec("S_E", "U2", (),
                 lambda p: p[0] ** 2 + quad(p) * (p[2] - 1) + p[3] ** 3 + 1,
                 lambda p: (2 * p[0],
                            (2 * p[1] + 3 * p[3]) * (p[2] - 1),
                            quad(p),
                            (3 * p[1] + 4 * p[3]) * (p[2] - 1) + 3 * p[3] ** 2))


_BUILDERS = {
    ("S_A", "eta"): _surface_S_A,
    ("S_B", "eta"): _surface_S_B,
    ("S_C1", "U2"): _surface_S_C1,
    ("S_C2", "U2"): _surface_S_C2,
    ("S_D", "U2"): _surface_S_D_U2,
    ("S_D", "U1"): _surface_S_D_U1,
    ("S_E", "U2"): _surface_S_E,
}


# ----------------------------------------------------------------- sampling

def _rand_c(rng: random.Random, radius: float = 1.0) -> complex:
    return complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))


def _on_surface_tol(point: Point) -> float:
    return 1e-12 * (1.0 + max(abs(c) for c in point))


def sample_on_surface(spec: SurfaceSpec, seed: int, count: int) -> list[Point]:
    """Deterministic on-surface points, one coordinate solved in closed form.

    Random draws that land near a solve singularity are resampled, so the
    returned points always satisfy |value| < 1e-12 * (1 + |point|).
    """
    if count < 1:
        raise InputError("count must be >= 1")
    rng = random.Random(seed)
    solver = _SAMPLERS.get((spec.name, spec.chart))
    if solver is None:
        raise InputError(
            f"no closed-form sampler for {spec.name} in chart {spec.chart}")
    points: list[Point] = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 200 * count:
            raise PreconditionError("sampler failed to avoid singularities")
        point = solver(rng, spec.params)
        if point is None:
            continue
        if abs(spec.value(point)) >= _on_surface_tol(point):
            continue
        points.append(point)
    return points


def _sample_S_A(rng, params):
    a = params[0]
    eta = _rand_c(rng)
    return (eta, 1 - a * eta)


def _sample_S_B(rng, params):
    eta = _rand_c(rng)
    if abs(eta + 1) < 0.2:
        return None
    return (eta, 1 - eta ** 2 / (eta + 1))


def _sample_Q_eta(rng, params):
    eta = _rand_c(rng)
    return (eta, -eta)


def _sample_P_eta(rng, params):
    z0 = params[0] if params else 0j
    return (-z0, _rand_c(rng))


def _sample_Q_U2(rng, params):
    y0, y1, x1 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    return (y0, y1, x1, -y0 - y1 * x1)


def _sample_P_U2(rng, params):
    z1, z2 = params if params else (0j, 0j)
    y1, x1, x2 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    return (-y1 * z1 - z2, y1, x1, x2)


def _sample_S_C1(rng, params):
    y0, y1, x1 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    return (y0, y1, x1, 2 - y0 ** 3 - y1 ** 3 * (x1 - 1))


def _sample_S_C2(rng, params):
    y0, y1, x1 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    return (y0, y1, x1, 2 - y0 ** 3 - y1 ** 3 * (x1 - 1) - 2 * y1 ** 2)


def _sample_S_D_U2(rng, params):
    y0, y1, x2 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    den = y1 * (y1 + 1) * x2
    if abs(den) < 0.05:
        return None
    x1 = 1 - (y0 ** 2 + x2 ** 2 + 1) / den
    return (y0, y1, x1, x2)


def _sample_S_D_U1(rng, params):
    w0, w2, x2 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    den = (1 + w2) * x2
    if abs(den) < 0.05:
        return None
    x1 = 1 - (w0 ** 2 + w2 ** 2 * (x2 ** 2 + 1)) / den
    return (w0, w2, x1, x2)


def _sample_S_E(rng, params):
    y0, y1, x2 = _rand_c(rng), _rand_c(rng), _rand_c(rng)
    den = (y1 + x2) * (y1 + 2 * x2)
    if abs(den) < 0.05:
        return None
    x1 = 1 - (y0 ** 2 + x2 ** 3 + 1) / den
    return (y0, y1, x1, x2)


_SAMPLERS = {
    ("S_A", "eta"): _sample_S_A,
    ("S_B", "eta"): _sample_S_B,
    ("Q", "eta"): _sample_Q_eta,
    ("P", "eta"): _sample_P_eta,
    ("Q", "U2"): _sample_Q_U2,
    ("P", "U2"): _sample_P_U2,
    ("S_C1", "U2"): _sample_S_C1,
    ("S_C2", "U2"): _sample_S_C2,
    ("S_D", "U2"): _sample_S_D_U2,
    ("S_D", "U1"): _sample_S_D_U1,
    ("S_E", "U2"): _sample_S_E,
}


# ----------------------------------------------------------- transversality

def transversality_margin(specs: Sequence[SurfaceSpec], point) -> float:
    """Smallest singular value of the stacked gradients at a common point.

    A strictly positive margin certifies general position at the point; the
    point must lie on every surface (within 1e-9 relative).
    """
    if not specs:
        raise InputError("need at least one surface")
    chart = specs[0].chart
    if any(s.chart != chart for s in specs):
        raise InputError("all surfaces must share one chart")
    point = tuple(complex(c) for c in point)
    if len(point) != specs[0].dim:
        raise DimensionMismatchError("point dimension does not match the chart")
    bound = 1e-9 * (1.0 + max(abs(c) for c in point))
    for s in specs:
        if abs(s.value(point)) > bound:
            raise PreconditionError(
                f"point is not on {s.name} (|value| = {abs(s.value(point)):.3e})")
    rows = np.array([s.gradient(point) for s in specs], dtype=complex)
    return float(np.linalg.svd(rows, compute_uv=False)[-1])


def gradient_fd_gap(spec: SurfaceSpec, point, step: float = 1e-6) -> float:
    """Relative disagreement between the analytic gradient and central FDs."""
    point = tuple(complex(c) for c in point)
    grad = spec.gradient(point)
    worst = 0.0
    scale = max(1.0, max(abs(g) for g in grad))
    for i in range(len(point)):
        plus = tuple(c + (step if j == i else 0) for j, c in enumerate(point))
        minus = tuple(c - (step if j == i else 0) for j, c in enumerate(point))
        fd = (spec.value(plus) - spec.value(minus)) / (2 * step)
        worst = max(worst, abs(fd - grad[i]) / scale)
    return worst
