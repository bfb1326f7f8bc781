"""Parametrized cycles and deterministic tensor-product quadrature.

Periodic parameter directions use the trapezoid rule (spectrally accurate
for analytic periodic integrands); interval directions use Gauss-Legendre.
Grid values are always reduced in parameter-lexicographic order with
compensated (Neumaier) summation, so results are bit-identical across runs
and across worker counts.
"""

from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import forms
from .errors import (ConvergenceError, InputError, PoleError,
                     UnsupportedKindError)

Point = tuple[complex, ...]
Param = tuple[float, ...]

TWO_PI = 2.0 * math.pi


# ----------------------------------------------------------------- domains

@dataclass(frozen=True)
class Circle:
    """A periodic factor of period 2*pi."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise InputError("interval needs a < b")


@dataclass(frozen=True)
class ParamDomain:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 1:
            raise InputError("a parameter domain needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class QuadratureSpec:
    """Per-factor node counts; the rule is implied by the factor type."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(n < 4 for n in self.sizes):
            raise InputError("quadrature sizes must be >= 4")

    @staticmethod
    def of(sizes: int | Sequence[int], dim: int) -> "QuadratureSpec":
        if isinstance(sizes, int):
            return QuadratureSpec((sizes,) * dim)
        sizes = tuple(int(n) for n in sizes)
        if len(sizes) != dim:
            raise InputError(f"need {dim} quadrature sizes, got {len(sizes)}")
        return QuadratureSpec(sizes)

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(tuple(2 * n for n in self.sizes))


@dataclass(frozen=True)
class Cycle:
    """A parametrized cycle with an analytic tangent frame.

    ``map`` sends a parameter tuple to an ambient point; ``tangent`` returns
    one ambient vector per parameter factor (hand differentiated, never by
    finite differences).  ``x_indices`` names the ambient coordinates that
    project to affine space, used by the orientation test.
    """

    kind: str
    domain: ParamDomain
    map: Callable[[Param], Point] = field(repr=False)
    tangent: Callable[[Param], tuple[Point, ...]] = field(repr=False)
    ambient_dim: int
    orientation: int = 1
    x_indices: tuple[int, ...] = ()
    reference_param: Param = ()

    @property
    def dim(self) -> int:
        return self.domain.dim

    def reversed_factor(self, k: int) -> "Cycle":
        """Same cycle with the k-th parameter direction reversed."""
        factor = self.domain.factors[k]

        def flip(param):
            param = list(param)
            if isinstance(factor, Circle):
                param[k] = -param[k]
            else:
                param[k] = factor.a + factor.b - param[k]
            return tuple(param)

        def fmap(param):
            return self.map(flip(param))

        def ftan(param):
            frame = list(self.tangent(flip(param)))
            frame[k] = tuple(-c for c in frame[k])
            return tuple(frame)

        return Cycle(kind=self.kind, domain=self.domain, map=fmap,
                     tangent=ftan, ambient_dim=self.ambient_dim,
                     orientation=self.orientation, x_indices=self.x_indices,
                     reference_param=flip(self.reference_param))


# --------------------------------------------------------------- factories

def make_cycle(kind: str, **params) -> Cycle:
    """Construct one of the catalog cycles.

    Kinds: ``circle`` (center, radius), ``segment`` (start, end),
    ``sphere_M`` (z, eps), ``torus_D`` (eps), ``torus_E`` (r1, r2),
    ``torus_generic`` (centers, radii).
    """
    builder = _CYCLE_BUILDERS.get(kind)
    if builder is None:
        raise InputError(f"unknown cycle kind {kind!r}")
    return builder(**params)


def _circle(center: complex = 0j, radius: float = 1.0) -> Cycle:
    if radius <= 0:
        raise InputError("circle radius must be positive")
    center = complex(center)

    def cmap(param):
        return (center + radius * cmath.exp(1j * param[0]),)

    def ctan(param):
        return ((1j * radius * cmath.exp(1j * param[0]),),)

    return Cycle(kind="circle", domain=ParamDomain((Circle(),)),
                 map=cmap, tangent=ctan, ambient_dim=1,
                 x_indices=(0,), reference_param=(0.7,))


def _segment(start: complex, end: complex) -> Cycle:
    start, end = complex(start), complex(end)
    delta = end - start

    def smap(param):
        return (start + param[0] * delta,)

    def stan(param):
        return ((delta,),)

    return Cycle(kind="segment", domain=ParamDomain((Interval(0.0, 1.0),)),
                 map=smap, tangent=stan, ambient_dim=1,
                 x_indices=(0,), reference_param=(0.5,))


def _sphere_M(z: Sequence[complex], eps: float) -> Cycle:
    """The residue sphere: x on the eps-sphere about z, with the attached
    homogeneous coordinates xi = (x.conj(z) - |x|^2, conj(x - z)).

    Every mapped point satisfies xi.x = 0 and xi.z = -eps^2.
    """
    if eps <= 0:
        raise InputError("sphere radius eps must be positive")
    z = tuple(complex(c) for c in z)
    n = len(z)
    if n == 1:
        z0 = z[0]

        def mmap(param):
            delta = eps * cmath.exp(1j * param[0])
            x = z0 + delta
            xi1 = delta.conjugate()
            xi0 = -z0 * xi1 - eps * eps
            return (xi0, xi1, x)

        def mtan(param):
            delta = eps * cmath.exp(1j * param[0])
            d_delta = 1j * delta
            d_conj = d_delta.conjugate()
            return ((-z0 * d_conj, d_conj, d_delta),)

        return Cycle(kind="sphere_M", domain=ParamDomain((Circle(),)),
                     map=mmap, tangent=mtan, ambient_dim=3,
                     x_indices=(2,), reference_param=(0.7,))
    if n == 2:
        z1, z2 = z

        def deltas(param):
            psi, p1, p2 = param
            return (eps * math.cos(psi) * cmath.exp(1j * p1),
                    eps * math.sin(psi) * cmath.exp(1j * p2))

        def mmap(param):
            d1, d2 = deltas(param)
            c1, c2 = d1.conjugate(), d2.conjugate()
            xi0 = -(z1 * c1 + z2 * c2) - eps * eps
            return (xi0, c1, c2, z1 + d1, z2 + d2)

        def mtan(param):
            psi, p1, p2 = param
            e1, e2 = cmath.exp(1j * p1), cmath.exp(1j * p2)
            a1, a2 = eps * math.cos(psi), eps * math.sin(psi)
            # d/dpsi
            d1_psi = -eps * math.sin(psi) * e1
            d2_psi = eps * math.cos(psi) * e2
            c1_psi = d1_psi.conjugate()
            c2_psi = d2_psi.conjugate()
            t_psi = (-(z1 * c1_psi + z2 * c2_psi), c1_psi, c2_psi,
                     d1_psi, d2_psi)
            # d/dphi1
            d1_1 = 1j * a1 * e1
            c1_1 = d1_1.conjugate()
            t_p1 = (-(z1 * c1_1), c1_1, 0j, d1_1, 0j)
            # d/dphi2
            d2_2 = 1j * a2 * e2
            c2_2 = d2_2.conjugate()
            t_p2 = (-(z2 * c2_2), 0j, c2_2, 0j, d2_2)
            return (t_psi, t_p1, t_p2)

        return Cycle(kind="sphere_M",
                     domain=ParamDomain((Interval(0.0, math.pi / 2),
                                         Circle(), Circle())),
                     map=mmap, tangent=mtan, ambient_dim=5,
                     x_indices=(3, 4), reference_param=(0.9, 0.7, 1.3))
    raise InputError("sphere_M is implemented for n in {1, 2}")


def _torus_D(eps: float) -> Cycle:
    """The two-cycle inside S_D over P: y1 and x2 on eps-circles, x1 solved
    from the chart equation.  Ambient coordinates are (y1, x2, x1)."""
    if not 0 < eps < 1:
        raise InputError("torus_D needs 0 < eps < 1")

    def parts(param):
        th, et = param
        y1 = eps * cmath.exp(1j * th)
        x2 = eps * cmath.exp(1j * et)
        num = 1 + x2 * x2
        den = eps * eps * cmath.exp(1j * (th + et)) * (1 + y1)
        return y1, x2, num, den

    def dmap(param):
        y1, x2, num, den = parts(param)
        return (y1, x2, 1 - num / den)

    def dtan(param):
        y1, x2, num, den = parts(param)
        dy1 = 1j * y1
        dx2 = 1j * x2
        # d/dtheta: num constant, den has factor exp(i theta)(1 + y1)
        dden_th = 1j * den + eps * eps * cmath.exp(1j * (param[0] + param[1])) * dy1
        dx1_th = num * dden_th / (den * den)
        # d/deta
        dnum_et = 2j * x2 * x2
        dden_et = 1j * den
        dx1_et = (num * dden_et - dnum_et * den) / (den * den)
        return ((dy1, 0j, dx1_th), (0j, dx2, dx1_et))

    return Cycle(kind="torus_D", domain=ParamDomain((Circle(), Circle())),
                 map=dmap, tangent=dtan, ambient_dim=3,
                 x_indices=(0, 1, 2), reference_param=(0.4, 1.1))


def _torus_E(r1: float, r2: float) -> Cycle:
    if r1 <= 0 or r2 <= 0:
        raise InputError("torus_E radii must be positive")

    def emap(param):
        return (r1 * cmath.exp(1j * param[0]), r2 * cmath.exp(1j * param[1]))

    def etan(param):
        return ((1j * r1 * cmath.exp(1j * param[0]), 0j),
                (0j, 1j * r2 * cmath.exp(1j * param[1])))

    return Cycle(kind="torus_E", domain=ParamDomain((Circle(), Circle())),
                 map=emap, tangent=etan, ambient_dim=2,
                 x_indices=(0, 1), reference_param=(0.4, 1.1))


def _torus_generic(centers: Sequence[complex], radii: Sequence[float]) -> Cycle:
    centers = tuple(complex(c) for c in centers)
    radii = tuple(float(r) for r in radii)
    if len(centers) != len(radii) or not centers:
        raise InputError("torus_generic needs matching centers and radii")
    if any(r <= 0 for r in radii):
        raise InputError("torus_generic radii must be positive")
    k = len(centers)

    def gmap(param):
        return tuple(c + r * cmath.exp(1j * t)
                     for c, r, t in zip(centers, radii, param))

    def gtan(param):
        frame = []
        for j in range(k):
            vec = [0j] * k
            vec[j] = 1j * radii[j] * cmath.exp(1j * param[j])
            frame.append(tuple(vec))
        return tuple(frame)

    return Cycle(kind="torus_generic",
                 domain=ParamDomain(tuple(Circle() for _ in range(k))),
                 map=gmap, tangent=gtan, ambient_dim=k,
                 x_indices=tuple(range(k)),
                 reference_param=tuple(0.3 + 0.4 * j for j in range(k)))


_CYCLE_BUILDERS = {
    "circle": _circle,
    "segment": _segment,
    "sphere_M": _sphere_M,
    "torus_D": _torus_D,
    "torus_E": _torus_E,
    "torus_generic": _torus_generic,
}


# ------------------------------------------------------------- orientation

def _realify(values: Sequence[complex]) -> list[float]:
    out = []
    for c in values:
        out.extend((c.real, c.imag))
    return out


def orientation_sign(cycle: Cycle, interior_point: Sequence[complex]) -> int:
    """+1 if the parametrization induces the outward-normal orientation.

    Works on boundary-sphere kinds only: the determinant of the real matrix
    [outward normal | realified tangent frame], taken at the reference
    parameter with the ambient projected to affine x-space.
    """
    if cycle.kind not in ("circle", "sphere_M"):
        raise UnsupportedKindError(
            f"orientation_sign needs a boundary sphere, got {cycle.kind!r}")
    interior = tuple(complex(c) for c in interior_point)
    param = cycle.reference_param
    point = cycle.map(param)
    xs = [point[i] for i in cycle.x_indices]
    if len(interior) != len(xs):
        raise InputError("interior point dimension mismatch")
    normal = [a - b for a, b in zip(xs, interior)]
    norm = math.sqrt(sum(abs(c) ** 2 for c in normal))
    columns = [_realify(c / norm for c in normal)]
    for vec in cycle.tangent(param):
        columns.append(_realify(vec[i] for i in cycle.x_indices))
    matrix = np.array(columns, dtype=float).T
    det = float(np.linalg.det(matrix))
    if det == 0.0:
        raise InputError("degenerate frame at the reference parameter")
    return 1 if det > 0 else -1


# -------------------------------------------------------------- quadrature

def _factor_rule(factor, n: int) -> tuple[list[float], list[float]]:
    if isinstance(factor, Circle):
        h = TWO_PI / n
        return [h * j for j in range(n)], [h] * n
    nodes, weights = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (factor.a + factor.b)
    half = 0.5 * (factor.b - factor.a)
    return ([mid + half * t for t in nodes],
            [half * w for w in weights])


def _neumaier_add(s: float, c: float, x: float) -> tuple[float, float]:
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


def integrate(form: forms.KForm, cycle: Cycle,
              quad: QuadratureSpec | int | Sequence[int],
              workers: int = 1) -> complex:
    """Integrate a form over a cycle on the tensor-product grid.

    Grid evaluations may run on several workers; the reduction is a single
    pass in parameter-lexicographic order with compensated summation, so the
    result does not depend on the worker count.
    """
    if form.degree != cycle.dim:
        raise InputError(
            f"form degree {form.degree} != cycle dimension {cycle.dim}")
    quad = quad if isinstance(quad, QuadratureSpec) else QuadratureSpec.of(quad, cycle.dim)
    if len(quad.sizes) != cycle.dim:
        raise InputError("quadrature spec does not match the cycle dimension")
    rules = [_factor_rule(f, n) for f, n in zip(cycle.domain.factors, quad.sizes)]
    grid = list(itertools.product(*[range(n) for n in quad.sizes]))

    def eval_at(idx):
        param = tuple(rules[d][0][i] for d, i in enumerate(idx))
        try:
            return forms.pullback_integrand(form, cycle, param)
        except PoleError as exc:
            raise PoleError(f"integrand pole on the grid at param {param}",
                            point=exc.point, param=param) from None
        except ZeroDivisionError:
            raise PoleError(f"integrand pole on the grid at param {param}",
                            param=param) from None

    if workers <= 1:
        values = [eval_at(idx) for idx in grid]
    else:
        values = [0j] * len(grid)
        chunk = (len(grid) + workers - 1) // workers

        def run(lo):
            hi = min(lo + chunk, len(grid))
            out = []
            for pos in range(lo, hi):
                try:
                    out.append(eval_at(grid[pos]))
                except PoleError as exc:
                    out.append(exc)
            return lo, out

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for lo, out in pool.map(run, range(0, len(grid), chunk)):
                values[lo:lo + len(out)] = out
        for v in values:
            if isinstance(v, PoleError):
                raise v

    s_re = c_re = s_im = c_im = 0.0
    for idx, v in zip(grid, values):
        w = 1.0
        for d, i in enumerate(idx):
            w *= rules[d][1][i]
        s_re, c_re = _neumaier_add(s_re, c_re, w * v.real)
        s_im, c_im = _neumaier_add(s_im, c_im, w * v.imag)
    return complex(s_re + c_re, s_im + c_im)


def refine_until(form: forms.KForm, cycle: Cycle,
                 base_quad: QuadratureSpec | int | Sequence[int],
                 tol: float, max_doublings: int = 6,
                 workers: int = 1) -> tuple[complex, float]:
    """Double every node count until successive values differ by < tol."""
    if tol <= 0:
        raise InputError("tolerance must be positive")
    if max_doublings < 1:
        raise InputError("max_doublings must be >= 1")
    quad = base_quad if isinstance(base_quad, QuadratureSpec) \
        else QuadratureSpec.of(base_quad, cycle.dim)
    value = integrate(form, cycle, quad, workers=workers)
    previous = value
    for _ in range(max_doublings):
        quad = quad.doubled()
        nxt = integrate(form, cycle, quad, workers=workers)
        delta = abs(nxt - value)
        if delta < tol:
            return nxt, delta
        previous, value = value, nxt
    raise ConvergenceError(
        f"no convergence below {tol} after {max_doublings} doublings",
        last=value, previous=previous, delta=abs(value - previous))
