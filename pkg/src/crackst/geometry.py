"""Closed dividing contours in arc-length parametrization.

A contour is the closed boundary of the inclusion, split into a debonded
(crack) arc for s in [0, l0] and a bonded arc for s in [l0, l].  Points are
complex numbers t(s) with |t'(s)| = 1, traversed counterclockwise, so the
inclusion interior lies to the left.  Curvature follows the convention
rho = Im(t''(s) * conj(t'(s))), which is +1/R on a counterclockwise circle.
Second and third derivatives are recovered from the Frenet relations

    t''(s)  = i * rho(s) * t'(s)
    t'''(s) = (i * rho'(s) - rho(s)**2) * t'(s)

so a concrete shape only has to supply t, t', rho and rho'.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "Contour",
    "CircleContour",
    "EllipseContour",
    "TabulatedContour",
    "circular_contour",
    "elliptical_contour",
    "curvature",
    "derivative",
]


class Contour:
    """Base class for closed contours with a marked crack arc.

    Subclasses set ``l0`` (crack arc length) and ``l`` (total length) and
    implement ``point``, ``tangent``, ``curvature`` and
    ``curvature_derivative``, each accepting scalars or arrays of arc length.
    """

    l0: float
    l: float
    counterclockwise: bool = True

    def wrap(self, s):
        """Reduce arc length mod l (the junctions s=0(=l) and s=l0 are tips)."""
        return np.mod(s, self.l)

    def point(self, s):
        raise NotImplementedError

    def tangent(self, s):
        raise NotImplementedError

    def curvature(self, s):
        raise NotImplementedError

    def curvature_derivative(self, s):
        raise NotImplementedError

    def second_derivative(self, s):
        return 1j * self.curvature(s) * self.tangent(s)

    def third_derivative(self, s):
        rho = self.curvature(s)
        return (1j * self.curvature_derivative(s) - rho**2) * self.tangent(s)

    def derivative(self, s, order):
        """d^order t/ds^order for order in {1, 2, 3}."""
        if order == 1:
            return self.tangent(s)
        if order == 2:
            return self.second_derivative(s)
        if order == 3:
            return self.third_derivative(s)
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order!r}")

    @property
    def tips(self):
        """Arc lengths of the two crack tips."""
        return (0.0, self.l0)

    def on_crack(self, s):
        """True where s (mod l) lies on the debonded arc."""
        return self.wrap(s) <= self.l0

    def arc_interval(self, arc):
        """(s_lo, s_hi) of arc 0 (crack) or arc 1 (bonded)."""
        if arc == 0:
            return 0.0, self.l0
        if arc == 1:
            return self.l0, self.l
        raise ValueError(f"arc must be 0 or 1, got {arc!r}")


class CircleContour(Contour):
    """Circle of radius R with the crack spanning given polar angles.

    s = 0 maps to polar angle ``crack_start``; the crack is traced
    counterclockwise to ``crack_end``, then the bonded arc closes the circle.
    """

    def __init__(self, radius, crack_start, crack_end, center=0.0):
        if radius <= 0.0:
            raise ValueError(f"radius must be positive, got {radius}")
        span = crack_end - crack_start
        if not 0.0 < span < 2.0 * np.pi:
            raise ValueError(
                f"crack angular span must lie strictly between 0 and 2*pi, got {span}"
            )
        self.radius = float(radius)
        self.theta0 = float(crack_start)
        self.center = complex(center)
        self.l0 = float(radius * span)
        self.l = float(2.0 * np.pi * radius)

    def point(self, s):
        return self.center + self.radius * np.exp(1j * (self.theta0 + np.asarray(s) / self.radius))

    def tangent(self, s):
        return 1j * np.exp(1j * (self.theta0 + np.asarray(s) / self.radius))

    def curvature(self, s):
        return np.full_like(np.asarray(s, dtype=float), 1.0 / self.radius)

    def curvature_derivative(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))


class _ReparametrizedContour(Contour):
    """Arc-length reparametrization of a parametric curve r(theta).

    The subclass supplies r and its theta-derivatives; a dense cumulative
    arc-length table plus Newton refinement inverts s -> theta.  Geometry is
    assumed C^4-smooth; tabulated shapes only reach the smoothness of their
    spline and carry a corresponding accuracy caveat.
    """

    _GRID = 4096

    def _init_maps(self, theta_start, theta_crack_end):
        two_pi = 2.0 * np.pi
        grid = np.linspace(theta_start, theta_start + two_pi, self._GRID + 1)
        # Composite Simpson on a fine grid; speeds are smooth and periodic.
        speeds = self._speed(grid)
        h = grid[1] - grid[0]
        mids = 0.5 * (grid[:-1] + grid[1:])
        seg = (speeds[:-1] + 4.0 * self._speed(mids) + speeds[1:]) * (h / 6.0)
        self._theta_grid = grid
        self._s_grid = np.concatenate(([0.0], np.cumsum(seg)))
        self.l = float(self._s_grid[-1])
        self._theta_start = float(theta_start)
        span = theta_crack_end - theta_start
        if not 0.0 < span < two_pi:
            raise ValueError(
                f"crack parameter span must lie strictly between 0 and 2*pi, got {span}"
            )
        self.l0 = float(self._theta_to_s(np.asarray(theta_crack_end)))

    def _theta_to_s(self, theta):
        # 5-point Gauss-Legendre from the nearest grid node.
        idx = np.clip(
            np.searchsorted(self._theta_grid, theta, side="right") - 1,
            0,
            self._GRID - 1,
        )
        th0 = self._theta_grid[idx]
        xg, wg = np.polynomial.legendre.leggauss(5)
        half = 0.5 * (theta - th0)
        nodes = th0[..., None] + half[..., None] * (xg + 1.0)
        return self._s_grid[idx] + np.sum(wg * self._speed(nodes), axis=-1) * half

    def _s_to_theta(self, s):
        s = self.wrap(np.asarray(s, dtype=float))
        theta = np.interp(s, self._s_grid, self._theta_grid)
        for _ in range(4):
            theta = theta - (self._theta_to_s(theta) - s) / self._speed(theta)
        return theta

    def _speed(self, theta):
        return np.abs(self._r_prime(theta))

    def _r(self, theta):
        raise NotImplementedError

    def _r_prime(self, theta):
        raise NotImplementedError

    def _r_second(self, theta):
        raise NotImplementedError

    def _r_third(self, theta):
        raise NotImplementedError

    def point(self, s):
        return self._r(self._s_to_theta(s))

    def tangent(self, s):
        rp = self._r_prime(self._s_to_theta(s))
        return rp / np.abs(rp)

    def curvature(self, s):
        theta = self._s_to_theta(s)
        rp = self._r_prime(theta)
        rpp = self._r_second(theta)
        cross = np.imag(np.conj(rp) * rpp)
        return cross / np.abs(rp) ** 3

    def curvature_derivative(self, s):
        theta = self._s_to_theta(s)
        rp = self._r_prime(theta)
        rpp = self._r_second(theta)
        rppp = self._r_third(theta)
        g = np.abs(rp)
        cross = np.imag(np.conj(rp) * rpp)
        dcross = np.imag(np.conj(rp) * rppp)
        dg = np.real(np.conj(rp) * rpp) / g
        # d(rho)/dtheta / |r'| converts to the arc-length derivative.
        return (dcross / g**3 - 3.0 * cross * dg / g**4) / g


class EllipseContour(_ReparametrizedContour):
    """Axis-aligned ellipse x = a*cos(theta), y = b*sin(theta).

    The crack spans the parameter interval [crack_start, crack_end]; s = 0
    corresponds to theta = crack_start.
    """

    def __init__(self, a, b, crack_start, crack_end):
        if a <= 0.0 or b <= 0.0:
            raise ValueError(f"semi-axes must be positive, got a={a}, b={b}")
        self.a = float(a)
        self.b = float(b)
        self._init_maps(float(crack_start), float(crack_end))

    def _r(self, theta):
        return self.a * np.cos(theta) + 1j * self.b * np.sin(theta)

    def _r_prime(self, theta):
        return -self.a * np.sin(theta) + 1j * self.b * np.cos(theta)

    def _r_second(self, theta):
        return -self.a * np.cos(theta) - 1j * self.b * np.sin(theta)

    def _r_third(self, theta):
        return self.a * np.sin(theta) - 1j * self.b * np.cos(theta)


class TabulatedContour(_ReparametrizedContour):
    """Closed contour defined by sampled points, differentiated by a
    periodic cubic spline.

    ``samples`` are complex positions in counterclockwise order starting at
    the leading crack tip; ``crack_end_fraction`` is the fraction of the
    sample parameter covered by the crack.  Smoothness beyond the spline's
    C^2 is not verified, so derived quantities (notably rho') are only
    approximate.
    """

    def __init__(self, samples, crack_end_fraction):
        z = np.asarray(samples, dtype=complex)
        if z.size < 8:
            raise ValueError("need at least 8 samples to describe a closed contour")
        if abs(z[0] - z[-1]) > 1e-12 * np.max(np.abs(z - z.mean())):
            z = np.concatenate([z, z[:1]])
        u = np.linspace(0.0, 2.0 * np.pi, z.size)
        self._sx = CubicSpline(u, z.real, bc_type="periodic")
        self._sy = CubicSpline(u, z.imag, bc_type="periodic")
        self._init_maps(0.0, 2.0 * np.pi * float(crack_end_fraction))

    def _r(self, theta):
        th = np.mod(theta, 2.0 * np.pi)
        return self._sx(th) + 1j * self._sy(th)

    def _r_prime(self, theta):
        th = np.mod(theta, 2.0 * np.pi)
        return self._sx(th, 1) + 1j * self._sy(th, 1)

    def _r_second(self, theta):
        th = np.mod(theta, 2.0 * np.pi)
        return self._sx(th, 2) + 1j * self._sy(th, 2)

    def _r_third(self, theta):
        th = np.mod(theta, 2.0 * np.pi)
        return self._sx(th, 3) + 1j * self._sy(th, 3)


def circular_contour(radius, crack_arc):
    """Unit-speed circle with the crack spanning polar angles ``crack_arc``.

    crack_arc = (angle_start, angle_end) in radians, counterclockwise.
    """
    start, end = crack_arc
    return CircleContour(radius, start, end)


def elliptical_contour(a, b, crack_arc):
    """Ellipse with the crack spanning the parameter interval ``crack_arc``."""
    start, end = crack_arc
    return EllipseContour(a, b, start, end)


def curvature(contour, s):
    """Signed curvature rho(s) = Im(t''(s) * conj(t'(s)))."""
    return contour.curvature(s)


def derivative(contour, s, order):
    """Derivative of the position t(s) of the given order (1, 2 or 3)."""
    return contour.derivative(s, order)
