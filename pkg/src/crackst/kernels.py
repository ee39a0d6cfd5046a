"""Regular kernels and Cauchy principal-value quadrature on the closed contour.

The two regular kernels are

    k1(t, tau) = -1/(tau - t) + (conj(t')/t') / (conj(tau) - conj(t))
    k2(t, tau) =  1/(conj(tau) - conj(t))
                  - (tau - t)/(conj(tau) - conj(t))**2 * conj(t')/t'

with t' the unit tangent at the field point.  Both are smooth along a smooth
contour; their diagonal limits are i*rho/t' and -i*rho/conj(t'), and both
vanish identically on straight segments.

Principal values of Cauchy integrals over the closed contour are computed by
singularity subtraction,

    PV int phi/(tau - t) dtau
        = int (phi(tau) - phi(t))/(tau - t) dtau + i*pi*phi(t),

which keeps composite Gauss-Legendre panels spectrally accurate for smooth
per-arc densities.  Densities may jump at the crack tips; panels never
straddle a tip, and an optional geometric grading of the end panels resolves
the resulting near-tip boundary layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TipProximityError",
    "QuadratureRule",
    "Discretization",
    "kernel_k1",
    "kernel_k2",
    "k1",
    "k2",
    "cauchy_pv",
    "singular_apply",
    "contour_integral",
]

# Fraction of the total length below which kernel evaluation switches to the
# analytic diagonal limit (below cancellation noise of the raw quotients).
DIAG_EPS_FACTOR = 1e-5
# Field points closer than this to a crack tip are rejected for PV evaluation.
TIP_EPS_FACTOR = 1e-6


class TipProximityError(ValueError):
    """Raised when a principal value is requested too close to a crack tip."""


def circular_distance(s_a, s_b, period):
    d = np.abs(np.mod(s_a - s_b, period))
    return np.minimum(d, period - d)


def kernel_k1(t, dt_field, tau):
    """Raw first regular kernel; no diagonal guard (tau != t required)."""
    return -1.0 / (tau - t) + (np.conj(dt_field) / dt_field) / (np.conj(tau) - np.conj(t))


def kernel_k2(t, dt_field, tau):
    """Raw second regular kernel; no diagonal guard (tau != t required)."""
    dbar = np.conj(tau) - np.conj(t)
    return 1.0 / dbar - (tau - t) / dbar**2 * (np.conj(dt_field) / dt_field)


def k1(contour, s_field, s_src):
    """First regular kernel with the analytic diagonal limit i*rho/t'."""
    s_field = np.asarray(s_field, dtype=float)
    s_src = np.asarray(s_src, dtype=float)
    near = circular_distance(s_field, s_src, contour.l) < DIAG_EPS_FACTOR * contour.l
    if np.all(near):
        mid = _circular_midpoint(s_field, s_src, contour.l)
        return 1j * contour.curvature(mid) / contour.tangent(mid)
    out = np.asarray(
        kernel_k1(contour.point(s_field), contour.tangent(s_field), contour.point(s_src)),
        dtype=complex,
    )
    if np.any(near):
        mid = _circular_midpoint(s_field, s_src, contour.l)
        lim = 1j * contour.curvature(mid) / contour.tangent(mid)
        out = np.where(near, lim, out)
    return out


def k2(contour, s_field, s_src):
    """Second regular kernel with the analytic diagonal limit -i*rho/conj(t')."""
    s_field = np.asarray(s_field, dtype=float)
    s_src = np.asarray(s_src, dtype=float)
    near = circular_distance(s_field, s_src, contour.l) < DIAG_EPS_FACTOR * contour.l
    if np.all(near):
        mid = _circular_midpoint(s_field, s_src, contour.l)
        return -1j * contour.curvature(mid) / np.conj(contour.tangent(mid))
    out = np.asarray(
        kernel_k2(contour.point(s_field), contour.tangent(s_field), contour.point(s_src)),
        dtype=complex,
    )
    if np.any(near):
        mid = _circular_midpoint(s_field, s_src, contour.l)
        lim = -1j * contour.curvature(mid) / np.conj(contour.tangent(mid))
        out = np.where(near, lim, out)
    return out


def _circular_midpoint(s_a, s_b, period):
    half = 0.5 * np.mod(s_b - s_a, period)
    half = np.where(half > period / 2, half - period / 2, half)
    return np.mod(s_a + half, period)


def _graded_edges(lo, hi, base_panels, tip_panel):
    """Panel edges on [lo, hi]: uniform base panels, with the first and last
    panel geometrically refined toward the arc ends down to tip_panel."""
    edges = np.linspace(lo, hi, base_panels + 1)
    if tip_panel is None or tip_panel <= 0.0:
        return edges
    w = edges[1] - edges[0]
    if tip_panel >= w:
        return edges
    m = int(np.ceil(np.log2(w / tip_panel)))
    fracs = 2.0 ** np.arange(-m, 0)  # w/2^m ... w/2
    head = edges[0] + np.concatenate(([0.0], w * fracs))
    tail = edges[-1] - np.concatenate(([0.0], w * fracs))[::-1]
    return np.concatenate([head, edges[1:-1], tail[1:]])


@dataclass(frozen=True)
class Discretization:
    """Concrete nodes of a rule on a contour (arc 0 = crack, arc 1 = bonded)."""

    s: np.ndarray
    w: np.ndarray
    arc: np.ndarray
    tau: np.ndarray
    dt: np.ndarray
    panel_edges: tuple

    @property
    def n_nodes(self):
        return self.s.size


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule, per arc, with optional tip grading.

    nodes_per_panel must be at least 4; panels_per_arc counts the uniform base
    panels on each arc.  ``use_subtraction`` selects singularity subtraction
    plus the exact closed-contour PV constant i*pi (the only implemented
    scheme; the flag exists so a report can state it).  ``adaptive`` lets
    consumers double the base panels until assembled quantities stabilize.
    """

    nodes_per_panel: int = 16
    panels_per_arc: int = 8
    use_subtraction: bool = True
    adaptive: bool = True

    def __post_init__(self):
        if self.nodes_per_panel < 4:
            raise ValueError(
                f"need at least 4 nodes per panel, got {self.nodes_per_panel}"
            )
        if self.panels_per_arc < 1:
            raise ValueError(f"need at least 1 panel per arc, got {self.panels_per_arc}")

    def refined(self, factor=2):
        return QuadratureRule(
            nodes_per_panel=self.nodes_per_panel,
            panels_per_arc=self.panels_per_arc * factor,
            use_subtraction=self.use_subtraction,
            adaptive=self.adaptive,
        )

    def discretize(self, contour, tip_panel=None):
        """Nodes, weights and cached geometry for both arcs of the contour."""
        xg, wg = np.polynomial.legendre.leggauss(self.nodes_per_panel)
        ss, ww, aa, alledges = [], [], [], []
        for arc in (0, 1):
            lo, hi = contour.arc_interval(arc)
            edges = _graded_edges(lo, hi, self.panels_per_arc, tip_panel)
            alledges.append(edges)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[:-1] + edges[1:])
            nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
            weights = (half[:, None] * wg[None, :]).ravel()
            ss.append(nodes)
            ww.append(weights)
            aa.append(np.full(nodes.size, arc, dtype=int))
        s = np.concatenate(ss)
        return Discretization(
            s=s,
            w=np.concatenate(ww),
            arc=np.concatenate(aa),
            tau=contour.point(s),
            dt=contour.tangent(s),
            panel_edges=tuple(tuple(e) for e in alledges),
        )


def _check_off_tips(contour, s_field, tip_eps=None):
    eps = TIP_EPS_FACTOR * contour.l if tip_eps is None else tip_eps
    if eps <= 0.0:
        return
    for tip in (0.0, contour.l0):
        d = circular_distance(np.asarray(s_field, dtype=float), tip, contour.l)
        if np.any(d < eps):
            raise TipProximityError(
                f"field point within {eps:g} of the crack tip at s={tip:g}; "
                "density regularity is not guaranteed there"
            )


def _pv_values(contour, density, at, disc):
    """Vectorized subtraction PV of int density/(tau - t(at)) dtau."""
    at = np.asarray(at, dtype=float)
    phi_q = np.asarray(density(disc.s), dtype=complex)
    phi_a = np.asarray(density(at), dtype=complex)
    t_a = contour.point(at)
    eps = DIAG_EPS_FACTOR * contour.l
    # Divided differences are replaced by a derivative only for node/field
    # pairs on the same arc; across a tip the density may jump, and the raw
    # quotient is then the correct (near-singular) integrand value.
    arc_a = np.where(contour.wrap(at) <= contour.l0, 0, 1)
    near = (np.abs(disc.s[:, None] - at[None, :]) < eps) & (
        disc.arc[:, None] == arc_a[None, :]
    )
    denom = np.where(near, 1.0, disc.tau[:, None] - t_a[None, :])
    cmat = (disc.w * disc.dt)[:, None] / denom
    total = phi_q @ cmat - phi_a * (np.sum(cmat, axis=0) - 1j * np.pi)
    qi, ai = np.nonzero(near)
    if qi.size:
        # Central difference clamped to the field point's own arc, so the
        # stencil never straddles a tip.
        lo = np.where(arc_a[ai] == 0, 0.0, contour.l0)
        hi = np.where(arc_a[ai] == 0, contour.l0, contour.l)
        hp = np.minimum(eps, hi - at[ai])
        hm = np.minimum(eps, at[ai] - lo)
        dphi = (
            np.asarray(density(at[ai] + hp), dtype=complex)
            - np.asarray(density(at[ai] - hm), dtype=complex)
        ) / (hp + hm)
        crude = (phi_q[qi] - phi_a[ai]) * cmat[qi, ai]
        total[ai] += disc.w[qi] * dphi - crude
    return total


def cauchy_pv(contour, density, s_field, rule, tip_panel=None, tip_eps=None):
    """Principal value of int density(tau)/(tau - t(s_field)) dtau over the
    closed contour.

    ``density`` is a vectorized callable of arc length; it must be smooth on
    each arc (jumps at the tips are allowed).  Field points closer than
    ``tip_eps`` to a tip are rejected (pass 0 to disable the guard, e.g. when
    the density is known to be regular across that tip).
    """
    _check_off_tips(contour, s_field, tip_eps)
    disc = rule.discretize(contour, tip_panel)
    vals = _pv_values(contour, density, np.atleast_1d(s_field), disc)
    return vals[0] if np.isscalar(s_field) or np.ndim(s_field) == 0 else vals


def singular_apply(contour, density, rule, at=None, tip_panel=None, tip_eps=None):
    """Cauchy singular operator S density = (1/(i*pi)) PV int density/(tau-t) dtau.

    Values are returned at ``at`` (defaults to the rule's own nodes).  On a
    closed contour S is an involution on smooth densities, which is the
    library's primary quadrature self-check.
    """
    disc = rule.discretize(contour, tip_panel)
    if at is None:
        at = disc.s
    _check_off_tips(contour, at, tip_eps)
    return _pv_values(contour, density, np.asarray(at, dtype=float), disc) / (1j * np.pi)


def contour_integral(contour, density, rule, arc=None, tip_panel=None):
    """Plain int density(tau) dtau over the contour (or one arc of it)."""
    disc = rule.discretize(contour, tip_panel)
    mask = slice(None) if arc is None else disc.arc == arc
    phi = np.asarray(density(disc.s[mask]), dtype=complex)
    return np.sum(phi * disc.w[mask] * disc.dt[mask])
