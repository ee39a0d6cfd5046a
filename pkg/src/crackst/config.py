"""Run-configuration files: flat INI-style sections with units in key names.

Stress-like inputs are plain numbers in the unit system of the scenario
definitions (shear moduli as GPa values, remote stresses as MPa values,
surface tension as the matching derived unit on a unit-scale contour); the
key names carry the units to keep silent mismatches out of user configs.
Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

import numpy as np

from .geometry import CircleContour, EllipseContour
from .model import CrackTractions, Material, ProblemSetup, RemoteLoad, SurfaceTension

__all__ = ["ConfigError", "Numerics", "RunConfig", "parse_config", "parse_config_text", "dump_config"]


class ConfigError(ValueError):
    """Malformed run configuration; the message names the offending key."""


_SCHEMA = {
    "contour": {"kind", "radius", "semi_axis_a", "semi_axis_b", "crack_start_rad", "crack_end_rad"},
    "matrix": {"mu_gpa", "nu", "plane"},
    "inclusion": {"mu_gpa", "nu", "plane"},
    "surface_tension": {"gamma_plus", "gamma_minus", "gamma_interface"},
    "load": {"sigma1_mpa", "sigma2_mpa", "alpha_rad"},
    "tractions": {"preset", "f1_re_mpa", "f1_im_mpa", "f2_re_mpa", "f2_im_mpa"},
    "numerics": {
        "order",
        "nodes_per_panel",
        "panels_per_arc",
        "adaptive_quadrature",
        "oversample",
        "tip_inset",
        "tie_constant_terms",
        "taper_exponent",
        "bond_weight",
        "constraint_weight",
        "force_weight",
        "rcond",
    },
    "output": {"directory"},
}

_REQUIRED = ("contour", "matrix", "inclusion", "surface_tension", "load")


@dataclass
class Numerics:
    """Discretization controls; defaults follow the solver module."""

    order: int = 24
    nodes_per_panel: int = 16
    panels_per_arc: int = 8
    adaptive_quadrature: bool = True
    oversample: float | None = None
    tip_inset: float | None = None
    tie_constant_terms: bool = False
    taper_exponent: float | None = None
    bond_weight: float | None = None
    constraint_weight: float | None = None
    force_weight: float | None = None
    rcond: float = 1e-13

    def assemble_kwargs(self):
        out = {"tie_constant_terms": self.tie_constant_terms}
        if self.oversample is not None:
            out["oversample"] = self.oversample
        if self.tip_inset is not None:
            out["delta"] = self.tip_inset
        if self.taper_exponent is not None:
            out["taper_exponent"] = self.taper_exponent
        if self.bond_weight is not None:
            out["bond_weight"] = self.bond_weight
        if self.constraint_weight is not None:
            out["constraint_weight"] = self.constraint_weight
        if self.force_weight is not None:
            out["force_weight"] = self.force_weight
        return out


@dataclass
class RunConfig:
    setup: ProblemSetup
    numerics: Numerics
    output_dir: str = "out"
    raw: dict = field(default_factory=dict)


def _read(parser, section, key, cast, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ConfigError(f"missing key {key!r} in section [{section}]")
        return default
    text = parser.get(section, key)
    try:
        if cast is bool:
            return parser.getboolean(section, key)
        return cast(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for [{section}] {key}: {text!r}") from exc


def parse_config_text(text):
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
    for section in _REQUIRED:
        if not parser.has_section(section):
            raise ConfigError(f"missing required section [{section}]")

    kind = _read(parser, "contour", "kind", str, default="circle").lower()
    start = _read(parser, "contour", "crack_start_rad", float, required=True)
    end = _read(parser, "contour", "crack_end_rad", float, required=True)
    try:
        if kind == "circle":
            contour = CircleContour(_read(parser, "contour", "radius", float, default=1.0), start, end)
        elif kind == "ellipse":
            contour = EllipseContour(
                _read(parser, "contour", "semi_axis_a", float, required=True),
                _read(parser, "contour", "semi_axis_b", float, required=True),
                start,
                end,
            )
        else:
            raise ConfigError(f"unknown contour kind {kind!r}")

        def material(section):
            mode = _read(parser, section, "plane", str, default="stress").lower()
            mode_name = {"stress": "plane-stress", "strain": "plane-strain"}.get(mode)
            if mode_name is None:
                raise ConfigError(f"bad value for [{section}] plane: {mode!r}")
            return Material(
                _read(parser, section, "mu_gpa", float, required=True),
                _read(parser, section, "nu", float, required=True),
                mode_name,
            )

        surface = SurfaceTension(
            _read(parser, "surface_tension", "gamma_plus", float, required=True),
            _read(parser, "surface_tension", "gamma_minus", float, required=True),
            _read(parser, "surface_tension", "gamma_interface", float, default=0.0),
        )
        load = RemoteLoad(
            _read(parser, "load", "sigma1_mpa", float, required=True),
            _read(parser, "load", "sigma2_mpa", float, required=True),
            _read(parser, "load", "alpha_rad", float, default=0.0),
        )
        preset = _read(parser, "tractions", "preset", str, default="zero") if parser.has_section("tractions") else "zero"
        if preset == "zero":
            tractions = CrackTractions.zero()
        elif preset == "constant":
            tractions = CrackTractions.constant(
                f1=complex(
                    _read(parser, "tractions", "f1_re_mpa", float, default=0.0),
                    _read(parser, "tractions", "f1_im_mpa", float, default=0.0),
                ),
                f2=complex(
                    _read(parser, "tractions", "f2_re_mpa", float, default=0.0),
                    _read(parser, "tractions", "f2_im_mpa", float, default=0.0),
                ),
            )
        else:
            raise ConfigError(f"unknown tractions preset {preset!r}")
        setup = ProblemSetup(
            contour=contour,
            matrix=material("matrix"),
            inclusion=material("inclusion"),
            surface=surface,
            load=load,
            tractions=tractions,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    numerics = Numerics(
        order=_read(parser, "numerics", "order", int, default=24),
        nodes_per_panel=_read(parser, "numerics", "nodes_per_panel", int, default=16),
        panels_per_arc=_read(parser, "numerics", "panels_per_arc", int, default=8),
        adaptive_quadrature=_read(parser, "numerics", "adaptive_quadrature", bool, default=True),
        oversample=_read(parser, "numerics", "oversample", float),
        tip_inset=_read(parser, "numerics", "tip_inset", float),
        tie_constant_terms=_read(parser, "numerics", "tie_constant_terms", bool, default=False),
        taper_exponent=_read(parser, "numerics", "taper_exponent", float),
        bond_weight=_read(parser, "numerics", "bond_weight", float),
        constraint_weight=_read(parser, "numerics", "constraint_weight", float),
        force_weight=_read(parser, "numerics", "force_weight", float),
        rcond=_read(parser, "numerics", "rcond", float, default=1e-13),
    ) if parser.has_section("numerics") else Numerics()

    output_dir = (
        _read(parser, "output", "directory", str, default="out")
        if parser.has_section("output")
        else "out"
    )
    raw = {s: dict(parser.items(s)) for s in parser.sections()}
    return RunConfig(setup=setup, numerics=numerics, output_dir=output_dir, raw=raw)


def parse_config(path):
    with open(path) as fh:
        return parse_config_text(fh.read())


def dump_config(run_config):
    """Serialize a RunConfig back to config text (round-trips parse_config)."""
    setup = run_config.setup
    contour = setup.contour
    parser = configparser.ConfigParser()
    if isinstance(contour, CircleContour):
        parser["contour"] = {
            "kind": "circle",
            "radius": repr(contour.radius),
            "crack_start_rad": repr(contour.theta0),
            "crack_end_rad": repr(contour.theta0 + contour.l0 / contour.radius),
        }
    elif isinstance(contour, EllipseContour):
        theta_end = float(contour._s_to_theta(contour.l0))
        parser["contour"] = {
            "kind": "ellipse",
            "semi_axis_a": repr(contour.a),
            "semi_axis_b": repr(contour.b),
            "crack_start_rad": repr(contour._theta_start),
            "crack_end_rad": repr(theta_end),
        }
    else:
        raise ConfigError("only circle and ellipse contours can be serialized")
    for name, mat in (("matrix", setup.matrix), ("inclusion", setup.inclusion)):
        parser[name] = {
            "mu_gpa": repr(mat.shear_modulus),
            "nu": repr(mat.poisson),
            "plane": "strain" if mat.plane_mode == "plane-strain" else "stress",
        }
    parser["surface_tension"] = {
        "gamma_plus": repr(setup.surface.gamma_plus),
        "gamma_minus": repr(setup.surface.gamma_minus),
        "gamma_interface": repr(setup.surface.gamma_interface),
    }
    parser["load"] = {
        "sigma1_mpa": repr(setup.load.sigma1),
        "sigma2_mpa": repr(setup.load.sigma2),
        "alpha_rad": repr(setup.load.alpha),
    }
    num = run_config.numerics
    numerics = {
        "order": str(num.order),
        "nodes_per_panel": str(num.nodes_per_panel),
        "panels_per_arc": str(num.panels_per_arc),
        "adaptive_quadrature": str(num.adaptive_quadrature).lower(),
        "tie_constant_terms": str(num.tie_constant_terms).lower(),
        "rcond": repr(num.rcond),
    }
    for key in ("oversample", "tip_inset", "taper_exponent", "bond_weight", "constraint_weight", "force_weight"):
        val = getattr(num, key)
        if val is not None:
            numerics[key] = repr(val)
    parser["numerics"] = numerics
    parser["output"] = {"directory": run_config.output_dir}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
