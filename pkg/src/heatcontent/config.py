"""TOML run configuration: model, fields, oracle settings and output paths.

Schema (all keys optional unless noted)::

    [model]
    regime = "flat"          # required: flat | warped | circle
    m = 1                    # required except for circle
    delta1 = 0.0             # flat only
    delta2 = 1.0
    twist = []               # flat only, m-1 numbers
    warp = [0.0, 0.4, -0.4]  # warped only, ascending coefficients of f
    laa_sign = -1            # warped only
    psi = [[0, 0], [0, 0]]   # circle only, real matrix

    [[phi]]                  # one table per Fourier mode
    mode = []                # m-1 integers (circle: one integer)
    coeffs = [[1, 0]]        # coeffs[n] = vector coefficient of r^n
    coeffs_imag = [[0, 0]]   # optional imaginary part

    [[rho]]                  # same layout

    [oracle]
    N = 2048
    t_min = 1e-5
    t_max = 1e-2
    points = 40
    ratio = 1.01
    richardson = true
    bc = "spectral"          # spectral | mixed
    S = "equivalent"         # mixed only: "equivalent" or a real matrix
    tolerances = [1e-3, 1e-2, 2e-2]

    [output]
    json = "report.json"
    csv = "curve.csv"
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli

from .clifford import build_rep
from .fields import DualField, Field
from .model import CircleModel, ModelError, WarpProfile, assemble_flat_model, assemble_warped_model
from .radial import Radial

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending key."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class OracleSettings:
    N: int = 2048
    t_min: float = 1e-5
    t_max: float = 1e-2
    points: int = 40
    ratio: float = 1.01
    richardson: bool = True
    bc: str = "spectral"
    S: object = "equivalent"
    tolerances: tuple = (1e-3, 1e-2, 2e-2)


@dataclass
class RunConfig:
    model: object
    phi: Field
    rho: DualField
    oracle: OracleSettings = field(default_factory=OracleSettings)
    output: dict = field(default_factory=dict)
    source: str = ""
    raw: dict = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return isinstance(self.model, CircleModel)


def _num(tbl, key, path, default=None, kind=float):
    if key not in tbl:
        if default is None:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    val = tbl[key]
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{path}.{key}", f"expected an integer, got {val!r}")
        return val
    if kind is bool:
        if not isinstance(val, bool):
            raise ConfigError(f"{path}.{key}", f"expected true/false, got {val!r}")
        return val
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {val!r}")
    return float(val)


def _array(val, path, ndim):
    try:
        arr = np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(path, "expected a rectangular array of numbers") from None
    if arr.ndim != ndim:
        raise ConfigError(path, f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    return arr


def _model(tbl) -> object:
    if not isinstance(tbl, dict):
        raise ConfigError("model", "missing [model] table")
    regime = tbl.get("regime")
    if regime not in ("flat", "warped", "circle"):
        raise ConfigError("model.regime", f"expected flat, warped or circle, got {regime!r}")
    if regime == "circle":
        rep = build_rep(1)
        psi = _array(tbl.get("psi", np.zeros((rep.ell, rep.ell)).tolist()), "model.psi", 2)
        if psi.shape != (rep.ell, rep.ell):
            raise ConfigError("model.psi", f"expected a {rep.ell}x{rep.ell} matrix")
        return CircleModel(rep, psi)
    m = _num(tbl, "m", "model", kind=int)
    if m < 1:
        raise ConfigError("model.m", "must be >= 1")
    delta2 = _num(tbl, "delta2", "model", 0.0)
    rep = build_rep(m)
    if regime == "flat":
        if "warp" in tbl and np.any(_array(tbl["warp"], "model.warp", 1)):
            raise ConfigError("model.warp", "flat regime does not allow a warp profile")
        twist = _array(tbl.get("twist", [0.0] * (m - 1)), "model.twist", 1)
        if twist.size != m - 1:
            raise ConfigError("model.twist", f"expected {m - 1} numbers, got {twist.size}")
        delta1 = _num(tbl, "delta1", "model", 0.0)
        try:
            return assemble_flat_model(m, rep, delta1, delta2, twist)
        except ModelError as exc:
            raise ConfigError("model", str(exc)) from None
    if _num(tbl, "delta1", "model", 0.0) != 0.0:
        raise ConfigError("model.delta1", "warped regime requires delta1 = 0")
    if tbl.get("twist"):
        raise ConfigError("model.twist", "warped regime does not allow twist constants")
    warp = _array(tbl.get("warp", [0.0]), "model.warp", 1)
    sign = _num(tbl, "laa_sign", "model", -1, kind=int)
    if sign not in (-1, 1):
        raise ConfigError("model.laa_sign", "must be +1 or -1")
    try:
        profile = WarpProfile(warp)
    except ModelError as exc:
        raise ConfigError("model.warp", str(exc)) from None
    try:
        return assemble_warped_model(m, rep, profile, delta2, laa_sign=sign)
    except ModelError as exc:
        raise ConfigError("model", str(exc)) from None


def _field(entries, name, ell, n_tangential, cls):
    if not isinstance(entries, list) or not entries:
        raise ConfigError(name, "expected at least one [[" + name + "]] table")
    modes = {}
    for i, ent in enumerate(entries):
        path = f"{name}[{i}]"
        mode = ent.get("mode", [])
        if not isinstance(mode, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in mode):
            raise ConfigError(f"{path}.mode", "expected a list of integers")
        if len(mode) != n_tangential:
            raise ConfigError(f"{path}.mode", f"expected {n_tangential} entries, got {len(mode)}")
        if "coeffs" not in ent:
            raise ConfigError(f"{path}.coeffs", "missing required key")
        re = _array(ent["coeffs"], f"{path}.coeffs", 2)
        im = _array(ent.get("coeffs_imag", np.zeros_like(re).tolist()), f"{path}.coeffs_imag", 2)
        if re.shape[1] != ell:
            raise ConfigError(f"{path}.coeffs", f"vectors must have length {ell}, got {re.shape[1]}")
        if im.shape != re.shape:
            raise ConfigError(f"{path}.coeffs_imag", "shape must match coeffs")
        if re.shape[0] > 17:
            raise ConfigError(f"{path}.coeffs", "polynomial degree is limited to 16")
        rad = Radial.poly(re + 1j * im)
        key = tuple(mode)
        modes[key] = modes[key] + rad if key in modes else rad
    return cls(modes, ell, n_tangential)


def _oracle(tbl) -> OracleSettings:
    if tbl is None:
        return OracleSettings()
    if not isinstance(tbl, dict):
        raise ConfigError("oracle", "expected a table")
    o = OracleSettings()
    o.N = _num(tbl, "N", "oracle", o.N, kind=int)
    if o.N < 64:
        raise ConfigError("oracle.N", "need at least 64 interior nodes")
    o.t_min = _num(tbl, "t_min", "oracle", o.t_min)
    o.t_max = _num(tbl, "t_max", "oracle", o.t_max)
    if not 0 < o.t_min < o.t_max:
        raise ConfigError("oracle.t_min", "need 0 < t_min < t_max")
    o.points = _num(tbl, "points", "oracle", o.points, kind=int)
    if o.points < 12:
        raise ConfigError("oracle.points", "need at least 12 points")
    o.ratio = _num(tbl, "ratio", "oracle", o.ratio)
    if not o.ratio > 1:
        raise ConfigError("oracle.ratio", "must exceed 1")
    o.richardson = _num(tbl, "richardson", "oracle", o.richardson, kind=bool)
    o.bc = tbl.get("bc", o.bc)
    if o.bc not in ("spectral", "mixed"):
        raise ConfigError("oracle.bc", f"expected spectral or mixed, got {o.bc!r}")
    if "S" in tbl:
        o.S = tbl["S"] if tbl["S"] == "equivalent" else _array(tbl["S"], "oracle.S", 2)
    tol = _array(tbl.get("tolerances", list(o.tolerances)), "oracle.tolerances", 1)
    if tol.size != 3:
        raise ConfigError("oracle.tolerances", "expected three numbers")
    o.tolerances = tuple(float(x) for x in tol)
    return o


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(source, f"TOML syntax error: {exc}") from None
    model = _model(raw.get("model"))
    ntan = 1 if isinstance(model, CircleModel) else model.m - 1
    phi = _field(raw.get("phi"), "phi", model.ell, ntan, Field)
    rho = _field(raw.get("rho"), "rho", model.ell, ntan, DualField)
    out = raw.get("output", {})
    if not isinstance(out, dict):
        raise ConfigError("output", "expected a table")
    return RunConfig(model, phi, rho, _oracle(raw.get("oracle")), dict(out), source, raw)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from None
    return parse_config(text, str(path))
