"""Run configuration: strict JSON schema, full-violation reporting, round-trip
serialization.

The configuration is a JSON tree with sections wave / particle / frame / sim /
scan and a mandatory top-level schema_version (currently 1).  Unknown keys
anywhere are rejected, and validation reports every violation at once, each
tagged with its dotted key path.

The wave section accepts either "epsilon" or "epsilon_sq" (exactly one);
epsilon_sq is canonical so that the circular value 0.5 is exact.

Minimal example::

    {
      "schema_version": 1,
      "wave": {"eta": 2.0, "epsilon_sq": 0.5},
      "particle": {"g": 2.0},
      "sim": {"t_end": 5.0, "steps_per_period": 2000}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ConfigError
from .params import FrameConfig, ParticleConfig, WaveConfig

__all__ = [
    "SimSection",
    "ScanSection",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "config_to_dict",
    "apply_overrides",
]

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "wave", "particle", "frame", "sim", "scan"}
_WAVE_KEYS = {"eta", "epsilon", "epsilon_sq", "omega_l"}
_PARTICLE_KEYS = {"g", "charge_sign"}
_FRAME_KEYS = {"mode", "gamma_z"}
_SIM_KEYS = {"t_end", "steps_per_period", "outputs"}
_SCAN_KEYS = {"eta_min", "eta_max", "points"}
_OUTPUTS = {"series", "field"}


@dataclass(frozen=True)
class SimSection:
    """Time-domain simulation settings; t_end counts laser periods."""

    t_end: float = 5.0
    steps_per_period: int = 2000
    outputs: tuple = ("series",)


@dataclass(frozen=True)
class ScanSection:
    """Grid definition for the eta scan (linear spacing, endpoints included)."""

    eta_min: float
    eta_max: float
    points: int


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration."""

    schema_version: int
    wave: WaveConfig
    particle: ParticleConfig
    frame: FrameConfig
    sim: SimSection
    scan: ScanSection | None = None


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _check_number(violations, path, v, lo=None, hi=None, strict_lo=False):
    if not _is_number(v):
        violations.append(f"{path}: expected a number, got {v!r}")
        return None
    v = float(v)
    if v != v or v in (float("inf"), float("-inf")):
        violations.append(f"{path}: must be finite, got {v!r}")
        return None
    if lo is not None and (v <= lo if strict_lo else v < lo):
        op = ">" if strict_lo else ">="
        violations.append(f"{path}: must be {op} {lo}, got {v}")
        return None
    if hi is not None and v > hi:
        violations.append(f"{path}: must be <= {hi}, got {v}")
        return None
    return v


def _check_int(violations, path, v, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        violations.append(f"{path}: expected an integer, got {v!r}")
        return None
    if lo is not None and v < lo:
        violations.append(f"{path}: must be >= {lo}, got {v}")
        return None
    return v


def _check_section(violations, raw, name, allowed):
    section = raw.get(name)
    if section is None:
        return {}
    if not isinstance(section, dict):
        violations.append(f"{name}: expected an object, got {section!r}")
        return {}
    for key in sorted(set(section) - allowed):
        violations.append(f"{name}.{key}: unknown key")
    return section


def _build_wave(violations, raw) -> WaveConfig | None:
    sec = _check_section(violations, raw, "wave", _WAVE_KEYS)
    if "wave" not in raw:
        violations.append("wave: missing required section")
        return None
    if "eta" not in sec:
        violations.append("wave.eta: missing required key")
    eta = _check_number(violations, "wave.eta", sec.get("eta", 0.0), lo=0.0)
    has_eps = "epsilon" in sec
    has_eps_sq = "epsilon_sq" in sec
    if has_eps and has_eps_sq:
        violations.append("wave: give either epsilon or epsilon_sq, not both")
        return None
    if not (has_eps or has_eps_sq):
        violations.append("wave: one of epsilon or epsilon_sq is required")
        return None
    if has_eps:
        eps = _check_number(violations, "wave.epsilon", sec["epsilon"], lo=0.0, hi=1.0)
        eps_sq = eps * eps if eps is not None else None
    else:
        eps_sq = _check_number(violations, "wave.epsilon_sq", sec["epsilon_sq"],
                               lo=0.0, hi=1.0)
    omega_l = _check_number(violations, "wave.omega_l", sec.get("omega_l", 1.0),
                            lo=0.0, strict_lo=True)
    if None in (eta, eps_sq, omega_l) or "eta" not in sec:
        return None
    return WaveConfig(eta=eta, epsilon_sq=eps_sq, omega_l=omega_l)


def _build_particle(violations, raw) -> ParticleConfig | None:
    sec = _check_section(violations, raw, "particle", _PARTICLE_KEYS)
    if "particle" not in raw:
        violations.append("particle: missing required section")
        return None
    if "g" not in sec:
        violations.append("particle.g: missing required key")
        return None
    g = _check_number(violations, "particle.g", sec["g"])
    if g == 0.0:
        violations.append("particle.g: must be nonzero")
        g = None
    charge = sec.get("charge_sign", 1)
    if charge not in (1, -1, 1.0, -1.0):
        violations.append(f"particle.charge_sign: must be +1 or -1, got {charge!r}")
        charge = None
    if g is None or charge is None:
        return None
    return ParticleConfig(g=g, charge_sign=float(charge))


def _build_frame(violations, raw) -> FrameConfig | None:
    sec = _check_section(violations, raw, "frame", _FRAME_KEYS)
    mode = sec.get("mode", "average_rest_frame")
    if mode not in ("average_rest_frame", "explicit"):
        violations.append(
            f"frame.mode: must be 'average_rest_frame' or 'explicit', got {mode!r}")
        return None
    if mode == "explicit":
        if "gamma_z" not in sec:
            violations.append("frame.gamma_z: required in explicit mode")
            return None
        gamma = _check_number(violations, "frame.gamma_z", sec["gamma_z"],
                              lo=0.0, strict_lo=True)
        if gamma is None:
            return None
        return FrameConfig(mode="explicit", gamma_z=gamma)
    if "gamma_z" in sec:
        violations.append("frame.gamma_z: only allowed in explicit mode")
        return None
    return FrameConfig()


def _build_sim(violations, raw) -> SimSection | None:
    sec = _check_section(violations, raw, "sim", _SIM_KEYS)
    t_end = _check_number(violations, "sim.t_end", sec.get("t_end", 5.0), lo=0.0)
    steps = _check_int(violations, "sim.steps_per_period",
                       sec.get("steps_per_period", 2000), lo=100)
    outputs = sec.get("outputs", ["series"])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        violations.append(f"sim.outputs: expected a list of strings, got {outputs!r}")
        outputs = None
    elif not set(outputs) <= _OUTPUTS:
        bad = sorted(set(outputs) - _OUTPUTS)
        violations.append(f"sim.outputs: unknown output(s) {bad}; allowed: "
                          f"{sorted(_OUTPUTS)}")
        outputs = None
    if None in (t_end, steps) or outputs is None:
        return None
    return SimSection(t_end=t_end, steps_per_period=steps, outputs=tuple(outputs))


def _build_scan(violations, raw) -> ScanSection | None:
    if "scan" not in raw:
        return None
    sec = _check_section(violations, raw, "scan", _SCAN_KEYS)
    missing = [k for k in ("eta_min", "eta_max", "points") if k not in sec]
    for k in missing:
        violations.append(f"scan.{k}: missing required key")
    if missing:
        return None
    eta_min = _check_number(violations, "scan.eta_min", sec["eta_min"],
                            lo=0.0, strict_lo=True)
    eta_max = _check_number(violations, "scan.eta_max", sec["eta_max"],
                            lo=0.0, strict_lo=True)
    points = _check_int(violations, "scan.points", sec["points"], lo=2)
    if None in (eta_min, eta_max, points):
        return None
    if eta_max <= eta_min:
        violations.append(
            f"scan.eta_max: must exceed eta_min ({eta_min}), got {eta_max}")
        return None
    return ScanSection(eta_min=eta_min, eta_max=eta_max, points=points)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration.

    Raises:
        ConfigError: carrying the complete list of violations (or the JSON
            syntax error with its position).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            [f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc
    return validate_config(raw)


def validate_config(raw) -> RunConfig:
    """Validate an already-decoded configuration tree."""
    violations: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError([f"top level: expected an object, got {raw!r}"])
    for key in sorted(set(raw) - _TOP_KEYS):
        violations.append(f"{key}: unknown key")
    version = raw.get("schema_version")
    if version is None:
        violations.append("schema_version: missing required key")
    elif version != SCHEMA_VERSION:
        violations.append(
            f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    wave = _build_wave(violations, raw)
    particle = _build_particle(violations, raw)
    frame = _build_frame(violations, raw)
    sim = _build_sim(violations, raw)
    scan = _build_scan(violations, raw)
    if violations:
        raise ConfigError(violations)
    return RunConfig(schema_version=SCHEMA_VERSION, wave=wave, particle=particle,
                     frame=frame, sim=sim, scan=scan)


def config_to_dict(cfg: RunConfig) -> dict:
    """Canonical plain-dict form (epsilon_sq spelling, explicit defaults)."""
    out = {
        "schema_version": cfg.schema_version,
        "wave": {
            "eta": cfg.wave.eta,
            "epsilon_sq": cfg.wave.epsilon_sq,
            "omega_l": cfg.wave.omega_l,
        },
        "particle": {
            "g": cfg.particle.g,
            "charge_sign": cfg.particle.charge_sign,
        },
        "frame": {"mode": cfg.frame.mode},
        "sim": {
            "t_end": cfg.sim.t_end,
            "steps_per_period": cfg.sim.steps_per_period,
            "outputs": list(cfg.sim.outputs),
        },
    }
    if cfg.frame.mode == "explicit":
        out["frame"]["gamma_z"] = cfg.frame.gamma_z
    if cfg.scan is not None:
        out["scan"] = {
            "eta_min": cfg.scan.eta_min,
            "eta_max": cfg.scan.eta_max,
            "points": cfg.scan.points,
        }
    return out


def serialize_config(cfg: RunConfig) -> str:
    """Deterministic JSON serialization; parse_config round-trips it."""
    return json.dumps(config_to_dict(cfg), sort_keys=True, separators=(", ", ": "))


def apply_overrides(raw: dict, assignments) -> dict:
    """Apply --set key.path=value overrides to a decoded configuration tree.

    Values are parsed as JSON scalars, falling back to bare strings.  Creates
    intermediate objects as needed; validation happens afterwards.
    """
    out = json.loads(json.dumps(raw))  # deep copy
    for item in assignments:
        if "=" not in item:
            raise ConfigError([f"override {item!r}: expected key.path=value"])
        path, _, text = item.partition("=")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = out
        parts = [p for p in path.strip().split(".") if p]
        if not parts:
            raise ConfigError([f"override {item!r}: empty key path"])
        for part in parts[:-1]:
            nxt = node.get(part)
            if nxt is None:
                nxt = {}
                node[part] = nxt
            elif not isinstance(nxt, dict):
                raise ConfigError(
                    [f"override {item!r}: {part} is not an object"])
            node = nxt
        node[parts[-1]] = value
    return out
