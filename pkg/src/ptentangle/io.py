"""Config ingestion and result serialization.

Config files are JSON documents mirroring `ScenarioConfig`::

    {
      "initial": "bell" | {"type": "damped", "t_c": 1.0, "gamma": 1.0}
                 | {"type": "explicit", "matrix": [[[re, im], ...], ...]},
      "evolution": {"type": "pt", "s": 1.0, "alpha": 0.785398}
                   | {"type": "nonpt", "s": 1.0, "alpha": 0.785398, "epsilon": 0.01}
                   | {"type": "rabi", "g": 1.0} | {"type": "damping", "gamma": 1.0},
      "t_max": 6.283185307179586, "n_samples": 501, "dt": 0.001,
      "metrics": ["concurrence", ...], "method": "integrate", "label": "pt"
    }

State files hold ``{"matrix": [[[re, im], ...], ...], "label": "..."}``.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import dynamics
from .dynamics import AmplitudeDamping, NonPT, PT, PTParams, Rabi
from .errors import ConfigError, ValidationError
from .scenarios import METRICS, BellPhiPlus, Damped, Explicit, ScenarioConfig

CSV_HEADER = "t_prime," + ",".join(METRICS)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- matrices ---------------------------------------------------------------

def matrix_to_pairs(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_pairs(data) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix must be nested [re, im] pairs: {exc}") from exc
    if arr.shape != (4, 4, 2):
        raise ValidationError(f"matrix must have shape 4x4 of [re, im] pairs, got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def read_state(path) -> tuple[np.ndarray, str]:
    """Load and validate a state file; returns (matrix, label)."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ValidationError(f"{path}: state file needs a 'matrix' field")
    rho = matrix_from_pairs(doc["matrix"])
    dynamics.check_density(rho, unit_trace=True)
    return rho, str(doc.get("label", ""))


def write_state(path, rho, label: str = "") -> None:
    doc = {"label": label, "matrix": matrix_to_pairs(rho)}
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


# -- config -----------------------------------------------------------------

OVERRIDES = ("alpha", "s", "epsilon", "gamma", "t_max", "n_samples", "dt")


def _num(d: dict, key: str, default=None):
    if key not in d:
        if default is None:
            raise ConfigError(f"missing field {key!r}")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"field {key!r} must be a number, got {v!r}")
    return float(v)


def _parse_initial(spec, ov: dict):
    if spec is None or spec == "bell" or spec == {"type": "bell"}:
        return BellPhiPlus()
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"bad initial state {spec!r}")
    kind = spec["type"]
    if kind == "damped":
        gamma = ov["gamma"] if ov.get("gamma") is not None else _num(spec, "gamma", 1.0)
        return Damped(_num(spec, "t_c"), gamma)
    if kind == "explicit":
        return Explicit.from_array(matrix_from_pairs(spec.get("matrix")))
    raise ConfigError(f"unknown initial state type {kind!r}")


def _parse_evolution(spec, ov: dict):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"bad evolution {spec!r}")
    kind = spec["type"]

    def pick(key, default=None):
        return ov[key] if ov.get(key) is not None else _num(spec, key, default)

    if kind == "rabi":
        return Rabi(_num(spec, "g", 1.0))
    if kind in ("pt", "nonpt"):
        params = PTParams(s=pick("s", 1.0), alpha=pick("alpha", math.pi / 4))
        if kind == "pt":
            return PT(params)
        return NonPT(params, pick("epsilon", 0.01))
    if kind == "damping":
        return AmplitudeDamping(pick("gamma"))
    raise ConfigError(f"unknown evolution type {kind!r}")


def _check_overrides(doc: dict, ov: dict) -> None:
    evo = doc.get("evolution", {}).get("type") if isinstance(doc.get("evolution"), dict) else None
    init = doc.get("initial")
    init_kind = init.get("type") if isinstance(init, dict) else "bell"
    allowed = {"t_max", "n_samples", "dt"}
    if evo in ("pt", "nonpt"):
        allowed |= {"alpha", "s"}
    if evo == "nonpt":
        allowed |= {"epsilon"}
    if evo == "damping" or init_kind == "damped":
        allowed |= {"gamma"}
    bad = sorted(k for k, v in ov.items() if v is not None and k not in allowed)
    if bad:
        raise ConfigError(f"override(s) {bad} do not apply to this configuration")


def config_from_dict(doc: dict, overrides: dict | None = None) -> ScenarioConfig:
    """Build a ScenarioConfig; non-None `overrides` win over file values."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    ov = {k: v for k, v in (overrides or {}).items() if v is not None}
    unknown = set(ov) - set(OVERRIDES)
    if unknown:
        raise ConfigError(f"unknown overrides {sorted(unknown)}")
    _check_overrides(doc, ov)
    fields = set(doc) - {"initial", "evolution", "t_max", "n_samples", "dt", "metrics", "method", "label"}
    if fields:
        raise ConfigError(f"unknown config fields {sorted(fields)}")
    n_samples = ov.get("n_samples", doc.get("n_samples", 501))
    if isinstance(n_samples, bool) or not isinstance(n_samples, int):
        raise ConfigError(f"n_samples must be an integer, got {n_samples!r}")
    metrics = doc.get("metrics", list(METRICS))
    if not isinstance(metrics, list) or not all(isinstance(m, str) for m in metrics):
        raise ConfigError("metrics must be a list of names")
    return ScenarioConfig(
        initial=_parse_initial(doc.get("initial", "bell"), ov),
        evolution=_parse_evolution(doc.get("evolution"), ov),
        t_max=ov.get("t_max", _num(doc, "t_max", 2 * math.pi)),
        n_samples=n_samples,
        metrics=tuple(metrics),
        dt=ov.get("dt", _num(doc, "dt", dynamics.DEFAULT_DT)),
        method=doc.get("method", "integrate"),
        label=str(doc.get("label", "")),
    )


def load_config(path, overrides: dict | None = None) -> ScenarioConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    return config_from_dict(doc, overrides)


def describe_config(cfg: ScenarioConfig) -> dict:
    """JSON-friendly summary of the parameters behind a run."""
    evo = cfg.evolution
    d = {"label": cfg.label, "evolution": type(evo).__name__, "t_max": cfg.t_max,
         "n_samples": cfg.n_samples, "dt": cfg.dt, "method": cfg.method}
    if isinstance(evo, (PT, NonPT)):
        d.update(alpha=evo.params.alpha, s=evo.params.s, delta_e=evo.params.delta_e)
    if isinstance(evo, NonPT):
        d["epsilon"] = evo.epsilon
    if isinstance(evo, Rabi):
        d["g"] = evo.g
    if isinstance(evo, AmplitudeDamping):
        d["gamma_evolution"] = evo.gamma
    init = cfg.initial
    if isinstance(init, Damped):
        d["initial"] = "damped"
        d.update(t_c=init.t_c, gamma=init.gamma)
    elif isinstance(init, BellPhiPlus):
        d["initial"] = "bell_phi_plus"
    else:
        d["initial"] = "explicit"
    return d


# -- CSV ----------------------------------------------------------------------

def _fmt(v) -> str:
    return "" if v is None else f"{v:.12g}"


def series_csv(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        row = asdict(r)
        lines.append(",".join(_fmt(row[k]) for k in ("t_prime",) + METRICS))
    return "\n".join(lines) + "\n"


def write_series(path, records) -> None:
    atomic_write_text(path, series_csv(records))


def read_series(path) -> list[dict]:
    """Parse a series CSV back into dicts (empty fields become None)."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValidationError(f"{path}: unexpected CSV header")
    keys = CSV_HEADER.split(",")
    return [
        {k: (float(x) if x else None) for k, x in zip(keys, line.split(","))}
        for line in lines[1:]
    ]
