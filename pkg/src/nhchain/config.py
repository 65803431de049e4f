"""Run configuration (JSON document), result records, and deterministic
text output helpers.

Complex parameters are written as two-element [re, im] lists (plain numbers
are accepted for real values). Unknown keys are rejected so that a config
snapshot always reproduces its run. Numeric CSV payloads are formatted with
up to 17 significant digits, '.' decimal separator, and '\n' line endings.
"""

import json
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

from .band import APBC, OBC, PBC, LambdaParams, ModelParams
from .errors import ConfigInvalid, IoFailure

_MODEL_KEYS = {
    "lambda": {"lam", "w", "v", "u"},
    "raw": {"u", "v1", "v2", "w1", "w2"},
    "field": {"m", "r_h"},
    "tfim": {"J", "h"},
    "yanglee": {"N", "h", "J", "kappa"},
    "toy": {"variant", "phi"},
}
_COMMON_KEYS = {"model", "L", "boundary", "delta_kappa", "policy", "fit_window",
                "fermi", "l", "sweep", "out"}
_SWEEP_KEYS = {"axis", "values", "zeta", "gap", "m", "r_h", "L", "delta_kappa"}
_POLICIES = ("paired", "principal", "magnitude")


def parse_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(x, (int, float)) for x in value)):
        return complex(value[0], value[1])
    raise ConfigInvalid(f"{key}: expected a number or [re, im] pair, got {value!r}")


def encode_complex(z: complex):
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


@dataclass
class SweepConfig:
    axis: str
    values: Tuple[float, ...]
    zeta: Optional[float] = None
    gap: complex = 0.0
    m: float = 0.0
    r_h: float = 0.0
    L: int = 80
    delta_kappa: float = 1e-8


@dataclass
class RunConfig:
    """Validated, serializable description of one computation."""

    model: str
    params: dict
    L: int = 80
    boundary: str = PBC
    delta_kappa: float = 0.0
    policy: str = "paired"
    fit_window: Optional[Tuple[int, int]] = None
    fermi: Optional[float] = None
    l: Optional[int] = None
    sweep: Optional[SweepConfig] = None
    out: Optional[str] = None

    def to_dict(self) -> dict:
        doc = {"model": self.model}
        for key, val in self.params.items():
            doc[key] = encode_complex(val) if isinstance(val, complex) else val
        doc["L"] = self.L
        doc["boundary"] = self.boundary
        doc["delta_kappa"] = self.delta_kappa
        doc["policy"] = self.policy
        if self.fit_window is not None:
            doc["fit_window"] = list(self.fit_window)
        if self.fermi is not None:
            doc["fermi"] = self.fermi
        if self.l is not None:
            doc["l"] = self.l
        if self.sweep is not None:
            sw = {"axis": self.sweep.axis, "values": list(self.sweep.values)}
            if self.sweep.zeta is not None:
                sw["zeta"] = self.sweep.zeta
            if self.sweep.gap != 0.0:
                sw["gap"] = encode_complex(self.sweep.gap)
            sw["m"] = self.sweep.m
            sw["r_h"] = self.sweep.r_h
            sw["L"] = self.sweep.L
            sw["delta_kappa"] = self.sweep.delta_kappa
            doc["sweep"] = sw
        if self.out is not None:
            doc["out"] = self.out
        return doc

    def model_params(self) -> ModelParams:
        p = self.params
        if self.model == "lambda":
            return LambdaParams(lam=float(p["lam"].real), w=p["w"], v=p["v"], u=p["u"]).expand()
        if self.model == "raw":
            return ModelParams(u=p["u"], v1=p["v1"], v2=p["v2"], w1=p["w1"], w2=p["w2"])
        if self.model == "field":
            from .scaling import field_model_params
            return field_model_params(float(p["m"].real), float(p["r_h"].real))
        raise ConfigInvalid(f"model {self.model!r} has no band-model parameters")


def load_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigInvalid("config must be a JSON object")
    model = doc.get("model")
    if model not in _MODEL_KEYS:
        raise ConfigInvalid(f"unknown or missing model {model!r}")
    allowed = _MODEL_KEYS[model] | _COMMON_KEYS
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigInvalid(f"unknown keys: {sorted(unknown)}")

    params = {}
    for key in _MODEL_KEYS[model]:
        if key in doc:
            if key in ("variant",):
                params[key] = doc[key]
            elif key in ("N",):
                params[key] = int(doc[key])
            else:
                params[key] = parse_complex(doc[key], key)
    if model == "lambda":
        for key in ("lam", "w", "v", "u"):
            if key not in params:
                raise ConfigInvalid(f"lambda model needs key {key!r}")
    if model == "raw":
        for key in ("u", "v1", "v2", "w1", "w2"):
            if key not in params:
                raise ConfigInvalid(f"raw model needs key {key!r}")
    if model == "field":
        for key in ("m", "r_h"):
            if key not in params:
                raise ConfigInvalid(f"field model needs key {key!r}")

    boundary = doc.get("boundary", PBC)
    if boundary not in (PBC, APBC, OBC):
        raise ConfigInvalid(f"unknown boundary {boundary!r}")
    policy = doc.get("policy", "paired")
    if policy not in _POLICIES:
        raise ConfigInvalid(f"unknown policy {policy!r}")

    window = doc.get("fit_window")
    if window is not None:
        if (not isinstance(window, (list, tuple)) or len(window) != 2
                or not all(isinstance(x, int) for x in window)):
            raise ConfigInvalid("fit_window must be [lo, hi] integers")
        window = (window[0], window[1])

    sweep = None
    if "sweep" in doc:
        sw = doc["sweep"]
        if not isinstance(sw, dict) or set(sw) - _SWEEP_KEYS:
            raise ConfigInvalid("sweep must be an object with keys "
                                f"{sorted(_SWEEP_KEYS)}")
        if "axis" not in sw or "values" not in sw:
            raise ConfigInvalid("sweep needs axis and values")
        sweep = SweepConfig(
            axis=sw["axis"],
            values=tuple(float(v) for v in sw["values"]),
            zeta=float(sw["zeta"]) if "zeta" in sw else None,
            gap=parse_complex(sw.get("gap", 0.0), "sweep.gap"),
            m=float(sw.get("m", 0.0)),
            r_h=float(sw.get("r_h", 0.0)),
            L=int(sw.get("L", 80)),
            delta_kappa=float(sw.get("delta_kappa", 1e-8)),
        )

    try:
        cfg = RunConfig(
            model=model,
            params=params,
            L=int(doc.get("L", 80)),
            boundary=boundary,
            delta_kappa=float(doc.get("delta_kappa", 0.0)),
            policy=policy,
            fit_window=window,
            fermi=float(doc["fermi"]) if "fermi" in doc else None,
            l=int(doc["l"]) if "l" in doc else None,
            sweep=sweep,
            out=doc.get("out"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"bad field value: {exc}") from exc
    return cfg


def load_config_file(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    return load_config(doc)


def fmt(x: float) -> str:
    """Shortest round-trip decimal, capped at 17 significant digits."""
    return repr(float(x))


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    payload = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


@dataclass
class ResultRecord:
    """Full config snapshot plus outputs; re-running the config reproduces
    the outputs within stated tolerances."""

    config: dict
    outputs: dict
    version: str
    wall_time_s: float


def write_record(path: str, record: ResultRecord) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(record), fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
