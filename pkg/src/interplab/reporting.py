"""Run configuration, input hashing, and JSON/CSV emission."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

WORKERS_ENV = "INTERPLAB_WORKERS"

KNOWN_COMMANDS = ("nodes", "lebesgue", "potential", "trig-verify", "bernstein",
                  "residue-check", "harmonic", "optimize", "verify-all")

_CONFIG_KEYS = {"command", "tolerances", "grids", "seed", "output_path", "workers"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    tolerances: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str = ""
    workers: int = 0

    def __post_init__(self):
        if self.command not in KNOWN_COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for k, v in self.tolerances.items():
            if not isinstance(v, (int, float)) or v < 0:
                raise ConfigError(f"tolerance {k!r} must be a nonnegative number")
        for k, v in self.grids.items():
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"grid {k!r} must be a positive integer")

    @staticmethod
    def from_dict(data: dict) -> "RunConfig":
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "command" not in data:
            raise ConfigError("config must name a command")
        return RunConfig(
            command=data["command"],
            tolerances=dict(data.get("tolerances", {})),
            grids=dict(data.get("grids", {})),
            seed=int(data.get("seed", 0)),
            output_path=str(data.get("output_path", "")),
            workers=int(data.get("workers", 0)),
        )

    def to_dict(self) -> dict:
        return {"command": self.command, "tolerances": self.tolerances,
                "grids": self.grids, "seed": self.seed,
                "output_path": self.output_path, "workers": self.workers}


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(data)


def resolve_workers(requested: int = 0) -> int:
    """Requested value, else the environment default, else the cpu count."""
    if requested > 0:
        return requested
    env = os.environ.get(WORKERS_ENV, "")
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def sha256_of(path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: str | Path, header: list[str], columns: list) -> None:
    """CSV with '.' decimals, LF line endings, 17 significant digits."""
    cols = [np.asarray(c).ravel() for c in columns]
    if len(cols) != len(header) or any(c.size != cols[0].size for c in cols):
        raise ValueError("header/column mismatch")
    lines = [",".join(header)]
    for i in range(cols[0].size):
        lines.append(",".join(format_float(c[i]) for c in cols))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def report_envelope(config: RunConfig, results: dict,
                    input_hashes: dict | None = None) -> dict:
    return {"version": __version__, "config": config.to_dict(),
            "input_hashes": input_hashes or {}, "results": results}


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                          newline="\n")
