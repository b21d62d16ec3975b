"""Run configuration and reproducibility manifests for the CLI.

A run is described by a RunConfig assembled from three layers: built-in
defaults, then a flat key=value config file, then command-line flags.
Every command records a RunManifest (JSON, sorted keys) next to its
outputs with the config snapshot, per-stage wall times, and SHA-256
digests of all input and output files, so identical configs and inputs
can be checked for identical artifacts.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .engine import BERNOULLI_ORDER_MAX, CUTOFF_MAX, EvalParams
from .errors import ConfigError
from .zeros import MAX_ZERO_COUNT

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class RunConfig:
    zero_count: int = 1000
    sieve_limit: int = 20_000
    em_cutoff_factor: float = 3.0
    bernoulli_order: int = 12
    target_abs_error: float = 1e-8
    thread_count: int = 0          # 0 = auto
    checkpoint_list: tuple[float, ...] = ()   # empty = auto ladder
    output_dir: str = "out"

    def __post_init__(self):
        if not (1 <= self.zero_count <= MAX_ZERO_COUNT):
            raise ConfigError(
                f"zero_count must be in [1, {MAX_ZERO_COUNT}], "
                f"got {self.zero_count}")
        if self.sieve_limit < 1:
            raise ConfigError(
                f"sieve_limit must be >= 1, got {self.sieve_limit}")
        if not (1.0 <= self.em_cutoff_factor <= CUTOFF_MAX):
            raise ConfigError(
                f"em_cutoff_factor must be in [1, {CUTOFF_MAX}], "
                f"got {self.em_cutoff_factor}")
        if not (1 <= self.bernoulli_order <= BERNOULLI_ORDER_MAX):
            raise ConfigError(
                f"bernoulli_order must be in [1, {BERNOULLI_ORDER_MAX}], "
                f"got {self.bernoulli_order}")
        if not (self.target_abs_error > 0.0):
            raise ConfigError("target_abs_error must be positive")
        if self.thread_count < 0:
            raise ConfigError(
                f"thread_count must be >= 0, got {self.thread_count}")
        for T in self.checkpoint_list:
            if not (math.isfinite(T) and T > 0.0):
                raise ConfigError(f"checkpoint {T!r} must be finite and > 0")

    def eval_params(self) -> EvalParams:
        return EvalParams(em_cutoff_factor=self.em_cutoff_factor,
                          bernoulli_order=self.bernoulli_order,
                          target_abs_error=self.target_abs_error)


_FIELD_TYPES = {
    "zero_count": int,
    "sieve_limit": int,
    "em_cutoff_factor": float,
    "bernoulli_order": int,
    "target_abs_error": float,
    "thread_count": int,
    "checkpoint_list": "floats",
    "output_dir": str,
}


def _coerce(key: str, raw, where: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "floats":
            if isinstance(raw, (tuple, list)):
                return tuple(float(x) for x in raw)
            text = str(raw).strip()
            if not text:
                return ()
            return tuple(float(x) for x in text.split(","))
        return kind(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key} in {where}: {raw!r}") from exc


def parse_config_file(path) -> dict:
    """Flat key=value lines; blank lines and # comments ignored."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(
                f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, raw.strip(), f"{path}:{lineno}")
    return values


def build_config(file_values: dict | None = None,
                 flag_values: dict | None = None) -> RunConfig:
    """Defaults, overridden by the config file, overridden by flags.

    Flag values equal to None mean "not given on the command line".
    """
    merged = {}
    merged.update(file_values or {})
    for key, val in (flag_values or {}).items():
        if val is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        merged[key] = _coerce(key, val, "command line")
    return RunConfig(**merged)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


class StageTimer:
    """Collects named wall-time spans for the manifest."""

    def __init__(self):
        self.seconds: dict[str, float] = {}

    def stage(self, name: str):
        timer = self

        class _Span:
            def __enter__(self):
                self._t0 = time.perf_counter()
                return self

            def __exit__(self, *exc):
                timer.seconds[name] = round(
                    time.perf_counter() - self._t0, 6)
                return False

        return _Span()


@dataclass
class RunManifest:
    command: str
    config: dict
    tool_version: str = TOOL_VERSION
    stage_seconds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def add_input(self, path):
        self.inputs[str(path)] = file_digest(path)

    def add_output(self, path):
        self.outputs[str(path)] = file_digest(path)

    def write(self, path) -> Path:
        path = Path(path)
        payload = dataclasses.asdict(self)
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                        encoding="ascii")
        return path


def new_manifest(command: str, cfg: RunConfig) -> RunManifest:
    snapshot = dataclasses.asdict(cfg)
    snapshot["checkpoint_list"] = list(cfg.checkpoint_list)
    return RunManifest(command=command, config=snapshot)


__all__ = [
    "RunConfig", "RunManifest", "StageTimer", "TOOL_VERSION",
    "parse_config_file", "build_config", "file_digest", "new_manifest",
]
