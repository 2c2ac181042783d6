"""Run configuration: flat key=value files with # comments.

Exact numeric fields (tau, mu) stay strings so a serialize/parse cycle is
the identity; they parse to Fractions on demand ('0.05' and '1/20' both
denote the same exact value).
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class RunConfig:
    alpha: str = "sqrt2"
    tau: str = "1/20"
    mu: Optional[str] = None  # None: choose per task (Goldbach rule where apt)
    s_target: int = 10**6
    seed: int = 0
    precision_max_bits: int = 4096
    threads: int = 1
    out_dir: str = "out"
    format: str = "json"
    figures: bool = True

    def tau_fraction(self) -> Fraction:
        return Fraction(self.tau)

    def mu_fraction(self) -> Optional[Fraction]:
        return Fraction(self.mu) if self.mu is not None else None

    def validate(self) -> None:
        if not (0 <= self.tau_fraction() < 1):
            raise ValueError(f"tau = {self.tau} outside [0, 1)")
        mu = self.mu_fraction()
        if mu is not None and not (0 < mu < Fraction(1, 8)):
            raise ValueError(f"mu = {self.mu} outside (0, 1/8)")
        if self.s_target < 2:
            raise ValueError("s_target must be >= 2")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if self.precision_max_bits < 128:
            raise ValueError("precision_max_bits must be >= 128")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.format}")

    def serialize(self) -> str:
        lines = ["# dcl run configuration"]
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    def describe(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_BOOL_FIELDS = {"figures"}
_INT_FIELDS = {"s_target", "seed", "precision_max_bits", "threads"}


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in {f.name for f in fields(RunConfig)}:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in _BOOL_FIELDS:
            if val not in ("true", "false"):
                raise ValueError(f"line {lineno}: {key} must be true or false")
            values[key] = val == "true"
        elif key in _INT_FIELDS:
            values[key] = int(val)
        else:
            values[key] = val
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


def save_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(cfg.serialize())


def override(cfg: RunConfig, **kwargs) -> RunConfig:
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    out = replace(cfg, **kwargs)
    out.validate()
    return out
