"""Experiment configuration: TOML in, plain dict out (for JSON summaries)."""
from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..strassen import E_E, geometric_grid


@dataclass
class ExperimentConfig:
    scenery_seed: int = 0
    path_seed: int = 1
    # geometric lambda grid exp(log_lambda0 + k log_ratio), k < lambda_count
    log_lambda0: float = 3.0
    log_ratio: float = 0.25
    lambda_count: int = 37
    window: tuple[float, float] = (-1.0, 1.0)
    epsilon: float = 0.4
    dt: float = 1e-4
    h: float = 0.02
    replicas: int = 5000
    targets: list[str] = field(default_factory=lambda: ["zero", "tent_ramp"])
    output_dir: str = "out"
    profile_spacing: float = 1 / 256
    lil_window: tuple[float, float] = (-4.0, 4.0)
    lil_spacing: float = 1 / 128
    l1_paths: int = 2000
    max_laws_per_target: int = 2
    # two-sample KS the matched laws of distinct targets must exceed; output of
    # calibrate_separation_threshold(zero, tent_ramp, 5000 replicas, seed 12345)
    separation_threshold: float = 0.13
    fallback_seeds: int = 20
    min_conclusive: int = 10
    annealed_schedule: list[int] = field(default_factory=lambda: [4096, 16384, 65536])
    scenery_law: str = "rademacher"
    bound_paths: int = 10000
    identity_paths: int = 1000
    theta_target: str = "tent_ramp"
    bound_lambda: float = math.exp(4.0)
    workers: int = 1

    def __post_init__(self):
        self.window = tuple(float(v) for v in self.window)
        self.lil_window = tuple(float(v) for v in self.lil_window)
        self.targets = list(self.targets)
        self.annealed_schedule = [int(n) for n in self.annealed_schedule]
        self.validate()

    def validate(self):
        if not math.exp(self.log_lambda0) > E_E:
            raise ValueError("lambda_0 must exceed e^e")
        if not self.log_ratio > 0:
            raise ValueError("lambda ratio must exceed 1")
        if self.lambda_count < 1:
            raise ValueError("lambda_count must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.replicas < 100:
            raise ValueError("replicas must be at least 100")
        s, r = self.window
        if not s < 0 < r:
            raise ValueError("window must satisfy s < 0 < r")
        if not (self.dt > 0 and self.h > 0):
            raise ValueError("dt and h must be positive")

    @property
    def lambdas(self) -> np.ndarray:
        return geometric_grid(self.log_lambda0,
                              self.log_lambda0 + self.log_ratio * (self.lambda_count - 1),
                              self.log_ratio)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        d["lil_window"] = list(self.lil_window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    def replace(self, **changes) -> "ExperimentConfig":
        d = self.to_dict()
        d.update({k: v for k, v in changes.items() if v is not None})
        return ExperimentConfig.from_dict(d)


def load_config(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        return ExperimentConfig.from_dict(tomllib.load(fh))
