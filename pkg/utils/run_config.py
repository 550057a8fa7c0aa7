"""
Run Configuration - Merged settings for one command invocation
config.json defaults, then environment overrides, then command-line flags
"""

import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Dict, Optional

from group_engine import CoxeterSpec, ProductConvention

DEFAULTS = {
    "max_group_order": 700000,
    "max_nc_size": 30000,
    "cache_dir": ".poptsack_cache",
    "cache_enabled": True,
    "output_format": "text",
    "export_dir": "exports",
    "jobs": 1,
    "seed": 20240101,
    "product_convention": "left_to_right",
    "projection_mode": "lattice",
    "debug_checks": False,
    "projection_cache_max_size": 200000,
    "sample_size_d6": 100000,
}

# environment variable -> (config key, parser)
ENV_OVERRIDES = {
    "POPTSACK_CACHE_DIR": ("cache_dir", str),
    "POPTSACK_JOBS": ("jobs", int),
    "POPTSACK_BUDGET_ORDER": ("max_group_order", int),
}


def load_config_file(path: str = "config.json") -> Dict:
    """Load configuration from config.json"""
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        print(f"[WARNING] {path} not found, using defaults", file=sys.stderr)
        return dict(DEFAULTS)
    except json.JSONDecodeError as e:
        print(f"[WARNING] {path} is not valid JSON ({e}), using defaults", file=sys.stderr)
        return dict(DEFAULTS)


def apply_env_overrides(settings: Dict, environ=None) -> Dict:
    environ = os.environ if environ is None else environ
    merged = dict(settings)
    for var, (key, parse) in ENV_OVERRIDES.items():
        value = environ.get(var)
        if value is None or value == "":
            continue
        try:
            merged[key] = parse(value)
        except ValueError:
            raise ValueError(f"Environment variable {var}={value!r} is not a valid {parse.__name__}")
    return merged


@dataclass
class RunConfig:
    """Settings shared by every command"""
    max_group_order: int = DEFAULTS["max_group_order"]
    max_nc_size: int = DEFAULTS["max_nc_size"]
    cache_dir: str = DEFAULTS["cache_dir"]
    cache_enabled: bool = True
    output_format: str = "text"
    export_dir: str = "exports"
    out: Optional[str] = None
    jobs: int = 1
    seed: int = DEFAULTS["seed"]
    product_convention: str = "left_to_right"
    projection_mode: str = "lattice"
    coxeter: str = "standard"
    allow_large: bool = False
    debug_checks: bool = False
    projection_cache_max_size: Optional[int] = DEFAULTS["projection_cache_max_size"]
    sample_size_d6: int = DEFAULTS["sample_size_d6"]

    def __post_init__(self):
        for name in ("max_group_order", "max_nc_size", "jobs", "sample_size_d6"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.output_format not in ("json", "tsv", "dot", "text"):
            raise ValueError(f"Unsupported format: {self.output_format}. Use: json, tsv, dot, text")
        if self.projection_mode not in ("lattice", "closure", "auto"):
            raise ValueError(f"Unsupported projection mode: {self.projection_mode}")
        if self.product_convention not in {c.value for c in ProductConvention}:
            raise ValueError(f"Unsupported product convention: {self.product_convention}")
        CoxeterSpec.parse(self.coxeter)

    @property
    def convention(self) -> ProductConvention:
        return ProductConvention(self.product_convention)

    @property
    def coxeter_spec(self) -> CoxeterSpec:
        return CoxeterSpec.parse(self.coxeter)

    @classmethod
    def from_mapping(cls, settings: Dict, overrides: Optional[Dict] = None) -> "RunConfig":
        """Build from merged settings; None-valued overrides are ignored"""
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in settings.items() if k in known}
        for key, value in (overrides or {}).items():
            if key in known and value is not None:
                values[key] = value
        return cls(**values)
