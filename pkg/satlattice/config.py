from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError


CONFIG_DIR = Path(os.environ.get("XDG_CONFIG_HOME", Path.home() / ".config")) / "satlattice"
CACHE_DIR = Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "satlattice"

ENV_OVERRIDES = {
    "SATLATTICE_THREADS": "threads",
    "SATLATTICE_LOG_LEVEL": "log_level",
    "SATLATTICE_CHECKPOINT_DIR": "checkpoint_dir",
}


class Settings(BaseModel):
    threads: int = Field(1, ge=1)
    # DFS nodes between progress lines
    progress_interval: int = Field(250_000, ge=1)
    checkpoint_dir: str = str(CACHE_DIR / "shards")
    verify_extraction: bool = True
    # searches above this ground size need --allow-large
    max_search_n: int = Field(6, ge=2, le=20)
    log_level: str = Field("WARNING", pattern=r"^(DEBUG|INFO|WARNING|ERROR)$")


class ConfigManager:
    def __init__(self, path: Optional[Path] = None) -> None:
        self.path = path or (CONFIG_DIR / "config.json")

    def load(self, *, apply_env: bool = True) -> Settings:
        raw: dict = {}
        if self.path.exists():
            try:
                with self.path.open("r", encoding="utf-8") as f:
                    raw = json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigError(f"cannot read {self.path}: {e}") from e
            if not isinstance(raw, dict):
                raise ConfigError(f"{self.path} must hold a JSON object")
        # ENV overrides
        for var, field in ENV_OVERRIDES.items() if apply_env else ():
            value = os.environ.get(var)
            if value:
                raw[field] = value.upper() if field == "log_level" else value
        try:
            return Settings(**raw)
        except ValidationError as e:
            raise ConfigError(f"invalid configuration: {e}") from e

    def save(self, settings: Settings) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w", encoding="utf-8") as f:
            json.dump(settings.model_dump(), f, indent=2)
