from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="STRATAKIT_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    cutoff: int = Field(default=20, ge=1)
    tor_depth: int = Field(default=4, ge=0)
    seed: int = Field(default=0, ge=0)

    iso_random_tries: int = Field(default=200, ge=0)
    iso_max_sum_terms: int = Field(default=3, ge=1)

    degree_cap: Optional[int] = Field(default=None, ge=1)

    output_format: Literal["text", "json"] = "text"
    log_level: str = "WARNING"
    log_json: bool = True

    examples_catalog_path: Optional[str] = None
    metrics_file: Optional[str] = None

    @property
    def catalog_file(self) -> Path:
        if self.examples_catalog_path:
            return Path(self.examples_catalog_path)
        return Path(__file__).parent / "fixtures" / "catalog.yaml"


settings = Settings()
