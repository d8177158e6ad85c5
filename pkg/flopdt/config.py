from functools import lru_cache
from typing import Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Centralized engine settings leveraging environment overrides.
    """

    model_config = SettingsConfigDict(
        env_prefix="FLOPDT_", env_file=".env", case_sensitive=False
    )

    app_name: str = "flopdt"
    log_level: str = Field("WARNING", description="Root log level for the CLI")

    # Truncation defaults
    default_n_max: int = Field(8, ge=0)
    default_m_max: int = Field(4, ge=0)

    # Oracle ceilings
    plane_partition_limit: int = Field(14, ge=0, le=30)
    pyramid_stone_limit: int = Field(12, ge=0, le=20)
    fit_total: int = Field(8, ge=1, description="Stone total used for the map fit")
    fit_coefficient_range: int = Field(1, ge=1, le=2)

    # Geometric model settings
    models_dir: str = Field(
        "models", description="Directory containing model YAML / conf files"
    )
    default_model: str = "conifold"

    # Charge defaults: B = b*H on the exceptional curve, z by its (Re, Im) slope
    default_b_field: str = "-1/2"
    default_z: Tuple[int, int] = (-1, 1)
    default_omega_prime: str = "1"

    default_seed: int = 20240611

    @property
    def default_box(self) -> Tuple[int, int]:
        return (self.default_n_max, self.default_m_max)


@lru_cache
def get_settings() -> Settings:
    return Settings()
