from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    environment: str = "development"
    log_level: str = "INFO"
    character_table_cap: int = 4096
    direct_convolution_cap: int = 1024
    exhaustive_cap: int = 64
    identity_tolerance: float = 1e-9
    default_seed: int = 20240601
    max_workers: int = 4
    model_config = SettingsConfigDict(env_file=".env", env_prefix="VILENKIN_", extra="ignore")

    @field_validator(
        "character_table_cap",
        "direct_convolution_cap",
        "exhaustive_cap",
        "identity_tolerance",
        "max_workers",
    )
    @classmethod
    def must_be_positive(cls, v, info):
        if v <= 0:
            raise ValueError(f"{info.field_name} must be positive, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        return v.upper()


settings = Settings()
