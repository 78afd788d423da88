# fracspec/utils/config.py

from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="FRACSPEC_")

    # Application settings
    APP_NAME: str = "fracspec"
    APP_DESCRIPTION: str = "First eigenvalue of the fractional p-Laplacian with potential, and its optimization"
    APP_VERSION: str = "1.0.0"

    # Parallel workers for independent probe runs (0 means all cores)
    THREADS: int = 0

    # Logging
    LOG_FILE: str = "fracspec.log"
    LOG_LEVEL: str = "INFO"


# Instantiate settings
settings = Settings()
