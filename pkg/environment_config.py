#!/usr/bin/env python3
"""
Environment configuration for the CLI, the HTTP service and the self-check
"""

import logging
import os
from dataclasses import dataclass

from errors import ConfigError

DEFAULT_SEED = 0
DEFAULT_PORT = 5000


@dataclass(frozen=True)
class EnvironmentConfig:
    seed: int
    log_level: str
    fixture_dir: str | None
    environment: str
    port: int

    @property
    def is_development(self):
        return self.environment == 'development'


def _int_from_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'") from None


def get_fixture_dir():
    """GEOMORPH_FIXTURE_DIR, or None for the bundled fixtures"""
    return os.environ.get('GEOMORPH_FIXTURE_DIR') or None


def get_environment_config():
    """Read settings from the environment, falling back to defaults"""
    seed = _int_from_env('GEOMORPH_SEED', DEFAULT_SEED)
    if seed < 0:
        raise ConfigError(f"GEOMORPH_SEED must be non-negative, got {seed}")

    environment = os.environ.get('GEOMORPH_ENV', 'production')
    default_level = 'DEBUG' if environment == 'development' else 'INFO'
    log_level = os.environ.get('GEOMORPH_LOG_LEVEL', default_level).upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ConfigError(f"GEOMORPH_LOG_LEVEL '{log_level}' is not a logging level")

    return EnvironmentConfig(
        seed=seed,
        log_level=log_level,
        fixture_dir=get_fixture_dir(),
        environment=environment,
        port=_int_from_env('PORT', DEFAULT_PORT),
    )


def resolve_seed(cli_seed):
    """An explicit --seed wins over GEOMORPH_SEED"""
    if cli_seed is not None:
        if cli_seed < 0:
            raise ConfigError(f"seed must be non-negative, got {cli_seed}")
        return cli_seed
    return get_environment_config().seed


def set_development_mode():
    """Set environment to development mode"""
    os.environ['GEOMORPH_ENV'] = 'development'
    logging.info("Environment set to DEVELOPMENT")


def set_production_mode():
    """Set environment to production mode"""
    os.environ['GEOMORPH_ENV'] = 'production'
    logging.info("Environment set to PRODUCTION")


if __name__ == "__main__":
    import sys

    logging.basicConfig(level=logging.INFO, format='%(asctime)s %(levelname)s %(message)s')
    if len(sys.argv) > 1:
        if sys.argv[1] == 'dev':
            set_development_mode()
        elif sys.argv[1] == 'prod':
            set_production_mode()
        else:
            print("Usage: python environment_config.py [dev|prod]")
    else:
        print(f"Current configuration: {get_environment_config()}")
