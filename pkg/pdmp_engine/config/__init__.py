"""
Configuration module for the PDMP engine.

This module contains the configuration dictionaries. The experiment file
loader lives in config.experiment_loader.
"""

from .simulation_config import SIMULATION_CONFIG, PRESET_CONFIG

__all__ = [
    "SIMULATION_CONFIG",
    "PRESET_CONFIG",
]
