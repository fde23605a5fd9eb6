"""Slot-based simulator and schedulers for service chains over a ground-air-space network."""

__version__ = "0.1.0"

from .config import RunConfig, default_config, load_config, resolve_seed
from .env import SaginEnv, ScheduleLog, VnfPhase
from .scenario import Instance, build_instance

__all__ = [
    "RunConfig",
    "default_config",
    "load_config",
    "resolve_seed",
    "SaginEnv",
    "ScheduleLog",
    "VnfPhase",
    "Instance",
    "build_instance",
    "__version__",
]
