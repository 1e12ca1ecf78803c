from .get_config import DEFAULTS, get_config, schedule_from_config
from .report import RunReport, SCHEMA_VERSION

__all__ = ["DEFAULTS","get_config","schedule_from_config","RunReport","SCHEMA_VERSION"]
