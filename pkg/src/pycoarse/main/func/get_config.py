# Get run configuration from a YAML file or the environment
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import os
import copy
from dotenv import load_dotenv
load_dotenv()
import yaml
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log

DEFAULTS = {"tol":1e-9,
            "seed":20240517,
            "margin":None,
            "max_elements":200000,
            "eps_grid":[0.1, 0.01, 0.001],
            "schedule":{"t_max":1.0, "ratio":0.5, "count":40},
            "terms":4,
            "source":"auto",
            "verbose":1}

# Main
def _merge(section:dict) -> dict:
    config = copy.deepcopy(DEFAULTS)
    for key, value in (section or {}).items():
        if key not in DEFAULTS:
            raise KeyError(f"Unknown configuration key: {key}")
        if key == "schedule":
            unknown = set(value) - set(DEFAULTS["schedule"])
            if unknown:
                raise KeyError(f"Unknown schedule keys: {sorted(unknown)}")
            config["schedule"].update(value)
        else:
            config[key] = value
    return config


@log(set_logger=logger)
def get_config(name:str="pycoarse",
               *,
               path:str=str()) -> dict:
    """Get run configuration

    Args:
        name: section name in the YAML file
        path: YAML file path, if it is not provided the environment variable
            <name>_config (read from .env) is searched, then defaults are used

    Returns:
        dict(configuration merged over DEFAULTS)
    """
    if path:
        with open(path) as f:
            document = yaml.safe_load(f) or {}
        if name not in document:
            raise ValueError(f"Failed to get configuration section {name} from {path}")
        return _merge(document[name])

    c__path = os.environ.get(f"{name}_config")
    if c__path:
        with open(c__path, "r") as f:
            document = yaml.safe_load(f) or {}
        logger.debug(f"configuration loaded from {c__path}")
        return _merge(document.get(name, document))
    return _merge({})


def schedule_from_config(config:dict) -> list:
    """t_k = t_max * ratio^k for k = 0..count-1"""
    s = config["schedule"]
    if not 0 < s["ratio"] < 1:
        raise ValueError(f"Schedule ratio must lie in (0, 1), got {s['ratio']}")
    return [float(s["t_max"]) * float(s["ratio"]) ** k for k in range(int(s["count"]))]
