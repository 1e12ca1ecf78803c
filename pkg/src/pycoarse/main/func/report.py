# Run report: deterministic body plus timing
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import json
import time
from contextlib import contextmanager
from pathlib import Path
from typing import List, Sequence, Union
import numpy as np
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import PipelineError
from .codec import file_digest, write_json, write_csv

SCHEMA_VERSION = "1"

# Main
def _plain(obj):
    """Convert numpy scalars and arrays for JSON"""
    if isinstance(obj, dict):
        return {str(k):_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


class RunReport(object):
    """Report of one command run

    The body (command, inputs, seed, verdicts, tables, artifacts) is
    deterministic for fixed inputs and seed; wall-clock timings are kept
    in a separate section.
    """

    def __init__(self,
                 command:str,
                 params:dict=None,
                 seed:int=None,
                 out:Union[str, Path]=None):
        """Instantiate

        Args:
            command: command name
            params: echoed parameters, without output locations
            seed: random seed of the run
            out: artifact directory, nothing is written when None
        """
        self.command = command
        self.params:dict = dict(params or {})
        self.seed = seed
        self.out = None if out is None else Path(out)
        self.inputs:dict = {}
        self.verdicts:dict = {}
        self.tables:dict = {}
        self.artifacts:List[str] = []
        self.error:dict = None
        self.timing:List[dict] = []
        self._start = time.perf_counter()

    def __repr__(self) -> str:
        return f"RunReport({self.command}, passed={self.passed}, artifacts={len(self.artifacts)})"

    @property
    def passed(self) -> bool:
        return self.error is None and all(v["passed"] for v in self.verdicts.values())

    def add_input(self, name:str, path:Union[str, Path]) -> str:
        digest = file_digest(path)
        self.inputs[name] = {"sha256":digest}
        return digest

    def add_verdict(self, name:str, passed:bool, **detail):
        self.verdicts[name] = {"passed":bool(passed), **_plain(detail)}
        logger.info(f"verdict {name}: {'pass' if passed else 'fail'}")

    def add_table(self, name:str, columns:Sequence[str], rows:Sequence[Sequence], csv:bool=True):
        self.tables[name] = {"columns":list(columns), "rows":_plain([list(r) for r in rows])}
        if csv:
            self.write_csv(f"{name}.csv", columns, rows)

    def write_json(self, name:str, obj) -> Path:
        if self.out is None:
            return None
        path = write_json(self.out / name, _plain(obj))
        self.artifacts.append(name)
        return path

    def write_csv(self, name:str, columns:Sequence[str], rows:Sequence[Sequence]) -> Path:
        if self.out is None:
            return None
        path = write_csv(self.out / name, columns, rows)
        self.artifacts.append(name)
        return path

    @contextmanager
    def stage(self, name:str):
        """Time a stage; failures are re-raised as PipelineError naming it"""
        begin = time.perf_counter()
        logger.info(f"stage {name} begin")
        try:
            yield
        except PipelineError:
            raise
        except Exception as e:
            self.timing.append({"stage":name, "status":"failed", "seconds":time.perf_counter() - begin})
            raise PipelineError(f"Stage {name} failed: {type(e).__name__}: {e}", name) from e
        self.timing.append({"stage":name, "status":"end", "seconds":time.perf_counter() - begin})
        logger.info(f"stage {name} end")

    def fail(self, error:Exception, stage:str=None):
        self.error = {"type":type(error).__name__, "message":str(error)}
        if stage is not None:
            self.error["stage"] = stage

    def body(self) -> dict:
        return _plain({"schema_version":SCHEMA_VERSION,
                       "command":{"name":self.command, "params":self.params},
                       "inputs":self.inputs,
                       "seed":self.seed,
                       "passed":self.passed,
                       "error":self.error,
                       "verdicts":self.verdicts,
                       "tables":self.tables,
                       "artifacts":sorted(self.artifacts)})

    def to_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2)

    def full(self) -> dict:
        return {**self.body(), "timing":{"stages":_plain(self.timing),
                                         "total_seconds":time.perf_counter() - self._start}}

    def save(self, log_content:str=None) -> Path:
        """Write report.json and run.log under the artifact directory"""
        if self.out is None:
            return None
        self.out.mkdir(parents=True, exist_ok=True)
        if log_content is not None:
            (self.out / "run.log").write_text(log_content)
        return write_json(self.out / "report.json", self.full())
