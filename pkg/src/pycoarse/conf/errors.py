# Exceptions shared across modules
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Main
class MetricError(ValueError):
    """A matrix failed a metric axiom

    Args:
        axiom: name of the failed axiom
        witness: indices reproducing the violation
    """
    def __init__(self, axiom:str, witness:tuple, message:str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = tuple(witness)

class GraphError(ValueError):
    """Invalid graph input or random graph parameters"""
    def __init__(self, message:str, vertex:int=None):
        super().__init__(message)
        self.vertex = vertex

class GroupSpecError(ValueError):
    """Invalid group specification"""

class ResourceLimitError(RuntimeError):
    """Enumeration exceeded the configured element cap"""

class MarginError(ValueError):
    """A product or arrow left the enumerated ball"""

class KernelCheckError(ValueError):
    """A kernel failed a required classification"""
    def __init__(self, message:str, report=None):
        super().__init__(message)
        self.report = report

class SelectionError(RuntimeError):
    """Akemann-Walter selection rule cannot be satisfied"""
    def __init__(self, message:str, n:int):
        super().__init__(message)
        self.n = n

class EmbeddingError(ValueError):
    """Kernel is not of negative type, or its Gram matrix is not positive semidefinite beyond the clamping window"""
    def __init__(self, message:str, report=None):
        super().__init__(message)
        self.report = report

class TruncationError(RuntimeError):
    """Operator product is no longer exact on the interior ball"""
    def __init__(self, message:str, shell:int):
        super().__init__(message)
        self.shell = shell

class ConsistencyError(RuntimeError):
    """A proved inequality or preservation law failed numerically"""

class PipelineError(RuntimeError):
    """A pipeline stage failed"""
    def __init__(self, message:str, stage:str):
        super().__init__(message)
        self.stage = stage
