from .logger import log, Logger
from .errors import (MetricError, GraphError, GroupSpecError, ResourceLimitError, MarginError,
                     KernelCheckError, SelectionError, EmbeddingError, TruncationError,
                     ConsistencyError, PipelineError)

__all__ = ["log","Logger",
           "MetricError","GraphError","GroupSpecError","ResourceLimitError","MarginError",
           "KernelCheckError","SelectionError","EmbeddingError","TruncationError",
           "ConsistencyError","PipelineError"]
