from .main import (DiscreteMetricSpace, GraphSpace, DiagonalNeighborhood, GroupBall,
                   FreeGroup, LatticeGroup, TableGroup, ELEMENT_CAP,
                   validate_metric, graph_metric, random_regular_graph, cayley_ball,
                   group_from_spec, space_from_spec)

__all__ = ["DiscreteMetricSpace","GraphSpace","DiagonalNeighborhood","GroupBall",
           "FreeGroup","LatticeGroup","TableGroup","ELEMENT_CAP",
           "validate_metric","graph_metric","random_regular_graph","cayley_ball",
           "group_from_spec","space_from_spec"]
