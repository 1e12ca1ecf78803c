# Hilbert space embeddings from negative type kernels, compression and expander certificates
# contributors: smlee

# History
# 2026-10-17 | v1.0.1 - reject kernels that fail the negative type check before factoring
# 2026-10-17 | v1.0 - first commit

# Module import
from typing import List, Optional
import numpy as np
import networkx as nx
from scipy import linalg
from scipy.spatial.distance import pdist, squareform
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log, EmbeddingError, ConsistencyError, GraphError
from pycoarse.util.spaces import DiscreteMetricSpace, GraphSpace
from pycoarse.util.kernels import Kernel, DEFAULT_TOL, check_negative_type

CONTRACT_TOL = 1e-8
POINCARE_SLACK = 1e-9

# Main
class HilbertEmbedding(object):
    """Map from the points of a space to vectors of a finite-dimensional real Hilbert space"""

    def __init__(self,
                 space:DiscreteMetricSpace,
                 coords:np.ndarray,
                 meta:dict=None):
        """Instantiate

        Args:
            space: host space
            coords: one row of coordinates per point
            meta: provenance information
        """
        coords = np.array(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        assert coords.shape[0] == space.n, "One coordinate row per point"
        assert coords.shape[1] >= 1, "Embedding dimension must be positive"
        assert np.isfinite(coords).all(), "Coordinates must be finite"
        coords.setflags(write=False)
        self.space = space
        self.coords:np.ndarray = coords
        self.meta:dict = dict(meta or {})

    def __repr__(self) -> str:
        return f"HilbertEmbedding(n={self.space.n}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def squared_distances(self) -> np.ndarray:
        return squareform(pdist(self.coords, "sqeuclidean")) if self.space.n > 1 else np.zeros((self.space.n,) * 2)

    def distances(self) -> np.ndarray:
        return np.sqrt(self.squared_distances())


class CompressionProfile(object):
    """Compression envelopes over the grid of realized distances

    rho_minus(r) = min |f(x)-f(y)| over d(x,y) >= r
    rho_plus(r)  = max |f(x)-f(y)| over d(x,y) <= r
    """

    def __init__(self,
                 radii:np.ndarray,
                 rho_minus:np.ndarray,
                 rho_plus:np.ndarray):
        self.radii = np.asarray(radii, dtype=float)
        self.lower = np.asarray(rho_minus, dtype=float)
        self.upper = np.asarray(rho_plus, dtype=float)

    def __len__(self) -> int:
        return len(self.radii)

    def __repr__(self) -> str:
        return f"CompressionProfile(points={len(self)})"

    def rho_minus(self, r:float) -> Optional[float]:
        pos = int(np.searchsorted(self.radii, r, side="left"))
        return float(self.lower[pos]) if pos < len(self.radii) else None

    def rho_plus(self, r:float) -> float:
        pos = int(np.searchsorted(self.radii, r, side="right")) - 1
        return float(self.upper[pos]) if pos >= 0 else 0.0

    def is_monotone(self) -> bool:
        return bool((np.diff(self.lower) >= 0).all() and (np.diff(self.upper) >= 0).all())

    def rows(self) -> List[tuple]:
        return [(float(r), float(a), float(b)) for r, a, b in zip(self.radii, self.lower, self.upper)]

    def to_dict(self) -> dict:
        return {"r":self.radii.tolist(), "rho_minus":self.lower.tolist(), "rho_plus":self.upper.tolist()}


class ExpanderCertificate(object):
    """Poincare inequality evaluation of an embedding of a connected graph"""

    def __init__(self, **fields):
        self.n:int = fields["n"]
        self.degree:int = fields["degree"]
        self.regular:bool = fields["regular"]
        self.lambda1:float = fields["lambda1"]
        self.lhs:float = fields["lhs"]
        self.rhs:float = fields["rhs"]
        self.bound:float = fields["bound"]
        self.rho_plus_1:float = fields["rho_plus_1"]
        self.edge_energy:float = fields["edge_energy"]
        self.median_distance:float = fields["median_distance"]
        self.mean_distance:float = fields["mean_distance"]
        self.rho_minus_median:Optional[float] = fields["rho_minus_median"]
        self.obstruction_strength:float = fields["obstruction_strength"]
        self.verdict:str = fields["verdict"]

    def __repr__(self) -> str:
        return (f"ExpanderCertificate(n={self.n}, lambda1={self.lambda1:.4f}, "
                f"strength={self.obstruction_strength:.4f})")

    def to_dict(self) -> dict:
        return {"n":self.n, "degree":self.degree, "regular":self.regular,
                "lambda1":self.lambda1, "lhs":self.lhs, "rhs":self.rhs, "bound":self.bound,
                "rho_plus_1":self.rho_plus_1, "edge_energy":self.edge_energy,
                "median_distance":self.median_distance, "mean_distance":self.mean_distance,
                "rho_minus_median":self.rho_minus_median,
                "obstruction_strength":self.obstruction_strength, "verdict":self.verdict}


def distance_row_kernel(space:DiscreteMetricSpace) -> Kernel:
    """h(x,y) = sum_z (d(x,z) - d(y,z))^2

    Squared distance between rows of the distance matrix: always of
    negative type, and h >= 2 d^2.
    """
    d = np.asarray(space.d, dtype=float)
    h = squareform(pdist(d, "sqeuclidean")) if space.n > 1 else np.zeros((space.n, space.n))
    return Kernel(space, h, meta={"source":"distance-rows"})


@log(set_logger=logger)
def embedding_from_negative_type(h:Kernel,
                                 basepoint=None,
                                 tol:float=DEFAULT_TOL,
                                 top_k:int=None) -> HilbertEmbedding:
    """Factor the Gram matrix of a negative type kernel

    G(i,j) = (h(x_i,x0) + h(x_j,x0) - h(x_i,x_j)) / 2 is factored as V V^T
    by a symmetric eigendecomposition; eigenvalues in the window
    [-tol*n*max|h|, 0) are clamped to zero.

    Args:
        h: negative type kernel
        basepoint: point label mapped to the origin, default the first point
        tol: clamping window factor
        top_k: keep only the k largest eigenvalues and record the Frobenius error
    Returns:
        HilbertEmbedding with |f(x)-f(y)|^2 = h(x,y)
    Raises:
        EmbeddingError when h fails check_negative_type at tol
    """
    nt = check_negative_type(h, tol)
    if not nt:
        raise EmbeddingError(f"Kernel is not of negative type ({nt.condition})", nt)
    n = h.n
    b = 0 if basepoint is None else h.space.index(basepoint)
    H = h.real()
    Hs = (H + H.T) / 2
    G = 0.5 * (Hs[:, [b]] + Hs[[b], :] - Hs)
    w, V = linalg.eigh(G)
    scale = float(np.abs(H).max()) if n else 0.0
    window = tol * n * scale
    if n and w[0] < -window:
        raise EmbeddingError(f"Gram eigenvalue {w[0]:.3e} below clamping window -{window:.3e}", nt)
    clamped = int(((w < 0) & (w >= -window)).sum())
    w = np.clip(w, 0.0, None)
    keep = np.flatnonzero(w > n * np.finfo(float).eps * w.max()) if n and w.max() > 0 else np.zeros(0, dtype=int)
    frobenius_error = 0.0
    if top_k is not None and len(keep) > top_k:
        keep = keep[np.argsort(w[keep])[::-1][:top_k]]
        dropped = np.setdiff1d(np.arange(n), keep)
        frobenius_error = float(np.sqrt((w[dropped] ** 2).sum()))
    keep = np.sort(keep)[::-1]
    coords = V[:, keep] * np.sqrt(w[keep]) if len(keep) else np.zeros((n, 1))
    coords[b] = 0.0
    f = HilbertEmbedding(h.space, coords, meta={"basepoint":h.space.points[b] if n else None,
                                               "clamped":clamped, "frobenius_error":frobenius_error})

    error = float(np.abs(f.squared_distances() - H).max()) if n else 0.0
    f.meta["reproduction_error"] = error
    if top_k is None and error > CONTRACT_TOL * scale:
        raise ConsistencyError(f"Embedding reproduces h only within {error:.3e} (scale {scale:.3e})")
    logger.debug(f"embedded {n} points in dimension {f.dim}, clamped {clamped} eigenvalues")
    return f


@log(set_logger=logger)
def negative_type_from_embedding(f:HilbertEmbedding) -> Kernel:
    """h(x,y) = |f(x) - f(y)|^2"""
    return Kernel(f.space, f.squared_distances(), meta={"source":"embedding"})


@log(set_logger=logger)
def compression_bounds(f:HilbertEmbedding) -> CompressionProfile:
    """Compression envelopes of an embedding over realized distances

    Args:
        f: embedding
    Returns:
        CompressionProfile
    """
    n = f.space.n
    if n < 2:
        return CompressionProfile(np.zeros(0), np.zeros(0), np.zeros(0))
    off = ~np.eye(n, dtype=bool)
    dv = np.asarray(f.space.d)[off]
    av = f.distances()[off]
    radii, inv = np.unique(dv, return_inverse=True)
    gmin = np.full(len(radii), np.inf)
    gmax = np.full(len(radii), -np.inf)
    np.minimum.at(gmin, inv, av)
    np.maximum.at(gmax, inv, av)
    rho_minus = np.minimum.accumulate(gmin[::-1])[::-1]
    rho_plus = np.maximum.accumulate(gmax)
    if not ((rho_minus[inv] <= av).all() and (av <= rho_plus[inv]).all()):
        raise ConsistencyError("Compression envelopes do not bound every pair")
    return CompressionProfile(radii, rho_minus, rho_plus)


@log(set_logger=logger)
def expander_obstruction(g:GraphSpace,
                         f:HilbertEmbedding,
                         tol:float=DEFAULT_TOL) -> ExpanderCertificate:
    """Poincare inequality for an embedding of a connected graph

    (1/n^2) sum_{x,y} |f(x)-f(y)|^2 <= (2/(n lambda1)) sum_{edges} |f(u)-f(v)|^2

    Args:
        g: connected graph space
        f: embedding of its vertices
        tol: relative threshold under which lambda1 counts as zero
    Returns:
        ExpanderCertificate
    """
    assert isinstance(g, GraphSpace), "Expander obstruction needs a graph space"
    assert f.space.n == g.n, "Embedding must be defined on the graph vertices"
    n = g.n
    if n < 2:
        raise GraphError("Spectral gap needs at least two vertices")
    L = nx.laplacian_matrix(g.graph, nodelist=range(n)).toarray().astype(float)
    w = linalg.eigvalsh(L)
    lambda1 = float(w[1])
    if lambda1 <= tol * max(float(w[-1]), 1.0):
        raise GraphError(f"Graph is disconnected: lambda1 = {lambda1:.3e}")

    sq = f.squared_distances()
    lhs = float(sq.sum()) / n ** 2
    edges = np.array(g.edges, dtype=int)
    edge_energy = float(sq[edges[:, 0], edges[:, 1]].sum())
    rhs = 2.0 / (n * lambda1) * edge_energy
    if lhs > rhs * (1 + POINCARE_SLACK) + np.finfo(float).tiny:
        raise ConsistencyError(f"Poincare inequality failed: {lhs:.6e} > {rhs:.6e}")

    profile = compression_bounds(f)
    rho_plus_1 = profile.rho_plus(1.0)
    bound = g.degree * rho_plus_1 ** 2 / lambda1
    off = ~np.eye(n, dtype=bool)
    median_distance = float(np.median(g.d[off]))
    mean_distance = float(g.d[off].mean())
    strength = mean_distance ** 2 * lambda1 / (2.0 * g.degree)
    if strength >= 1.0:
        verdict = (f"obstruction: typical distance {mean_distance:.3f} outgrows the Poincare allowance "
                   f"{2.0 * g.degree / lambda1:.3f} (in units of rho_plus(1)^2)")
    else:
        verdict = "no obstruction at this scale: the Poincare bound is loose"
    cert = ExpanderCertificate(n=n, degree=g.degree, regular=g.is_regular, lambda1=lambda1,
                               lhs=lhs, rhs=rhs, bound=bound, rho_plus_1=rho_plus_1,
                               edge_energy=edge_energy, median_distance=median_distance,
                               mean_distance=mean_distance,
                               rho_minus_median=profile.rho_minus(median_distance),
                               obstruction_strength=strength, verdict=verdict)
    logger.info(f"{cert!r}")
    return cert
