# Kernels on X x X: positive definite / negative type calculus
# contributors: smlee

# History
# 2026-10-17 | v1.0.1 - warn when the synthesized kernel is not proper
# 2026-10-17 | v1.0 - first commit

# Module import
from typing import Callable, Dict, List, Optional, Sequence, Union
import numpy as np
from scipy import linalg
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log, KernelCheckError, SelectionError, ConsistencyError
from pycoarse.util.spaces import DiscreteMetricSpace, DiagonalNeighborhood

DEFAULT_TOL = 1e-9
DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3)
DIAGONAL_FLOOR = 1e-12

# Main
class Kernel(object):
    """Dense function on X x X

    Complex values for positive definite candidates, real values for
    negative type candidates. Values are read-only after construction.
    """

    def __init__(self,
                 space:DiscreteMetricSpace,
                 values:Union[np.ndarray, list],
                 meta:dict=None):
        """Instantiate

        Args:
            space: host space
            values: |X| x |X| matrix
            meta: provenance information (source operation, parameters)
        """
        values = np.array(values)
        values = values.astype(complex) if np.iscomplexobj(values) else values.astype(float)
        assert values.shape == (space.n, space.n), f"Kernel shape {values.shape} does not match space of {space.n} points"
        assert np.isfinite(values).all(), "Kernel values must be finite"
        values.setflags(write=False)
        self.space = space
        self.values:np.ndarray = values
        self.meta:dict = dict(meta or {})

    def __repr__(self) -> str:
        kind = "real" if self.is_real else "complex"
        return f"Kernel(n={self.n}, {kind}, source={self.meta.get('source', 'input')})"

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    def real(self) -> np.ndarray:
        return np.real(self.values)

    def restrict(self, indices:Sequence[int]) -> "Kernel":
        """Kernel on the subspace spanned by the given point indices"""
        idx = np.asarray(indices, dtype=int)
        sub = DiscreteMetricSpace([self.space.points[i] for i in idx], self.space.d[np.ix_(idx, idx)])
        return Kernel(sub, self.values[np.ix_(idx, idx)], meta={**self.meta, "restricted":True})


class ClassificationReport(object):
    """Verdict of a positivity check with a reproducible witness"""

    def __init__(self,
                 check:str,
                 verdict:bool,
                 extremal_eigenvalue:float,
                 tolerance:float,
                 *,
                 condition:str=None,
                 witness:np.ndarray=None,
                 points:Sequence=None,
                 details:dict=None):
        """Instantiate

        Args:
            check: name of the check (pd, nt, groupoid-pd, ...)
            verdict: True when the check passes
            extremal_eigenvalue: smallest (pd) or largest (nt) eigenvalue seen
            tolerance: tolerance used
            condition: failed condition on failure (hermitian, eigenvalue, diagonal, symmetry)
            witness: coefficient vector reproducing the violation
            points: point indices the witness refers to
            details: extra check-specific data
        """
        self.check = check
        self.verdict = bool(verdict)
        self.extremal_eigenvalue = float(extremal_eigenvalue)
        self.tolerance = float(tolerance)
        self.condition = condition
        self.witness = None if witness is None else np.asarray(witness)
        self.points = None if points is None else list(points)
        self.details = dict(details or {})

    def __bool__(self) -> bool:
        return self.verdict

    def __repr__(self) -> str:
        return (f"ClassificationReport({self.check}, verdict={self.verdict}, "
                f"extremal={self.extremal_eigenvalue:.3e}, condition={self.condition})")

    def to_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            if np.iscomplexobj(self.witness):
                witness = [[float(z.real), float(z.imag)] for z in self.witness]
            else:
                witness = [float(x) for x in self.witness]
        out = {"check":self.check,
               "verdict":self.verdict,
               "extremal_eigenvalue":self.extremal_eigenvalue,
               "tolerance":self.tolerance,
               "condition":self.condition,
               "witness":witness,
               "points":self.points}
        if self.details:
            out["details"] = {k:(v.to_dict() if isinstance(v, ClassificationReport) else v)
                              for k, v in self.details.items()}
        return out


def _as_matrix(k) -> np.ndarray:
    values = k.values if isinstance(k, Kernel) else np.asarray(k)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"Kernel matrix must be square, got shape {values.shape}")
    return values


def pd_matrix_report(values:np.ndarray,
                     tol:float=DEFAULT_TOL,
                     check:str="pd") -> ClassificationReport:
    """Positive semidefiniteness of a square matrix

    The matrix must be Hermitian within tol * max|K| and its smallest
    eigenvalue at least -tol * n * max diag.
    """
    K = np.asarray(values)
    n = K.shape[0]
    if n == 0:
        return ClassificationReport(check, True, 0.0, tol)
    maxabs = float(np.abs(K).max())
    skew = np.abs(K - K.conj().T)
    if skew.max() > tol * maxabs:
        i, j = np.unravel_index(int(np.argmax(skew)), skew.shape)
        return ClassificationReport(check, False, float("nan"), tol, condition="hermitian",
                                    points=[int(i), int(j)],
                                    details={"hermitian_error":float(skew.max())})
    H = (K + K.conj().T) / 2
    w, V = linalg.eigh(H)
    maxdiag = float(np.real(np.diag(H)).max())
    scale = maxdiag if maxdiag > 0 else maxabs
    threshold = -tol * n * scale
    if w[0] >= threshold:
        return ClassificationReport(check, True, w[0], tol, details={"threshold":threshold})
    return ClassificationReport(check, False, w[0], tol, condition="eigenvalue",
                                witness=V[:, 0], points=list(range(n)),
                                details={"threshold":threshold})


def nt_matrix_report(values:np.ndarray,
                     tol:float=DEFAULT_TOL,
                     check:str="nt") -> ClassificationReport:
    """Negative type test of a real square matrix

    Checks the zero diagonal, symmetry and the largest eigenvalue of
    P H P with P the projection onto mean-zero vectors.
    """
    H = np.asarray(values)
    if np.iscomplexobj(H):
        scale = float(np.abs(H).max()) if H.size else 0.0
        if H.size and np.abs(H.imag).max() > tol * scale:
            raise ValueError("Negative type check needs a real-valued kernel")
        H = H.real
    H = H.astype(float)
    n = H.shape[0]
    if n == 0:
        return ClassificationReport(check, True, 0.0, tol)
    scale = float(np.abs(H).max())
    diag = np.abs(np.diag(H))
    if diag.max() > tol * scale:
        i = int(np.argmax(diag))
        return ClassificationReport(check, False, float("nan"), tol, condition="diagonal",
                                    points=[i], details={"value":float(H[i, i])})
    skew = np.abs(H - H.T)
    if skew.max() > tol * scale:
        i, j = np.unravel_index(int(np.argmax(skew)), skew.shape)
        return ClassificationReport(check, False, float("nan"), tol, condition="symmetry",
                                    points=[int(i), int(j)],
                                    details={"symmetry_error":float(skew.max())})
    if n == 1:
        return ClassificationReport(check, True, 0.0, tol)
    Hs = (H + H.T) / 2
    P = np.eye(n) - np.full((n, n), 1.0 / n)
    M = P @ Hs @ P
    w, V = linalg.eigh((M + M.T) / 2)
    threshold = tol * n * scale
    if w[-1] <= threshold:
        return ClassificationReport(check, True, w[-1], tol, details={"threshold":threshold})
    a = V[:, -1] - V[:, -1].mean()
    return ClassificationReport(check, False, w[-1], tol, condition="eigenvalue",
                                witness=a, points=list(range(n)),
                                details={"threshold":threshold})


@log(set_logger=logger)
def check_positive_definite(k:Union[Kernel, np.ndarray],
                            tol:float=DEFAULT_TOL) -> ClassificationReport:
    """Check sum conj(z_i) k(x_i,x_j) z_j >= 0 over the full point set

    Args:
        k: kernel or square matrix
        tol: relative tolerance
    Returns:
        ClassificationReport, witness is the eigenvector of the offending eigenvalue
    """
    return pd_matrix_report(_as_matrix(k), tol, check="pd")


@log(set_logger=logger)
def check_negative_type(h:Union[Kernel, np.ndarray],
                        tol:float=DEFAULT_TOL) -> ClassificationReport:
    """Check h(x,x) = 0, symmetry and sum a_i h(x_i,x_j) a_j <= 0 for sum a = 0

    Args:
        h: real kernel or square matrix
        tol: relative tolerance
    Returns:
        ClassificationReport, witness is a mean-zero vector on failure
    """
    return nt_matrix_report(_as_matrix(h), tol, check="nt")


def distance_kernel(space:DiscreteMetricSpace,
                    fn:Callable[[np.ndarray], np.ndarray],
                    meta:dict=None) -> Kernel:
    """Kernel k(x,y) = fn(d(x,y))"""
    return Kernel(space, fn(np.asarray(space.d)), meta=meta or {"source":"distance"})


def _exp_kernel(h:Kernel, t:float) -> Kernel:
    H = h.real()
    H = (H + H.T) / 2
    values = np.exp(-t * H)
    np.fill_diagonal(values, 1.0)
    return Kernel(h.space, values, meta={"source":"schoenberg", "t":float(t)})


@log(set_logger=logger)
def schoenberg_transform(h:Kernel,
                         t:float,
                         tol:float=DEFAULT_TOL) -> Kernel:
    """Positive definite kernel exp(-t h) from a negative type kernel h

    Args:
        h: negative type kernel
        t: positive parameter
        tol: tolerance of the negative type check
    Returns:
        Kernel with unit diagonal
    """
    if not t > 0:
        raise ValueError(f"Schoenberg parameter must be positive, got {t}")
    report = check_negative_type(h, tol)
    if not report:
        raise KernelCheckError(f"Kernel is not of negative type ({report.condition})", report)
    return _exp_kernel(h, t)


@log(set_logger=logger)
def unit_normalize(u:Kernel,
                   floor:float=DIAGONAL_FLOOR) -> Kernel:
    """Renormalize u(x,y) / sqrt(u(x,x) u(y,y)) to a unit diagonal"""
    diag = np.real(np.diag(u.values))
    if (diag < floor).any():
        i = int(np.argmin(diag))
        raise ValueError(f"Diagonal entry {diag[i]:.3e} at point {i} is below {floor:.0e}, cannot normalize")
    s = np.sqrt(diag)
    values = u.values / np.outer(s, s)
    np.fill_diagonal(values, 1.0)
    return Kernel(u.space, values, meta={**u.meta, "normalized":True})


class PropernessProfile(object):
    """Envelopes of |k| over the grid of realized distances

    lower m(r) = min |k(x,y)| over d(x,y) >= r, non-decreasing
    upper M(r) = max |k(x,y)| over d(x,y) >= r, non-increasing
    """

    def __init__(self,
                 radii:np.ndarray,
                 lower:np.ndarray,
                 upper:np.ndarray):
        self.radii = np.asarray(radii, dtype=float)
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        assert self.radii.shape == self.lower.shape == self.upper.shape, "Envelope grids must align"

    def __len__(self) -> int:
        return len(self.radii)

    def __repr__(self) -> str:
        return f"PropernessProfile(points={len(self)})"

    def is_monotone(self) -> bool:
        return bool((np.diff(self.lower) >= 0).all() and (np.diff(self.upper) <= 0).all())

    def _at_or_above(self, r:float) -> Optional[int]:
        pos = int(np.searchsorted(self.radii, r, side="left"))
        return pos if pos < len(self.radii) else None

    def lower_at(self, r:float) -> Optional[float]:
        """m(r) for any r, None beyond the largest realized distance"""
        pos = self._at_or_above(r)
        return None if pos is None else float(self.lower[pos])

    def upper_at(self, r:float) -> Optional[float]:
        """M(r) for any r, None beyond the largest realized distance"""
        pos = self._at_or_above(r)
        return None if pos is None else float(self.upper[pos])

    def decay_radius(self, eps:float) -> Optional[float]:
        """Smallest realized r with M(r) <= eps"""
        hits = np.flatnonzero(self.upper <= eps)
        return float(self.radii[hits[0]]) if len(hits) else None

    def rows(self) -> List[tuple]:
        return [(float(r), float(m), float(M)) for r, m, M in zip(self.radii, self.lower, self.upper)]

    def to_dict(self) -> dict:
        return {"r":self.radii.tolist(), "lower":self.lower.tolist(), "upper":self.upper.tolist()}


def envelope_profile(d:np.ndarray,
                     a:np.ndarray,
                     select:np.ndarray=None,
                     off_diagonal:bool=True) -> PropernessProfile:
    """Suffix envelopes of values a grouped by distance d over selected pairs

    With off_diagonal False, d and a may be any equally shaped arrays
    and only the selection applies.
    """
    sel = np.ones(d.shape, dtype=bool) if select is None else np.asarray(select, dtype=bool)
    if off_diagonal:
        sel = sel & ~np.eye(d.shape[0], dtype=bool)
    dv, av = d[sel], a[sel]
    if dv.size == 0:
        return PropernessProfile(np.zeros(0), np.zeros(0), np.zeros(0))
    radii, inv = np.unique(dv, return_inverse=True)
    gmin = np.full(len(radii), np.inf)
    gmax = np.full(len(radii), -np.inf)
    np.minimum.at(gmin, inv, av)
    np.maximum.at(gmax, inv, av)
    lower = np.minimum.accumulate(gmin[::-1])[::-1]
    upper = np.maximum.accumulate(gmax[::-1])[::-1]
    return PropernessProfile(radii, lower, upper)


@log(set_logger=logger)
def properness_profile(k:Kernel,
                       mask:np.ndarray=None) -> PropernessProfile:
    """Lower and upper envelopes of |k| off the diagonal

    Args:
        k: kernel
        mask: optional boolean matrix restricting the evaluated pairs
    Returns:
        PropernessProfile
    """
    return envelope_profile(np.asarray(k.space.d), np.abs(k.values), mask)


class ApproximateUnit(object):
    """Indexed family of kernels u_lambda on one space

    Records diagonals, per-member profiles, the decay radius table
    R(lambda, eps) for a fixed eps grid and whether every member decays
    off the diagonal at this scale.
    """

    def __init__(self,
                 members:Sequence[Kernel],
                 labels:Sequence=None,
                 eps_grid:Sequence[float]=DEFAULT_EPS_GRID):
        """Instantiate

        Args:
            members: kernels on a common space
            labels: index labels, default 0..len-1
            eps_grid: eps values of the decay radius table
        """
        assert len(members) > 0, "Approximate unit needs at least one member"
        space = members[0].space
        for u in members[1:]:
            assert u.space is space or (u.space.points == space.points and np.array_equal(u.space.d, space.d)), \
                "All members must live on the same space"
        self.members:List[Kernel] = list(members)
        self.labels:list = list(range(len(members))) if labels is None else list(labels)
        assert len(self.labels) == len(self.members), "One label per member"
        self.space = space
        self.eps_grid:tuple = tuple(float(e) for e in eps_grid)
        self.diagonals:List[np.ndarray] = [np.real(np.diag(u.values)).copy() for u in self.members]
        self.profiles:List[PropernessProfile] = [properness_profile(u) for u in self.members]
        self.decay_table:Dict[float, list] = {eps:[p.decay_radius(eps) for p in self.profiles]
                                             for eps in self.eps_grid}

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"ApproximateUnit(members={len(self)}, n={self.space.n})"

    @classmethod
    def from_kernels(cls,
                     kernels:Sequence[Kernel],
                     labels:Sequence=None,
                     eps_grid:Sequence[float]=DEFAULT_EPS_GRID) -> "ApproximateUnit":
        return cls(kernels, labels, eps_grid)

    @property
    def in_c0(self) -> bool:
        """Every member decays off the diagonal across the realized distances"""
        if self.space.n < 2:
            return False
        return all(p.upper[-1] < p.upper[0] for p in self.profiles)

    def unit_deviation(self, radius:float) -> np.ndarray:
        """sup over B(R) of |1 - u_lambda| for every member"""
        mask = DiagonalNeighborhood(self.space, radius).mask
        return np.array([float(np.abs(1 - u.values)[mask].max()) for u in self.members])

    def deviation_table(self, radii:Sequence[float]) -> Dict[float, list]:
        return {float(R):self.unit_deviation(R).tolist() for R in radii}

    def positive_on(self, radius:float) -> Optional[int]:
        """First index after which every member has Re u > 0 on B(R)"""
        mask = DiagonalNeighborhood(self.space, radius).mask
        ok = [bool((np.real(u.values)[mask] > 0).all()) for u in self.members]
        for i in range(len(ok)):
            if all(ok[i:]):
                return i
        return None


@log(set_logger=logger)
def approximate_unit_from_proper(h:Kernel,
                                 t_schedule:Sequence[float],
                                 eps_grid:Sequence[float]=DEFAULT_EPS_GRID,
                                 tol:float=DEFAULT_TOL) -> ApproximateUnit:
    """Schoenberg family exp(-t h) along a decreasing schedule

    Args:
        h: negative type kernel, metrically proper at this scale
        t_schedule: strictly decreasing positive parameters
        eps_grid: eps values of the decay radius table
        tol: tolerance of the negative type check
    Returns:
        ApproximateUnit labelled by t
    """
    schedule = [float(t) for t in t_schedule]
    if not schedule:
        raise ValueError("Schedule is empty")
    if any(t <= 0 for t in schedule):
        raise ValueError("Schedule parameters must be positive")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("Schedule must be strictly decreasing")
    report = check_negative_type(h, tol)
    if not report:
        raise KernelCheckError(f"Kernel is not of negative type ({report.condition})", report)
    profile = properness_profile(h)
    if len(profile) and not (profile.lower[-1] > 0):
        logger.warning("kernel is not proper at this scale: family does not decay off the diagonal")
    au = ApproximateUnit([_exp_kernel(h, t) for t in schedule], labels=schedule, eps_grid=eps_grid)
    logger.info(f"approximate unit of {len(au)} members, in_c0={au.in_c0}")
    return au


@log(set_logger=logger)
def akemann_walter_synthesize(au:ApproximateUnit,
                              terms:int,
                              tol:float=DEFAULT_TOL) -> Kernel:
    """Proper negative type kernel h_N = sum_n 2^n Re(1 - u_n)

    u_n is the first member after u_(n-1) whose deviation from 1 on
    B(n) is at most 4^-n; members are renormalized to a unit diagonal
    first.

    Args:
        au: approximate unit of positive definite kernels
        terms: number of terms N
        tol: tolerance of the classification checks
    Returns:
        Kernel with meta["selected"] listing the chosen labels
    """
    assert terms >= 1, "Need at least one term"
    for label, u in zip(au.labels, au.members):
        report = check_positive_definite(u, tol)
        if not report:
            raise KernelCheckError(f"Member {label} is not positive definite", report)
    normalized = [unit_normalize(u) for u in au.members]

    selected = []
    start = 0
    for n in range(1, terms + 1):
        mask = DiagonalNeighborhood(au.space, n).mask
        bound = 4.0 ** (-n)
        pick = None
        for idx in range(start, len(normalized)):
            if np.abs(1 - normalized[idx].values)[mask].max() <= bound:
                pick = idx
                break
        if pick is None:
            raise SelectionError(f"No member after index {start} is within 4^-{n} of 1 on B({n})", n)
        selected.append(pick)
        start = pick + 1

    h = np.zeros((au.space.n, au.space.n))
    for n, idx in enumerate(selected, start=1):
        h += 2.0 ** n * np.real(1 - normalized[idx].values)
    h = (h + h.T) / 2
    np.fill_diagonal(h, 0.0)
    out = Kernel(au.space, h, meta={"source":"akemann-walter", "terms":terms,
                                    "selected":[au.labels[i] for i in selected],
                                    "indices":selected})

    report = check_negative_type(out, tol)
    if not report:
        raise ConsistencyError(f"Synthesized kernel failed the negative type check: {report!r}")
    profile = properness_profile(out)
    if not (np.diff(profile.lower) >= 0).all():
        raise ConsistencyError("Synthesized kernel has a decreasing lower envelope")
    if len(profile) and not profile.lower[0] > 0:
        logger.warning(f"synthesized kernel vanishes at distance {profile.radii[0]:g}, it is not proper")
    logger.info(f"synthesized from members {out.meta['selected']}")
    return out
