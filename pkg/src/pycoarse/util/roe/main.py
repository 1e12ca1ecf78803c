# Finite-width operators on group balls, completely positive maps and induced kernels
# contributors: smlee

# History
# 2026-10-17 | v1.0.1 - validate property (iii) radii
# 2026-10-17 | v1.0 - first commit

# Module import
from typing import Dict, List, Sequence, Tuple, Union
import numpy as np
from scipy import linalg, sparse
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log, MarginError, TruncationError, KernelCheckError, ConsistencyError
from pycoarse.util.spaces import GroupBall, DiagonalNeighborhood
from pycoarse.util.kernels import (Kernel, ClassificationReport, PropernessProfile, ApproximateUnit,
                                   DEFAULT_TOL, DEFAULT_EPS_GRID, pd_matrix_report, envelope_profile,
                                   check_positive_definite)

BOUND_SLACK = 1e-12

# Main
class BandOperator(object):
    """Finite-width matrix A(s,t) over the enumerated ball B(N + W)

    Rows s with l(s) <= exact_radius agree with the operator on the whole
    group; width and bound are recomputed from the stored entries.
    """

    def __init__(self,
                 ball:GroupBall,
                 matrix:Union[np.ndarray, sparse.spmatrix],
                 exact_radius:int=None):
        """Instantiate

        Args:
            ball: host ball with margin
            matrix: n_full x n_full matrix, dense or sparse
            exact_radius: largest row length on which the truncation is exact, default N + W
        """
        m = sparse.csr_matrix(matrix, dtype=complex)
        assert m.shape == (ball.n_full, ball.n_full), f"Operator shape {m.shape} does not match ball of {ball.n_full} elements"
        m.eliminate_zeros()
        m.sort_indices()
        self.ball = ball
        self.matrix:sparse.csr_matrix = m
        self.exact_radius:int = ball.outer_radius if exact_radius is None else int(exact_radius)
        self.width, self.bound = self._measure()

    def __repr__(self) -> str:
        return f"BandOperator(width={self.width}, bound={self.bound:.4g}, nnz={self.matrix.nnz}, exact={self.exact_radius})"

    def _measure(self) -> Tuple[int, float]:
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0, 0.0
        dist = self.ball.pair_distances(coo.row, coo.col)
        return int(dist.max()), float(np.abs(coo.data).max())

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def interior(self) -> sparse.csr_matrix:
        """Rows of the interior ball B(N)

        Raises:
            TruncationError when the interior rows are not exact
        """
        if self.exact_radius < self.ball.radius:
            raise TruncationError(f"Rows beyond radius {self.exact_radius} are truncated", self.exact_radius + 1)
        return self.matrix[:self.ball.n_interior]

    def interior_block(self) -> np.ndarray:
        """Compression to the interior ball as a dense matrix"""
        n = self.ball.n_interior
        return self.interior()[:, :n].toarray()

    def verify(self) -> bool:
        """Re-check |A(s,t)| <= bound and A(s,t) = 0 for d(s,t) > width"""
        width, bound = self._measure()
        return width == self.width and bound == self.bound

    def entries(self) -> List[tuple]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), complex(coo.data[k])) for k in order]


def _translation(g, ball:GroupBall) -> Tuple[np.ndarray, np.ndarray]:
    # A(g.r, r) = 1 for every r whose translate stays in the ball
    rows, cols = [], []
    for j, r in enumerate(ball.elements):
        gr = ball.group.multiply(g, r)
        if ball.contains(gr):
            rows.append(ball.index_of(gr))
            cols.append(j)
    return np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64)


def _check_translation(g, ball:GroupBall):
    if ball.length(g) > ball.margin:
        raise MarginError(f"Translation by {ball.label(g)} of length {ball.length(g)} exceeds margin {ball.margin}")


@log(set_logger=logger)
def left_regular(t, ball:GroupBall) -> BandOperator:
    """Left regular representation: A(s,r) = 1 iff s = t r

    Args:
        t: group element with l(t) <= margin
        ball: host ball
    Returns:
        BandOperator of width l(t) and bound 1
    """
    _check_translation(t, ball)
    rows, cols = _translation(t, ball)
    m = sparse.csr_matrix((np.ones(len(rows), dtype=complex), (rows, cols)), shape=(ball.n_full,) * 2)
    return BandOperator(ball, m, exact_radius=ball.outer_radius - ball.length(t))


@log(set_logger=logger)
def band_compose(a:BandOperator, b:BandOperator) -> BandOperator:
    """Matrix product AB, exact on rows up to min(exact(A), exact(B) - width(A))

    Raises:
        TruncationError naming the first inexact shell when that drops below N
    """
    assert a.ball is b.ball, "Operators must share the host ball"
    ball = a.ball
    exact = min(a.exact_radius, b.exact_radius - a.width)
    if exact < ball.radius:
        raise TruncationError(f"Product of widths {a.width} and {b.width} is inexact beyond shell {exact} "
                              f"inside the interior radius {ball.radius}; increase the margin", exact + 1)
    out = BandOperator(ball, a.matrix @ b.matrix, exact_radius=exact)
    if out.width > a.width + b.width:
        raise ConsistencyError(f"Width {out.width} exceeds {a.width} + {b.width}")
    return out


@log(set_logger=logger)
def band_adjoint(a:BandOperator) -> BandOperator:
    """Conjugate transpose, same width"""
    out = BandOperator(a.ball, a.matrix.conj().T.tocsr(), exact_radius=a.exact_radius - a.width)
    if out.width != a.width:
        raise ConsistencyError(f"Adjoint changed the width from {a.width} to {out.width}")
    return out


# Completely positive map specs
class Functional(object):
    """Finite sum of matrix coefficients a -> sum w <delta_x, a delta_y>"""

    def __init__(self, evaluations:Sequence[Tuple[int, int, complex]]):
        """Instantiate

        Args:
            evaluations: (x, y, weight) with x, y ball element indices
        """
        self.evaluations:List[tuple] = [(int(x), int(y), complex(w)) for x, y, w in evaluations]
        assert self.evaluations, "Functional needs at least one evaluation"

    def __repr__(self) -> str:
        return f"Functional(terms={len(self.evaluations)}, norm={self.norm:.4g})"

    @property
    def norm(self) -> float:
        """Sum of |weights|, an upper bound for the functional norm"""
        return float(sum(abs(w) for _, _, w in self.evaluations))

    def check_ball(self, ball:GroupBall):
        for x, y, _ in self.evaluations:
            if not (0 <= x < ball.n_full and 0 <= y < ball.n_full):
                raise MarginError(f"Functional evaluates at ({x},{y}) outside the {ball.n_full} enumerated elements")

    def evaluate(self, op:BandOperator) -> complex:
        self.check_ball(op.ball)
        return complex(sum(w * op.matrix[x, y] for x, y, w in self.evaluations))

    def evaluate_translation(self, g, ball:GroupBall) -> complex:
        """f(lambda_g) computed from the group law"""
        self.check_ball(ball)
        el = ball.elements
        return complex(sum(w for x, y, w in self.evaluations if ball.group.multiply(g, el[y]) == el[x]))


class IdentityMap(object):
    """The identity map on the truncated operators"""

    kind = "identity"

    def __init__(self, ball:GroupBall):
        self.ball = ball

    def __repr__(self) -> str:
        return "IdentityMap()"


class SchurMultiplier(object):
    """Entrywise multiplication by a positive definite kernel with unit diagonal"""

    kind = "schur"

    def __init__(self,
                 kernel:Kernel,
                 tol:float=DEFAULT_TOL):
        """Instantiate

        Args:
            kernel: kernel on the enumerated ball (ball.full_space)
            tol: tolerance of the positivity and unit diagonal checks
        Raises:
            KernelCheckError when the kernel is not positive definite with unit diagonal
        """
        ball = kernel.space.ball
        assert ball is not None and kernel.n == ball.n_full, "Schur kernel must live on the enumerated group ball"
        diag = np.diag(kernel.values)
        if np.abs(diag - 1).max() > tol:
            raise KernelCheckError("Schur multiplier kernel must have unit diagonal")
        report = check_positive_definite(kernel, tol)
        if not report:
            raise KernelCheckError("Schur multiplier kernel is not positive definite", report)
        self.ball = ball
        self.kernel = kernel

    def __repr__(self) -> str:
        return f"SchurMultiplier({self.kernel!r})"


class FiniteRankMap(object):
    """T(a) = sum_i f_i(a) S_i"""

    kind = "finite-rank"

    def __init__(self, terms:Sequence[Tuple[Functional, BandOperator]]):
        self.terms:List[tuple] = list(terms)
        assert self.terms, "Finite rank map needs at least one term"
        self.ball = self.terms[0][1].ball
        for f, op in self.terms:
            assert op.ball is self.ball, "All operators must share the host ball"
            f.check_ball(self.ball)

    def __repr__(self) -> str:
        return f"FiniteRankMap(terms={len(self.terms)}, width={self.width})"

    @property
    def width(self) -> int:
        return max(op.width for _, op in self.terms)


CPMapSpec = Union[IdentityMap, SchurMultiplier, FiniteRankMap]


@log(set_logger=logger)
def apply_cp_map(cp:CPMapSpec, g) -> BandOperator:
    """T(lambda_g)

    Args:
        cp: IdentityMap, SchurMultiplier or FiniteRankMap
        g: group element within the margin
    Returns:
        BandOperator
    """
    ball = cp.ball
    _check_translation(g, ball)
    if isinstance(cp, IdentityMap):
        return left_regular(g, ball)
    elif isinstance(cp, SchurMultiplier):
        rows, cols = _translation(g, ball)
        data = np.asarray(cp.kernel.values)[rows, cols].astype(complex)
        m = sparse.csr_matrix((data, (rows, cols)), shape=(ball.n_full,) * 2)
        return BandOperator(ball, m, exact_radius=ball.outer_radius - ball.length(g))
    elif isinstance(cp, FiniteRankMap):
        total = sparse.csr_matrix((ball.n_full, ball.n_full), dtype=complex)
        for f, op in cp.terms:
            total = total + f.evaluate_translation(g, ball) * op.matrix
        exact = min(op.exact_radius for _, op in cp.terms)
        return BandOperator(ball, total, exact_radius=exact)
    raise TypeError(f"Unknown completely positive map spec: {cp!r}")


class InducedKernel(object):
    """u(s,t) = <delta_s, T(st^-1) delta_t> on interior pairs with l(st^-1) <= margin"""

    def __init__(self,
                 kernel:Kernel,
                 mask:np.ndarray,
                 cp:CPMapSpec):
        self.kernel = kernel
        self.mask:np.ndarray = mask
        self.cp = cp

    def __repr__(self) -> str:
        return f"InducedKernel({self.cp!r}, evaluated={int(self.mask.sum())}/{self.mask.size})"

    @property
    def values(self) -> np.ndarray:
        return self.kernel.values

    @property
    def complete(self) -> bool:
        return bool(self.mask.all())


def _pairs_by_translation(ball:GroupBall, mask:np.ndarray) -> Dict[object, Tuple[list, list]]:
    el = ball.elements
    groups = {}
    for i, j in np.argwhere(mask):
        g = ball.group.multiply(el[i], ball.inverse(el[j]))
        rows, cols = groups.setdefault(g, ([], []))
        rows.append(int(i))
        cols.append(int(j))
    return groups


@log(set_logger=logger)
def induced_kernel(cp:CPMapSpec, ball:GroupBall=None) -> InducedKernel:
    """Kernel induced on the interior ball by a completely positive map

    Args:
        cp: map spec
        ball: host ball, defaults to the ball the map lives on
    Returns:
        InducedKernel, zero outside the evaluated pairs
    """
    ball = cp.ball if ball is None else ball
    assert ball is cp.ball, "Map spec lives on another ball"
    space = ball.space
    mask = np.asarray(space.d) <= ball.margin
    values = np.zeros((space.n, space.n), dtype=complex)
    for g, (rows, cols) in _pairs_by_translation(ball, mask).items():
        op = apply_cp_map(cp, g)
        if op.exact_radius < ball.radius:
            raise TruncationError(f"T({ball.label(g)}) is inexact inside the interior ball", op.exact_radius + 1)
        values[rows, cols] = np.asarray(op.matrix[rows, cols]).ravel()
    if not values.imag.any():
        values = values.real
    mask.setflags(write=False)
    u = InducedKernel(Kernel(space, values, meta={"source":"induced", "map":cp.kind}), mask, cp)
    logger.debug(f"{u!r}")
    return u


@log(set_logger=logger)
def approximate_unit_from_schedule(schedule:Sequence[CPMapSpec],
                                   labels:Sequence=None,
                                   eps_grid:Sequence[float]=DEFAULT_EPS_GRID) -> ApproximateUnit:
    """Approximate unit formed by the kernels induced along a schedule of maps

    Raises:
        MarginError when the margin does not cover every interior pair (W < 2N)
    """
    assert len(schedule) > 0, "Schedule is empty"
    members = []
    for cp in schedule:
        u = induced_kernel(cp)
        if not u.complete:
            raise MarginError(f"Margin {cp.ball.margin} does not cover all interior pairs; need at least {2 * cp.ball.radius}")
        members.append(u.kernel)
    return ApproximateUnit.from_kernels(members, labels, eps_grid)


def block_matrix(cp:CPMapSpec, sample:Sequence) -> np.ndarray:
    """[T(s_i s_j^-1)] compressed to the interior ball

    Args:
        cp: map spec
        sample: interior group elements s_1..s_m
    Returns:
        dense (m n) x (m n) matrix with n interior elements
    """
    ball = cp.ball
    for s in sample:
        if ball.length(s) > ball.radius:
            raise MarginError(f"Sample element {ball.label(s)} lies outside the interior ball")
    n, m = ball.n_interior, len(sample)
    out = np.zeros((m * n, m * n), dtype=complex)
    for i, si in enumerate(sample):
        for j, sj in enumerate(sample):
            g = ball.group.multiply(si, ball.inverse(sj))
            out[i * n:(i + 1) * n, j * n:(j + 1) * n] = apply_cp_map(cp, g).interior_block()
    return out


@log(set_logger=logger)
def verify_property_i(cp:CPMapSpec,
                      sample:Sequence,
                      tol:float=DEFAULT_TOL) -> ClassificationReport:
    """Positivity of the block matrix [T(s_i s_j^-1)] and of u on the sample

    Args:
        cp: IdentityMap or SchurMultiplier
        sample: interior group elements
        tol: tolerance of the eigenchecks
    Returns:
        ClassificationReport with both verdicts in details
    """
    if not isinstance(cp, (IdentityMap, SchurMultiplier)):
        raise ValueError("Block positivity is certified for identity and Schur multiplier maps only")
    ball = cp.ball
    B = block_matrix(cp, sample)
    n = ball.n_interior
    idx = [ball.index_of(s) for s in sample]
    # u(s_i, s_j) is the (s_i, s_j) entry of the (i, j) block
    U = np.array([[B[i * n + idx[i], j * n + idx[j]] for j in range(len(sample))] for i in range(len(sample))])
    block = pd_matrix_report(B, tol, check="block")
    scalar = pd_matrix_report(U, tol, check="scalar")
    verdict = block.verdict and scalar.verdict
    failed = block if not block.verdict else scalar
    report = ClassificationReport("property-i", verdict, block.extremal_eigenvalue, tol,
                                  condition=None if verdict else failed.condition,
                                  witness=None if verdict else failed.witness,
                                  points=[ball.label(s) for s in sample],
                                  details={"block":block, "scalar":scalar,
                                           "agree":block.verdict == scalar.verdict})
    logger.info(f"{report!r}")
    return report


@log(set_logger=logger)
def verify_property_ii(cp:FiniteRankMap,
                       eps_grid:Sequence[float]=DEFAULT_EPS_GRID) -> PropernessProfile:
    """Decay envelope of the kernel induced by a finite rank map

    Asserts M(r) <= sum_i |f_i| max_{d >= r} |S_i| and that u vanishes
    beyond the largest width.

    Args:
        cp: FiniteRankMap
        eps_grid: eps values whose decay radii are logged
    Returns:
        PropernessProfile of |u| over the evaluated pairs
    """
    assert isinstance(cp, FiniteRankMap), "Property (ii) applies to finite rank maps"
    ball = cp.ball
    n = ball.n_interior
    u = induced_kernel(cp)
    d = np.asarray(ball.space.d)
    absu = np.abs(u.values)
    profile = envelope_profile(d, absu, u.mask)

    pointwise = np.zeros((n, n))
    bound = np.zeros(len(profile))
    for f, op in cp.terms:
        S = np.abs(op.interior_block())
        pointwise += f.norm * S
        bound += f.norm * envelope_profile(d, S, u.mask).upper
    if (absu[u.mask] > pointwise[u.mask] * (1 + BOUND_SLACK) + 1e-15).any():
        raise ConsistencyError("Induced kernel exceeds the rank-one bound")
    if (profile.upper > bound * (1 + BOUND_SLACK) + 1e-15).any():
        raise ConsistencyError("Decay envelope exceeds the finite rank bound")
    beyond = profile.radii > cp.width
    if (profile.upper[beyond] != 0).any():
        raise ConsistencyError(f"Induced kernel does not vanish beyond width {cp.width}")
    for eps in eps_grid:
        logger.info(f"decay radius at eps={eps}: {profile.decay_radius(eps)}")
    return profile


class ConvergenceTable(object):
    """Rows (k, R, sup_dev, op_dev) along a schedule of maps"""

    columns = ("k", "R", "sup_dev", "op_dev")

    def __init__(self, rows:Sequence[tuple]):
        self.rows:List[tuple] = [(int(k), float(R), float(s), float(o)) for k, R, s, o in rows]

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"ConvergenceTable(rows={len(self)})"

    def for_radius(self, R:float) -> List[tuple]:
        return [row for row in self.rows if row[1] == float(R)]

    def sup_deviations(self, R:float) -> np.ndarray:
        return np.array([row[2] for row in self.for_radius(R)])

    def bound_holds(self) -> bool:
        return all(s <= o * (1 + BOUND_SLACK) + 1e-15 for _, _, s, o in self.rows)

    def to_dict(self) -> dict:
        return {"columns":list(self.columns), "rows":[list(row) for row in self.rows]}


@log(set_logger=logger)
def verify_property_iii(schedule:Sequence[CPMapSpec],
                        radii:Union[float, Sequence[float]]) -> ConvergenceTable:
    """Uniform convergence of induced kernels to 1 near the diagonal

    For every map T_k and radius R: sup over B(R) of |u_k - 1| and the
    largest spectral norm of T_k(lambda_g) - lambda_g on the interior over
    l(g) < R, with the first bounded by the second.

    Args:
        schedule: maps T_1, T_2, ... on one ball
        radii: radius or radii R
    Returns:
        ConvergenceTable
    """
    if not schedule:
        raise ValueError("Schedule is empty")
    ball = schedule[0].ball
    assert all(cp.ball is ball for cp in schedule), "Schedule maps must share the host ball"
    radii = [float(radii)] if np.isscalar(radii) else [float(R) for R in radii]
    if not radii or any(not R > 0 for R in radii):
        raise ValueError(f"Radii must be a nonempty list of positive numbers, got {radii}")
    for R in radii:
        if R > ball.margin + 1:
            raise MarginError(f"Radius {R} needs a margin of at least {int(np.ceil(R)) - 1}, have {ball.margin}")
    r_max = max(radii)
    shell = [g for g in ball.elements if ball.length(g) < r_max]
    lam = {g:left_regular(g, ball).interior_block() for g in shell}
    masks = {R:DiagonalNeighborhood(ball.space, R).mask for R in radii}

    rows = []
    for k, cp in enumerate(schedule, start=1):
        u = induced_kernel(cp)
        dev = {g:float(linalg.svdvals(apply_cp_map(cp, g).interior_block() - lam[g])[0]) for g in shell}
        for R in radii:
            sel = masks[R] & u.mask
            sup = float(np.abs(1 - u.values)[sel].max())
            op = max(dev[g] for g in shell if ball.length(g) < R)
            if sup > op * (1 + BOUND_SLACK) + 1e-15:
                raise ConsistencyError(f"Row k={k}, R={R}: sup deviation {sup:.6e} exceeds operator deviation {op:.6e}")
            rows.append((k, R, sup, op))
    table = ConvergenceTable(rows)
    logger.info(f"{table!r}")
    return table
