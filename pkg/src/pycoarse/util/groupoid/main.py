# Functions on the transformation groupoid sampled on the dense orbit
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
from typing import Dict, List, Sequence
import numpy as np
import logging
logger = logging.getLogger('pycoarse')
from pycoarse.conf import log, MarginError, ConsistencyError
from pycoarse.util.spaces import DiscreteMetricSpace, GroupBall
from pycoarse.util.kernels import (Kernel, ClassificationReport, PropernessProfile, ApproximateUnit,
                                   DEFAULT_TOL, pd_matrix_report, nt_matrix_report, envelope_profile,
                                   check_negative_type)

# Main
class GroupoidKernel(object):
    """phi(x, t) on base points x of a ball prefix and arrows t of the enumerated ball

    The pair (x, t) is defined when the target x.t lies in the base set.
    Undefined entries hold zero.
    """

    def __init__(self,
                 space:DiscreteMetricSpace,
                 values:np.ndarray,
                 defined:np.ndarray=None,
                 meta:dict=None):
        """Instantiate

        Args:
            space: base space, the interior or enumerated space of a group ball
            values: n_base x n_full matrix
            defined: mask of defined pairs, default from the group law
            meta: provenance information
        """
        ball = space.ball
        assert ball is not None, "Groupoid kernels live on group balls"
        values = np.array(values)
        values = values.astype(complex) if np.iscomplexobj(values) else values.astype(float)
        assert values.shape == (space.n, ball.n_full), f"Groupoid kernel shape {values.shape} does not match ({space.n}, {ball.n_full})"
        if defined is None:
            defined = ball.product_indices(space.n) >= 0
        defined = np.array(defined, dtype=bool)
        assert defined.shape == values.shape, "Mask must match the values"
        values[~defined] = 0
        values.setflags(write=False)
        defined.setflags(write=False)
        self.space = space
        self.ball:GroupBall = ball
        self.values:np.ndarray = values
        self.defined:np.ndarray = defined
        self.meta:dict = dict(meta or {})

    def __repr__(self) -> str:
        return f"GroupoidKernel(bases={self.n_base}, arrows={self.ball.n_full}, source={self.meta.get('source', 'input')})"

    @property
    def n_base(self) -> int:
        return self.space.n

    @property
    def targets(self) -> np.ndarray:
        """Index of x.t in the base set, -1 when undefined"""
        return self.ball.product_indices(self.n_base)


class HaagerupCertificate(object):
    """Groupoid negative type verdict with arrow properness profiles"""

    def __init__(self,
                 nt_report:ClassificationReport,
                 arrow_profile:PropernessProfile,
                 displacement_profile:PropernessProfile,
                 sampled_bases:List):
        self.nt_report = nt_report
        self.arrow_profile = arrow_profile
        self.displacement_profile = displacement_profile
        self.sampled_bases = list(sampled_bases)

    def __repr__(self) -> str:
        return f"HaagerupCertificate(nt={self.nt_verdict}, proper={self.proper}, bases={len(self.sampled_bases)})"

    @property
    def nt_verdict(self) -> bool:
        return self.nt_report.verdict

    @property
    def proper(self) -> bool:
        """Displacement lower envelope strictly positive and growing"""
        p = self.displacement_profile
        if not len(p):
            return False
        return bool(p.lower[0] > 0 and (len(p) == 1 or p.lower[-1] > p.lower[0]))

    def to_dict(self) -> dict:
        return {"nt_verdict":self.nt_verdict,
                "proper":self.proper,
                "properness_profile":self.arrow_profile.to_dict(),
                "displacement_profile":self.displacement_profile.to_dict(),
                "sampled_bases":self.sampled_bases,
                "nt_report":self.nt_report.to_dict()}


def _quotient_indices(ball:GroupBall, left:Sequence, right:Sequence) -> np.ndarray:
    """Index of s^-1 t for s in left, t in right

    Raises:
        MarginError when an arrow leaves the enumerated ball
    """
    out = np.zeros((len(left), len(right)), dtype=np.int64)
    for i, s in enumerate(left):
        s_inv = ball.inverse(s)
        for j, t in enumerate(right):
            out[i, j] = ball.index_of(ball.group.multiply(s_inv, t))
    return out


@log(set_logger=logger)
def alpha_star(f:Kernel) -> GroupoidKernel:
    """g(x, t) = f(x, x.t)

    Args:
        f: kernel on the interior or enumerated space of a group ball
    Returns:
        GroupoidKernel with the pairs whose target leaves the space masked
    """
    ball = f.space.ball
    if ball is None:
        raise ValueError("Kernel does not live on a group ball")
    n = f.n
    P = ball.product_indices(n)
    defined = P >= 0
    rows = np.broadcast_to(np.arange(n)[:, None], P.shape)
    values = np.zeros(P.shape, dtype=f.values.dtype)
    values[defined] = f.values[rows[defined], P[defined]]
    return GroupoidKernel(f.space, values, defined, meta={**f.meta, "source":"alpha"})


@log(set_logger=logger)
def beta_star(g:GroupoidKernel) -> Kernel:
    """f(s, t) = g(s, s^-1 t)

    Raises:
        MarginError when some s^-1 t lies outside the enumerated ball
    """
    ball = g.ball
    base = ball.elements[:g.n_base]
    Q = _quotient_indices(ball, base, base)
    rows = np.broadcast_to(np.arange(g.n_base)[:, None], Q.shape)
    return Kernel(g.space, g.values[rows, Q], meta={**g.meta, "source":"beta"})


def default_arrows(phi:GroupoidKernel) -> list:
    """Elements of length at most half the base radius"""
    ball = phi.ball
    rho = int(ball.lengths[phi.n_base - 1])
    return [t for t, l in zip(ball.elements, ball.lengths) if l <= rho // 2]


def _sample(phi:GroupoidKernel,
            bases:Sequence=None,
            arrows:Sequence=None):
    ball = phi.ball
    arrows = default_arrows(phi) if arrows is None else list(arrows)
    assert arrows, "Arrow sample is empty"
    arrow_idx = np.array([ball.index_of(s) for s in arrows], dtype=np.int64)
    Q = _quotient_indices(ball, arrows, arrows)
    T = phi.targets[:, arrow_idx]
    safe = (T >= 0).all(axis=1)
    if bases is None:
        base_idx = [x for x in range(min(phi.n_base, ball.n_interior)) if safe[x]]
    else:
        base_idx = []
        for x in bases:
            i = ball.index_of(x)
            if i >= phi.n_base or not safe[i]:
                raise MarginError(f"Base {ball.label(x)} translated by the arrow sample leaves the base set")
            base_idx.append(i)
    return arrows, base_idx, T, Q


def safe_bases(phi:GroupoidKernel, arrows:Sequence=None) -> list:
    """Interior bases whose translates by the arrow sample stay in the base set"""
    _, base_idx, _, _ = _sample(phi, None, arrows)
    return [phi.ball.elements[x] for x in base_idx]


def _aggregate(check:str,
               phi:GroupoidKernel,
               reports:Dict[int, ClassificationReport],
               arrows:Sequence,
               tol:float,
               pick) -> ClassificationReport:
    ball = phi.ball
    labels = [ball.label(ball.elements[x]) for x in reports]
    failed = [(x, r) for x, r in reports.items() if not r.verdict]
    finite = [r.extremal_eigenvalue for r in reports.values() if np.isfinite(r.extremal_eigenvalue)]
    extremal = pick(finite) if finite else 0.0
    details = {"bases":labels, "base_indices":list(reports)}
    if not failed:
        return ClassificationReport(check, True, extremal, tol, points=[ball.label(s) for s in arrows], details=details)
    x, r = failed[0]
    details["base"] = ball.label(ball.elements[x])
    details["base_report"] = r
    return ClassificationReport(check, False, r.extremal_eigenvalue, tol, condition=r.condition,
                                witness=r.witness, points=[ball.label(s) for s in arrows], details=details)


@log(set_logger=logger)
def check_groupoid_pd(phi:GroupoidKernel,
                      bases:Sequence=None,
                      arrows:Sequence=None,
                      tol:float=DEFAULT_TOL) -> ClassificationReport:
    """Eigencheck of [phi(x.s_i, s_i^-1 s_j)] for every sampled base x

    Args:
        phi: groupoid kernel
        bases: base elements, default every interior base whose translates stay in the base set
        arrows: arrow sample s_1..s_m, default the elements of length up to half the base radius
        tol: relative tolerance
    Returns:
        ClassificationReport, details["base"] names the first failing base
    """
    arrows, base_idx, T, Q = _sample(phi, bases, arrows)
    reports = {x:pd_matrix_report(phi.values[T[x][:, None], Q], tol, check="groupoid-pd") for x in base_idx}
    report = _aggregate("groupoid-pd", phi, reports, arrows, tol, min)
    logger.info(f"{report!r} over {len(base_idx)} bases")
    return report


@log(set_logger=logger)
def check_groupoid_nt(psi:GroupoidKernel,
                      bases:Sequence=None,
                      arrows:Sequence=None,
                      tol:float=DEFAULT_TOL) -> ClassificationReport:
    """psi(x, e) = 0, psi(x.s, s^-1 t) = psi(x.t, t^-1 s) and the mean-zero eigencheck per base

    Args:
        psi: real groupoid kernel
        bases: base elements, default every interior base whose translates stay in the base set
        arrows: arrow sample, default the elements of length up to half the base radius
        tol: relative tolerance
    Returns:
        ClassificationReport, details["base"] names the first failing base
    """
    arrows, base_idx, T, Q = _sample(psi, bases, arrows)
    values = psi.values
    if np.iscomplexobj(values):
        scale = float(np.abs(values).max())
        if np.abs(values.imag).max() > tol * scale:
            raise ValueError("Negative type check needs a real-valued groupoid kernel")
        values = values.real
    scale = float(np.abs(values).max()) if values.size else 0.0
    ball = psi.ball
    # identity arrow is enumerated first
    for x in base_idx:
        if abs(values[x, 0]) > tol * scale:
            report = ClassificationReport("groupoid-nt", False, float("nan"), tol, condition="diagonal",
                                          points=[ball.label(ball.elements[x])],
                                          details={"base":ball.label(ball.elements[x]),
                                                   "value":float(values[x, 0])})
            logger.info(f"{report!r}")
            return report
    reports = {x:nt_matrix_report(values[T[x][:, None], Q], tol, check="groupoid-nt") for x in base_idx}
    report = _aggregate("groupoid-nt", psi, reports, arrows, tol, max)
    logger.info(f"{report!r} over {len(base_idx)} bases")
    return report


def arrow_profile(phi:GroupoidKernel,
                  bases:Sequence[int]=None,
                  variable:str="length") -> PropernessProfile:
    """Envelopes of |phi(x,t)| over defined pairs with t != e

    Args:
        phi: groupoid kernel
        bases: base indices, default every base point
        variable: "length" groups by l(t), "displacement" by d(x, x.t)
    Returns:
        PropernessProfile
    """
    ball = phi.ball
    rows = np.arange(phi.n_base) if bases is None else np.asarray(bases, dtype=np.int64)
    targets = phi.targets[rows]
    select = phi.defined[rows].copy()
    select[:, 0] = False
    if variable == "length":
        grid = np.broadcast_to(ball.lengths[None, :], targets.shape).astype(float)
    elif variable == "displacement":
        d = np.asarray(phi.space.d)
        grid = np.where(targets >= 0, d[rows[:, None], np.maximum(targets, 0)], 0.0)
    else:
        raise ValueError(f"Unknown profile variable: {variable!r}")
    return envelope_profile(grid, np.abs(phi.values[rows]), select, off_diagonal=False)


@log(set_logger=logger)
def haagerup_certificate(h:Kernel,
                         bases:Sequence=None,
                         arrows:Sequence=None,
                         tol:float=DEFAULT_TOL) -> HaagerupCertificate:
    """Groupoid negative type check and arrow properness of alpha*(h)

    Args:
        h: negative type kernel on a group ball
        bases: base elements of the groupoid check
        arrows: arrow sample of the groupoid check
        tol: relative tolerance
    Returns:
        HaagerupCertificate
    Raises:
        ValueError when h is not of negative type
        ConsistencyError when alpha*(h) fails the groupoid check
    """
    report = check_negative_type(h, tol)
    if not report:
        raise ValueError(f"Kernel is not of negative type ({report.condition})")
    psi = alpha_star(h)
    nt = check_groupoid_nt(psi, bases, arrows, tol)
    if not nt:
        raise ConsistencyError(f"alpha* of a negative type kernel failed the groupoid check at base {nt.details.get('base')}")
    sampled = nt.details["base_indices"]
    cert = HaagerupCertificate(nt, arrow_profile(psi, sampled, "length"),
                               arrow_profile(psi, sampled, "displacement"),
                               nt.details["bases"])
    logger.info(f"{cert!r}")
    return cert


@log(set_logger=logger)
def unit_deviation_table(au:ApproximateUnit,
                         radii:Sequence[float],
                         variable:str="displacement") -> Dict[float, list]:
    """sup of |1 - alpha*(u)(x,t)| over defined pairs with arrow variable below R, per member

    Args:
        au: approximate unit on a group ball space
        radii: radii R
        variable: "displacement" or "length"
    Returns:
        dict R -> deviations per member
    """
    table = {float(R):[] for R in radii}
    for u in au.members:
        phi = alpha_star(u)
        if variable == "length":
            grid = np.broadcast_to(phi.ball.lengths[None, :], phi.values.shape)
        elif variable == "displacement":
            targets = phi.targets
            grid = np.where(targets >= 0, np.asarray(phi.space.d)[np.arange(phi.n_base)[:, None], np.maximum(targets, 0)], np.inf)
        else:
            raise ValueError(f"Unknown profile variable: {variable!r}")
        dev = np.abs(1 - phi.values)
        for R in table:
            sel = phi.defined & (grid < R)
            table[R].append(float(dev[sel].max()))
    return table


@log(set_logger=logger)
def descend_to_group(h:Kernel,
                     tol:float=DEFAULT_TOL) -> np.ndarray:
    """The function g -> h(g, e) of a right-invariant kernel

    Args:
        h: kernel on a group ball space with h(sr, tr) = h(s, t)
        tol: relative tolerance of the invariance check
    Returns:
        values aligned with h.space.points
    Raises:
        ConsistencyError when h is not right-invariant on the base set
    """
    ball = h.space.ball
    if ball is None:
        raise ValueError("Kernel does not live on a group ball")
    n = h.n
    el = ball.elements
    phi = np.array(h.values[:, 0])
    scale = float(np.abs(h.values).max()) if h.values.size else 0.0
    for i in range(n):
        for j in range(n):
            g = ball.group.multiply(el[i], ball.inverse(el[j]))
            k = ball.index_of(g) if ball.contains(g) else n
            if k < n and abs(h.values[i, j] - phi[k]) > tol * scale:
                raise ConsistencyError(f"Kernel is not right-invariant at ({ball.label(el[i])}, {ball.label(el[j])})")
    return phi
