# Tests for kernel classification, Schoenberg families and Akemann-Walter synthesis
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import numpy as np
import pytest
from hypothesis import given, settings, seed
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from pycoarse.conf import Logger, KernelCheckError, SelectionError
from pycoarse.util.spaces import LatticeGroup, FreeGroup, DiagonalNeighborhood, cayley_ball, validate_metric
from pycoarse.util.kernels import (Kernel, ApproximateUnit, check_positive_definite, check_negative_type,
                                   schoenberg_transform, unit_normalize, distance_kernel, properness_profile,
                                   approximate_unit_from_proper, akemann_walter_synthesize)
from conftest import point_cloud_kernel, unit_gram

# Main
def _simplex(n:int):
    d = np.ones((n, n))
    np.fill_diagonal(d, 0)
    return validate_metric(d)


def test_positive_definite_examples():
    assert check_positive_definite(np.ones((3, 3)))
    assert check_positive_definite(np.eye(3))
    report = check_positive_definite(Kernel(_simplex(3), np.ones((3, 3)) - np.eye(3)))
    assert not report
    assert report.condition == "eigenvalue"
    assert report.extremal_eigenvalue == pytest.approx(-1.0)
    z = report.witness
    K = np.ones((3, 3)) - np.eye(3)
    assert np.real(z.conj() @ K @ z) == pytest.approx(-1.0)


def test_positive_definite_rejects_non_hermitian():
    report = check_positive_definite(np.array([[1.0, 0.5], [0.0, 1.0]]))
    assert not report and report.condition == "hermitian"


def test_positive_definite_agrees_with_quadratic_forms(rng):
    # 10,000 random complex vectors per kernel on at most 6 points
    for trial in range(40):
        n = int(rng.integers(2, 7))
        Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        eig = rng.uniform(0.05, 1.0, n)
        if trial % 2:
            eig[0] = -rng.uniform(0.5, 1.0)
        K = Q @ np.diag(eig) @ Q.conj().T
        K = (K + K.conj().T) / 2
        Z = rng.normal(size=(10000, n)) + 1j * rng.normal(size=(10000, n))
        forms = np.einsum("ki,ij,kj->k", Z.conj(), K, Z).real
        report = check_positive_definite(K)
        assert bool(report) == bool((forms >= 0).all())
        if not report:
            z = report.witness
            assert np.real(z.conj() @ K @ z) < 0


def test_negative_type_examples(path3):
    assert check_negative_type(np.zeros((3, 3)))
    assert check_negative_type(Kernel(path3, path3.d))
    report = check_negative_type(-np.eye(3))
    assert not report and report.condition == "diagonal"
    report = check_negative_type(np.array([[0.0, 1.0], [2.0, 0.0]]))
    assert not report and report.condition == "symmetry"


def test_negative_type_witness_is_mean_zero():
    h = -(np.ones((4, 4)) - np.eye(4))
    report = check_negative_type(h)
    assert not report
    a = report.witness
    assert abs(a.sum()) < 1e-12
    assert a @ h @ a > 0


def test_schoenberg_examples(path3):
    zero = Kernel(path3, np.zeros((3, 3)))
    assert np.array_equal(schoenberg_transform(zero, 2.5).values, np.ones((3, 3)))
    k = schoenberg_transform(Kernel(path3, path3.d), 1.0)
    e = np.exp(-1.0)
    assert np.allclose(k.values, [[1, e, e ** 2], [e, 1, e], [e ** 2, e, 1]])
    assert check_positive_definite(k)
    assert k.meta["t"] == 1.0


def test_schoenberg_rejects_bad_input(path3):
    with pytest.raises(ValueError):
        schoenberg_transform(Kernel(path3, path3.d), 0.0)
    with pytest.raises(KernelCheckError) as e:
        schoenberg_transform(Kernel(path3, -path3.d), 1.0)
    assert not e.value.report


def test_schoenberg_suite(rng):
    # 200 random point clouds, three parameters each
    for _ in range(200):
        n = int(rng.integers(2, 13))
        h = point_cloud_kernel(rng, n)
        space = validate_metric(np.sqrt(h))
        for t in (0.1, 1.0, 10.0):
            k = schoenberg_transform(Kernel(space, h), t, tol=1e-8)
            assert check_positive_definite(k, tol=1e-8)
            assert (np.diag(k.values) == 1.0).all()


@seed(3)
@settings(max_examples=50, deadline=None)
@given(points=arrays(np.float64, (6, 2), elements=st.floats(min_value=-10, max_value=10)),
       t=st.floats(min_value=1e-3, max_value=10))
def test_gaussian_kernels_are_positive_definite(points, t):
    h = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    assert check_negative_type(h)
    assert check_positive_definite(np.exp(-t * h))


def test_unit_normalize(path3):
    u = Kernel(path3, np.diag([4.0, 1.0, 9.0]) + 0.5)
    v = unit_normalize(u)
    assert np.allclose(np.diag(v.values), 1.0)
    assert v.values[0, 2] == pytest.approx(0.5 / np.sqrt(4.5 * 9.5))
    with pytest.raises(ValueError):
        unit_normalize(Kernel(path3, np.zeros((3, 3))))


def test_properness_profile_examples(path3):
    p = properness_profile(Kernel(path3, path3.d))
    assert p.lower_at(1) == 1.0 and p.lower_at(2) == 2.0
    assert p.lower_at(3) is None
    ones = properness_profile(Kernel(path3, np.ones((3, 3))))
    assert (ones.lower == 1).all() and (ones.upper == 1).all()


def test_exponential_decay_radius():
    space = cayley_ball(LatticeGroup(1), 8).space
    k = distance_kernel(space, lambda d:np.exp(-d))
    p = properness_profile(k)
    assert np.allclose(p.upper, np.exp(-p.radii))
    assert p.decay_radius(np.exp(-5.0)) == 5.0
    assert p.is_monotone()


def test_schoenberg_family_converges_near_the_diagonal():
    space = cayley_ball(LatticeGroup(1), 8).space
    h = Kernel(space, space.d)
    schedule = [1.0, 0.5, 0.25, 0.125]
    au = approximate_unit_from_proper(h, schedule)
    assert au.in_c0
    assert au.labels == schedule
    for R in (1, 2, 3):
        dev = au.unit_deviation(R)
        assert np.allclose(dev, 1 - np.exp(-np.array(schedule) * (R - 1)))
        assert (dev <= 1 - np.exp(-np.array(schedule) * R)).all()
        assert (np.diff(dev) <= 0).all()
    assert au.positive_on(3) == 0


def test_constant_family_is_not_in_c0():
    space = cayley_ball(LatticeGroup(1), 3).space
    au = approximate_unit_from_proper(Kernel(space, np.zeros((7, 7))), [1.0, 0.5])
    assert not au.in_c0
    assert all(r is None for radii in au.decay_table.values() for r in radii)


def test_schedule_must_decrease():
    space = cayley_ball(LatticeGroup(1), 2).space
    with pytest.raises(ValueError):
        approximate_unit_from_proper(Kernel(space, space.d), [0.5, 1.0])
    with pytest.raises(ValueError):
        approximate_unit_from_proper(Kernel(space, space.d), [])


def test_akemann_walter_on_constant_family():
    space = cayley_ball(LatticeGroup(1), 3).space
    au = ApproximateUnit([Kernel(space, np.ones((7, 7))) for _ in range(3)])
    log_config = Logger("pycoarse", verbose=1)
    log_config.clear_log_content()
    h = akemann_walter_synthesize(au, 3)
    assert np.array_equal(h.values, np.zeros((7, 7)))
    assert h.meta["indices"] == [0, 1, 2]
    assert "it is not proper" in log_config.get_log_content()


def test_one_minus_real_part_of_a_unit_kernel_is_negative_type(rng):
    for i in range(100):
        n = int(rng.integers(2, 13))
        u = unit_gram(rng, n, rank=int(rng.integers(1, 5)), complex_=bool(i % 2))
        assert check_positive_definite(u)
        assert check_negative_type(1 - np.real(u))


@pytest.mark.parametrize("group, radius", [(LatticeGroup(1), 12), (FreeGroup(2), 4)])
def test_akemann_walter_is_proper_negative_type(group, radius):
    space = cayley_ball(group, radius).space
    au = approximate_unit_from_proper(Kernel(space, space.d), [0.5 ** k for k in range(40)])
    h = akemann_walter_synthesize(au, 4)
    assert check_negative_type(h)
    assert (np.diag(h.values) == 0).all()
    p = properness_profile(h)
    assert (np.diff(p.lower) >= 0).all()
    assert p.lower_at(1) > 0
    indices = h.meta["indices"]
    assert indices == sorted(set(indices))
    for n, idx in enumerate(indices, start=1):
        mask = DiagonalNeighborhood(space, n).mask
        assert np.abs(1 - au.members[idx].values)[mask].max() <= 4.0 ** (-n)


def test_akemann_walter_selection_failure():
    space = cayley_ball(LatticeGroup(1), 3).space
    au = approximate_unit_from_proper(Kernel(space, space.d), [1.0])
    with pytest.raises(SelectionError) as e:
        akemann_walter_synthesize(au, 2)
    assert e.value.n == 2


def test_akemann_walter_rejects_non_positive_members(path3):
    au = ApproximateUnit([Kernel(path3, np.ones((3, 3)) - np.eye(3))])
    with pytest.raises(KernelCheckError):
        akemann_walter_synthesize(au, 1)


def test_report_to_dict():
    report = check_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))
    out = report.to_dict()
    assert out["check"] == "pd" and out["verdict"] is False
    assert out["condition"] == "eigenvalue"
    assert len(out["witness"]) == 2 and out["points"] == [0, 1]
