# Tests for band operators and completely positive maps on truncated Roe algebras
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import numpy as np
import pytest
from hypothesis import given, settings, seed
from hypothesis import strategies as st
from scipy import sparse
from pycoarse.conf import KernelCheckError, MarginError, TruncationError
from pycoarse.util.spaces import FreeGroup, LatticeGroup, cayley_ball
from pycoarse.util.kernels import Kernel, distance_kernel, check_positive_definite, check_negative_type
from pycoarse.util.groupoid import alpha_star, check_groupoid_nt
from pycoarse.util.roe import (BandOperator, Functional, IdentityMap, SchurMultiplier, FiniteRankMap,
                               left_regular, band_compose, band_adjoint, apply_cp_map, induced_kernel,
                               approximate_unit_from_schedule, block_matrix,
                               verify_property_i, verify_property_ii, verify_property_iii)
from conftest import unit_gram

# Main
def _schur(ball, t:float) -> SchurMultiplier:
    return SchurMultiplier(distance_kernel(ball.full_space, lambda d:np.exp(-t * d)))


def _random_band(ball, width:int, rng) -> BandOperator:
    d = np.asarray(ball.full_space.d)
    mask = (d <= width) & (rng.random(d.shape) < 0.5)
    values = rng.normal(size=d.shape) + 1j * rng.normal(size=d.shape)
    return BandOperator(ball, np.where(mask, values, 0))


def _rank_one(ball, shift:int) -> tuple:
    # S has the single entry S(0, shift); f(lambda_g) = 1 iff g = -shift
    op = sparse.csr_matrix(([1.0], ([ball.index_of((0,))], [ball.index_of((shift,))])), shape=(ball.n_full,) * 2)
    f = Functional([(ball.index_of((-shift,)), ball.index_of((0,)), 1.0)])
    return f, BandOperator(ball, op)


def test_identity_translation(line4):
    op = left_regular((0,), line4)
    assert op.width == 0 and op.bound == 1.0
    assert np.array_equal(op.to_dense(), np.eye(line4.n_full))


def test_shift_by_two(line4):
    op = left_regular((2,), line4)
    assert op.width == 2
    A = op.to_dense()
    for j, r in enumerate(line4.elements):
        target = (r[0] + 2,)
        if line4.contains(target):
            assert A[line4.index_of(target), j] == 1
    assert A.sum() == sum(1 for r in line4.elements if line4.contains((r[0] + 2,)))
    assert op.exact_radius == line4.outer_radius - 2


def test_free_translations_compose_on_the_interior():
    ball = cayley_ball(FreeGroup(2), 1, margin=2)
    a, b = (1,), (2,)
    product = band_compose(left_regular(a, ball), left_regular(b, ball))
    direct = left_regular(ball.multiply(a, b), ball)
    assert np.array_equal(product.interior().toarray(), direct.interior().toarray())
    assert product.width <= 2


def test_shifts_compose():
    ball = cayley_ball(LatticeGroup(1), 2, margin=4)
    one = left_regular((1,), ball)
    two = band_compose(one, one)
    assert two.exact_radius == 4
    assert np.array_equal(two.interior().toarray(), left_regular((2,), ball).interior().toarray())


def test_composition_beyond_the_margin():
    ball = cayley_ball(LatticeGroup(1), 2, margin=1)
    one = left_regular((1,), ball)
    with pytest.raises(TruncationError) as e:
        band_compose(one, one)
    assert e.value.shell == 2


def test_unit_and_involution(line4, rng):
    a = _random_band(line4, 3, rng)
    unit = left_regular((0,), line4)
    assert np.allclose(band_compose(a, unit).to_dense(), a.to_dense())
    star = band_adjoint(a)
    assert star.width == a.width
    assert np.array_equal(band_adjoint(star).to_dense(), a.to_dense())


def test_adjoint_of_translation():
    ball = cayley_ball(LatticeGroup(1), 2, margin=3)
    star = band_adjoint(left_regular((1,), ball))
    assert np.array_equal(star.interior().toarray(), left_regular((-1,), ball).interior().toarray())


def test_width_is_subadditive(rng):
    ball = cayley_ball(LatticeGroup(1), 3, margin=3)
    for _ in range(100):
        wa, wb = (int(x) for x in rng.integers(0, 4, size=2))
        a, b = _random_band(ball, wa, rng), _random_band(ball, wb, rng)
        ab = band_compose(a, b)
        assert ab.width <= a.width + b.width
        assert ab.verify()


@seed(4)
@settings(max_examples=30, deadline=None)
@given(width=st.integers(min_value=0, max_value=4), density=st.floats(min_value=0.1, max_value=1.0))
def test_adjoint_preserves_width(width, density):
    ball = cayley_ball(FreeGroup(2), 1, margin=2)
    rng = np.random.default_rng(width)
    d = np.asarray(ball.full_space.d)
    values = np.where((d <= width) & (rng.random(d.shape) < density), rng.normal(size=d.shape), 0)
    a = BandOperator(ball, values)
    assert band_adjoint(a).width == a.width


def test_translation_beyond_margin():
    ball = cayley_ball(LatticeGroup(1), 2, margin=1)
    with pytest.raises(MarginError):
        left_regular((2,), ball)


def test_apply_identity_and_unit_multiplier(line4):
    g = (3,)
    expected = left_regular(g, line4).to_dense()
    assert np.array_equal(apply_cp_map(IdentityMap(line4), g).to_dense(), expected)
    ones = SchurMultiplier(Kernel(line4.full_space, np.ones((line4.n_full,) * 2)))
    assert np.array_equal(apply_cp_map(ones, g).to_dense(), expected)


def test_apply_exponential_multiplier(line4):
    A = apply_cp_map(_schur(line4, 1.0), (2,)).to_dense()
    shift = left_regular((2,), line4).to_dense()
    assert np.allclose(A, np.exp(-2.0) * shift)


def test_schur_multiplier_preconditions(line4):
    n = line4.n_full
    with pytest.raises(KernelCheckError):
        SchurMultiplier(Kernel(line4.full_space, 2 * np.ones((n, n))))
    bad = np.ones((n, n)) - np.eye(n)
    np.fill_diagonal(bad, 1.0)
    bad[0, 1] = bad[1, 0] = -1.0
    with pytest.raises(KernelCheckError):
        SchurMultiplier(Kernel(line4.full_space, bad))


def test_identity_induces_the_unit():
    ball = cayley_ball(LatticeGroup(1), 2, margin=4)
    u = induced_kernel(IdentityMap(ball))
    assert u.complete
    assert np.array_equal(u.values, np.ones((ball.n_interior,) * 2))


@pytest.mark.parametrize("group, radius, margin", [(LatticeGroup(2), 4, 8), (FreeGroup(2), 3, 2)])
def test_schur_round_trip(group, radius, margin, rng):
    ball = cayley_ball(group, radius, margin=margin)
    n = ball.n_interior
    for i in range(20):
        k = Kernel(ball.full_space, unit_gram(rng, ball.n_full, complex_=bool(i % 2)))
        u = induced_kernel(SchurMultiplier(k))
        inner = k.values[:n, :n]
        assert np.array_equal(u.values[u.mask], inner[u.mask])
        assert (u.values[~u.mask] == 0).all()
    assert u.complete == (margin >= 2 * radius)


def test_induced_kernels_give_negative_type_by_one_minus_real_part(rng):
    ball = cayley_ball(LatticeGroup(2), 2, margin=4)
    maps = [_schur(ball, t) for t in (1.0, 0.5, 0.25)]
    maps += [SchurMultiplier(Kernel(ball.full_space, unit_gram(rng, ball.n_full, complex_=bool(i % 2))))
             for i in range(6)]
    for cp in maps:
        u = induced_kernel(cp)
        assert u.complete
        assert check_positive_definite(u.kernel)
        h = Kernel(u.kernel.space, 1 - np.real(u.values))
        assert check_negative_type(h)
        assert check_groupoid_nt(alpha_star(h))


def test_rank_one_vanishes_beyond_its_width():
    ball = cayley_ball(LatticeGroup(1), 3, margin=6)
    cp = FiniteRankMap([_rank_one(ball, 2)])
    u = induced_kernel(cp)
    assert u.values[ball.index_of((0,)), ball.index_of((2,))] == 1.0
    d = np.asarray(ball.space.d)
    assert (u.values[d > 2] == 0).all()


def test_functional_bounds(line4):
    f = Functional([(0, 1, 2.0), (1, 0, -1j)])
    assert f.norm == 3.0
    with pytest.raises(MarginError):
        Functional([(0, line4.n_full, 1.0)]).check_ball(line4)


def test_schedule_approximate_unit():
    ball = cayley_ball(LatticeGroup(1), 4, margin=8)
    au = approximate_unit_from_schedule([_schur(ball, t) for t in (1.0, 0.5, 0.25)], labels=[1.0, 0.5, 0.25])
    assert au.in_c0
    assert np.allclose(au.members[0].values, np.exp(-np.asarray(ball.space.d)))
    short = cayley_ball(LatticeGroup(1), 4, margin=7)
    with pytest.raises(MarginError):
        approximate_unit_from_schedule([IdentityMap(short)])


def test_property_i_identity_and_free_sample():
    ball = cayley_ball(FreeGroup(2), 1, margin=2)
    sample = [(), (1,), (2,)]
    for cp in (IdentityMap(ball), _schur(ball, 1.0)):
        report = verify_property_i(cp, sample)
        assert report.verdict
        assert report.details["agree"]
    assert block_matrix(IdentityMap(ball), sample).shape == (15, 15)


def test_property_i_on_random_samples(rng):
    ball = cayley_ball(LatticeGroup(2), 2, margin=4)
    cp = _schur(ball, 0.5)
    for _ in range(100):
        idx = rng.choice(ball.n_interior, size=5, replace=False)
        report = verify_property_i(cp, [ball.elements[i] for i in idx])
        assert report.verdict and report.details["agree"]


def test_property_i_rejects_bad_input():
    ball = cayley_ball(LatticeGroup(1), 1, margin=2)
    with pytest.raises(MarginError):
        block_matrix(IdentityMap(ball), [(2,)])
    op = BandOperator(ball, np.eye(ball.n_full))
    with pytest.raises(ValueError):
        verify_property_i(FiniteRankMap([(Functional([(0, 0, 1.0)]), op)]), [(0,)])


def test_property_ii_widths():
    ball = cayley_ball(LatticeGroup(1), 3, margin=6)
    p = verify_property_ii(FiniteRankMap([_rank_one(ball, 2)]))
    assert p.upper_at(2) == 1.0
    assert (p.upper[p.radii > 2] == 0).all()
    p = verify_property_ii(FiniteRankMap([_rank_one(ball, 1), _rank_one(ball, 3)]))
    assert p.upper_at(3) == 1.0
    assert (p.upper[p.radii > 3] == 0).all()


def test_property_ii_excludes_pairs_beyond_the_margin():
    ball = cayley_ball(LatticeGroup(1), 3, margin=2)
    p = verify_property_ii(FiniteRankMap([_rank_one(ball, 2)]))
    assert p.radii.max() <= 2


def test_property_iii_exponential_schedule():
    ball = cayley_ball(LatticeGroup(1), 3, margin=2)
    schedule = [_schur(ball, 1.0 / k) for k in range(1, 21)]
    table = verify_property_iii(schedule, [1, 2, 3])
    assert len(table) == 60
    assert table.bound_holds()
    k = np.arange(1, 21)
    assert (table.sup_deviations(1) == 0).all()
    for R in (2, 3):
        sup = table.sup_deviations(R)
        assert np.allclose(sup, 1 - np.exp(-(R - 1) / k))
        assert (np.diff(sup) < 0).all()


def test_property_iii_identity_schedule():
    ball = cayley_ball(LatticeGroup(1), 2, margin=2)
    table = verify_property_iii([IdentityMap(ball)] * 3, [1, 2, 3])
    assert all(s == 0 and o == 0 for _, _, s, o in table.rows)


def test_property_iii_radius_needs_margin():
    ball = cayley_ball(LatticeGroup(1), 2, margin=1)
    with pytest.raises(MarginError):
        verify_property_iii([IdentityMap(ball)], [3])
    with pytest.raises(ValueError):
        verify_property_iii([], [1])


@pytest.mark.parametrize("radii", [[0], [1, -2], []])
def test_property_iii_rejects_non_positive_radii(radii):
    ball = cayley_ball(LatticeGroup(1), 2, margin=2)
    with pytest.raises(ValueError, match="positive"):
        verify_property_iii([IdentityMap(ball)], radii)
