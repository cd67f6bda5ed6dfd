from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankstability import (
    GF,
    QQ,
    QQI,
    DenseMatrix,
    GaussianRational,
    PrimeDenominatorError,
    SingularMatrixError,
    XorShift64Star,
    modular_rank_certificate,
)
from rankstability.exactfield import field_from_tag, hstack, vstack
from rankstability.prng import random_invertible, random_matrix

from conftest import rank_by_minors


# ---------------------------------------------------------------------------
# scalars


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(1)
    assert GF(101).p == 101


def test_fp_element_canonical_range():
    f = GF(7)
    x = f.coerce(-3)
    assert 0 <= x.v < 7 and x == 4
    assert (x + 5).v == 2
    assert (f.coerce(3) / f.coerce(5)) * f.coerce(5) == 3


def test_fraction_coercion_rejects_floats():
    with pytest.raises(TypeError):
        QQ.coerce(0.5)
    with pytest.raises(TypeError):
        QQI.coerce(0.5)
    with pytest.raises(TypeError):
        GaussianRational(1.5)


def test_gaussian_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == -1
    z = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert z + z.conjugate() == 1
    assert (z / z) == 1
    assert bool(GaussianRational(0, 0)) is False


small_fractions = st.builds(
    Fraction, st.integers(-30, 30), st.integers(1, 12)
)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)


@settings(max_examples=100, deadline=None)
@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x and x * y == y * x
    if y:
        assert (x / y) * y == x


@settings(max_examples=100, deadline=None)
@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40))
def test_prime_field_axioms(a, b, c):
    f = GF(13)
    x, y, z = f.coerce(a), f.coerce(b), f.coerce(c)
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x - x == 0
    if y:
        assert (x / y) * y == x


def test_field_tags_roundtrip():
    for tag in ("rational", "gaussian", "gf5"):
        assert field_from_tag(tag).tag == tag
    with pytest.raises(ValueError):
        field_from_tag("octonion")


# ---------------------------------------------------------------------------
# rank


def test_rank_identity_and_zero():
    assert DenseMatrix.identity(QQ, 5).rank() == 5
    assert DenseMatrix.zeros(GF(7), 3, 4).rank() == 0


def test_rank_all_ones_matches_minor_oracle():
    ones = DenseMatrix(QQ, [[1] * 4 for _ in range(4)])
    assert ones.rank() == 1
    assert rank_by_minors(ones) == 1


def test_rank_matches_minors_small_exhaustive_gf2():
    f = GF(2)
    for bits in range(2 ** 4):
        entries = [(bits >> k) & 1 for k in range(4)]
        m = DenseMatrix(f, [entries[:2], entries[2:]])
        assert m.rank() == rank_by_minors(m)


def test_rank_matches_minors_sampled():
    rng = XorShift64Star(11)
    for field in (QQ, GF(3), QQI):
        for _ in range(30):
            m = random_matrix(field, rng, 3, 3, lo=-2, hi=2)
            assert m.rank() == rank_by_minors(m)


def test_rank_transpose_invariant():
    rng = XorShift64Star(5)
    for field in (QQ, GF(2), GF(7), QQI):
        for _ in range(20):
            m = random_matrix(field, rng, 4, 3)
            assert m.rank() == m.transpose().rank()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rank_subadditive_and_product(rows_a, rows_b):
    a = DenseMatrix(QQ, rows_a)
    b = DenseMatrix(QQ, rows_b)
    assert (a + b).rank() <= a.rank() + b.rank()
    assert (a * b).rank() <= min(a.rank(), b.rank())


# ---------------------------------------------------------------------------
# modular rank certificate


def test_modular_certificate_identity():
    assert modular_rank_certificate(DenseMatrix.identity(QQ, 5), [2, 3]) == 5


def test_modular_certificate_diag_kills_shared_factors():
    m = DenseMatrix.diagonal(QQ, [6, 1])
    # both 2 and 3 divide 6, so each reduction sees rank 1 only
    assert modular_rank_certificate(m, [2, 3]) == 1
    assert modular_rank_certificate(m, [5]) == 2


def test_modular_certificate_all_ones():
    ones = DenseMatrix(QQ, [[1] * 4 for _ in range(4)])
    assert modular_rank_certificate(ones, [5]) == 1


def test_modular_certificate_rejects_bad_prime():
    m = DenseMatrix(QQ, [[Fraction(1, 2)]])
    with pytest.raises(PrimeDenominatorError):
        modular_rank_certificate(m, [2])
    with pytest.raises(ValueError):
        modular_rank_certificate(m, [4])


def test_modular_certificate_is_lower_bound():
    rng = XorShift64Star(17)
    for _ in range(200):
        n = rng.randint(1, 4)
        m = random_matrix(QQ, rng, n, n, lo=-6, hi=6)
        assert modular_rank_certificate(m, [2, 3, 5]) <= m.rank()


# ---------------------------------------------------------------------------
# matrix operations


def test_inverse_identity():
    ident = DenseMatrix.identity(QQ, 3)
    assert ident.inverse() == ident


def test_inverse_round_trip_gf101():
    f = GF(101)
    rng = XorShift64Star(3)
    ident = DenseMatrix.identity(f, 4)
    for _ in range(50):
        a = random_invertible(f, rng, 4)
        assert a * a.inverse() == ident


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError):
        DenseMatrix(QQ, [[1, 2], [2, 4]]).inverse()


def test_kernel_of_zero_matrix():
    k = DenseMatrix.zeros(QQ, 2, 2).kernel_basis()
    assert k.cols == 2


def test_kernel_dimension_matches_rank():
    rng = XorShift64Star(9)
    for field in (QQ, GF(5), QQI):
        for _ in range(20):
            m = random_matrix(field, rng, 3, 5)
            k = m.kernel_basis()
            assert k.cols == 5 - m.rank()
            if k.cols:
                assert (m * k).is_zero()


def test_column_space_basis():
    m = DenseMatrix(QQ, [[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    b = m.column_space_basis()
    assert b.cols == m.rank() == 2
    assert hstack([b, m]).rank() == 2


def test_solve_right():
    a = DenseMatrix(QQ, [[1, 1], [0, 1], [1, 0]])
    x = DenseMatrix(QQ, [[2], [3]])
    b = a * x
    assert a * a.solve_right(b) == b
    with pytest.raises(ValueError):
        a.solve_right(DenseMatrix(QQ, [[1], [0], [0]]))


def test_direct_sum_and_pad():
    a = DenseMatrix(QQ, [[1, 2], [3, 4]])
    b = DenseMatrix.identity(QQ, 1)
    s = a.direct_sum(b)
    assert s.shape == (3, 3) and s.entry(2, 2) == 1 and s.entry(0, 2) == 0
    p = a.pad(4, 4)
    assert p.shape == (4, 4) and p.entry(1, 1) == 4 and p.entry(3, 3) == 0


def test_stacking():
    a = DenseMatrix(QQ, [[1, 2]])
    b = DenseMatrix(QQ, [[3, 4]])
    assert vstack([a, b]).shape == (2, 2)
    assert hstack([a, b]).shape == (1, 4)


def test_scalar_multiplication():
    a = DenseMatrix(QQ, [[1, 2], [3, 4]])
    assert a.scale(Fraction(1, 2)) == Fraction(1, 2) * a
    f = GF(5)
    m = DenseMatrix.identity(f, 2)
    assert (m * 3).entry(0, 0) == 3


# ---------------------------------------------------------------------------
# text format


def test_text_roundtrip_rational():
    m = DenseMatrix(QQ, [[Fraction(1, 2), -3], [0, Fraction(7, 5)]])
    text = m.to_text()
    assert text.splitlines()[0] == "2 2 rational"
    assert DenseMatrix.from_text(text) == m


def test_text_roundtrip_gf():
    m = DenseMatrix(GF(7), [[1, 6], [0, 3]])
    assert DenseMatrix.from_text(m.to_text()) == m


def test_text_roundtrip_gaussian_signs():
    m = DenseMatrix(
        QQI,
        [
            [GaussianRational(Fraction(-1, 2), Fraction(3, 4)), GaussianRational(0, -1)],
            [GaussianRational(5), GaussianRational(Fraction(2, 3), Fraction(-7, 9))],
        ],
    )
    text = m.to_text()
    assert "i" in text
    assert DenseMatrix.from_text(text) == m


def test_immutability_and_hash():
    a = DenseMatrix(QQ, [[1, 2], [3, 4]])
    b = DenseMatrix(QQ, [[1, 2], [3, 4]])
    assert a == b and hash(a) == hash(b)
    with pytest.raises(TypeError):
        a._data[0][0] = 5  # tuples reject item assignment
