from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghostcheck.exact import QMatrix, integerize, rat, rat_to_str


def _det(rows):
    # Laplace expansion; only used on minors up to 4x4
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def minor_rank(matrix: QMatrix) -> int:
    """Independent rank oracle: size of the largest nonvanishing minor."""
    best = 0
    for size in range(1, min(matrix.rows, matrix.cols) + 1):
        found = False
        for rr in combinations(range(matrix.rows), size):
            for cc in combinations(range(matrix.cols), size):
                sub = [[matrix.entries[i][j] for j in cc] for i in rr]
                if _det(sub) != 0:
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = size
    return best


class TestRat:
    def test_parse_and_format(self):
        assert rat("3/4") == Fraction(3, 4)
        assert rat("-3/4") == Fraction(-3, 4)
        assert rat("5") == Fraction(5)
        assert rat(7) == Fraction(7)
        assert rat_to_str(Fraction(6, 8)) == "3/4"
        assert rat_to_str(Fraction(-5)) == "-5"
        assert rat_to_str(Fraction(10, 2)) == "5"

    @pytest.mark.parametrize("bad", ["1.5", "1e3", "3/4/5", "", "a"])
    def test_rejects_non_rational_strings(self, bad):
        with pytest.raises(ValueError):
            rat(bad)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            rat(0.5)

    def test_round_trip(self):
        rng = random.Random(11)
        for _ in range(100):
            q = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            assert rat(rat_to_str(q)) == q

    def test_integerize(self):
        assert integerize((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
        assert integerize((Fraction(0), Fraction(0))) == (0, 0)
        assert integerize((Fraction(4), Fraction(6))) == (2, 3)


class TestQMatrix:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            QMatrix([])
        with pytest.raises(ValueError):
            QMatrix([[1, 2], [3]])

    def test_rank_identity(self):
        assert QMatrix.identity(2).rank() == 2

    def test_rank_zero_matrix(self):
        assert QMatrix.zeros(3, 4).rank() == 0

    def test_rank_dependent_rows(self):
        assert QMatrix([[1, 2], [2, 4]]).rank() == 1

    def test_rank_rational_entries(self):
        m = QMatrix([["1/2", "1/3"], ["1/4", "1/6"]])
        assert m.rank() == 1

    def test_kernel_single_row(self):
        (v,) = QMatrix([[1, 1]]).kernel_basis()
        assert v[0] * 1 + v[1] * 1 == 0
        assert v[0] / v[1] == -1

    def test_kernel_identity_is_empty(self):
        assert QMatrix.identity(2).kernel_basis() == []

    def test_kernel_two_rows(self):
        (v,) = QMatrix([[1, 0, 1], [0, 1, 1]]).kernel_basis()
        scale = v[2] / Fraction(-1)
        assert v == (scale * 1, scale * 1, scale * -1)

    def test_matvec_and_matmul(self):
        m = QMatrix([[1, 2], [3, 4]])
        assert m.matvec([1, 0]) == (Fraction(1), Fraction(3))
        assert m.matmul(QMatrix.identity(2)) == m

    def test_from_columns(self):
        m = QMatrix.from_columns([[1, 2], [3, 4]])
        assert m.column(0) == (Fraction(1), Fraction(2))
        assert m.column(1) == (Fraction(3), Fraction(4))

    def test_immutability(self):
        m = QMatrix.identity(2)
        with pytest.raises(AttributeError):
            m.rows = 3


class TestRankKernelProperties:
    def test_random_corpus(self):
        # 500 matrices with entries in -9..9, sizes up to 6x6
        rng = random.Random(2024)
        for _ in range(500):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            m = QMatrix([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
            r = m.rank()
            assert r == m.transpose().rank()
            basis = m.kernel_basis()
            assert len(basis) == cols - r
            for v in basis:
                assert all(x == 0 for x in m.matvec(v))

    def test_rank_matches_minor_oracle(self):
        rng = random.Random(7)
        for _ in range(120):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = QMatrix([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
            assert m.rank() == minor_rank(m)

    @given(
        st.lists(
            st.lists(st.integers(-9, 9), min_size=3, max_size=3),
            min_size=2,
            max_size=5,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_rank_transpose_invariant(self, entries):
        m = QMatrix(entries)
        assert m.rank() == m.transpose().rank()

    def test_rank_bounds(self):
        rng = random.Random(99)
        for _ in range(60):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            m = QMatrix([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
            assert 0 <= m.rank() <= min(rows, cols)
