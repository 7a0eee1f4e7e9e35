"""
Unit Tests for Exact Linear Algebra
"""

import pytest

from src.services import SingularSystemError, ValidationError
from src.services.exact_linalg import (
    complement_basis,
    decompose,
    determinant,
    in_span,
    independent,
    inverse,
    kernel,
    mat_mul,
    mat_vec,
    rank,
    solve,
    solve_unique,
)
from src.services.scalars import ZERO, gq


def m(rows):
    return [[gq(v) for v in row] for row in rows]


def v(values):
    return [gq(x) for x in values]


class TestRankAndKernel:
    """Test rank, kernel and independence"""

    def test_rank(self):
        """Test rank of a rank-deficient matrix"""
        assert rank(m([[1, 2], [2, 4]])) == 1
        assert rank(m([[1, 0], [0, 1]])) == 2
        assert rank([]) == 0

    def test_kernel_annihilated(self):
        """Test that kernel vectors are mapped to zero"""
        matrix = m([[1, 2, 3], [2, 4, 6]])
        basis = kernel(matrix, 3)
        assert len(basis) == 2
        for vec in basis:
            assert mat_vec(matrix, vec) == [ZERO, ZERO]

    def test_kernel_of_empty_matrix_is_everything(self):
        """Test the no-constraints case"""
        assert len(kernel([], 3)) == 3

    def test_independent(self):
        """Test linear independence"""
        assert independent([v([1, 0]), v([0, 1])])
        assert not independent([v([1, 2]), v([2, 4])])

    def test_complex_entries(self):
        """Test that i is a genuine scalar"""
        assert rank(m([[1, gq(0, 1)], [gq(0, 1), -1]])) == 1

    def test_purely_imaginary_entry(self):
        """Test that a lone i keeps full rank and inverts to -i"""
        assert rank([[gq(0, 1)]]) == 1
        assert inverse([[gq(0, 1)]]) == [[gq(0, -1)]]
        assert kernel([[gq(0, 1), gq(1)]], 2) != []


class TestSolve:
    """Test exact solves"""

    def test_solve(self):
        """Test a consistent square system"""
        matrix = m([[2, 1], [1, 3]])
        x = solve(matrix, v([3, 4]), 2)
        assert mat_vec(matrix, x) == v([3, 4])

    def test_inconsistent_raises(self):
        """Test that a right-hand side outside the image raises"""
        with pytest.raises(SingularSystemError, match="inconsistent"):
            solve(m([[1, 1], [1, 1]]), v([1, 2]), 2)

    def test_solve_unique_needs_full_rank(self):
        """Test that an underdetermined system is rejected"""
        with pytest.raises(SingularSystemError, match="not uniquely solvable"):
            solve_unique(m([[1, 1]]), v([1]), 2)

    def test_in_span(self):
        """Test span membership"""
        vectors = [v([1, 0, 1]), v([0, 1, 1])]
        assert in_span(vectors, v([2, 3, 5]))
        assert not in_span(vectors, v([0, 0, 1]))
        assert in_span([], v([0, 0]))


class TestInverse:
    """Test inversion and determinants"""

    def test_inverse(self):
        """Test that A A^-1 = 1"""
        matrix = m([[1, 2], [3, 4]])
        assert mat_mul(matrix, inverse(matrix)) == m([[1, 0], [0, 1]])
        assert determinant(matrix) == gq(-2)

    def test_singular_raises(self):
        """Test that a singular matrix has no inverse"""
        with pytest.raises(SingularSystemError, match="singular"):
            inverse(m([[1, 2], [2, 4]]))

    def test_nonsquare_raises(self):
        """Test that only square matrices are inverted"""
        with pytest.raises(ValidationError, match="square"):
            inverse(m([[1, 2, 3], [4, 5, 6]]))


class TestDecompose:
    """Test direct-sum decompositions"""

    def test_complement_basis(self):
        """Test that the complement fills the space"""
        sub = [v([1, 1, 0])]
        comp = complement_basis(sub, 3)
        assert len(comp) == 2
        assert independent(sub + comp)

    def test_decompose_sums_back(self):
        """Test that the parts add up to the target"""
        a, b = [v([1, 1])], [v([1, -1])]
        left, right = decompose([a, b], v([3, 1]))
        assert left == v([2, 2])
        assert right == v([1, -1])

    def test_decompose_not_unique_raises(self):
        """Test that overlapping subspaces are rejected"""
        with pytest.raises(SingularSystemError):
            decompose([[v([1, 0])], [v([2, 0])]], v([1, 0]))
