"""
Exact Linear Algebra

Rank, kernel, image, membership and solves over the Gaussian rationals,
on top of sympy's DomainMatrix. Matrices are plain row-major lists of
GaussRationals at the module boundary.
"""

from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from src.services.base_service import SingularSystemError, ValidationError
from src.services.scalars import ZERO, GaussRational, gq

Vector = List[GaussRational]
Matrix = List[List[GaussRational]]


def to_domain_matrix(rows: Sequence[Sequence], n_cols: Optional[int] = None) -> DomainMatrix:
    """Build a QQ_I DomainMatrix; n_cols is needed when there are no rows"""
    rows = [[gq(v) for v in row] for row in rows]
    if not rows:
        return DomainMatrix.zeros((0, n_cols or 0), QQ_I)
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValidationError("ragged matrix")
    # entries are already QQ_I elements; from_list would re-coerce them through QQ
    return DomainMatrix(rows, (len(rows), width), QQ_I)


def from_domain_matrix(dm: DomainMatrix) -> Matrix:
    return [list(row) for row in dm.to_list()] if dm.shape[0] else []


def zero_matrix(n_rows: int, n_cols: int) -> Matrix:
    return [[ZERO] * n_cols for _ in range(n_rows)]


def transpose(matrix: Matrix, n_rows_if_empty: int = 0) -> Matrix:
    if not matrix:
        return [[] for _ in range(n_rows_if_empty)]
    return [list(col) for col in zip(*matrix)]


def mat_vec(matrix: Matrix, vector: Sequence[GaussRational]) -> Vector:
    return [sum((a * b for a, b in zip(row, vector)), ZERO) for row in matrix]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in cols] for row in a]


def is_zero_vector(vector: Sequence[GaussRational]) -> bool:
    return not any(vector)


def rank(matrix: Matrix) -> int:
    if not matrix or not matrix[0]:
        return 0
    return to_domain_matrix(matrix).rank()


def kernel(matrix: Matrix, n_cols: int) -> List[Vector]:
    """
    Basis of {x : matrix x = 0}.

    Args:
        matrix: row-major, may have zero rows
        n_cols: dimension of the source space
    """
    if n_cols == 0:
        return []
    if not matrix:
        return [[gq(1) if i == j else ZERO for j in range(n_cols)] for i in range(n_cols)]
    null = to_domain_matrix(matrix).nullspace()
    if null.shape[0] == 0:
        return []
    return [list(row) for row in null.to_list()]


def image(matrix: Matrix, n_cols: int) -> List[Vector]:
    """Independent columns of the matrix (pivot columns of its rref)"""
    if not matrix or n_cols == 0:
        return []
    _, pivots = to_domain_matrix(matrix).rref()
    columns = transpose(matrix)
    return [list(columns[p]) for p in pivots]


def pivot_rows(matrix: Matrix) -> List[int]:
    """Indices of a maximal set of independent rows, earliest first"""
    if not matrix or not matrix[0]:
        return []
    _, pivots = to_domain_matrix(transpose(matrix)).rref()
    return list(pivots)


def independent(vectors: List[Vector]) -> bool:
    if not vectors:
        return True
    return rank(transpose(vectors)) == len(vectors)


def solve(matrix: Matrix, rhs: Sequence[GaussRational], n_cols: int) -> Vector:
    """
    One exact solution of matrix x = rhs (free variables set to zero).

    Raises:
        SingularSystemError: if the system is inconsistent
    """
    rhs = [gq(v) for v in rhs]
    if not matrix:
        if any(rhs):
            raise SingularSystemError("inconsistent system")
        return [ZERO] * n_cols
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = to_domain_matrix(augmented).rref()
    if n_cols in pivots:
        raise SingularSystemError("inconsistent system: right-hand side is not in the image")
    rows = reduced.to_list()
    solution = [ZERO] * n_cols
    for r, p in enumerate(pivots):
        solution[p] = rows[r][n_cols]
    return solution


def solve_unique(matrix: Matrix, rhs: Sequence[GaussRational], n_cols: int) -> Vector:
    """
    Solve and insist on uniqueness.

    Raises:
        SingularSystemError: if inconsistent or if the kernel is nontrivial
    """
    if rank(matrix) != n_cols:
        raise SingularSystemError(f"system is not uniquely solvable (rank {rank(matrix)} < {n_cols})")
    return solve(matrix, rhs, n_cols)


def in_span(vectors: List[Vector], target: Sequence[GaussRational]) -> bool:
    """True iff target lies in the span of the given vectors"""
    if not vectors:
        return is_zero_vector(target)
    try:
        solve(transpose(vectors), target, len(vectors))
    except SingularSystemError:
        return False
    return True


def inverse(matrix: Matrix) -> Matrix:
    """
    Raises:
        SingularSystemError: if the matrix is not invertible
    """
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ValidationError("inverse needs a nonempty square matrix")
    dm = to_domain_matrix(matrix)
    if dm.rank() != n:
        raise SingularSystemError("matrix is singular")
    return from_domain_matrix(dm.inv())


def determinant(matrix: Matrix) -> GaussRational:
    if not matrix:
        return gq(1)
    return to_domain_matrix(matrix).det()


def hstack_columns(*blocks: Matrix) -> Matrix:
    """Concatenate matrices with equal row counts side by side"""
    blocks = [b for b in blocks if b]
    if not blocks:
        return []
    return [sum((list(block[r]) for block in blocks), []) for r in range(len(blocks[0]))]


def complement_basis(subspace: List[Vector], dim: int, order: Optional[List[int]] = None) -> List[Vector]:
    """
    Extend a basis of a subspace to the full space with unit vectors.

    Args:
        order: order in which unit vectors are tried; changing it gives a
            different complement, used for uniqueness cross-checks
    """
    chosen: List[Vector] = []
    current = list(subspace)
    for index in (order if order is not None else range(dim)):
        unit = [gq(1) if j == index else ZERO for j in range(dim)]
        if not in_span(current, unit):
            current.append(unit)
            chosen.append(unit)
        if len(current) == dim:
            break
    return chosen


def decompose(bases: List[List[Vector]], target: Sequence[GaussRational]) -> Tuple[List[Vector], ...]:
    """
    Write target as a sum of vectors from the given subspaces.

    Returns one component vector per subspace.

    Raises:
        SingularSystemError: if the subspaces do not span target or the
            decomposition is not unique
    """
    columns = [v for basis in bases for v in basis]
    n = len(columns)
    dim = len(target)
    if n == 0:
        if any(target):
            raise SingularSystemError("empty subspaces cannot represent a nonzero vector")
        return tuple([ZERO] * dim for _ in bases)
    matrix = transpose(columns)
    coeffs = solve_unique(matrix, target, n)
    parts = []
    offset = 0
    for basis in bases:
        part = [ZERO] * dim
        for k, v in enumerate(basis):
            c = coeffs[offset + k]
            if c:
                part = [p + c * x for p, x in zip(part, v)]
        parts.append(part)
        offset += len(basis)
    return tuple(parts)
