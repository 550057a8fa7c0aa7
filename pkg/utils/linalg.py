"""
Exact Linear Algebra - Row reduction over Q and Q(sqrt 5)
No floating point is used anywhere in rank or kernel decisions
"""

from fractions import Fraction
from math import lcm
from typing import List, Sequence, Callable, Tuple

Matrix = List[List]


def row_reduce(matrix: Sequence[Sequence], to_field: Callable = Fraction) -> Tuple[Matrix, List[int]]:
    """
    Reduce a matrix to reduced row echelon form

    Args:
        matrix: Rows of field elements (ints are lifted with to_field)
        to_field: Constructor lifting entries into the working field

    Returns:
        (reduced rows, pivot column per nonzero row)
    """
    rows = [[to_field(x) for x in row] for row in matrix]
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence], to_field: Callable = Fraction) -> int:
    """Rank of a matrix over the field given by to_field"""
    _, pivots = row_reduce(matrix, to_field)
    return len(pivots)


def nullspace(matrix: Sequence[Sequence], to_field: Callable = Fraction) -> Matrix:
    """
    Basis of the right kernel {x : matrix * x = 0}

    Args:
        matrix: Square or rectangular matrix
        to_field: Constructor lifting entries into the working field

    Returns:
        List of basis vectors (one per free column)
    """
    if not matrix:
        return []
    n_cols = len(matrix[0])
    rows, pivots = row_reduce(matrix, to_field)
    pivot_set = set(pivots)
    zero = to_field(0)
    one = to_field(1)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = [zero] * n_cols
        vec[free] = one
        for row_index, col in enumerate(pivots):
            vec[col] = -rows[row_index][free]
        basis.append(vec)
    return basis


def clear_denominators(vector: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to an integer vector on the same line"""
    common = 1
    for x in vector:
        common = lcm(common, Fraction(x).denominator)
    return [int(Fraction(x) * common) for x in vector]
