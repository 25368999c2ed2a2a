"""
Gaussian elimination over F_p on small dense numpy matrices
"""
import logging

import numpy as np

from algebra.errors import AmbiguousBasis, NotInSpan


def solve_mod_p(matrix: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray:
    """
    Solves matrix @ c == rhs (mod p) for the unique vector c

    :param matrix:  Array of shape (rows, unknowns) with entries in [0, p)
    :param rhs:     Array of shape (rows,)
    :param p:       The prime

    :return: The solution, entries in [0, p)
    """
    rows, unknowns = matrix.shape
    if rhs.shape != (rows,):
        raise ValueError(f'Right-hand side of shape {rhs.shape} does not fit a {rows}x{unknowns} system')

    augmented = np.concatenate([matrix, rhs.reshape(rows, 1)], axis=1).astype(np.int64) % p
    pivot_row = 0
    pivot_columns = []
    for column in range(unknowns):
        candidates = np.flatnonzero(augmented[pivot_row:, column])
        if len(candidates) == 0:
            continue
        chosen = pivot_row + int(candidates[0])
        if chosen != pivot_row:
            augmented[[pivot_row, chosen]] = augmented[[chosen, pivot_row]]

        inverse = pow(int(augmented[pivot_row, column]), p - 2, p)
        augmented[pivot_row] = augmented[pivot_row] * inverse % p

        # Clear the column in every other row at once
        factors = augmented[:, column].copy()
        factors[pivot_row] = 0
        augmented = (augmented - np.outer(factors, augmented[pivot_row])) % p

        pivot_columns.append(column)
        pivot_row += 1
        if pivot_row == rows:
            break

    if augmented[pivot_row:, unknowns].any():
        raise NotInSpan(f'Inconsistent system: {rows} equations, {unknowns} unknowns, rank {pivot_row}')
    if len(pivot_columns) < unknowns:
        raise AmbiguousBasis(f'Spanning set is dependent: rank {len(pivot_columns)} for {unknowns} vectors')

    solution = np.zeros(unknowns, dtype=np.int64)
    for row, column in enumerate(pivot_columns):
        solution[column] = augmented[row, unknowns]

    logging.debug(f'Solved a {rows}x{unknowns} system mod {p}')
    return solution
