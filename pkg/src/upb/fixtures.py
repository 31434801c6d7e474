"""Reference integer matrices and the d=6, b=1 isometry template, kept verbatim as data."""

import numpy as np

#: Band gadget for q=5, r=3, s=2 (columns v_0..v_4, w_0..w_4).
W_5_3_2 = np.array([
    [3, 3, 3, 1, 1, -1, -1, 2, -2, 0],
    [2, 1, 1, 2, 3, -2, 0, 0, -2, -1],
    [2, 1, 1, 1, 1, 5, -3, -4, 2, 1],
    [2, 2, 3, 2, 2, 0, 2, 1, 3, 0],
], dtype=np.int64)

#: Prism-complement gadget for k=2 (9 x 12; columns v_0..v_5, w_0..w_5).
W_2 = np.array([
    [2, 1, 1, 5, 1, 2, 0, 0, 1, 0, 6, 6],
    [2, -1, -1, -3, 1, 2, 0, 0, -1, 0, 6, 6],
    [1, 2, 0, -4, 4, 1, 0, 0, 2, 1, 3, 3],
    [2, 2, 0, 0, -4, -1, 0, 0, 2, 1, 27, 6],
    [2, 2, 0, 0, 0, 0, -1, -1, -4, 0, 0, -4],
    [1, 2, 0, 0, 0, 0, 1, 2, -4, 0, 0, -2],
    [2, 2, 0, 0, 0, 0, 0, 0, 3, -1, -20, -14],
    [1, 2, 0, 0, 0, 0, 0, 0, 0, -1, 21, 23],
    [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, -31, -12],
], dtype=np.int64)

#: Coefficients of the cubic fixing the d=6, b=1 hollow isometry: 3u^3 - 2u^2 - 3u - 3.
U61_CUBIC = (3, -2, -3, -3)


def u61_template(u: dict[int, float]) -> np.ndarray:
    """Fill the 6 x 5 template with unknowns u[1]..u[10]."""
    return np.array([
        [0, u[1], 1, u[2], 0],
        [0, 0, u[3], 1, u[4]],
        [u[5], 0, 0, u[6], 1],
        [1, u[7], 0, 0, 1],
        [u[8], 1, u[9], 0, 0],
        [1, 1, 1, 1, u[10]],
    ], dtype=complex)


def u61_coefficients(u10: float) -> dict[int, float]:
    """Closed forms of u_1..u_9 in terms of the real root u_10."""
    return {
        1: (u10 - 2) / (1 - u10),
        2: (u10 - 1) / (u10 - 2),
        3: (3 - 2 * u10) / (u10 - 2),
        4: u10 * (u10 - 2) / (2 * u10 - 3),
        5: -1 - u10,
        6: 1 / (1 + u10),
        7: -u10,
        8: u10 - 1,
        9: 1 / (1 - u10),
        10: u10,
    }
