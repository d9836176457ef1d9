"""Plain-text matrix files: first line "rows cols", then row-major entries."""

import numpy as np

from .linalg import as_matrix


def save_matrix(path, a):
    m = as_matrix(a)
    rows, cols = m.shape
    with open(path, "w") as fh:
        fh.write(f"{rows} {cols}\n")
        for row in m:
            fh.write(" ".join(repr(float(x)) for x in row))
            fh.write("\n")


def load_matrix(path):
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'rows cols' header")
    try:
        rows, cols = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed 'rows cols' header") from exc
    body = tokens[2:]
    if len(body) != rows * cols:
        raise ValueError(
            f"{path}: expected {rows * cols} entries for a {rows}x{cols} "
            f"matrix, found {len(body)}"
        )
    data = np.array([float(t) for t in body]).reshape(rows, cols)
    return as_matrix(data)
