"""Dense integer matrices with exact arithmetic."""

from __future__ import annotations

import json
from typing import Iterable, Sequence


class IntMatrix:
    """Row-major integer matrix; entries are Python ints.

    Instances are treated as immutable: every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence[int]] = (), cols: int | None = None):
        self.data = [[int(x) for x in row] for row in data]
        self.rows = len(self.data)
        if cols is None:
            if not self.data:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(self.data[0])
        self.cols = cols
        for row in self.data:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns, got {len(row)}")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self):
        return f"IntMatrix({self.data!r}, cols={self.cols})"

    @property
    def shape(self):
        return (self.rows, self.cols)

    def copy_rows(self) -> list[list[int]]:
        return [row[:] for row in self.data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[row[j] for row in self.data] for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.cols
        onz = [[(j, y) for j, y in enumerate(r) if y] for r in other.data]
        out = []
        for row in self.data:
            acc = [0] * ocols
            for k, x in enumerate(row):
                if x:
                    for j, y in onz[k]:
                        acc[j] += x * y
            out.append(acc)
        return IntMatrix(out, ocols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.data], self.cols)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.data)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return IntMatrix(self.copy_rows() + other.copy_rows(), self.cols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix([r + s for r, s in zip(self.data, other.data)], self.cols + other.cols)

    def select_rows(self, idx: Iterable[int]) -> "IntMatrix":
        return IntMatrix([self.data[i][:] for i in idx], self.cols)

    def select_cols(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[row[j] for j in idx] for row in self.data], len(idx))

    def to_json(self) -> str:
        return json.dumps(matrix_to_obj(self))


def matrix_to_obj(m: IntMatrix) -> dict:
    """JSON-ready dict: row-major entries as decimal strings."""
    return {"rows": m.rows, "cols": m.cols, "entries": [[str(x) for x in row] for row in m.data]}


def matrix_from_obj(obj: dict) -> IntMatrix:
    m = IntMatrix([[int(x) for x in row] for row in obj["entries"]], int(obj["cols"]))
    if m.rows != int(obj["rows"]):
        raise ValueError("row count does not match entries")
    return m


def matrix_from_json(text: str) -> IntMatrix:
    return matrix_from_obj(json.loads(text))


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = m.copy_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1
