"""Exact integer matrices and their text forms (Matrix Market, dense)."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import MalformedLine

MM_HEADER = "%%MatrixMarket matrix coordinate integer general"


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def zeros(cls, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def to_numpy(self, dtype=np.int64) -> np.ndarray:
        return np.array(self.rows, dtype=dtype).reshape(self.n, self.n)

    def nonzeros(self) -> list[tuple[int, int, int]]:
        return [
            (i, j, value)
            for i, row in enumerate(self.rows)
            for j, value in enumerate(row)
            if value != 0
        ]

    def delete(self, indices: Sequence[int]) -> "IntMatrix":
        """Drop the given rows and the matching columns."""
        keep = [i for i in range(self.n) if i not in set(indices)]
        return IntMatrix(tuple(tuple(self.rows[i][j] for j in keep) for i in keep))

    def scale_row(self, row: int, factor: int) -> "IntMatrix":
        rows = list(self.rows)
        rows[row] = tuple(factor * x for x in rows[row])
        return IntMatrix(tuple(rows))


def export_matrix_market(matrix: IntMatrix) -> str:
    """Coordinate format, 1-based, nonzeros in row-major order."""
    entries = matrix.nonzeros()
    lines = [MM_HEADER, f"{matrix.n} {matrix.n} {len(entries)}"]
    lines.extend(f"{i + 1} {j + 1} {value}" for i, j, value in entries)
    return "\n".join(lines) + "\n"


def read_matrix_market(text: str) -> IntMatrix:
    lines = iter(enumerate(text.splitlines(), start=1))
    header = next(lines, (1, ""))
    if header[1].strip().lower() != MM_HEADER.lower():
        raise MalformedLine("expected a coordinate integer general header", header[0])

    size = None
    for lineno, raw in lines:
        if not raw.strip() or raw.startswith("%"):
            continue
        parts = raw.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise MalformedLine(f"non-integer field in {raw.strip()!r}", lineno) from None
        if len(values) != 3:
            raise MalformedLine("expected three fields", lineno)
        if size is None:
            rows_, cols, _ = values
            if rows_ != cols:
                raise MalformedLine("matrix must be square", lineno)
            size = rows_
            data = [[0] * size for _ in range(size)]
            continue
        i, j, value = values
        if not (1 <= i <= size and 1 <= j <= size):
            raise MalformedLine(f"entry ({i}, {j}) outside a {size}x{size} matrix", lineno)
        data[i - 1][j - 1] = value

    if size is None:
        raise MalformedLine("missing size line")
    return IntMatrix.from_rows(data)


def format_dense(matrix: IntMatrix) -> str:
    return "".join(" ".join(str(x) for x in row) + "\n" for row in matrix.rows)


def parse_dense(text: str) -> IntMatrix:
    rows = [[int(x) for x in line.split()] for line in text.splitlines() if line.strip()]
    return IntMatrix.from_rows(rows)
