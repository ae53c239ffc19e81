"""Duality structures and the induced representation of the Brauer category.

Matrices are exact (``fractions.Fraction``).  The basis of ``V^{(x) k}`` is
ordered lexicographically with the leftmost factor most significant, so the
tensor product of maps is the Kronecker product and is strictly associative.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .brauer import (
    BrauerMorphism,
    Compose,
    Gen,
    Id,
    Tensor,
    Word,
    decompose_to_word,
    enumerate_morphisms,
    evaluate_word,
    relation_words,
)
from .report import Report

MAX_SIDE = 4096


class MatrixTooLarge(ValueError):
    """Raised when a dense representation matrix would exceed the size limit."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, Fraction or a 'p/q' string")
    return Fraction(x)


@dataclass(frozen=True)
class RepMatrix:
    """A ``d^n x d^m`` exact matrix representing a map ``V^{(x) m} -> V^{(x) n}``."""

    m: int
    n: int
    d: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows, cols = self.d**self.n, self.d**self.m
        if len(self.entries) != rows or any(len(r) != cols for r in self.entries):
            raise ValueError(f"expected a {rows}x{cols} matrix for m={self.m}, n={self.n}, d={self.d}")

    @classmethod
    def from_rows(cls, m: int, n: int, d: int, rows: Iterable[Iterable]) -> "RepMatrix":
        return cls(m, n, d, tuple(tuple(_frac(x) for x in row) for row in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    @property
    def dom(self) -> int:
        return self.m

    @property
    def cod(self) -> int:
        return self.n

    def sort_key(self):
        return (self.m, self.n, self.d, self.entries)

    def __lt__(self, other: "RepMatrix") -> bool:
        return self.sort_key() < other.sort_key()

    def scaled(self, c) -> "RepMatrix":
        c = _frac(c)
        return RepMatrix(self.m, self.n, self.d, tuple(tuple(c * x for x in row) for row in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def values(self) -> set[Fraction]:
        return {x for row in self.entries for x in row}

    def to_text(self) -> str:
        """Header line, then one line of ``p/q`` entries per row."""
        rows, cols = self.shape
        lines = [f"rows={rows} cols={cols} m={self.m} n={self.n} d={self.d}"]
        lines += [" ".join(str(x) for x in row) for row in self.entries]
        return "\n".join(lines)

    def key_text(self) -> str:
        """Single-line form used as a key string."""
        return f"M:{self.m};{self.n};{self.d};" + "|".join(",".join(str(x) for x in row) for row in self.entries)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RepMatrix":
        return cls.from_rows(int(data["m"]), int(data["n"]), int(data["d"]), data["entries"])

    @classmethod
    def from_text(cls, text: str) -> "RepMatrix":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        header = dict(tok.split("=") for tok in lines[0].split())
        m, n, d = int(header["m"]), int(header["n"]), int(header["d"])
        return cls.from_rows(m, n, d, (ln.split() for ln in lines[1:]))

    @classmethod
    def from_key_text(cls, text: str) -> "RepMatrix":
        if not text.startswith("M:"):
            raise ValueError(f"not a matrix key: {text!r}")
        m, n, d, body = text[2:].split(";", 3)
        return cls.from_rows(int(m), int(n), int(d), (row.split(",") for row in body.split("|")))

    def __str__(self) -> str:
        return self.to_text()


# ---------------------------------------------------------------------------
# sparse working representation: (rows, cols, {r: {c: value}})


class _Sparse:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: dict[int, dict[int, Fraction]]):
        self.rows, self.cols, self.data = rows, cols, data

    @classmethod
    def identity(cls, size: int) -> "_Sparse":
        return cls(size, size, {i: {i: Fraction(1)} for i in range(size)})

    @classmethod
    def dense(cls, rows: Sequence[Sequence[Fraction]]) -> "_Sparse":
        data = {}
        for r, row in enumerate(rows):
            nz = {c: x for c, x in enumerate(row) if x}
            if nz:
                data[r] = nz
        return cls(len(rows), len(rows[0]) if rows else 0, data)

    def matmul(self, other: "_Sparse") -> "_Sparse":
        """``self @ other``."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = {}
        odata = other.data
        for r, row in self.data.items():
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                orow = odata.get(k)
                if not orow:
                    continue
                for c, b in orow.items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return _Sparse(self.rows, other.cols, out)

    def kron(self, other: "_Sparse") -> "_Sparse":
        out = {}
        orows, ocols = other.rows, other.cols
        for r1, row1 in self.data.items():
            for r2, row2 in other.data.items():
                out[r1 * orows + r2] = {
                    c1 * ocols + c2: a * b for c1, a in row1.items() for c2, b in row2.items()
                }
        return _Sparse(self.rows * orows, self.cols * ocols, out)

    def scale(self, c: Fraction) -> "_Sparse":
        if c == 0:
            return _Sparse(self.rows, self.cols, {})
        return _Sparse(self.rows, self.cols, {r: {k: c * v for k, v in row.items()} for r, row in self.data.items()})

    def to_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        zero = Fraction(0)
        out = []
        for r in range(self.rows):
            row = [zero] * self.cols
            for c, v in self.data.get(r, {}).items():
                row[c] = v
            out.append(tuple(row))
        return tuple(out)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualityStructure:
    """Symmetric copairing (unit) and its inverse pairing (counit) on ``V = Q^d``."""

    dim: int
    mat_unit: tuple[tuple[Fraction, ...], ...]
    mat_counit: tuple[tuple[Fraction, ...], ...]

    @property
    def trace(self) -> Fraction:
        """``e o i``; equals ``dim`` for every duality structure."""
        d = self.dim
        return sum((self.mat_unit[j][k] * self.mat_counit[j][k] for j in range(d) for k in range(d)), Fraction(0))

    def unit_column(self) -> _Sparse:
        d = self.dim
        return _Sparse.dense([[self.mat_unit[j][k]] for j in range(d) for k in range(d)])

    def counit_row(self) -> _Sparse:
        d = self.dim
        return _Sparse.dense([[self.mat_counit[j][k] for j in range(d) for k in range(d)]])

    def swap(self) -> _Sparse:
        d = self.dim
        # b(e_j (x) e_k) = e_k (x) e_j
        return _Sparse(d * d, d * d, {k * d + j: {j * d + k: Fraction(1)} for j in range(d) for k in range(d)})

    def to_text(self) -> str:
        lines = [str(self.dim)]
        lines += [" ".join(str(x) for x in row) for row in self.mat_unit]
        return "\n".join(lines)


def _inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals; raises on singular input."""
    d = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(mat)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("unit matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def make_duality(mat_unit: Sequence[Sequence]) -> DualityStructure:
    """Validate a symmetric invertible unit matrix and attach its inverse as counit."""
    rows = [[_frac(x) for x in row] for row in mat_unit]
    d = len(rows)
    if d < 2:
        raise ValueError("duality structures need dim V >= 2")
    if any(len(row) != d for row in rows):
        raise ValueError("unit matrix must be square")
    if any(rows[j][k] != rows[k][j] for j in range(d) for k in range(d)):
        raise ValueError("unit matrix must be symmetric")
    inv = _inverse(rows)
    return DualityStructure(d, tuple(map(tuple, rows)), tuple(map(tuple, inv)))


def example_structure() -> DualityStructure:
    """The loop-faithful structure on ``V = R^2``: ``i(1) = e11 + e12 + e21``."""
    return make_duality([[1, 1], [1, 0]])


def parse_duality(text: str) -> DualityStructure:
    """Read ``d`` on the first line, then ``d`` rows of the unit matrix."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty duality file")
    d = int(lines[0])
    if len(lines) != d + 1:
        raise ValueError(f"expected {d} matrix rows, found {len(lines) - 1}")
    rows = [ln.split() for ln in lines[1:]]
    if any(len(r) != d for r in rows):
        raise ValueError(f"every row must have {d} entries")
    return make_duality(rows)


def random_duality(rng: random.Random, dim: int, max_num: int = 3, max_den: int = 3) -> DualityStructure:
    """A random symmetric invertible rational unit matrix."""
    while True:
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            for k in range(j, dim):
                x = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
                mat[j][k] = mat[k][j] = x
        try:
            return make_duality(mat)
        except ValueError:
            continue


def _check_size(D: DualityStructure, m: int, n: int) -> None:
    if D.dim**m > MAX_SIDE or D.dim**n > MAX_SIDE:
        raise MatrixTooLarge(f"d^m or d^n exceeds {MAX_SIDE} (d={D.dim}, m={m}, n={n})")


def _eval_sparse(D: DualityStructure, w: Word, cache: dict) -> _Sparse:
    if isinstance(w, Gen):
        key = ("gen", w.name)
        if key not in cache:
            cache[key] = {"i": D.unit_column, "e": D.counit_row, "b": D.swap}[w.name]()
        return cache[key]
    if isinstance(w, Id):
        return _Sparse.identity(D.dim**w.k)
    if isinstance(w, Tensor):
        return _eval_sparse(D, w.left, cache).kron(_eval_sparse(D, w.right, cache))
    if isinstance(w, Compose):
        return _eval_sparse(D, w.outer, cache).matmul(_eval_sparse(D, w.inner, cache))
    raise TypeError(f"not a word: {w!r}")


def rep_word(D: DualityStructure, w: Word) -> RepMatrix:
    """Evaluate a generator word directly in matrices, without passing through diagrams."""
    _check_size(D, w.dom, w.cod)
    return RepMatrix(w.dom, w.cod, D.dim, _eval_sparse(D, w, {}).to_rows())


def rep(D: DualityStructure, f: BrauerMorphism) -> RepMatrix:
    """``Y(f)`` computed from the generator word of ``f``."""
    return rep_word(D, decompose_to_word(f))


def rep_direct(D: DualityStructure, f: BrauerMorphism) -> RepMatrix:
    """``Y(f)`` by direct index contraction over the pairing."""
    _check_size(D, f.m, f.n)
    d, m, n = D.dim, f.m, f.n
    scale = Fraction(D.trace) ** f.loops
    pairs = f.pairs
    rows = []
    for out_idx in itertools.product(range(d), repeat=n):
        row = []
        for in_idx in itertools.product(range(d), repeat=m):
            digits = in_idx + out_idx
            val = scale
            for a, b in pairs:
                x, y = digits[a], digits[b]
                if b < m:
                    val *= D.mat_counit[x][y]
                elif a >= m:
                    val *= D.mat_unit[x][y]
                elif x != y:
                    val = Fraction(0)
                if not val:
                    break
            row.append(val)
        rows.append(tuple(row))
    return RepMatrix(m, n, d, tuple(rows))


def check_loop_faithful(D: DualityStructure, max_size: int, max_loops: int) -> Report:
    """Exhaustively test that equal images force equal loop counts."""
    report = Report(f"loop-faithfulness (m+n <= {max_size}, loops <= {max_loops}, d={D.dim})")
    seen: dict[RepMatrix, BrauerMorphism] = {}
    counterexample = None
    zero_image = None
    for f in enumerate_morphisms(max_size, max_loops):
        y = rep(D, f)
        if zero_image is None and y.is_zero():
            zero_image = f
        prev = seen.setdefault(y, f)
        if prev.loops != f.loops and counterexample is None:
            counterexample = (prev, f)
    if counterexample is None:
        report.add("equal images have equal loop counts", True, f"{len(seen)} distinct images")
    else:
        a, b = counterexample
        report.add("equal images have equal loop counts", False, f"Y({a}) = Y({b})")
    report.add("no zero image", zero_image is None, "" if zero_image is None else str(zero_image))
    return report


def verify_relation_images(D: DualityStructure) -> Report:
    """Evaluate both sides of each relation word as matrices and compare."""
    report = Report(f"relations (matrix level, d={D.dim})")
    for name, (lhs, rhs) in relation_words().items():
        a, b = rep_word(D, lhs), rep_word(D, rhs)
        via_diagram = rep(D, evaluate_word(lhs))
        report.add(name, a == b == via_diagram)
    report.add("trace: Y(loop) = dim V", rep_word(D, Compose(Gen("e"), Gen("i"))).entries == ((Fraction(D.dim),),))
    return report


def determinant(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-preserving elimination."""
    a = [list(map(_frac, row)) for row in mat]
    d = len(a)
    det = Fraction(1)
    for col in range(d):
        pivot = next((r for r in range(col, d) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, d):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def matrix_json(y: RepMatrix) -> str:
    return json.dumps(y.to_dict(), sort_keys=True, separators=(",", ":"))
