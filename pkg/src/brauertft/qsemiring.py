"""Truncated Boolean power series and the profinite idempotent completion Q.

An element of ``Q`` is a finitely supported family ``key -> BoolSeries`` where
each key is a shell element: either a loop-free Brauer morphism (diagram
keying) or its image matrix (matrix keying).  Slots ``(m, n)`` are read off the
keys themselves.

>>> a = bs_from_exponents([0, 1])
>>> sorted(bs_mul(a, a).exponents)
[0, 1, 2]
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .brauer import BrauerMorphism, compose, enumerate_loop_free, identity, strip_loops, tensor
from .rep import DualityStructure, RepMatrix, _frac, rep
from .report import Report

DEFAULT_TRUNC = 64


# ---------------------------------------------------------------------------
# B[[q]] truncated at degree N (exponents 0..N-1)


@dataclass(frozen=True)
class BoolSeries:
    """A Boolean power series truncated below ``q^trunc``, stored as a bitmask."""

    bits: int
    trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        if self.trunc < 1:
            raise ValueError("truncation degree must be positive")
        if self.bits < 0 or self.bits >> self.trunc:
            raise ValueError("exponent outside truncation window")

    @property
    def exponents(self) -> frozenset[int]:
        bits, out, i = self.bits, [], 0
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return frozenset(out)

    def sorted_exponents(self) -> list[int]:
        return sorted(self.exponents)

    def is_zero(self) -> bool:
        return self.bits == 0

    def min_exponent(self) -> Optional[int]:
        if not self.bits:
            return None
        return (self.bits & -self.bits).bit_length() - 1

    def __contains__(self, k: int) -> bool:
        return k >= 0 and bool(self.bits >> k & 1)

    def __le__(self, other: "BoolSeries") -> bool:
        return self.bits & ~other.bits == 0

    def shift(self, k: int) -> "BoolSeries":
        """Multiply by ``q^k``."""
        return BoolSeries((self.bits << k) & ((1 << self.trunc) - 1), self.trunc)

    def truncate(self, trunc: int) -> "BoolSeries":
        trunc = min(trunc, self.trunc)
        return BoolSeries(self.bits & ((1 << trunc) - 1), trunc)

    def to_text(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for k in self.sorted_exponents():
            terms.append("1" if k == 0 else "q" if k == 1 else f"q^{k}")
        return " + ".join(terms)

    def to_dict(self) -> dict:
        return {"trunc": self.trunc, "exponents": self.sorted_exponents()}

    @classmethod
    def from_dict(cls, data: Mapping) -> "BoolSeries":
        return bs_from_exponents(data["exponents"], int(data["trunc"]))

    def __str__(self) -> str:
        return self.to_text()


def bs_from_exponents(exponents: Iterable[int], trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    """Exponents at or beyond ``trunc`` are dropped."""
    bits = 0
    for k in exponents:
        if k < 0:
            raise ValueError("exponents must be non-negative")
        if k < trunc:
            bits |= 1 << k
    return BoolSeries(bits, trunc)


def bs_zero(trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    return BoolSeries(0, trunc)


def bs_one(trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    return BoolSeries(1, trunc)


def bs_qpow(k: int, trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    return bs_from_exponents([k], trunc)


def bs_geom2(trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    """``1/(1-q^2) = 1 + q^2 + q^4 + ...``"""
    return bs_from_exponents(range(0, trunc, 2), trunc)


def bs_add(a: BoolSeries, b: BoolSeries) -> BoolSeries:
    trunc = min(a.trunc, b.trunc)
    mask = (1 << trunc) - 1
    return BoolSeries((a.bits | b.bits) & mask, trunc)


def bs_mul(a: BoolSeries, b: BoolSeries) -> BoolSeries:
    """Cauchy product with Boolean coefficients (truncated Minkowski sum)."""
    trunc = min(a.trunc, b.trunc)
    mask = (1 << trunc) - 1
    x, y = a.bits & mask, b.bits & mask
    if x.bit_count() > y.bit_count():
        x, y = y, x
    out, i = 0, 0
    while x:
        if x & 1:
            out |= y << i
        x >>= 1
        i += 1
    return BoolSeries(out & mask, trunc)


def bs_big_sum(family: Iterable[BoolSeries], trunc: int = DEFAULT_TRUNC) -> BoolSeries:
    """Sum of a finite family; depends only on the underlying set and equals its supremum."""
    bits = 0
    for b in family:
        trunc = min(trunc, b.trunc)
        bits |= b.bits
    return BoolSeries(bits & ((1 << trunc) - 1), trunc)


def rationalize(b: BoolSeries) -> Optional[tuple[int, int, int]]:
    """Match ``b`` against the truncation of ``q^r (1 + beta q^(2s+1)) / (1 - q^2)``.

    Returns ``(r, beta, s)`` (``s = 0`` when ``beta = 0``) or ``None``.  A match
    is only reported when the window is wide enough to be conclusive, that is
    ``trunc >= r + 2s + 5``.
    """
    r = b.min_exponent()
    if r is None:
        return None
    odd = [k for k in b.exponents if (k - r) % 2]
    if odd:
        beta, s = 1, (min(odd) - r - 1) // 2
    else:
        beta, s = 0, 0
    if b.trunc < r + 2 * s + 5:
        return None
    expected = bs_from_exponents(range(r, b.trunc, 2), b.trunc)
    if beta:
        expected = bs_add(expected, bs_from_exponents(range(r + 2 * s + 1, b.trunc, 2), b.trunc))
    return (r, beta, s) if expected == b else None


# ---------------------------------------------------------------------------
# minimal shells of lambda-profinite sets of matrices


def _power_exponent(c: Fraction, scale: Fraction) -> Optional[int]:
    """``k > 0`` with ``scale^k == c``, if any."""
    k, p = 1, scale
    while abs(p) <= abs(c) if abs(scale) > 1 else abs(p) >= abs(c):
        if p == c:
            return k
        k += 1
        p *= scale
        if k > 4096:
            break
    return None


def _ratio(h: RepMatrix, h0: RepMatrix) -> Optional[Fraction]:
    """``c`` with ``h == c * h0``, or ``None``."""
    if (h.m, h.n, h.d) != (h0.m, h0.n, h0.d):
        return None
    c = None
    for row, row0 in zip(h.entries, h0.entries):
        for x, x0 in zip(row, row0):
            if x0 == 0:
                if x != 0:
                    return None
            elif c is None:
                c = x / x0
            elif x != c * x0:
                return None
    return c


def minimal_shell(generators: Iterable[RepMatrix], scale) -> set[RepMatrix]:
    """Drop every generator that is ``scale^k`` (``k > 0``) times another generator."""
    scale = _frac(scale)
    if scale in (0, 1, -1):
        raise ValueError("scale must avoid 0, 1 and -1")
    gens = set(generators)
    if any(g.is_zero() for g in gens):
        raise ValueError("generators must be nonzero")
    shell = set()
    for h in gens:
        reducible = False
        for h0 in gens:
            if h0 is h or h0 == h:
                continue
            c = _ratio(h, h0)
            if c is not None and _power_exponent(c, scale) is not None:
                reducible = True
                break
        if not reducible:
            shell.add(h)
    return shell


def shell_decompose(h: RepMatrix, shell: Iterable[RepMatrix], scale) -> Optional[tuple[RepMatrix, int]]:
    """The unique ``(s, k)`` with ``h = scale^k * s`` and ``s`` in ``shell``."""
    scale = _frac(scale)
    for s in shell:
        if s == h:
            return s, 0
        c = _ratio(h, s)
        if c is not None:
            k = _power_exponent(c, scale)
            if k is not None:
                return s, k
    return None


class MatrixShells:
    """Shells ``Y(OP_{m,n})`` of one duality structure, computed lazily per slot."""

    def __init__(self, D: DualityStructure):
        self.D = D
        self.scale = Fraction(D.trace)
        self._shells: dict[tuple[int, int], frozenset[RepMatrix]] = {}
        self._normal: dict[RepMatrix, tuple[RepMatrix, int]] = {}

    def shell(self, m: int, n: int) -> frozenset[RepMatrix]:
        if (m, n) not in self._shells:
            images = {rep(self.D, f) for f in enumerate_loop_free(m, n)}
            self._shells[(m, n)] = frozenset(minimal_shell(images, self.scale))
        return self._shells[(m, n)]

    def normalize(self, h: RepMatrix) -> tuple[RepMatrix, int]:
        if h not in self._normal:
            found = shell_decompose(h, self.shell(h.m, h.n), self.scale)
            if found is None:
                raise ValueError("matrix does not lie in the scaled shell of its slot")
            self._normal[h] = found
        return self._normal[h]


# ---------------------------------------------------------------------------
# elements of Q

QKey = Union[BrauerMorphism, RepMatrix]


def _key_text(key: QKey) -> str:
    return key.to_text() if isinstance(key, BrauerMorphism) else key.key_text()


class QElement:
    """Finitely supported element of ``Q``: shell key -> nonzero BoolSeries."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[QKey, BoolSeries] | None = None):
        clean = {}
        for key, series in (terms or {}).items():
            if isinstance(key, BrauerMorphism) and key.loops:
                raise ValueError("diagram keys must be loop-free")
            if not series.is_zero():
                clean[key] = series
        self._terms = clean
        self._hash = None

    @property
    def terms(self) -> Mapping[QKey, BoolSeries]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __getitem__(self, key: QKey) -> BoolSeries:
        series = self._terms.get(key)
        return series if series is not None else bs_zero(self.trunc)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def trunc(self) -> int:
        return min((s.trunc for s in self._terms.values()), default=DEFAULT_TRUNC)

    def is_zero(self) -> bool:
        return not self._terms

    def slots(self) -> dict[tuple[int, int], dict[QKey, BoolSeries]]:
        out: dict[tuple[int, int], dict[QKey, BoolSeries]] = {}
        for key, series in self.sorted_items():
            out.setdefault((key.m, key.n), {})[key] = series
        return out

    def sorted_items(self) -> list[tuple[QKey, BoolSeries]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def mode(self) -> Optional[str]:
        kinds = {type(k) for k in self._terms}
        if not kinds:
            return None
        if len(kinds) > 1:
            return "mixed"
        return "diagram" if BrauerMorphism in kinds else "matrix"

    def __eq__(self, other) -> bool:
        return isinstance(other, QElement) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __le__(self, other: "QElement") -> bool:
        return q_add(self, other) == other

    def __add__(self, other: "QElement") -> "QElement":
        return q_add(self, other)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return "\n".join(f"[{_key_text(k)}] {s.to_text()}" for k, s in self.sorted_items())

    def to_dict(self) -> dict:
        return {
            f"{m},{n}": {_key_text(k): s.to_dict() for k, s in slot.items()}
            for (m, n), slot in self.slots().items()
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "QElement":
        terms = {}
        for slot, entries in data.items():
            for key_text, series in entries.items():
                if key_text.startswith("M:"):
                    key: QKey = RepMatrix.from_key_text(key_text)
                else:
                    key = BrauerMorphism.from_text(key_text)
                if f"{key.m},{key.n}" != slot:
                    raise ValueError(f"key {key_text!r} filed under wrong slot {slot!r}")
                terms[key] = BoolSeries.from_dict(series)
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "QElement":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"QElement({self.to_text()!r})"


def q_zero() -> QElement:
    return QElement()


def q_single(key: QKey, series: BoolSeries) -> QElement:
    return QElement({key: series})


def q_from_morphism(f: BrauerMorphism, trunc: int = DEFAULT_TRUNC) -> QElement:
    """``Y(f) (x) 1`` in shell normal form: key ``f0`` with series ``q^loops``."""
    f0, k = strip_loops(f)
    return QElement({f0: bs_qpow(k, trunc)})


def q_add(x: QElement, y: QElement) -> QElement:
    terms = dict(x._terms)
    for key, s in y._terms.items():
        terms[key] = bs_add(terms[key], s) if key in terms else s
    return QElement(terms)


def q_big_sum(family: Iterable[QElement]) -> QElement:
    terms: dict[QKey, BoolSeries] = {}
    for x in family:
        for key, s in x._terms.items():
            terms[key] = bs_add(terms[key], s) if key in terms else s
    return QElement(terms)


def _accumulate(terms: dict, key: QKey, series: BoolSeries) -> None:
    if not series.is_zero():
        terms[key] = bs_add(terms[key], series) if key in terms else series


def q_compose(x: QElement, y: QElement, shells: Optional[MatrixShells] = None) -> QElement:
    """Product of ``Q^c``: ``x`` first, then ``y`` (pairs matched on the middle object).

    Diagram keys compose as Brauer morphisms and new loops become powers of
    ``q``; matrix keys compose as matrices and are renormalized into the
    shell, which needs ``shells``.
    """
    by_dom: dict[int, list] = {}
    for key, s in y._terms.items():
        by_dom.setdefault(key.m, []).append((key, s))
    terms: dict[QKey, BoolSeries] = {}
    for k1, s1 in x._terms.items():
        for k2, s2 in by_dom.get(k1.n, ()):
            if isinstance(k1, BrauerMorphism) and isinstance(k2, BrauerMorphism):
                key, loops = strip_loops(compose(k2, k1))
            elif isinstance(k1, RepMatrix) and isinstance(k2, RepMatrix):
                if shells is None:
                    raise ValueError("matrix-keyed composition needs the slot shells")
                key, loops = shells.normalize(_matmul(k2, k1))
            else:
                raise TypeError("cannot mix diagram and matrix keys")
            _accumulate(terms, key, bs_mul(s1, s2).shift(loops))
    return QElement(terms)


def q_monoidal(x: QElement, y: QElement) -> QElement:
    """Product of ``Q^m``: tensor of keys; loop-free stays loop-free."""
    terms: dict[QKey, BoolSeries] = {}
    for k1, s1 in x._terms.items():
        for k2, s2 in y._terms.items():
            if isinstance(k1, BrauerMorphism) and isinstance(k2, BrauerMorphism):
                key: QKey = tensor(k1, k2)
            elif isinstance(k1, RepMatrix) and isinstance(k2, RepMatrix):
                key = _kron(k1, k2)
            else:
                raise TypeError("cannot mix diagram and matrix keys")
            _accumulate(terms, key, bs_mul(s1, s2))
    return QElement(terms)


def _matmul(a: RepMatrix, b: RepMatrix) -> RepMatrix:
    """``a @ b`` (apply ``b`` first)."""
    if a.d != b.d or b.n != a.m:
        raise ValueError("shape mismatch")
    cols = list(zip(*b.entries))
    rows = tuple(tuple(sum((p * q for p, q in zip(row, col)), Fraction(0)) for col in cols) for row in a.entries)
    return RepMatrix(b.m, a.n, a.d, rows)


def _kron(a: RepMatrix, b: RepMatrix) -> RepMatrix:
    if a.d != b.d:
        raise ValueError("dimension mismatch")
    rows = tuple(
        tuple(x * y for x in ra for y in rb) for ra in a.entries for rb in b.entries
    )
    return RepMatrix(a.m + b.m, a.n + b.n, a.d, rows)


def unit_compose(objects: Iterable[int], trunc: int = DEFAULT_TRUNC) -> QElement:
    """The ``Q^c`` unit restricted to the slots ``(k, k)`` for ``k`` in ``objects``."""
    return QElement({identity(k): bs_one(trunc) for k in set(objects)})


def unit_compose_for(*elements: QElement, trunc: int = DEFAULT_TRUNC) -> QElement:
    """Partial ``Q^c`` unit covering every object that occurs in ``elements``."""
    objs = {k for x in elements for key in x.keys() for k in (key.m, key.n)}
    return unit_compose(objs, trunc)


def unit_monoidal(trunc: int = DEFAULT_TRUNC) -> QElement:
    return QElement({identity(0): bs_one(trunc)})


def to_matrix_keys(x: QElement, D: DualityStructure) -> QElement:
    """Replace each diagram key by its image matrix; colliding keys merge."""
    terms: dict[QKey, BoolSeries] = {}
    for key, s in x.items():
        if not isinstance(key, BrauerMorphism):
            raise ValueError("element is not diagram-keyed")
        _accumulate(terms, rep(D, key), s)
    return QElement(terms)


class Semiring(NamedTuple):
    """The operations of ``Q^c`` or ``Q^m`` bundled for generic code."""

    name: str
    add: Callable[[QElement, QElement], QElement]
    mul: Callable[[QElement, QElement], QElement]
    big_sum: Callable[[Iterable[QElement]], QElement]
    zero: Callable[[], QElement]
    one_for: Callable[..., QElement]


QC = Semiring("Q^c", q_add, q_compose, q_big_sum, q_zero, unit_compose_for)
QM = Semiring("Q^m", q_add, q_monoidal, q_big_sum, q_zero, lambda *xs, **kw: unit_monoidal(**kw))


# ---------------------------------------------------------------------------
# randomized law checks


def _random_element(rng: random.Random, pool: Sequence[BrauerMorphism], trunc: int) -> QElement:
    terms = {}
    for _ in range(rng.randint(0, 3)):
        exps = rng.sample(range(6), rng.randint(1, 2))
        terms[rng.choice(pool)] = bs_from_exponents(exps, trunc)
    return QElement(terms)


def verify_laws(rng: random.Random, samples: int = 500, trunc: int = DEFAULT_TRUNC, D: Optional[DualityStructure] = None) -> Report:
    """Randomized law checks for ``Q^c`` and ``Q^m``.

    With ``D`` the ``Q^c`` checks run on matrix keys, composing through the
    slot shells of ``D``.
    """
    pool = enumerate_loop_free(1, 1) + enumerate_loop_free(2, 2) + enumerate_loop_free(0, 2)
    pool += enumerate_loop_free(2, 0) + enumerate_loop_free(0, 0)
    shells = MatrixShells(D) if D is not None else None

    def conv(x):
        return to_matrix_keys(x, D) if D is not None else x

    def qc(x, y):
        return q_compose(x, y, shells)

    def one_c(*xs):
        objs = {k for x in xs for key in x.keys() for k in (key.m, key.n)}
        return conv(unit_compose(objs, trunc))

    report = Report(f"semiring laws ({samples} samples each" + (", matrix keys)" if D else ")"))
    for name, mul, one in (("Q^c", qc, one_c), ("Q^m", q_monoidal, lambda *xs: conv(unit_monoidal(trunc)))):
        fails: dict[str, int] = {}

        def check(label, cond):
            if not cond:
                fails[label] = fails.get(label, 0) + 1

        for _ in range(samples):
            x, y, z = (conv(_random_element(rng, pool, trunc)) for _ in range(3))
            check("associativity", mul(mul(x, y), z) == mul(x, mul(y, z)))
            u = one(x)
            check("unit", mul(u, x) == x and mul(x, u) == x)
            check("left distributivity", mul(x, q_add(y, z)) == q_add(mul(x, y), mul(x, z)))
            check("right distributivity", mul(q_add(x, y), z) == q_add(mul(x, z), mul(y, z)))
            check("zero annihilates", mul(x, QElement()).is_zero() and mul(QElement(), x).is_zero())
            check("idempotence", q_add(x, x) == x)
            check("commutative addition", q_add(x, y) == q_add(y, x))
            fam = [x, y, z, y, x]
            check("set-dependent summation", q_big_sum(fam) == q_big_sum([x, y, z]))
            s = q_big_sum(fam)
            bound = q_add(q_add(x, y), q_add(z, conv(_random_element(rng, pool, trunc))))
            check("sum is the supremum", all(t <= s for t in fam) and s <= bound)
            check("summation distributes", mul(x, q_big_sum([y, z])) == q_big_sum([mul(x, y), mul(x, z)]))
        for label in (
            "associativity",
            "unit",
            "left distributivity",
            "right distributivity",
            "zero annihilates",
            "idempotence",
            "commutative addition",
            "set-dependent summation",
            "sum is the supremum",
            "summation distributes",
        ):
            n_bad = fails.get(label, 0)
            report.add(f"{name} {label}", n_bad == 0, f"{n_bad} failures" if n_bad else "")
    return report
