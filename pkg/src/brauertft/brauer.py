"""Brauer diagrams: unoriented matchings of boundary points plus a loop count.

Points of a morphism ``[m] -> [n]`` live in one 0-based index space: inputs
``0..m-1`` followed by outputs ``m..m+n-1``.  A morphism is the fixed-point-free
involution on that space together with the number of closed components.

>>> lam = compose(counit(1), unit(1))
>>> lam.loops, lam.m, lam.n
(1, 0, 0)
>>> compose(braiding(1, 1), braiding(1, 1)) == identity(2)
True
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

__all__ = [
    "BrauerMorphism",
    "identity",
    "braiding",
    "unit",
    "counit",
    "loop",
    "loops_only",
    "compose",
    "tensor",
    "tensor_all",
    "strip_loops",
    "enumerate_loop_free",
    "enumerate_morphisms",
    "double_factorial",
    "is_isomorphism",
    "as_permutation",
    "from_permutation",
    "Gen",
    "Id",
    "Compose",
    "Tensor",
    "Word",
    "evaluate_word",
    "decompose_to_word",
    "relation_words",
    "verify_relations",
]


@dataclass(frozen=True, eq=True)
class BrauerMorphism:
    """A morphism ``[m] -> [n]`` of the Brauer category.

    ``partner[x]`` is the point matched with point ``x``.  Equality is
    structural, which coincides with isotopy equality of Brauer diagrams.
    """

    m: int
    n: int
    partner: tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("object sizes must be natural numbers")
        if self.loops < 0:
            raise ValueError("loop count must be non-negative")
        size = self.m + self.n
        if size % 2:
            raise ValueError(f"no morphism [{self.m}] -> [{self.n}]: m + n is odd")
        if len(self.partner) != size:
            raise ValueError(f"pairing has {len(self.partner)} points, expected {size}")
        for x, y in enumerate(self.partner):
            if not 0 <= y < size or y == x or self.partner[y] != x:
                raise ValueError("pairing is not a fixed-point-free involution")

    @classmethod
    def _trusted(cls, m: int, n: int, partner: tuple[int, ...], loops: int = 0) -> "BrauerMorphism":
        # skips validation; for internally generated pairings only
        obj = object.__new__(cls)
        object.__setattr__(obj, "m", m)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "partner", partner)
        object.__setattr__(obj, "loops", loops)
        return obj

    @classmethod
    def from_pairs(cls, m: int, n: int, pairs: Sequence[tuple[int, int]], loops: int = 0) -> "BrauerMorphism":
        """Build from 0-based index pairs over the joint point space."""
        partner = [-1] * (m + n)
        for a, b in pairs:
            for x in (a, b):
                if not 0 <= x < m + n:
                    raise ValueError(f"point {x} out of range for [{m}] -> [{n}]")
                if partner[x] != -1:
                    raise ValueError(f"point {x} matched twice")
            partner[a], partner[b] = b, a
        if -1 in partner:
            raise ValueError("pairing leaves points unmatched")
        return cls(m, n, tuple(partner), loops)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Sorted index pairs ``(a, b)`` with ``a < b``."""
        return tuple((x, y) for x, y in enumerate(self.partner) if x < y)

    @property
    def dom(self) -> int:
        return self.m

    @property
    def cod(self) -> int:
        return self.n

    def sort_key(self):
        return (self.m, self.n, self.loops, self.partner)

    def __lt__(self, other: "BrauerMorphism") -> bool:
        return self.sort_key() < other.sort_key()

    def _label(self, x: int) -> str:
        return f"I{x + 1}" if x < self.m else f"O{x - self.m + 1}"

    def to_text(self) -> str:
        """Text encoding ``m;n;loops;pairs``, e.g. ``2;2;0;(I1-O1)(I2-O2)``."""
        body = "".join(f"({self._label(a)}-{self._label(b)})" for a, b in self.pairs)
        return f"{self.m};{self.n};{self.loops};{body}"

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "loops": self.loops,
            "pairs": [[self._label(a), self._label(b)] for a, b in self.pairs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "BrauerMorphism":
        m, n = int(data["m"]), int(data["n"])
        pairs = [(_parse_label(a, m, n), _parse_label(b, m, n)) for a, b in data["pairs"]]
        return cls.from_pairs(m, n, pairs, int(data["loops"]))

    @classmethod
    def from_json(cls, text: str) -> "BrauerMorphism":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_text(cls, text: str) -> "BrauerMorphism":
        parts = text.strip().split(";")
        if len(parts) != 4:
            raise ValueError(f"malformed morphism encoding: {text!r}")
        try:
            m, n, loops = (int(p) for p in parts[:3])
        except ValueError:
            raise ValueError(f"malformed morphism encoding: {text!r}") from None
        body = parts[3]
        pairs = _PAIR_RE.findall(body)
        if "".join(f"({a}-{b})" for a, b in pairs) != body:
            raise ValueError(f"malformed pair list: {body!r}")
        parsed = [(_parse_label(a, m, n), _parse_label(b, m, n)) for a, b in pairs]
        return cls.from_pairs(m, n, parsed, loops)

    def __str__(self) -> str:
        return self.to_text()


_PAIR_RE = re.compile(r"\(([IO]\d+)-([IO]\d+)\)")


def _parse_label(label: str, m: int, n: int) -> int:
    side, idx = label[0], int(label[1:])
    if side == "I" and 1 <= idx <= m:
        return idx - 1
    if side == "O" and 1 <= idx <= n:
        return m + idx - 1
    raise ValueError(f"point label {label!r} out of range for [{m}] -> [{n}]")


def identity(n: int) -> BrauerMorphism:
    return BrauerMorphism._trusted(n, n, tuple(range(n, 2 * n)) + tuple(range(n)))


def braiding(m: int, n: int) -> BrauerMorphism:
    """The symmetry ``[m] (x) [n] -> [n] (x) [m]``."""
    size = m + n
    partner = [0] * (2 * size)
    for i in range(m):
        partner[i] = size + n + i
        partner[size + n + i] = i
    for i in range(n):
        partner[m + i] = size + i
        partner[size + i] = m + i
    return BrauerMorphism._trusted(size, size, tuple(partner))


def unit(n: int) -> BrauerMorphism:
    """``i_n: [0] -> [2n]``, nested cups ``Out(k) - Out(2n+1-k)``."""
    if n < 1:
        raise ValueError("unit requires n >= 1")
    return BrauerMorphism._trusted(0, 2 * n, tuple(2 * n - 1 - k for k in range(2 * n)))


def counit(n: int) -> BrauerMorphism:
    """``e_n: [2n] -> [0]``, nested caps ``In(k) - In(2n+1-k)``."""
    if n < 1:
        raise ValueError("counit requires n >= 1")
    return BrauerMorphism._trusted(2 * n, 0, tuple(2 * n - 1 - k for k in range(2 * n)))


def loop() -> BrauerMorphism:
    return BrauerMorphism._trusted(0, 0, (), 1)


def loops_only(k: int) -> BrauerMorphism:
    """``lambda^{(x) k}``."""
    if k < 0:
        raise ValueError("loop count must be non-negative")
    return BrauerMorphism._trusted(0, 0, (), k)


def compose(g: BrauerMorphism, f: BrauerMorphism) -> BrauerMorphism:
    """``g o f`` for ``f: [m] -> [n]`` and ``g: [n] -> [p]``.

    Overlays the outputs of ``f`` with the inputs of ``g`` and traces the
    resulting degree-2 graph.  Closed cycles through the middle become loops.
    """
    if f.n != g.m:
        raise ValueError(f"cannot compose: cod(f) = [{f.n}] but dom(g) = [{g.m}]")
    m, n, p = f.m, f.n, g.n
    fp, gp = f.partner, g.partner
    seen = [False] * n
    out = [-1] * (m + p)

    def run_from_f(x: int) -> int:
        # enter f at point x, follow strands until an external point
        while True:
            y = fp[x]
            if y < m:
                return y
            mid = y - m
            seen[mid] = True
            z = gp[mid]
            if z >= n:
                return m + z - n
            seen[z] = True
            x = m + z

    for start in range(m + p):
        if out[start] != -1:
            continue
        if start < m:
            end = run_from_f(start)
        else:
            z = gp[n + start - m]
            if z >= n:
                end = m + z - n
            else:
                seen[z] = True
                end = run_from_f(m + z)
        out[start], out[end] = end, start

    cycles = 0
    for j in range(n):
        if seen[j]:
            continue
        cycles += 1
        cur = j
        while not seen[cur]:
            seen[cur] = True
            nxt = fp[m + cur] - m
            seen[nxt] = True
            cur = gp[nxt]
    return BrauerMorphism._trusted(m, p, tuple(out), f.loops + g.loops + cycles)


def tensor(f: BrauerMorphism, g: BrauerMorphism) -> BrauerMorphism:
    """Stack ``g`` after ``f``: inputs and outputs of ``g`` shift by ``f.m`` / ``f.n``."""
    m, n, m2, n2 = f.m, f.n, g.m, g.n
    M = m + m2

    def remap_f(x: int) -> int:
        return x if x < m else M + (x - m)

    def remap_g(x: int) -> int:
        return m + x if x < m2 else M + n + (x - m2)

    partner = [0] * (M + n + n2)
    for x, y in enumerate(f.partner):
        partner[remap_f(x)] = remap_f(y)
    for x, y in enumerate(g.partner):
        partner[remap_g(x)] = remap_g(y)
    return BrauerMorphism._trusted(M, n + n2, tuple(partner), f.loops + g.loops)


def tensor_all(morphisms: Sequence[BrauerMorphism]) -> BrauerMorphism:
    result = identity(0)
    for f in morphisms:
        result = tensor(result, f)
    return result


def strip_loops(f: BrauerMorphism) -> tuple[BrauerMorphism, int]:
    """Split ``f = lambda^{(x) k} (x) f0`` with ``f0`` loop-free."""
    return BrauerMorphism._trusted(f.m, f.n, f.partner, 0), f.loops


def double_factorial(k: int) -> int:
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def _pairings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        for tail in _pairings(rest[:i] + rest[i + 1 :]):
            yield [(first, other)] + tail


def enumerate_loop_free(m: int, n: int) -> list[BrauerMorphism]:
    """All loop-free morphisms ``[m] -> [n]``, ``(m+n-1)!!`` of them.

    Order is lexicographic in the smallest-unmatched-point-first encoding.
    Returns an empty list when ``m + n`` is odd.
    """
    size = m + n
    if size % 2:
        return []
    result = []
    for pairs in _pairings(list(range(size))):
        partner = [0] * size
        for a, b in pairs:
            partner[a], partner[b] = b, a
        result.append(BrauerMorphism._trusted(m, n, tuple(partner)))
    return result


def enumerate_morphisms(max_size: int, max_loops: int = 0) -> list[BrauerMorphism]:
    """Every morphism with ``m + n <= max_size`` and at most ``max_loops`` loops."""
    result = []
    for total in range(0, max_size + 1, 2):
        for m in range(total + 1):
            for f in enumerate_loop_free(m, total - m):
                for k in range(max_loops + 1):
                    result.append(BrauerMorphism._trusted(f.m, f.n, f.partner, k))
    return result


def is_isomorphism(f: BrauerMorphism) -> bool:
    return f.loops == 0 and f.m == f.n and all((x < f.m) != (y < f.m) for x, y in enumerate(f.partner))


def as_permutation(f: BrauerMorphism) -> tuple[int, ...]:
    """The bijection ``[m] -> [m]`` of an isomorphism, 0-based: ``In(i) -> Out(perm[i])``."""
    if not is_isomorphism(f):
        raise ValueError("morphism is not an isomorphism")
    return tuple(f.partner[i] - f.m for i in range(f.m))


def from_permutation(perm: Sequence[int]) -> BrauerMorphism:
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"not a permutation: {perm!r}")
    partner = [0] * (2 * k)
    for i, j in enumerate(perm):
        partner[i] = k + j
        partner[k + j] = i
    return BrauerMorphism._trusted(k, k, tuple(partner))


# ---------------------------------------------------------------------------
# words over the generators i_1, e_1, b_{1,1}


@dataclass(frozen=True)
class Gen:
    name: str  # "i", "e" or "b"

    def __post_init__(self):
        if self.name not in _GEN_TYPES:
            raise ValueError(f"unknown generator {self.name!r}")

    @property
    def dom(self) -> int:
        return _GEN_TYPES[self.name][0]

    @property
    def cod(self) -> int:
        return _GEN_TYPES[self.name][1]

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Id:
    k: int

    @property
    def dom(self) -> int:
        return self.k

    @property
    def cod(self) -> int:
        return self.k

    def __str__(self) -> str:
        return f"1[{self.k}]"


@dataclass(frozen=True)
class Compose:
    """``outer o inner``: apply ``inner`` first."""

    outer: "Word"
    inner: "Word"

    def __post_init__(self):
        if self.inner.cod != self.outer.dom:
            raise ValueError(
                f"ill-typed word: cod {self.inner.cod} of {self.inner} != dom {self.outer.dom} of {self.outer}"
            )

    @property
    def dom(self) -> int:
        return self.inner.dom

    @property
    def cod(self) -> int:
        return self.outer.cod

    def __str__(self) -> str:
        return f"({self.outer} o {self.inner})"


@dataclass(frozen=True)
class Tensor:
    left: "Word"
    right: "Word"

    @property
    def dom(self) -> int:
        return self.left.dom + self.right.dom

    @property
    def cod(self) -> int:
        return self.left.cod + self.right.cod

    def __str__(self) -> str:
        return f"({self.left} x {self.right})"


Word = Union[Gen, Id, Compose, Tensor]

_GEN_TYPES = {"i": (0, 2), "e": (2, 0), "b": (2, 2)}
_GEN_MORPHISMS = {"i": unit(1), "e": counit(1), "b": braiding(1, 1)}


def evaluate_word(w: Word) -> BrauerMorphism:
    """The realization ``|w|``."""
    if isinstance(w, Gen):
        return _GEN_MORPHISMS[w.name]
    if isinstance(w, Id):
        return identity(w.k)
    if isinstance(w, Compose):
        return compose(evaluate_word(w.outer), evaluate_word(w.inner))
    if isinstance(w, Tensor):
        return tensor(evaluate_word(w.left), evaluate_word(w.right))
    raise TypeError(f"not a word: {w!r}")


def _tensor_words(words: Sequence[Word]) -> Word:
    words = [w for w in words if not (isinstance(w, Id) and w.k == 0)]
    if not words:
        return Id(0)
    result = words[0]
    for w in words[1:]:
        result = Tensor(result, w)
    return result


def _compose_words(layers: Sequence[Word]) -> Word | None:
    """Compose layers listed in application order; ``None`` when empty."""
    result = None
    for layer in layers:
        result = layer if result is None else Compose(layer, result)
    return result


def _permutation_layers(perm: Sequence[int]) -> list[Word]:
    """Adjacent transposition layers realizing ``In(i) -> Out(perm[i])`` by bubble sort."""
    k = len(perm)
    arr = list(perm)
    layers: list[Word] = []
    for end in range(k - 1, 0, -1):
        for s in range(end):
            if arr[s] > arr[s + 1]:
                arr[s], arr[s + 1] = arr[s + 1], arr[s]
                layers.append(_tensor_words([Id(s), Gen("b"), Id(k - s - 2)]))
    return layers


def _power(w: Word, k: int) -> Word:
    return _tensor_words([w] * k)


LOOP_WORD = Compose(Gen("e"), Gen("i"))


def decompose_to_word(f: BrauerMorphism) -> Word:
    """A word over ``i_1, e_1, b_{1,1}`` realizing ``f``.

    Shape: ``lambda^loops (x) (beta o (1 (x) e^p (x) i^q) o alpha)`` where
    ``alpha`` and ``beta`` are stacks of adjacent transpositions.
    """
    m, n = f.m, f.n
    through, caps, cups = [], [], []
    for a, b in f.pairs:
        if b < m:
            caps.append((a, b))
        elif a >= m:
            cups.append((a - m, b - m))
        else:
            through.append((a, b - m))
    t = len(through)
    alpha = [0] * m
    for j, (a, _) in enumerate(through):
        alpha[a] = j
    for k, (a, b) in enumerate(caps):
        alpha[a], alpha[b] = t + 2 * k, t + 2 * k + 1
    beta = [0] * n
    for j, (_, b) in enumerate(through):
        beta[j] = b
    for k, (a, b) in enumerate(cups):
        beta[t + 2 * k], beta[t + 2 * k + 1] = a, b

    layers = _permutation_layers(alpha)
    if caps or cups:
        layers.append(_tensor_words([Id(t), _power(Gen("e"), len(caps)), _power(Gen("i"), len(cups))]))
    layers.extend(_permutation_layers(beta))
    core = _compose_words(layers)
    if core is None:
        core = Id(m)
    if f.loops:
        if isinstance(core, Id) and core.k == 0:
            return _power(LOOP_WORD, f.loops)
        return Tensor(_power(LOOP_WORD, f.loops), core)
    return core


def relation_words() -> dict[str, tuple[Word, Word]]:
    """Both sides of the defining relations (B1)-(B5) plus the symmetry identities.

    Each relation with two equalities ``a = c = b`` is listed as two entries.
    """
    i, e, b, one = Gen("i"), Gen("e"), Gen("b"), Id(1)

    def T(*ws: Word) -> Word:
        return _tensor_words(list(ws))

    def C(*ws: Word) -> Word:
        # written outermost first, like the usual notation
        return _compose_words(list(reversed(ws)))

    return {
        "B1 zig-zag (left)": (C(T(one, e), T(i, one)), one),
        "B1 zig-zag (right)": (C(T(e, one), T(one, i)), one),
        "B2 twisted zig-zag (left)": (C(T(e, one, one), T(one, b, one), T(one, one, i)), b),
        "B2 twisted zig-zag (right)": (C(T(one, one, e), T(one, b, one), T(i, one, one)), b),
        "B3 Reidemeister I (left)": (C(T(one, e), T(b, one), T(one, i)), one),
        "B3 Reidemeister I (right)": (C(T(e, one), T(one, b), T(i, one)), one),
        "B4 Reidemeister II": (C(b, b), T(one, one)),
        "B5 Yang-Baxter": (C(T(b, one), T(one, b), T(b, one)), C(T(one, b), T(b, one), T(one, b))),
        "symmetry e o b = e": (C(e, b), e),
        "symmetry b o i = i": (C(b, i), i),
    }


def verify_relations():
    """Evaluate both sides of every relation at the diagram level."""
    from .report import Report

    report = Report("relations (diagram level)")
    for name, (lhs, rhs) in relation_words().items():
        left, right = evaluate_word(lhs), evaluate_word(rhs)
        report.add(name, left == right, f"{left.to_text()} vs {right.to_text()}")
    lam = evaluate_word(LOOP_WORD)
    report.add("loop = e o i", lam == loop(), lam.to_text())
    return report
