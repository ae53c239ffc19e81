"""Function semimodules over finite index sets.

A :class:`FunMap` is a ``Q``-valued function on a finite product of declared
index sets ``A_1 x ... x A_k``.  Completed tensor products of function
semimodules are represented as functions on products, and the contraction
``<f, g>`` sums out a shared middle factor.
"""

from __future__ import annotations

import json
from typing import Hashable, Iterable, Mapping, Sequence

from .qsemiring import QC, QElement, Semiring, q_big_sum

Key = Hashable


def _sort_key(k) -> str:
    return repr(k)


class FunMap:
    """A total function ``A_1 x ... x A_k -> Q``; entries not stored read as zero."""

    __slots__ = ("factors", "_values")

    def __init__(self, factors: Sequence[Iterable[Key]], values: Mapping[tuple, QElement] | None = None):
        if not factors:
            raise ValueError("a FunMap needs at least one index factor")
        self.factors: tuple[tuple[Key, ...], ...] = tuple(
            tuple(sorted(set(f), key=_sort_key)) for f in factors
        )
        index_sets = [set(f) for f in self.factors]
        clean = {}
        for key, val in (values or {}).items():
            key = tuple(key)
            if len(key) != len(self.factors) or any(k not in s for k, s in zip(key, index_sets)):
                raise KeyError(f"{key!r} is not in the declared index set")
            if not val.is_zero():
                clean[key] = val
        self._values = clean

    @classmethod
    def on(cls, index: Iterable[Key], values: Mapping[Key, QElement] | None = None) -> "FunMap":
        """One-factor map from plain (non-tuple) keys."""
        return cls([index], {(k,): v for k, v in (values or {}).items()})

    @property
    def arity(self) -> int:
        return len(self.factors)

    def __call__(self, *key) -> QElement:
        return self._values.get(tuple(key), QElement())

    def __getitem__(self, key: tuple) -> QElement:
        return self._values.get(tuple(key), QElement())

    def support(self) -> list[tuple]:
        return sorted(self._values, key=_sort_key)

    def items(self):
        return ((k, self._values[k]) for k in self.support())

    def points(self) -> Iterable[tuple]:
        def rec(i):
            if i == len(self.factors):
                yield ()
                return
            for a in self.factors[i]:
                for rest in rec(i + 1):
                    yield (a,) + rest

        return rec(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, FunMap) and self.factors == other.factors and self._values == other._values

    def __hash__(self) -> int:
        return hash((self.factors, frozenset(self._values.items())))

    def map_values(self, fn) -> "FunMap":
        return FunMap(self.factors, {k: fn(v) for k, v in self._values.items()})

    def permute(self, order: Sequence[int]) -> "FunMap":
        """Reorder factors: new factor ``j`` is old factor ``order[j]``."""
        if sorted(order) != list(range(self.arity)):
            raise ValueError(f"not a permutation of the factors: {order!r}")
        return FunMap(
            [self.factors[i] for i in order],
            {tuple(k[i] for i in order): v for k, v in self._values.items()},
        )

    def split(self, i: int, left: Iterable[Key], right: Iterable[Key]) -> "FunMap":
        """Split factor ``i``, whose keys are pairs, into two factors ``left x right``."""
        left, right = list(left), list(right)
        expected = {(a, b) for a in left for b in right}
        if set(self.factors[i]) != expected:
            raise ValueError(f"factor {i} is not the product of the given sets")
        factors = list(self.factors[:i]) + [left, right] + list(self.factors[i + 1 :])
        values = {k[:i] + tuple(k[i]) + k[i + 1 :]: v for k, v in self._values.items()}
        return FunMap(factors, values)

    def to_text(self) -> str:
        lines = [f"factor {i}: " + " ".join(map(str, f)) for i, f in enumerate(self.factors)]
        for key, val in self.items():
            lines.append(f"{' '.join(map(str, key))} ->")
            lines += ["  " + ln for ln in val.to_text().splitlines()]
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "factors": [[str(k) for k in f] for f in self.factors],
            "values": [{"key": [str(k) for k in key], "value": val.to_dict()} for key, val in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "FunMap":
        """Inverse of :meth:`to_dict` for maps with string keys."""
        return cls(
            data["factors"],
            {tuple(e["key"]): QElement.from_dict(e["value"]) for e in data["values"]},
        )

    @classmethod
    def from_json(cls, text: str) -> "FunMap":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"FunMap(factors={self.factors!r}, support={len(self._values)})"


def characteristic(factors: Sequence[Iterable[Key]], point: tuple, value: QElement) -> FunMap:
    """``chi_point * value``."""
    return FunMap(factors, {tuple(point): value})


def fun_add(f: FunMap, g: FunMap) -> FunMap:
    if f.factors != g.factors:
        raise ValueError("index sets differ")
    keys = set(f._values) | set(g._values)
    return FunMap(f.factors, {k: q_big_sum([f[k], g[k]]) for k in keys})


def fun_big_sum(maps: Iterable[FunMap], factors=None) -> FunMap:
    maps = list(maps)
    if factors is None:
        if not maps:
            raise ValueError("empty family needs explicit factors")
        factors = maps[0].factors
    target = FunMap(factors).factors
    acc: dict[tuple, list[QElement]] = {}
    for f in maps:
        if f.factors != target:
            raise ValueError("index sets differ")
        for k, v in f._values.items():
            acc.setdefault(k, []).append(v)
    return FunMap(target, {k: q_big_sum(vs) for k, vs in acc.items()})


def tensor_alpha(F: FunMap, G: FunMap, product: Semiring = QC) -> FunMap:
    """``(a, b) -> F(a) G(b)`` on the concatenated index product."""
    values = {}
    for ka, va in F._values.items():
        for kb, vb in G._values.items():
            values[ka + kb] = product.mul(va, vb)
    return FunMap(F.factors + G.factors, values)


def scale_left(s: QElement, f: FunMap, product: Semiring = QC) -> FunMap:
    return f.map_values(lambda v: product.mul(s, v))


def scale_right(f: FunMap, s: QElement, product: Semiring = QC) -> FunMap:
    return f.map_values(lambda v: product.mul(v, s))


def tensor_beta(H: FunMap, split_at: int = 1, product: Semiring = QC) -> list[tuple[FunMap, FunMap]]:
    """Decompose ``H`` on ``A x B`` into elementary tensors ``(chi_a * H(a,b)) (x) chi_b``.

    ``split_at`` is the number of leading factors that form ``A``.  Only
    points in the support contribute; the rest are zero summands.
    """
    if not 0 < split_at < H.arity:
        raise ValueError("split must leave factors on both sides")
    fa, fb = H.factors[:split_at], H.factors[split_at:]
    one = product.one_for(*H._values.values())
    out = []
    for key, val in H.items():
        a, b = key[:split_at], key[split_at:]
        out.append((characteristic(fa, a, val), characteristic(fb, b, one)))
    return out


def tensor_alpha_sum(terms: Iterable[tuple[FunMap, FunMap]], factors, product: Semiring = QC) -> FunMap:
    """``alpha`` extended additively to a sum of elementary tensors."""
    return fun_big_sum((tensor_alpha(F, G, product) for F, G in terms), factors)


def tensor_beta_roundtrip(H: FunMap, split_at: int = 1, product: Semiring = QC) -> bool:
    """``alpha(beta(H)) == H``."""
    return tensor_alpha_sum(tensor_beta(H, split_at, product), H.factors, product) == H


def contract(f: FunMap, g: FunMap, product: Semiring = QC) -> FunMap:
    """``<f, g>(a, c) = sum_b f(a, b) . g(b, c)`` over the last factor of ``f``
    and the first factor of ``g``."""
    if f.factors[-1] != g.factors[0]:
        raise ValueError("middle index sets differ")
    if f.arity < 2 or g.arity < 2:
        raise ValueError("contraction needs at least two factors on each side")
    g_by_mid: dict[Key, list] = {}
    for kg, vg in g._values.items():
        g_by_mid.setdefault(kg[0], []).append((kg[1:], vg))
    acc: dict[tuple, list[QElement]] = {}
    for kf, vf in f._values.items():
        for rest, vg in g_by_mid.get(kf[-1], ()):
            acc.setdefault(kf[:-1] + rest, []).append(product.mul(vf, vg))
    return FunMap(f.factors[:-1] + g.factors[1:], {k: product.big_sum(vs) for k, vs in acc.items()})


def gamma(f: FunMap, i: int, product: Semiring = QC) -> FunMap:
    """Contract factors ``i`` and ``i+1`` (which must be the same index set) along the diagonal."""
    if f.factors[i] != f.factors[i + 1]:
        raise ValueError("contracted factors differ")
    acc: dict[tuple, list[QElement]] = {}
    for k, v in f._values.items():
        if k[i] == k[i + 1]:
            acc.setdefault(k[:i] + k[i + 2 :], []).append(v)
    return FunMap(f.factors[:i] + f.factors[i + 2 :], {k: product.big_sum(vs) for k, vs in acc.items()})


def identity_table(index: Iterable[Key], objects: Iterable[int], trunc: int | None = None) -> FunMap:
    """``(b, b') -> 1`` (partial ``Q^c`` unit on ``objects``) when ``b == b'``, else zero."""
    from .qsemiring import DEFAULT_TRUNC, unit_compose

    index = list(index)
    one = unit_compose(objects, trunc or DEFAULT_TRUNC)
    return FunMap([index, index], {(b, b): one for b in index})
