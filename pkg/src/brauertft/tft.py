"""Discrete cobordisms: field ensembles carrying Brauer morphisms.

A :class:`DiscreteCobordism` fixes finite sets of incoming and outgoing
boundary-condition keys, each attached to an object ``[n]``, and a multiset of
fields ``(in_key, out_key, morphism)``.  Its state sum is the ``Q``-valued
function on boundary pairs obtained by adding up the images of the fields'
morphisms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .brauer import (
    BrauerMorphism,
    braiding,
    compose,
    counit,
    enumerate_loop_free,
    identity,
    loops_only,
    tensor,
    unit,
)
from .funmod import FunMap, contract, tensor_alpha
from .qsemiring import (
    DEFAULT_TRUNC,
    QC,
    QM,
    QElement,
    bs_zero,
    q_big_sum,
    q_from_morphism,
    rationalize,
    to_matrix_keys,
)
from .rep import DualityStructure, example_structure, rep
from .report import Report

Field = tuple  # (in_key, out_key, BrauerMorphism)


@dataclass(frozen=True)
class DiscreteCobordism:
    in_objects: Mapping
    out_objects: Mapping
    fields: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "in_objects", dict(self.in_objects))
        object.__setattr__(self, "out_objects", dict(self.out_objects))
        object.__setattr__(self, "fields", tuple(tuple(f) for f in self.fields))
        for obj in list(self.in_objects.values()) + list(self.out_objects.values()):
            if not isinstance(obj, int) or obj < 0:
                raise ValueError(f"objects must be non-negative integers, got {obj!r}")
        for a, b, f in self.fields:
            if a not in self.in_objects or b not in self.out_objects:
                raise ValueError(f"field ({a!r}, {b!r}) uses an undeclared key")
            if f.m != self.in_objects[a] or f.n != self.out_objects[b]:
                raise ValueError(
                    f"field ({a!r}, {b!r}) has type {f.m}->{f.n}, "
                    f"boundary needs {self.in_objects[a]}->{self.out_objects[b]}"
                )

    @property
    def in_keys(self) -> list:
        return sorted(self.in_objects, key=repr)

    @property
    def out_keys(self) -> list:
        return sorted(self.out_objects, key=repr)

    def field_set(self) -> frozenset:
        return frozenset(self.fields)

    def max_loops(self) -> int:
        return max((f.loops for _, _, f in self.fields), default=0)

    def to_text(self) -> str:
        lines = [f"in {k} {self.in_objects[k]}" for k in self.in_keys]
        lines += [f"out {k} {self.out_objects[k]}" for k in self.out_keys]
        lines += [f"{a} {b} {f.to_text()}" for a, b, f in self.fields]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DiscreteCobordism":
        """Parse a scenario file: ``in KEY M`` / ``out KEY N`` declarations, then
        one ``IN OUT ENCODING`` field per line; ``#`` starts a comment."""
        ins, outs, fields = {}, {}, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] in ("in", "out") and len(parts) == 3:
                    (ins if parts[0] == "in" else outs)[parts[1]] = int(parts[2])
                elif len(parts) == 3:
                    fields.append((parts[0], parts[1], BrauerMorphism.from_text(parts[2])))
                else:
                    raise ValueError("expected 3 fields")
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls(ins, outs, tuple(fields))


def empty_cobordism(key="*") -> DiscreteCobordism:
    """The cobordism of the empty manifold: one boundary condition on ``[0]``."""
    return DiscreteCobordism({key: 0}, {key: 0}, ((key, key, identity(0)),))


def state_sum(W: DiscreteCobordism, trunc: int = DEFAULT_TRUNC, D: Optional[DualityStructure] = None) -> FunMap:
    """``Z_W`` on ``in_keys x out_keys``; matrix keys when ``D`` is given."""
    acc: dict[tuple, list[QElement]] = {}
    for a, b, f in set(W.fields):
        acc.setdefault((a, b), []).append(q_from_morphism(f, trunc))
    values = {k: q_big_sum(vs) for k, vs in acc.items()}
    if D is not None:
        values = {k: to_matrix_keys(v, D) for k, v in values.items()}
    return FunMap([W.in_keys, W.out_keys], values)


def glue(W1: DiscreteCobordism, W2: DiscreteCobordism) -> DiscreteCobordism:
    if W1.out_objects != W2.in_objects:
        raise ValueError("interface mismatch: outgoing keys of the first do not match incoming keys of the second")
    by_mid: dict = {}
    for u, h, psi in W2.fields:
        by_mid.setdefault(u, []).append((h, psi))
    fields = [(f, h, compose(psi, phi)) for f, u, phi in W1.fields for h, psi in by_mid.get(u, ())]
    return DiscreteCobordism(W1.in_objects, W2.out_objects, tuple(fields))


def verify_gluing(W1: DiscreteCobordism, W2: DiscreteCobordism, trunc: int = DEFAULT_TRUNC) -> Report:
    report = Report("gluing law")
    direct = state_sum(glue(W1, W2), trunc)
    contracted = contract(state_sum(W1, trunc), state_sum(W2, trunc), QC)
    report.add("Z(glue) == <Z1, Z2>", direct == contracted, f"support={len(direct.support())}")
    return report


def relabel(W: DiscreteCobordism, in_map: Mapping, out_map: Mapping) -> DiscreteCobordism:
    """Rename boundary keys along bijections."""
    for m, keys in ((in_map, W.in_objects), (out_map, W.out_objects)):
        if set(m) != set(keys) or len(set(m.values())) != len(m):
            raise ValueError("relabeling must be a bijection on the declared keys")
    return DiscreteCobordism(
        {in_map[k]: v for k, v in W.in_objects.items()},
        {out_map[k]: v for k, v in W.out_objects.items()},
        tuple((in_map[a], out_map[b], f) for a, b, f in W.fields),
    )


def verify_relabel(W: DiscreteCobordism, in_map: Mapping, out_map: Mapping, trunc: int = DEFAULT_TRUNC) -> Report:
    report = Report("key relabeling")
    z = state_sum(W, trunc)
    moved = state_sum(relabel(W, in_map, out_map), trunc)
    expected = FunMap(
        [[in_map[k] for k in W.in_keys], [out_map[k] for k in W.out_keys]],
        {(in_map[a], out_map[b]): v for (a, b), v in z.items()},
    )
    report.add("Z(relabeled) == relabeled Z", moved == expected)
    return report


def disjoint_union(W: DiscreteCobordism, V: DiscreteCobordism) -> DiscreteCobordism:
    keys_w = set(W.in_objects) | set(W.out_objects)
    keys_v = set(V.in_objects) | set(V.out_objects)
    if keys_w & keys_v:
        raise ValueError(f"boundary keys overlap: {sorted(keys_w & keys_v, key=repr)!r}")
    ins = {(a, a2): W.in_objects[a] + V.in_objects[a2] for a in W.in_objects for a2 in V.in_objects}
    outs = {(b, b2): W.out_objects[b] + V.out_objects[b2] for b in W.out_objects for b2 in V.out_objects}
    fields = [((a, a2), (b, b2), tensor(f, g)) for a, b, f in W.fields for a2, b2, g in V.fields]
    return DiscreteCobordism(ins, outs, tuple(fields))


def regroup(Z: FunMap, W: DiscreteCobordism, V: DiscreteCobordism) -> FunMap:
    """``rho``: from ``(A x A') x (B x B')`` to ``A x B x A' x B'``."""
    split = Z.split(1, W.out_keys, V.out_keys).split(0, W.in_keys, V.in_keys)
    return split.permute([0, 2, 1, 3])


def verify_disjoint(W: DiscreteCobordism, V: DiscreteCobordism, trunc: int = DEFAULT_TRUNC) -> Report:
    report = Report("disjoint union law")
    lhs = regroup(state_sum(disjoint_union(W, V), trunc), W, V)
    rhs = tensor_alpha(state_sum(W, trunc), state_sum(V, trunc), QM)
    report.add("rho(Z(W + V)) == Z(W) (x)_m Z(V)", lhs == rhs, f"support={len(lhs.support())}")
    return report


def saturate_double_loops(W: DiscreteCobordism, depth: int) -> DiscreteCobordism:
    """Close the fields under ``F -> F (x) lambda^2``, ``depth`` times."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    fields = list(W.fields)
    seen = set(fields)
    frontier = list(dict.fromkeys(fields))
    for _ in range(depth):
        nxt = []
        for a, b, f in frontier:
            g = (a, b, tensor(f, loops_only(2)))
            if g not in seen:
                seen.add(g)
                fields.append(g)
                nxt.append(g)
        frontier = nxt
    return DiscreteCobordism(W.in_objects, W.out_objects, tuple(fields))


def rationality_window(depth: int, trunc: int) -> int:
    """Exponents below this bound are exact after saturation to ``depth``."""
    return min(trunc, 2 * depth + 2)


def verify_rationality(W: DiscreteCobordism, depth: int, trunc: int = DEFAULT_TRUNC, saturate: bool = True) -> Report:
    """Saturate, then match every state-sum series against the rational form.

    Closing under ``lambda^2`` from every field already closes each present
    odd exponent, so no separate odd pass is needed.  Series are compared on
    the window where saturation is exact.
    """
    report = Report(f"rationality (depth={depth}, trunc={trunc})")
    need = 2 * depth + W.max_loops() + 2
    if need > trunc:
        report.add("precondition", False, f"2*depth + max loops + 2 = {need} exceeds truncation {trunc}")
        return report
    sat = saturate_double_loops(W, depth) if saturate else W
    window = rationality_window(depth, trunc)
    z = state_sum(sat, trunc)
    for (a, b), val in z.items():
        for key, series in val.sorted_items():
            found = rationalize(series.truncate(window))
            name = f"{a}->{b} [{key.to_text()}]"
            if found is None:
                report.add(
                    name,
                    False,
                    f"series {series.truncate(window).to_text()} is not of the form "
                    f"q^r(1+b q^(2s+1))/(1-q^2) within degree {window}; "
                    "saturate deeper so every even and odd exponent class is closed under +2",
                )
            else:
                r, beta, s = found
                report.add(name, True)
                report.table.append({"in": a, "out": b, "key": key.to_text(), "r": r, "beta": beta, "s": s})
    if not report.checks:
        report.add("empty state sum", True)
    return report


def aggregate(
    scenarios: Iterable[tuple], source="fS", trunc: int = DEFAULT_TRUNC, D: Optional[DualityStructure] = None
) -> QElement:
    """Idempotent sum of ``Z_W(source, key)`` over scenarios ``(key, W)``."""
    parts = []
    for key, W in scenarios:
        if source not in W.in_objects:
            raise ValueError(f"scenario lacks the shared incoming key {source!r}")
        parts.append(state_sum(W, trunc, D)(source, key))
    return q_big_sum(parts)


# ---------------------------------------------------------------------------
# random ensembles

_LOOP_FREE_CACHE: dict[tuple[int, int], list[BrauerMorphism]] = {}


def random_morphism(rng: random.Random, m: int, n: int, max_loops: int) -> BrauerMorphism:
    if (m, n) not in _LOOP_FREE_CACHE:
        _LOOP_FREE_CACHE[(m, n)] = enumerate_loop_free(m, n)
    f = rng.choice(_LOOP_FREE_CACHE[(m, n)])
    k = rng.randint(0, max_loops)
    return tensor(f, loops_only(k)) if k else f


def random_cobordism(
    rng: random.Random,
    in_objects: Mapping,
    out_objects: Mapping,
    n_fields: int,
    max_loops: int = 2,
) -> DiscreteCobordism:
    ins, outs = sorted(in_objects, key=repr), sorted(out_objects, key=repr)
    pairs = [(a, b) for a in ins for b in outs if (in_objects[a] + out_objects[b]) % 2 == 0]
    fields = []
    for _ in range(n_fields if pairs else 0):
        a, b = rng.choice(pairs)
        fields.append((a, b, random_morphism(rng, in_objects[a], out_objects[b], max_loops)))
    return DiscreteCobordism(in_objects, out_objects, tuple(fields))


def random_objects(rng: random.Random, prefix: str, n_keys: int, parity: int) -> dict:
    """Keys ``prefix0..`` with objects of one parity from ``{0, 1, 2, 3}``."""
    return {f"{prefix}{i}": rng.choice([parity, parity + 2]) for i in range(n_keys)}


def random_gluable_pair(rng: random.Random, max_keys: int = 5, max_fields: int = 40, max_loops: int = 2):
    parity = rng.randint(0, 1)
    a = random_objects(rng, "a", rng.randint(1, max_keys), parity)
    u = random_objects(rng, "u", rng.randint(1, max_keys), parity)
    c = random_objects(rng, "c", rng.randint(1, max_keys), parity)
    W1 = random_cobordism(rng, a, u, rng.randint(0, max_fields), max_loops)
    W2 = random_cobordism(rng, u, c, rng.randint(0, max_fields), max_loops)
    return W1, W2


def random_disjoint_pair(rng: random.Random, max_keys: int = 3, max_fields: int = 8, max_loops: int = 2):
    def one(tag):
        parity = rng.randint(0, 1)
        ins = random_objects(rng, f"{tag}in", rng.randint(1, max_keys), parity)
        outs = random_objects(rng, f"{tag}out", rng.randint(1, max_keys), parity)
        return random_cobordism(rng, ins, outs, rng.randint(0, max_fields), max_loops)

    return one("w"), one("v")


# ---------------------------------------------------------------------------
# the aggregate invariant separates the two model spheres

SHELL_NAMES = ("identity", "swap", "i o e")


def shell_basis(D: DualityStructure) -> dict:
    return {
        "identity": rep(D, identity(2)),
        "swap": rep(D, braiding(1, 1)),
        "i o e": rep(D, compose(unit(1), counit(1))),
    }


def force_loop(f: BrauerMorphism) -> BrauerMorphism:
    return f if f.loops else tensor(f, loops_only(1))


def _sphere_scenarios(rng: random.Random, exotic: bool, n_out: int = 3, n_fields: int = 6):
    scenarios = []
    for j in range(n_out):
        key = f"fM{j}"
        fields = [("fS", key, random_morphism(rng, 2, 2, 2)) for _ in range(n_fields)]
        if not exotic and j == 0:
            fields.append(("fS", key, identity(2)))
        if exotic:
            fields = [(a, b, force_loop(f)) for a, b, f in fields]
        scenarios.append((key, DiscreteCobordism({"fS": 2}, {key: 2}, tuple(fields))))
    return scenarios


def shell_coordinates(x: QElement, basis: Mapping, trunc: int) -> dict:
    by_matrix = {v: k for k, v in basis.items()}
    coords = {name: bs_zero(trunc) for name in basis}
    for key, series in x.items():
        coords[by_matrix[key]] = series
    return coords


def exotic_demo(seed: int = 0, trunc: int = DEFAULT_TRUNC, D: Optional[DualityStructure] = None) -> Report:
    D = D or example_structure()
    rng = random.Random(seed)
    basis = shell_basis(D)
    standard = aggregate(_sphere_scenarios(rng, exotic=False), "fS", trunc, D)
    exotic = aggregate(_sphere_scenarios(rng, exotic=True), "fS", trunc, D)
    report = Report("aggregate invariant: standard vs exotic sphere")
    std_c = shell_coordinates(standard, basis, trunc)
    exo_c = shell_coordinates(exotic, basis, trunc)
    for name in SHELL_NAMES:
        report.table.append({"side": "standard", "shell": name, "series": std_c[name].to_text()})
    for name in SHELL_NAMES:
        report.table.append({"side": "exotic", "shell": name, "series": exo_c[name].to_text()})
    has_const = 0 in std_c["identity"]
    report.add("standard aggregate has a constant term at the identity", has_const)
    min_exp = min((s.min_exponent() for _, s in exotic.items()), default=None)
    report.add(
        "exotic aggregate is a multiple of q",
        min_exp is None or min_exp >= 1,
        f"minimum exponent {min_exp}",
    )
    distinct = has_const and all(0 not in s for _, s in exotic.items())
    report.add("1 + a = q a' has no solution, verdict: " + ("distinct" if distinct else "undecided"), distinct)
    return report


def combined_report(title: str, reports: Sequence[Report]) -> Report:
    out = Report(title)
    for i, r in enumerate(reports):
        out.extend(r, prefix=f"[{i}] ")
    return out
