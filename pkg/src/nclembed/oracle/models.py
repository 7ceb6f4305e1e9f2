"""Finite models, enumerated in batches.

A batch fixes the number of worlds, domain sizes, nominal assignment and
function tables, and lets every Boolean table entry (accessibility, valuation,
existence, betterness, ob) vary.  Truth values over the batch are Python ints
used as bitsets: bit ``m`` is the value in the ``m``-th model of the batch.
"""
from __future__ import annotations

import itertools
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import BudgetExceededError


@dataclass(frozen=True)
class Bounds:
    max_worlds: int = 3
    max_domain: int = 2
    min_worlds: int = 1
    batch_cap: int = 1 << 20
    function_budget: int = 1 << 16


@dataclass(frozen=True)
class ModelSignature:
    """What a model must interpret.

    ``relations``: (index, frozenset of frame conditions);  ``predicates``:
    (name, argument types);  ``functions``: (name, argument types, result
    type);  ``varying``: (type, semantics) for types with an existence
    predicate;  ``types``: individual types needing a domain.
    """
    relations: tuple = ()
    predicates: tuple = ()
    functions: tuple = ()
    types: tuple = ()
    varying: tuple = ()
    nominals: tuple = ()
    betterness: bool = False
    ob: bool = False


# ---------------------------------------------------------------- frame conditions

def _pairs(n):
    return [(u, v) for u in range(n) for v in range(n)]


def reflexive(n, r):
    return all((w, w) in r for w in range(n))


def symmetric(n, r):
    return all((v, u) in r for u, v in r)


def serial(n, r):
    return all(any((w, v) in r for v in range(n)) for w in range(n))


def transitive(n, r):
    return all((u, z) in r for u, v in r for v2, z in r if v == v2)


def euclidean(n, r):
    return all((v, w) in r for u, v in r for u2, w in r if u == u2)


def functional(n, r):
    return all(v == w for u, v in r for u2, w in r if u == u2)


def dense(n, r):
    return all(any((u, z) in r and (z, v) in r for z in range(n)) for u, v in r)


def universal(n, r):
    return len(r) == n * n


FRAME_CHECKS = {"T": reflexive, "B": symmetric, "D": serial, "4": transitive,
                "5": euclidean, "CD": functional, "C4": dense, "universal": universal,
                "K": lambda n, r: True}


def all_relations(n: int):
    pairs = _pairs(n)
    for bits in range(1 << len(pairs)):
        yield frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)


@lru_cache(maxsize=None)
def relation_tables(n: int, conditions: frozenset) -> tuple:
    """All relations on ``n`` worlds meeting every named frame condition."""
    checks = [FRAME_CHECKS[c] for c in sorted(conditions)]
    return tuple(r for r in all_relations(n) if all(chk(n, r) for chk in checks))


# ---------------------------------------------------------------- Carmo-Jones ob tables

def _sets(n):
    return range(1 << n)


def cj_violations(n: int, ob) -> list:
    """Names of the conditions 5a-5e that the ob table (pairs of world bitmasks) violates."""
    full = (1 << n) - 1
    S = list(_sets(n))
    bad = []
    if any((x, 0) in ob for x in S):
        bad.append("5a")
    if any(x & y == x & z and (((x, y) in ob) != ((x, z) in ob))
           for x in S for y in S for z in S):
        bad.append("5b")
    if any(x & y & z and (x, y) in ob and (x, z) in ob and (x, y & z) not in ob
           for x in S for y in S for z in S):
        bad.append("5c")
    if any(y & ~x == 0 and (x, y) in ob and x & ~z == 0 and (z, (z & ~x & full) | y) not in ob
           for x in S for y in S for z in S):
        bad.append("5d")
    if any(y & ~x == 0 and (x, z) in ob and y & z and (y, z) not in ob
           for x in S for y in S for z in S):
        bad.append("5e")
    return bad


@lru_cache(maxsize=None)
def cj_tables(n: int) -> tuple:
    """Every ob table on ``n`` worlds satisfying 5a-5e.

    By 5b a table is determined by which traces ``X & Y`` are obligatory in
    each context ``X``; only those families are enumerated.
    """
    if n > 2:
        raise BudgetExceededError(f"Carmo-Jones ob tables are enumerated for at most 2 worlds, not {n}")
    S = list(_sets(n))
    slots = [(x, t) for x in S for t in S if t & ~x == 0]
    out = []
    for bits in range(1 << len(slots)):
        chosen = {slots[i] for i in range(len(slots)) if bits >> i & 1}
        ob = frozenset((x, y) for x in S for y in S if (x, x & y) in chosen)
        if not cj_violations(n, ob):
            out.append(ob)
    return tuple(out)


# ---------------------------------------------------------------- concrete models

@dataclass(frozen=True)
class FiniteModel:
    worlds: int
    domains: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    valuation: dict = field(default_factory=dict)
    exists: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    nominals: dict = field(default_factory=dict)
    better: frozenset | None = None
    ob: frozenset | None = None

    def entries(self) -> dict:
        out = {}
        for idx, r in self.relations.items():
            for u, v in _pairs(self.worlds):
                out[("R", idx, u, v)] = (u, v) in r
        for key, val in self.valuation.items():
            out[("P",) + key] = val
        for (t, d, w), val in self.exists.items():
            out[("E", t, d, w)] = val
        if self.better is not None:
            for u, v in _pairs(self.worlds):
                out[("B", u, v)] = (u, v) in self.better
        if self.ob is not None:
            for x in _sets(self.worlds):
                for y in _sets(self.worlds):
                    out[("O", x, y)] = (x, y) in self.ob
        return out

    def as_batch(self) -> "ModelBatch":
        entries = {k: int(v) for k, v in self.entries().items()}
        return ModelBatch(self.worlds, dict(self.domains), dict(self.nominals),
                          dict(self.functions), 1, 1, entries, (), ())

    def describe(self) -> str:
        lines = [f"worlds: {list(range(self.worlds))}"]
        for t, size in sorted(self.domains.items()):
            lines.append(f"domain {t}: {list(range(size))}")
        for idx, r in sorted(self.relations.items()):
            lines.append(f"relation {idx or '(default)'}: {sorted(r)}")
        for t in sorted({t for t, _, _ in self.exists}):
            per = {w: [d for (t2, d, w2), v in sorted(self.exists.items())
                       if t2 == t and w2 == w and v] for w in range(self.worlds)}
            lines.append(f"exists {t}: {per}")
        for (name, args, w), v in sorted(self.valuation.items()):
            if v:
                lines.append(f"true: {name}{list(args) if args else ''} at {w}")
        for name, table in sorted(self.functions.items()):
            lines.append(f"function {name}: {table}")
        for name, w in sorted(self.nominals.items()):
            lines.append(f"nominal {name}: {w}")
        if self.better is not None:
            lines.append(f"betterness: {sorted(self.better)}")
        if self.ob is not None:
            lines.append(f"ob: {sorted(self.ob)}")
        return "\n".join(lines)


def _bits(selection: np.ndarray) -> int:
    return int.from_bytes(np.packbits(selection, bitorder="little").tobytes(), "little")


@dataclass
class ModelBatch:
    """A batch of models sharing structure; ``entries`` maps table keys to bitsets."""
    worlds: int
    domains: dict
    nominals: dict
    functions: dict
    size: int
    mask: int
    entries: dict
    factors: tuple
    fixed: tuple

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def entry(self, key) -> int:
        return self.entries.get(key, 0)

    def indices(self):
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def model(self, i: int) -> FiniteModel:
        chosen = {}
        for part in self.fixed:
            chosen.update(part)
        for stride, alternatives in self.factors:
            chosen.update(alternatives[(i // stride) % len(alternatives)])
        relations, valuation, exists = {}, {}, {}
        better = ob = None
        for key, val in chosen.items():
            if key[0] == "R":
                relations.setdefault(key[1], set())
                if val:
                    relations[key[1]].add(key[2:])
            elif key[0] == "P":
                valuation[key[1:]] = val
            elif key[0] == "E":
                exists[key[1:]] = val
            elif key[0] == "B":
                better = (better or set()) | ({key[1:]} if val else set())
            elif key[0] == "O":
                ob = (ob or set()) | ({key[1:]} if val else set())
        return FiniteModel(
            self.worlds, dict(self.domains), {k: frozenset(v) for k, v in relations.items()},
            valuation, exists, dict(self.functions), dict(self.nominals),
            None if better is None and not any(k[0] == "B" for k in chosen) else frozenset(better or ()),
            None if ob is None and not any(k[0] == "O" for k in chosen) else frozenset(ob or ()))


def _relation_factor(n, idx, conditions):
    return [{("R", idx, u, v): (u, v) in r for u, v in _pairs(n)}
            for r in relation_tables(n, frozenset(conditions))]


def _function_tables(n, sizes, name, argtypes, result, budget):
    size = lambda t: n if t == "mworld" else sizes[t]
    combos = list(itertools.product(*(range(size(t)) for t in argtypes)))
    count = size(result) ** len(combos)
    if count > budget:
        raise BudgetExceededError(f"too many interpretations for function {name} ({count})")
    for values in itertools.product(range(size(result)), repeat=len(combos)):
        yield dict(zip(combos, values))


def _constraint_mask(batch: ModelBatch, sig: ModelSignature) -> int:
    full = batch.full
    mask = full
    n = batch.worlds
    for t, sem in sig.varying:
        size = batch.domains[t]
        E = lambda d, w: batch.entry(("E", t, d, w))
        for w in range(n):
            some = 0
            for d in range(size):
                some |= E(d, w)
            mask &= some
        if sem in ("cumulative", "decreasing"):
            for idx, _ in sig.relations:
                for u, v in _pairs(n):
                    R = batch.entry(("R", idx, u, v))
                    for d in range(size):
                        src, dst = (E(d, u), E(d, v)) if sem == "cumulative" else (E(d, v), E(d, u))
                        mask &= (full ^ (R & src)) | dst
    return mask


def _inner_entries(in_batch):
    total = 1
    for alts in in_batch:
        total *= len(alts)
    entries, factors = {}, []
    stride = 1
    index = np.arange(total, dtype=np.int64)
    for alts in in_batch:
        digit = (index // stride) % len(alts)
        keys = list(dict.fromkeys(k for alt in alts for k in alt))
        for key in keys:
            truth = np.fromiter((bool(alt.get(key)) for alt in alts), dtype=bool, count=len(alts))
            entries[key] = _bits(truth[digit]) if truth.any() else 0
        factors.append((stride, alts))
        stride *= len(alts)
    return total, entries, tuple(factors)


def _batch(n, sizes, nominals, functions, inner, fixed, sig) -> ModelBatch:
    total, inner_entries, factors = inner
    full = (1 << total) - 1
    entries = {}
    for part in fixed:
        for key, val in part.items():
            entries[key] = full if val else 0
    entries.update(inner_entries)
    batch = ModelBatch(n, dict(sizes), dict(nominals), dict(functions), total,
                       full, entries, factors, tuple(fixed))
    batch.mask = _constraint_mask(batch, sig)
    return batch


def _types_needed(sig: ModelSignature):
    out = list(sig.types)
    return [t for t in out if t != "mworld"]


def enumerate_batches(sig: ModelSignature, bounds: Bounds):
    """Batches covering every model within bounds, in a fixed deterministic order."""
    types = _types_needed(sig)
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        for sizes_t in itertools.product(range(1, bounds.max_domain + 1), repeat=len(types)):
            sizes = dict(zip(types, sizes_t))
            for noms in itertools.product(range(n), repeat=len(sig.nominals)):
                nominals = dict(zip(sig.nominals, noms))
                tables = [list(_function_tables(n, sizes, name, args, res, bounds.function_budget))
                          for name, args, res in sig.functions]
                for choice in itertools.product(*tables):
                    functions = {f[0]: tab for f, tab in zip(sig.functions, choice)}
                    yield from _chunks(n, sizes, nominals, functions, sig, bounds)


def _factors(n, sizes, sig: ModelSignature) -> list:
    factors = []
    for idx, conditions in sig.relations:
        factors.append(_relation_factor(n, idx, conditions))
    size = lambda t: n if t == "mworld" else sizes[t]
    for name, argtypes in sig.predicates:
        for args in itertools.product(*(range(size(t)) for t in argtypes)):
            for w in range(n):
                key = ("P", name, args, w)
                factors.append([{key: False}, {key: True}])
    for t, _ in sig.varying:
        for d in range(sizes[t]):
            for w in range(n):
                key = ("E", t, d, w)
                factors.append([{key: False}, {key: True}])
    if sig.betterness:
        for u, v in _pairs(n):
            key = ("B", u, v)
            factors.append([{key: False}, {key: True}])
    if sig.ob:
        factors.append([{("O", x, y): (x, y) in ob for x in _sets(n) for y in _sets(n)}
                        for ob in cj_tables(n)])
    return factors


def _chunks(n, sizes, nominals, functions, sig, bounds):
    # Pack whichever factors fit under the cap into the batch; the rest are
    # fixed per batch by an outer loop.
    inner, outer, total = [], [], 1
    for alts in _factors(n, sizes, sig):
        if total * len(alts) <= bounds.batch_cap:
            inner.append(alts)
            total *= len(alts)
        else:
            outer.append(alts)
    prepared = _inner_entries(inner)
    for choice in itertools.product(*(reversed(outer))):
        yield _batch(n, sizes, nominals, functions, prepared, tuple(reversed(choice)), sig)


_BATCH_CACHE: OrderedDict = OrderedDict()
_CACHE_LIMIT_BYTES = 64 << 20


def cached_batches(sig: ModelSignature, bounds: Bounds):
    """Like enumerate_batches, but small complete enumerations are kept for reuse."""
    key = (sig, bounds)
    if key in _BATCH_CACHE:
        _BATCH_CACHE.move_to_end(key)
        yield from _BATCH_CACHE[key]
        return
    kept, used = [], 0
    for batch in enumerate_batches(sig, bounds):
        if kept is not None:
            used += batch.size * (len(batch.entries) + 1) // 8
            kept = kept + [batch] if used <= _CACHE_LIMIT_BYTES else None
        yield batch
    if kept is not None:
        _BATCH_CACHE[key] = tuple(kept)
        while len(_BATCH_CACHE) > 8:
            _BATCH_CACHE.popitem(last=False)


def enumerate_models(sig: ModelSignature, bounds: Bounds):
    """Every model within bounds (respecting frame and domain conditions), in order."""
    for batch in enumerate_batches(sig, bounds):
        for i in batch.indices():
            yield batch.model(i)
