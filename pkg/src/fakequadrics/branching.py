"""Branching data for group covers of the line.

A signature records the branch multiplicities of a cover of the projective
line; a generating vector is a tuple of group elements of those orders with
trivial product that generates the group (the monodromy of the cover).  Two
such covers by the same group assemble into an unmixed pair, and the
quotient surface of the product by the diagonal action is smooth exactly
when the two monodromies share no fixed-point stabilizers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .permgroup import Group, Perm, conjugacy_classes

__all__ = [
    "Signature",
    "GenVector",
    "UnmixedPair",
    "SurfaceInvariants",
    "FreenessResult",
    "GenVectorError",
    "SignatureError",
    "verify_generating_vector",
    "genus_from_signature",
    "stabilizer_elements",
    "is_free_unmixed",
    "surface_invariants",
    "iter_generating_vectors",
    "enumerate_generating_vectors",
    "find_free_pair",
    "sheet_count_genus",
]


class SignatureError(ValueError):
    """Signature outside the supported shape (base genus 0, r >= 3)."""


class GenVectorError(ValueError):
    """Generating-vector certification failure; ``reason`` names the first
    failed invariant: 'order', 'product' or 'generation'."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class Signature:
    """Branch multiplicities ``[m_1..m_r]`` over a genus-0 base, ascending."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        ms = self.multiplicities
        if len(ms) < 3:
            raise SignatureError(f"need at least 3 branch points, got {list(ms)}")
        if any(m < 2 for m in ms):
            raise SignatureError(f"multiplicities must be >= 2, got {list(ms)}")
        if tuple(sorted(ms)) != ms:
            object.__setattr__(self, "multiplicities", tuple(sorted(ms)))

    @classmethod
    def of(cls, *ms: int) -> "Signature":
        return cls(tuple(ms))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``[2,5,5]`` (brackets optional, whitespace ignored)."""
        body = text.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        try:
            ms = tuple(int(part) for part in body.split(",") if part.strip())
        except ValueError:
            raise SignatureError(f"cannot parse signature {text!r}") from None
        return cls(ms)

    @property
    def r(self) -> int:
        return len(self.multiplicities)

    def __str__(self) -> str:
        return "[" + ",".join(str(m) for m in self.multiplicities) + "]"


@dataclass(frozen=True)
class GenVector:
    """A certified generating vector; construct via
    :func:`verify_generating_vector`."""

    group: Group
    elements: tuple[Perm, ...]
    signature: Signature

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(self.group.index(v) for v in self.elements)

    def __str__(self) -> str:
        return " ".join(v.cycle_string() for v in self.elements)


@dataclass(frozen=True)
class UnmixedPair:
    group: Group
    gv1: GenVector
    gv2: GenVector

    def __post_init__(self):
        if self.gv1.group is not self.group or self.gv2.group is not self.group:
            raise ValueError("both generating vectors must live in the pair's group")


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    intersection: tuple[int, ...]  # offending element indices when not free


@dataclass(frozen=True)
class SurfaceInvariants:
    g1: int
    g2: int
    chi: int
    Ksq: int
    q: int
    pg: int
    moduli_dim: int


def verify_generating_vector(
    group: Group, elements: Sequence[Perm], signature: Signature
) -> GenVector:
    """Certify a generating vector, or raise :class:`GenVectorError`
    naming the first failed invariant (order, product, generation)."""
    elems = tuple(elements)
    if len(elems) != signature.r:
        raise GenVectorError(
            "order",
            f"expected {signature.r} elements for signature {signature}, got {len(elems)}",
        )
    idx = [group.index(v) for v in elems]
    orders = sorted(group.orders[i] for i in idx)
    expected = list(signature.multiplicities)
    if orders != expected:
        raise GenVectorError(
            "order",
            f"element orders {orders} do not match signature {signature}",
        )
    prod = group.identity
    for i in idx:
        prod = group.mul(prod, i)
    if prod != group.identity:
        raise GenVectorError(
            "product",
            f"product of the tuple is {group.elements[prod].cycle_string()}, not the identity",
        )
    if len(group.subgroup_closure(idx)) != group.order:
        raise GenVectorError(
            "generation",
            f"tuple generates a proper subgroup of order {len(group.subgroup_closure(idx))}",
        )
    return GenVector(group=group, elements=elems, signature=signature)


def genus_from_signature(order: int, signature: Signature) -> int:
    """Genus of the total space of the branched cover, from the branching
    contribution ``2g - 2 = |G| (-2 + sum(1 - 1/m_i))``.

    Rejects non-integral results and genus < 2 (all families here are of
    general type)."""
    total = Fraction(-2)
    for m in signature.multiplicities:
        total += 1 - Fraction(1, m)
    doubled = order * total
    if doubled.denominator != 1 or doubled % 2 != 0:
        raise SignatureError(
            f"2g-2 = {doubled} is not an even integer for |G|={order}, {signature}"
        )
    if doubled < 2:
        raise SignatureError(
            f"genus below 2 (2g-2 = {doubled}) for |G|={order}, {signature}"
        )
    return int(doubled) // 2 + 1


def sheet_count_genus(gv: GenVector) -> int:
    """Independent genus computation by counting sheets and cycles.

    Builds, for each tuple entry, the permutation it induces on the |G|
    sheets by right multiplication, counts its cycles, and applies the
    Euler characteristic of the resulting ramified cover of the sphere.
    """
    group = gv.group
    n = group.order
    r = gv.signature.r
    euler = n * (2 - r)
    for v in gv.elements:
        i = group.index(v)
        row = [group.mul(x, i) for x in range(n)]
        seen = [False] * n
        cycles = 0
        for s in range(n):
            if seen[s]:
                continue
            cycles += 1
            x = s
            while not seen[x]:
                seen[x] = True
                x = row[x]
        euler += cycles
    if euler % 2 != 0:
        raise RuntimeError(f"odd Euler characteristic {euler}")
    return (2 - euler) // 2


def stabilizer_elements(gv: GenVector) -> frozenset[int]:
    """Indices of all nontrivial elements fixing some point of the cover:
    the union of all conjugates of the cyclic groups of the tuple entries."""
    group = gv.group
    out: set[int] = set()
    for v in gv.elements:
        i = group.index(v)
        powers = []
        x = i
        while x != group.identity:
            powers.append(x)
            x = group.mul(x, i)
        for h in range(group.order):
            for pw in powers:
                out.add(group.conjugate(h, pw))
    return frozenset(out)


def is_free_unmixed(pair: UnmixedPair) -> FreenessResult:
    """Decide freeness of the diagonal action on the product of covers."""
    common = stabilizer_elements(pair.gv1) & stabilizer_elements(pair.gv2)
    return FreenessResult(free=not common, intersection=tuple(sorted(common)))


def surface_invariants(pair: UnmixedPair) -> SurfaceInvariants:
    """Numerical invariants of the quotient surface of a free pair."""
    result = is_free_unmixed(pair)
    if not result.free:
        raise ValueError(
            f"diagonal action is not free; {len(result.intersection)} common stabilizer elements"
        )
    group = pair.group
    g1 = genus_from_signature(group.order, pair.gv1.signature)
    g2 = genus_from_signature(group.order, pair.gv2.signature)
    product = (g1 - 1) * (g2 - 1)
    if product % group.order != 0:
        raise ValueError(
            f"(g1-1)(g2-1) = {product} is not divisible by |G| = {group.order}; "
            "not a valid unmixed family"
        )
    chi = product // group.order
    dim = (pair.gv1.signature.r - 3) + (pair.gv2.signature.r - 3)
    return SurfaceInvariants(
        g1=g1, g2=g2, chi=chi, Ksq=8 * chi, q=0, pg=chi - 1, moduli_dim=dim
    )


def iter_generating_vectors(group: Group, signature: Signature) -> Iterator[GenVector]:
    """Lazily enumerate certified generating vectors in a fixed order.

    Depth-first over elements of the prescribed orders in canonical group
    order; the first entry is restricted to class representatives (every
    vector is conjugate to one of this shape), and the last entry is forced
    by the trivial-product constraint.
    """
    ms = signature.multiplicities
    ccs = conjugacy_classes(group)
    by_order: dict[int, list[int]] = {}
    for m in set(ms):
        by_order[m] = [i for i in range(group.order) if group.orders[i] == m]
        if not by_order[m]:
            return
    first = [
        ccs.reps[k]
        for k in range(ccs.count)
        if group.orders[ccs.reps[k]] == ms[0]
    ]
    r = len(ms)
    mul = group.mul_table

    def dfs(pos: int, chosen: list[int], prod: int) -> Iterator[GenVector]:
        if pos == r - 1:
            last = group.inv(prod)
            if group.orders[last] != ms[-1]:
                return
            idx = chosen + [last]
            if len(group.subgroup_closure(idx)) != group.order:
                return
            yield GenVector(
                group=group,
                elements=tuple(group.elements[i] for i in idx),
                signature=signature,
            )
            return
        pool = first if pos == 0 else by_order[ms[pos]]
        for i in pool:
            chosen.append(i)
            yield from dfs(pos + 1, chosen, mul[prod][i])
            chosen.pop()

    yield from dfs(0, [], group.identity)


def enumerate_generating_vectors(
    group: Group, signature: Signature, limit: int
) -> list[GenVector]:
    """Up to ``limit`` certified generating vectors, deterministic order."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(itertools.islice(iter_generating_vectors(group, signature), limit))


def _distinct_stabilizer_vectors(
    group: Group, sig: Signature, max_distinct: int
) -> list[tuple[frozenset[int], GenVector]]:
    """One witness vector per distinct stabilizer set, in search order."""
    out: list[tuple[frozenset[int], GenVector]] = []
    seen: set[frozenset[int]] = set()
    for gv in iter_generating_vectors(group, sig):
        stab = stabilizer_elements(gv)
        if stab not in seen:
            seen.add(stab)
            out.append((stab, gv))
            if len(out) >= max_distinct:
                break
    return out


def find_free_pair(
    group: Group,
    sig1: Signature,
    sig2: Signature,
    max_distinct: int = 4096,
) -> UnmixedPair | None:
    """First free unmixed pair in deterministic search order, or None.

    Freeness depends only on the two stabilizer sets, so each side is
    searched one witness per distinct stabilizer set.  The side with the
    shorter signature is materialized, the other streamed against it.
    """
    if sig1 == sig2:
        side = _distinct_stabilizer_vectors(group, sig1, max_distinct)
        for stab1, gv1 in side:
            for stab2, gv2 in side:
                if not (stab1 & stab2):
                    return UnmixedPair(group=group, gv1=gv1, gv2=gv2)
        return None

    swap = sig2.r < sig1.r
    small, large = (sig2, sig1) if swap else (sig1, sig2)
    fixed = _distinct_stabilizer_vectors(group, small, max_distinct)
    if not fixed:
        return None
    seen: set[frozenset[int]] = set()
    for gv in iter_generating_vectors(group, large):
        stab = stabilizer_elements(gv)
        if stab in seen:
            continue
        seen.add(stab)
        for stab_f, gv_f in fixed:
            if not (stab_f & stab):
                gv1, gv2 = (gv, gv_f) if swap else (gv_f, gv)
                return UnmixedPair(group=group, gv1=gv1, gv2=gv2)
        if len(seen) >= max_distinct:
            break
    return None
