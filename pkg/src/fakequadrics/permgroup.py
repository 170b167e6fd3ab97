"""Exact kernel for small finite groups realized as permutation groups.

Permutations are stored in one-line form over ``{0..n-1}``; user-facing
cycle notation is 1-based.  A :class:`Group` materializes its full element
list in a fixed canonical order (lexicographic on one-line form) together
with index-based multiplication and inverse tables, so that closure,
conjugacy and search code is fast and fully deterministic.

The composition convention is right-to-left application::

    (a * b)(x) == a(b(x))

i.e. ``b`` acts first.  Under this convention the monodromy tuples used
throughout the package multiply left-to-right to the identity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "Perm",
    "Group",
    "ConjClassSet",
    "ParseError",
    "ClosureLimitError",
    "FingerprintError",
    "compose",
    "parse_perm",
    "element_order",
    "group_closure",
    "conjugacy_classes",
    "construct_group",
    "verify_central_quotient",
    "find_isomorphism",
    "abelian_invariants_of_group",
    "CATALOG_LABELS",
]

DEFAULT_CLOSURE_BOUND = 20000


class ParseError(ValueError):
    """Malformed cycle notation; ``column`` is the 1-based offender position."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


class ClosureLimitError(RuntimeError):
    """Generated set exceeded the configured closure size bound."""


class FingerprintError(RuntimeError):
    """A constructed group does not match its expected invariants."""


class Perm:
    """An immutable permutation of ``{0..n-1}`` in one-line form."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        if len(self.images) != len(other.images):
            raise ValueError(
                f"degree mismatch: {len(self.images)} vs {len(other.images)}"
            )
        img = self.images
        return Perm(tuple(img[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.images else 1

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (including fixed points), each starting at its
        minimal point, sorted by that point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """1-based disjoint-cycle notation; the identity is ``id``."""
        parts = [
            "(" + ",".join(str(p + 1) for p in c) + ")"
            for c in self.cycles()
            if len(c) > 1
        ]
        return "".join(parts) if parts else "id"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perm[{self.cycle_string()}]"


def compose(a: Perm, b: Perm) -> Perm:
    """Right-to-left composition: ``compose(a, b)(x) == a(b(x))``."""
    return a * b


def parse_perm(text: str, degree: int) -> Perm:
    """Parse 1-based disjoint-cycle notation like ``(2,4)(3,5)``.

    The identity may be written ``()`` or ``id``.  Whitespace is ignored.
    Raises :class:`ParseError` with the 1-based column of the first
    offending character.
    """
    stripped = text.strip()
    if stripped == "id":
        return Perm.identity(degree)

    images = list(range(degree))
    moved: set[int] = set()
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def read_int() -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError("expected a point number", start + 1)
        return int(text[start:pos])

    skip_ws()
    if pos >= n:
        raise ParseError("empty permutation", pos + 1)
    saw_cycle = False
    while pos < n:
        if text[pos] != "(":
            raise ParseError(f"expected '(' but found {text[pos]!r}", pos + 1)
        open_col = pos + 1
        pos += 1
        skip_ws()
        if pos < n and text[pos] == ")":
            pos += 1
            skip_ws()
            saw_cycle = True
            continue
        cycle = []
        while True:
            skip_ws()
            col = pos + 1
            point = read_int()
            if not 1 <= point <= degree:
                raise ParseError(f"point {point} outside 1..{degree}", col)
            if point - 1 in moved:
                raise ParseError(f"point {point} used twice (cycles must be disjoint)", col)
            moved.add(point - 1)
            cycle.append(point - 1)
            skip_ws()
            if pos >= n:
                raise ParseError("unterminated cycle", open_col)
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                pos += 1
                break
            raise ParseError(f"expected ',' or ')' but found {text[pos]!r}", pos + 1)
        for i, p in enumerate(cycle):
            images[p] = cycle[(i + 1) % len(cycle)]
        saw_cycle = True
        skip_ws()
    if not saw_cycle:
        raise ParseError("empty permutation", 1)
    return Perm(images)


class Group:
    """A concrete finite group with all elements materialized.

    ``elements`` is sorted lexicographically on one-line form; every other
    field refers to elements by their position in that ordering.
    """

    def __init__(self, elements: Iterable[Perm], generators: Iterable[Perm] = (), label: str = ""):
        elems = sorted(set(elements))
        if not elems:
            raise ValueError("a group needs at least the identity")
        self.degree = elems[0].degree
        if any(e.degree != self.degree for e in elems):
            raise ValueError("mixed degrees in element list")
        self.elements: tuple[Perm, ...] = tuple(elems)
        self.label = label
        self._index: dict[Perm, int] = {p: i for i, p in enumerate(self.elements)}
        self.identity = self._index[Perm.identity(self.degree)]

        n = len(elems)
        self.mul_table: list[list[int]] = [[0] * n for _ in range(n)]
        idx = self._index
        for i, a in enumerate(elems):
            ai = a.images
            row = self.mul_table[i]
            for j, b in enumerate(elems):
                row[j] = idx[Perm(tuple(ai[k] for k in b.images))]
        self.inv_table: list[int] = [0] * n
        for i, a in enumerate(elems):
            self.inv_table[i] = idx[a.inverse()]
        # closure sanity: mul_table construction above raises KeyError if not closed
        self.orders: tuple[int, ...] = tuple(e.order() for e in elems)
        self.exponent = math.lcm(*self.orders)
        gens = tuple(dict.fromkeys(generators))
        for g in gens:
            if g not in self._index:
                raise ValueError(f"generator {g} not in element list")
        self.generators: tuple[int, ...] = tuple(self._index[g] for g in gens)
        self._classes: ConjClassSet | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: Perm) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise ValueError(f"{g} is not an element of {self.describe()}") from None

    def __contains__(self, g: Perm) -> bool:
        return g in self._index

    def mul(self, i: int, j: int) -> int:
        return self.mul_table[i][j]

    def inv(self, i: int) -> int:
        return self.inv_table[i]

    def power(self, i: int, k: int) -> int:
        k %= self.orders[i]
        acc = self.identity
        for _ in range(k):
            acc = self.mul_table[acc][i]
        return acc

    def conjugate(self, h: int, g: int) -> int:
        """Index of h g h^-1."""
        return self.mul_table[self.mul_table[h][g]][self.inv_table[h]]

    def subgroup_closure(self, seed: Iterable[int]) -> frozenset[int]:
        """Indices of the subgroup generated by ``seed``."""
        seen = {self.identity}
        seed = [i for i in dict.fromkeys(seed)]
        frontier = [self.identity]
        table = self.mul_table
        while frontier:
            nxt = []
            for x in frontier:
                row = table[x]
                for g in seed:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def center(self) -> list[int]:
        table = self.mul_table
        n = self.order
        return [i for i in range(n) if all(table[i][j] == table[j][i] for j in range(n))]

    def describe(self) -> str:
        return self.label or f"group of order {self.order} on {self.degree} points"

    def __repr__(self) -> str:
        return f"Group({self.describe()}, order={self.order})"


def element_order(group: Group, g: Perm | int) -> int:
    """Least ``k >= 1`` with ``g^k`` the identity."""
    i = g if isinstance(g, int) else group.index(g)
    return group.orders[i]


def group_closure(gens: Sequence[Perm], label: str = "", max_size: int = DEFAULT_CLOSURE_BOUND) -> Group:
    """Smallest group containing ``gens``, via breadth-first closure."""
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators have mixed degrees")
    els: set[Perm] = {Perm.identity(degree)}
    frontier = list(els)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in els:
                    els.add(y)
                    if len(els) > max_size:
                        raise ClosureLimitError(
                            f"closure exceeded {max_size} elements"
                        )
                    nxt.append(y)
        frontier = nxt
    return Group(els, generators=gens, label=label)


@dataclass(frozen=True)
class ConjClassSet:
    """Conjugacy classes of a group, in canonical class order.

    Classes are sorted by (element order, class size, minimal member);
    the identity class is therefore always first.  ``power_maps[k]`` sends
    a class index to the class of k-th powers, for every ``k`` in
    ``0..exponent-1``; well-definedness is verified on every member.
    """

    group: Group
    classes: tuple[tuple[int, ...], ...]
    reps: tuple[int, ...]
    sizes: tuple[int, ...]
    class_of: tuple[int, ...]
    power_maps: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.classes)

    def power_map(self, k: int) -> tuple[int, ...]:
        return self.power_maps[k % self.group.exponent]

    def inverse_map(self) -> tuple[int, ...]:
        return self.power_maps[self.group.exponent - 1] if self.group.exponent > 1 else (0,)


def conjugacy_classes(group: Group) -> ConjClassSet:
    """Partition ``group`` into conjugacy classes (cached on the group)."""
    if group._classes is not None:
        return group._classes
    n = group.order
    assigned = [-1] * n
    raw_classes: list[list[int]] = []
    for i in range(n):
        if assigned[i] >= 0:
            continue
        orbit = {i}
        stack = [i]
        while stack:
            x = stack.pop()
            for h in range(n):
                y = group.conjugate(h, x)
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        k = len(raw_classes)
        members = sorted(orbit)
        raw_classes.append(members)
        for m in members:
            assigned[m] = k

    order_key = lambda cls: (group.orders[cls[0]], len(cls), group.elements[cls[0]].images)
    raw_classes.sort(key=order_key)
    classes = tuple(tuple(c) for c in raw_classes)
    class_of = [0] * n
    for k, cls in enumerate(classes):
        for m in cls:
            class_of[m] = k
    reps = tuple(cls[0] for cls in classes)
    sizes = tuple(len(cls) for cls in classes)

    power_maps = []
    for t in range(group.exponent):
        pm = []
        for k, cls in enumerate(classes):
            target = class_of[group.power(reps[k], t)]
            for m in cls:
                if class_of[group.power(m, t)] != target:
                    raise RuntimeError(
                        f"power map t={t} not constant on class {k}"
                    )
            pm.append(target)
        power_maps.append(tuple(pm))

    result = ConjClassSet(
        group=group,
        classes=classes,
        reps=reps,
        sizes=sizes,
        class_of=tuple(class_of),
        power_maps=tuple(power_maps),
    )
    group._classes = result
    return result


# ---------------------------------------------------------------------------
# named constructions


def _cycle_perm(degree: int, points: Sequence[int]) -> Perm:
    images = list(range(degree))
    for i, p in enumerate(points):
        images[p] = points[(i + 1) % len(points)]
    return Perm(images)


def symmetric_group(n: int, label: str = "") -> Group:
    elems = [Perm(p) for p in itertools.permutations(range(n))]
    gens = [_cycle_perm(n, [0, 1]), _cycle_perm(n, list(range(n)))]
    return Group(elems, generators=gens, label=label or f"S{n}")


def _perm_sign(p: Perm) -> int:
    return (-1) ** sum(len(c) - 1 for c in p.cycles())


def alternating_group(n: int, label: str = "") -> Group:
    elems = [Perm(p) for p in itertools.permutations(range(n)) if _perm_sign(Perm(p)) == 1]
    gens = [_cycle_perm(n, [0, 1, 2]), _cycle_perm(n, list(range(n)))]
    if n % 2 == 0:
        gens[1] = _cycle_perm(n, list(range(1, n)))
    return Group(elems, generators=gens, label=label or f"A{n}")


def abelian_product(block_sizes: Sequence[int], label: str) -> Group:
    """Direct product of cyclic groups, one full cycle per block of points."""
    degree = sum(block_sizes)
    gens = []
    offset = 0
    for size in block_sizes:
        gens.append(_cycle_perm(degree, list(range(offset, offset + size))))
        offset += size
    return group_closure(gens, label=label)


def _shift_perm(p: Perm, degree: int, offset: int) -> Perm:
    images = list(range(degree))
    for i, j in enumerate(p.images):
        images[i + offset] = j + offset
    return Perm(images)


def direct_product(g1: Group, g2: Group, label: str) -> Group:
    """Direct product acting on the disjoint union of the two point sets."""
    degree = g1.degree + g2.degree
    gens = [_shift_perm(g1.elements[i], degree, 0) for i in g1.generators]
    gens += [_shift_perm(g2.elements[i], degree, g1.degree) for i in g2.generators]
    return group_closure(gens, label=label, max_size=g1.order * g2.order)


def dihedral_group(n: int, label: str = "") -> Group:
    """Dihedral group of order 2n acting on n points."""
    rot = _cycle_perm(n, list(range(n)))
    refl = Perm(tuple((n - i) % n for i in range(n)))
    return group_closure([rot, refl], label=label or f"D{n}")


def _sl25_group() -> Group:
    """SL(2,5) as permutations of the 24 nonzero vectors of F_5^2.

    Vectors are ordered lexicographically; a matrix M acts by v -> M v, so
    matrix products map to permutation products under the right-to-left
    convention.  The action is faithful and the image of -I is the unique
    central involution.
    """
    vectors = [(a, b) for a in range(5) for b in range(5) if (a, b) != (0, 0)]
    vindex = {v: i for i, v in enumerate(vectors)}

    def matrix_perm(m: tuple[int, int, int, int]) -> Perm:
        a, b, c, d = m
        return Perm(
            tuple(
                vindex[((a * x + b * y) % 5, (c * x + d * y) % 5)]
                for (x, y) in vectors
            )
        )

    s = matrix_perm((0, 4, 1, 0))   # [[0,-1],[1,0]]
    t = matrix_perm((1, 1, 0, 1))   # [[1,1],[0,1]]
    return group_closure([s, t], label="SL(2,5)", max_size=200)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation plus permutation images realizing it.

    The images must satisfy every relator and generate a group of order
    ``order``; ``fingerprint`` freezes (order, abelian invariants,
    exponent, class count) of the realization.
    """

    name: str
    generator_names: tuple[str, ...]
    relators: tuple[str, ...]
    images: tuple[str, ...]
    degree: int
    order: int
    fingerprint: tuple[int, tuple[int, ...], int, int]


# Sourced presentations for the two catalog groups with no standard name.
# G(16) is a semidirect product (Z2 x Z2) : Z4 with the order-4 generator
# swapping the two involutions; G(32) is the wreath-type extension
# (Z2 x Z2) wr Z2 = (Z2)^4 : Z2 with the top involution swapping the two
# pairs of coordinates.  Both are realized faithfully on 8 points, and both
# realizations are fingerprint-checked at construction time; their fitness
# for the catalog rows is established by the row reproductions themselves.
_G16_PRESENTATION = Presentation(
    name="G(16)",
    generator_names=("a", "b", "t"),
    relators=(
        "a^2", "b^2", "t^4", "a*b*a^-1*b^-1",
        "t*a*t^-1*b^-1", "t*b*t^-1*a^-1",
    ),
    images=("(1,2)(3,4)", "(1,3)(2,4)", "(5,6,7,8)(2,3)"),
    degree=8,
    order=16,
    fingerprint=(16, (2, 4), 4, 10),
)

_G32_PRESENTATION = Presentation(
    name="G(32)",
    generator_names=("a", "b", "t"),
    relators=(
        "a^2", "b^2", "t^2",
        "a*b*a^-1*b^-1",
        "a*(t*b*t)*a^-1*(t*b*t)^-1",
        "a*(t*a*t)*a^-1*(t*a*t)^-1",
        "b*(t*a*t)*b^-1*(t*a*t)^-1",
        "b*(t*b*t)*b^-1*(t*b*t)^-1",
    ),
    images=("(1,2)(3,4)", "(1,3)(2,4)", "(1,5)(2,6)(3,7)(4,8)"),
    degree=8,
    order=32,
    fingerprint=(32, (2, 2, 2), 4, 14),
)


def _word_perm(word: str, env: dict[str, Perm], degree: int) -> Perm:
    """Evaluate a relator word like ``a*b^-1*(t*a*t)^2`` over ``env``."""
    pos = 0
    n = len(word)

    def parse_factor() -> Perm:
        nonlocal pos
        if pos < n and word[pos] == "(":
            pos += 1
            p = parse_word(stop=")")
            pos += 1  # skip ')'
        else:
            start = pos
            while pos < n and (word[pos].isalnum() or word[pos] == "_"):
                pos += 1
            name = word[start:pos]
            if name not in env:
                raise ValueError(f"unknown generator {name!r} in word {word!r}")
            p = env[name]
        if pos < n and word[pos] == "^":
            pos += 1
            sign = 1
            if word[pos] == "-":
                sign = -1
                pos += 1
            start = pos
            while pos < n and word[pos].isdigit():
                pos += 1
            k = sign * int(word[start:pos])
            q = Perm.identity(degree)
            base = p if k >= 0 else p.inverse()
            for _ in range(abs(k)):
                q = q * base
            p = q
        return p

    def parse_word(stop: str = "") -> Perm:
        nonlocal pos
        acc = Perm.identity(degree)
        while pos < n and (not stop or word[pos] != stop):
            acc = acc * parse_factor()
            if pos < n and word[pos] == "*":
                pos += 1
        return acc

    result = parse_word()
    if pos != n:
        raise ValueError(f"trailing junk in word {word!r}")
    return result


def group_from_presentation(pres: Presentation) -> Group:
    """Realize a presentation through its embedded permutation images.

    Checks: every relator evaluates to the identity on the images, the
    images generate a group of the declared order, and the fingerprint
    (order, abelian invariants, exponent, class count) matches.
    """
    gens = [parse_perm(s, pres.degree) for s in pres.images]
    env = dict(zip(pres.generator_names, gens))
    for rel in pres.relators:
        if not _word_perm(rel, env, pres.degree).is_identity():
            raise FingerprintError(
                f"{pres.name}: relator {rel!r} does not hold in the realization"
            )
    g = group_closure(gens, label=pres.name, max_size=4 * pres.order)
    fp = (
        g.order,
        abelian_invariants_of_group(g),
        g.exponent,
        conjugacy_classes(g).count,
    )
    if fp != pres.fingerprint:
        raise FingerprintError(
            f"{pres.name}: fingerprint {fp} != expected {pres.fingerprint}"
        )
    return g


CATALOG_LABELS = (
    "A5", "S5", "SL(2,5)", "Z5^2", "S4xZ2", "G(32)",
    "S4", "G(16)", "D4xZ2", "Z2^4", "Z3^2", "Z2^3",
)

_ALIASES = {
    "a5": "A5",
    "s5": "S5",
    "sl(2,5)": "SL(2,5)",
    "sl25": "SL(2,5)",
    "sl2_5": "SL(2,5)",
    "z5^2": "Z5^2",
    "(z5)^2": "Z5^2",
    "s4xz2": "S4xZ2",
    "g(32)": "G(32)",
    "g32": "G(32)",
    "s4": "S4",
    "g(16)": "G(16)",
    "g16": "G(16)",
    "d4xz2": "D4xZ2",
    "z2^4": "Z2^4",
    "(z2)^4": "Z2^4",
    "z3^2": "Z3^2",
    "(z3)^2": "Z3^2",
    "z2^3": "Z2^3",
    "(z2)^3": "Z2^3",
}

_EXPECTED_ORDERS = {
    "A5": 60, "S5": 120, "SL(2,5)": 120, "Z5^2": 25, "S4xZ2": 48,
    "G(32)": 32, "S4": 24, "G(16)": 16, "D4xZ2": 16, "Z2^4": 16,
    "Z3^2": 9, "Z2^3": 8,
}


def construct_group(label: str) -> Group:
    """Build a catalog group by name; raises on unknown labels.

    Accepted labels: ``A5 S5 SL(2,5) Z5^2 S4xZ2 G(32) S4 G(16) D4xZ2
    Z2^4 Z3^2 Z2^3`` (case-insensitive, ``(Z5)^2``-style spellings too).
    """
    key = _ALIASES.get(label.strip().lower())
    if key is None:
        raise ValueError(
            f"unknown group label {label!r}; known: {', '.join(CATALOG_LABELS)}"
        )
    if key == "A5":
        g = alternating_group(5, label="A5")
    elif key == "S5":
        g = symmetric_group(5, label="S5")
    elif key == "SL(2,5)":
        g = _sl25_group()
    elif key == "Z5^2":
        g = abelian_product([5, 5], label="Z5^2")
    elif key == "S4xZ2":
        g = direct_product(symmetric_group(4), abelian_product([2], "Z2"), label="S4xZ2")
    elif key == "G(32)":
        g = group_from_presentation(_G32_PRESENTATION)
    elif key == "S4":
        g = symmetric_group(4, label="S4")
    elif key == "G(16)":
        g = group_from_presentation(_G16_PRESENTATION)
    elif key == "D4xZ2":
        g = direct_product(dihedral_group(4, "D4"), abelian_product([2], "Z2"), label="D4xZ2")
    elif key == "Z2^4":
        g = abelian_product([2, 2, 2, 2], label="Z2^4")
    elif key == "Z3^2":
        g = abelian_product([3, 3], label="Z3^2")
    else:
        g = abelian_product([2, 2, 2], label="Z2^3")
    if g.order != _EXPECTED_ORDERS[key]:
        raise FingerprintError(
            f"{key}: constructed order {g.order} != expected {_EXPECTED_ORDERS[key]}"
        )
    return g


# ---------------------------------------------------------------------------
# isomorphism testing (small orders only)


def _generating_sequence(group: Group) -> list[int]:
    """A short generating sequence, preferring the declared generators."""
    if group.generators and len(group.subgroup_closure(group.generators)) == group.order:
        gens = list(group.generators)
        # drop redundant generators greedily
        for g in list(gens):
            rest = [h for h in gens if h != g]
            if rest and len(group.subgroup_closure(rest)) == group.order:
                gens = rest
        return gens
    gens: list[int] = []
    have = {group.identity}
    for i in range(group.order):
        if i in have:
            continue
        gens.append(i)
        have = set(group.subgroup_closure(gens))
        if len(have) == group.order:
            return gens
    return gens


def _class_profile(group: Group, ccs: ConjClassSet, i: int) -> tuple[int, int]:
    k = ccs.class_of[i]
    return (group.orders[i], ccs.sizes[k])


def find_isomorphism(g1: Group, g2: Group) -> dict[int, int] | None:
    """An isomorphism ``g1 -> g2`` as an index map, or None.

    Backtracks over generator images, pruned by element order and
    conjugacy class size; intended for orders <= 120.
    """
    if g1.order != g2.order:
        return None
    c1, c2 = conjugacy_classes(g1), conjugacy_classes(g2)
    if sorted(zip(c1.sizes, (g1.orders[r] for r in c1.reps))) != sorted(
        zip(c2.sizes, (g2.orders[r] for r in c2.reps))
    ):
        return None
    gens = _generating_sequence(g1)
    profiles = [_class_profile(g1, c1, g) for g in gens]
    candidates = [
        [j for j in range(g2.order) if _class_profile(g2, c2, j) == prof]
        for prof in profiles
    ]

    def try_images(images: list[int]) -> dict[int, int] | None:
        # grow the map by closure; check the morphism property on the way
        phi = {g1.identity: g2.identity}
        frontier = [g1.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, images):
                    y = g1.mul_table[x][g]
                    target = g2.mul_table[phi[x]][img]
                    if y in phi:
                        if phi[y] != target:
                            return None
                    else:
                        phi[y] = target
                        nxt.append(y)
            frontier = nxt
        if len(phi) != g1.order or len(set(phi.values())) != g1.order:
            return None
        for x in range(g1.order):
            for g, img in zip(gens, images):
                if phi[g1.mul_table[x][g]] != g2.mul_table[phi[x]][img]:
                    return None
        return phi

    def backtrack(k: int, chosen: list[int]) -> dict[int, int] | None:
        if k == len(gens):
            return try_images(chosen)
        for cand in candidates[k]:
            result = backtrack(k + 1, chosen + [cand])
            if result is not None:
                return result
        return None

    return backtrack(0, [])


def _regular_group(order: int, mul: list[list[int]], identity: int, label: str) -> Group:
    """Group abstractly given by a multiplication table, realized by its
    left-regular permutation action."""
    perms = []
    for i in range(order):
        # left multiplication by element i permutes the element indices
        perms.append(Perm(tuple(mul[i][j] for j in range(order))))
    return Group(perms, generators=perms, label=label)


def quotient_by_central_involution(group: Group, z: int) -> Group:
    """Quotient of ``group`` by the order-2 central subgroup {1, z},
    realized through its left-regular action on cosets."""
    if group.orders[z] != 2 or z not in group.center():
        raise ValueError("z must be a central involution")
    coset_of = [-1] * group.order
    cosets: list[int] = []
    for i in range(group.order):
        if coset_of[i] >= 0:
            continue
        k = len(cosets)
        coset_of[i] = k
        coset_of[group.mul_table[i][z]] = k
        cosets.append(i)
    m = len(cosets)
    mul = [[coset_of[group.mul_table[cosets[a]][cosets[b]]] for b in range(m)] for a in range(m)]
    return _regular_group(m, mul, coset_of[group.identity], label=f"{group.describe()}/center")


def verify_central_quotient(extension: Group, target: Group) -> bool:
    """True iff ``extension`` has a central order-2 subgroup whose quotient
    is isomorphic to ``target`` (certified by an explicit isomorphism)."""
    if extension.order != 2 * target.order:
        return False
    for z in extension.center():
        if extension.orders[z] != 2:
            continue
        quotient = quotient_by_central_involution(extension, z)
        if find_isomorphism(quotient, target) is not None:
            return True
    return False


def abelian_invariants_of_group(group: Group) -> tuple[int, ...]:
    """Invariant factors (ascending, each >= 2) of G/[G,G].

    The derived subgroup is closed from all commutators; the abelian
    quotient's type is recovered one prime at a time from the counts of
    quotient elements of order dividing p^j.
    """
    n = group.order
    mul, inv = group.mul_table, group.inv_table
    comms = {
        mul[mul[inv[a]][inv[b]]][mul[a][b]]
        for a in range(n)
        for b in range(n)
    }
    derived = group.subgroup_closure(comms)

    members = sorted(derived)
    rank = {x: i for i, x in enumerate(members)}
    coset_of = [-1] * n
    cosets: list[int] = []
    for i in range(n):
        if coset_of[i] >= 0:
            continue
        k = len(cosets)
        cosets.append(i)
        for x in members:
            coset_of[mul[i][x]] = k
    m = len(cosets)
    qmul = [[coset_of[mul[cosets[a]][cosets[b]]] for b in range(m)] for a in range(m)]
    qid = coset_of[group.identity]

    qorders = []
    for x in range(m):
        k, acc = 1, x
        while acc != qid:
            acc = qmul[acc][x]
            k += 1
        qorders.append(k)

    # per-prime exponent partitions from order-dividing counts:
    # #{x : x^(p^j) = 1} jumps by p^(number of cyclic factors with exponent >= j)
    primes = sorted({p for o in qorders for p in _prime_factors(o)})
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        exponents: list[int] = []
        j, prev = 1, 1
        while True:
            cur = sum(1 for o in qorders if p**j % o == 0)
            ratio = cur // prev
            if ratio == 1:
                break
            n_j = 0
            while ratio > 1:
                ratio //= p
                n_j += 1
            exponents.append(n_j)
            prev = cur
            j += 1
        per_prime[p] = exponents  # exponents[j-1] = #factors with p-exponent >= j

    # assemble invariant factors: the k-th largest factor takes the k-th
    # largest p-exponent from every prime
    factor_count = max((ex[0] for ex in per_prime.values()), default=0)
    factors = []
    for k in range(factor_count):
        d = 1
        for p, ex in per_prime.items():
            e_k = sum(1 for n_j in ex if n_j >= factor_count - k)
            d *= p**e_k
        factors.append(d)
    return tuple(f for f in factors if f > 1)


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out
