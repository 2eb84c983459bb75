"""Squarefree monomials, ideal pairs, and the divisibility poset of I \\ J.

A squarefree monomial in variables x1..xn is stored as an integer bit mask
(bit i set = variable x_{i+1} present). Divisibility is mask inclusion, lcm
is bitwise or, degree is the popcount. Everything downstream (the Stanley
depth solver, the Koszul strands, the layer criteria) consumes the canonical
order produced here: by degree, then lexicographically on the sorted list of
variable indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

MAX_VARS = 24


class ValidationError(ValueError):
    """An ideal pair violated a constructor invariant."""


class PosetEmpty(ValueError):
    """The set of squarefree monomials in I \\ J is empty."""


def mask_degree(mask: int) -> int:
    return mask.bit_count()


def mask_variables(mask: int) -> tuple[int, ...]:
    """1-based variable indices of a mask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Canonical sort key: degree first, then lex on variable indices."""
    return (mask.bit_count(), mask_variables(mask))


@dataclass(frozen=True)
class Monomial:
    """A squarefree monomial inside a fixed ambient ring K[x1..xn]."""

    mask: int
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VARS:
            raise ValidationError(f"ambient variable count {self.n} out of range 0..{MAX_VARS}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValidationError(f"monomial mask {self.mask:#x} does not fit in {self.n} variables")

    @classmethod
    def from_variables(cls, variables, n: int) -> "Monomial":
        mask = 0
        for v in variables:
            if not 1 <= v <= n:
                raise ValidationError(f"variable index {v} out of range 1..{n}")
            if mask >> (v - 1) & 1:
                raise ValidationError(f"variable x{v} repeated; monomials here are squarefree")
            mask |= 1 << (v - 1)
        return cls(mask, n)

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    @property
    def variables(self) -> tuple[int, ...]:
        return mask_variables(self.mask)

    def divides(self, other: "Monomial") -> bool:
        return self.mask & other.mask == self.mask

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(self.mask | other.mask, max(self.n, other.n))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return mask_key(self.mask)

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self.mask:
            return "1"
        return "*".join(f"x{v}" for v in self.variables)


def minimalize_masks(masks) -> tuple[int, ...]:
    """Minimal generators among ``masks``: drop duplicates and proper multiples."""
    unique = sorted(set(masks), key=mask_key)
    kept: list[int] = []
    for m in unique:
        if not any(g & m == g for g in kept):
            kept.append(m)
    return tuple(kept)


def minimalize(gens) -> tuple[Monomial, ...]:
    gens = tuple(gens)
    if not gens:
        return ()
    n = max(g.n for g in gens)
    return tuple(Monomial(m, n) for m in minimalize_masks(g.mask for g in gens))


def masks_contain(gen_masks, mask: int) -> bool:
    """Membership of a monomial in the ideal generated by ``gen_masks``."""
    return any(g & mask == g for g in gen_masks)


def ideal_contains(gens, mono: Monomial) -> bool:
    return masks_contain([g.mask for g in gens], mono.mask)


@dataclass(frozen=True)
class IdealPair:
    """A validated pair of squarefree monomial ideals J < I in K[x1..xn].

    Invariants established at construction: both generator sets are minimal,
    J is contained in I, the difference I \\ J is nonempty, and every
    generator of J has degree at least d+1 where d is the least generator
    degree of I. The unit ideal I = S is represented by the single generator
    1 (empty mask, d = 0); J = 0 by an empty generator tuple.
    """

    n: int
    gens_i: tuple[Monomial, ...]
    gens_j: tuple[Monomial, ...]
    d: int

    @classmethod
    def from_masks(cls, n: int, masks_i, masks_j) -> "IdealPair":
        if not 1 <= n <= MAX_VARS:
            raise ValidationError(f"ambient variable count {n} out of range 1..{MAX_VARS}")
        for m in itertools.chain(masks_i, masks_j):
            if m < 0 or m >> n:
                raise ValidationError(f"generator mask {m:#x} does not fit in {n} variables")
        mi = minimalize_masks(masks_i)
        mj = minimalize_masks(masks_j)
        if not mi:
            raise ValidationError("I has no generators; the pair requires a nonzero ideal I")
        for m in mj:
            if not masks_contain(mi, m):
                raise ValidationError(f"J generator {Monomial(m, n)} lies outside I")
        if all(masks_contain(mj, m) for m in mi):
            raise ValidationError("J equals I; the difference I \\ J is empty")
        d = min(m.bit_count() for m in mi)
        for m in mj:
            if m.bit_count() <= d:
                raise ValidationError(
                    f"J generator {Monomial(m, n)} has degree {m.bit_count()} <= d = {d}; "
                    "J must be generated in degrees >= d+1"
                )
        return cls(
            n=n,
            gens_i=tuple(Monomial(m, n) for m in mi),
            gens_j=tuple(Monomial(m, n) for m in mj),
            d=d,
        )

    @classmethod
    def from_variable_lists(cls, n: int, gens_i, gens_j) -> "IdealPair":
        to_mask = lambda vs: Monomial.from_variables(vs, n).mask
        return cls.from_masks(n, [to_mask(g) for g in gens_i], [to_mask(g) for g in gens_j])

    @property
    def i_masks(self) -> tuple[int, ...]:
        return tuple(g.mask for g in self.gens_i)

    @property
    def j_masks(self) -> tuple[int, ...]:
        return tuple(g.mask for g in self.gens_j)

    def degree_d_gens(self) -> tuple[Monomial, ...]:
        return tuple(g for g in self.gens_i if g.degree == self.d)

    def extra_gens(self) -> tuple[Monomial, ...]:
        """Generators of I of degree > d (the set E)."""
        return tuple(g for g in self.gens_i if g.degree > self.d)

    def contains(self, mono: Monomial) -> bool:
        """Membership in the difference I \\ J."""
        return masks_contain(self.i_masks, mono.mask) and not masks_contain(self.j_masks, mono.mask)


@dataclass(frozen=True)
class PosetLayers:
    """The divisibility poset of squarefree monomials in I \\ J, layered by degree."""

    pair: IdealPair
    by_degree: tuple[tuple[Monomial, ...], ...]
    rho: tuple[int, ...]

    @property
    def d(self) -> int:
        return self.pair.d

    def layer(self, degree: int) -> tuple[Monomial, ...]:
        if 0 <= degree < len(self.by_degree):
            return self.by_degree[degree]
        return ()

    @property
    def b_layer(self) -> tuple[Monomial, ...]:
        return self.layer(self.d + 1)

    @property
    def c_layer(self) -> tuple[Monomial, ...]:
        return self.layer(self.d + 2)

    @property
    def e_gens(self) -> tuple[Monomial, ...]:
        return self.pair.extra_gens()

    @property
    def r(self) -> int:
        return self.rho[self.d]

    @property
    def s(self) -> int:
        return len(self.b_layer)

    @property
    def q(self) -> int:
        return len(self.c_layer)

    def elements(self) -> tuple[Monomial, ...]:
        return tuple(itertools.chain.from_iterable(self.by_degree))

    def element_masks(self) -> tuple[int, ...]:
        return tuple(m.mask for m in self.elements())


def poset_masks(pair: IdealPair) -> set[int]:
    """All squarefree monomial masks lying in I \\ J.

    Built as a union of superset enumerations over the generators of I,
    which beats scanning all 2^n subsets when generators have high degree.
    """
    seen: set[int] = set()
    full = (1 << pair.n) - 1
    for g in pair.i_masks:
        free = full & ~g
        sub = free
        while True:
            seen.add(g | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
    jm = pair.j_masks
    if jm:
        seen = {m for m in seen if not masks_contain(jm, m)}
    return seen


@lru_cache(maxsize=512)
def build_poset(pair: IdealPair) -> PosetLayers:
    """Layer the poset of I \\ J by degree, each layer in canonical order."""
    masks = poset_masks(pair)
    if not masks:
        raise PosetEmpty("I \\ J contains no squarefree monomial")
    by_degree: list[list[Monomial]] = [[] for _ in range(pair.n + 1)]
    for m in masks:
        by_degree[m.bit_count()].append(Monomial(m, pair.n))
    for layer in by_degree:
        layer.sort()
    return PosetLayers(
        pair=pair,
        by_degree=tuple(tuple(layer) for layer in by_degree),
        rho=tuple(len(layer) for layer in by_degree),
    )


class LcmClass(Enum):
    """Where the lcm of two least-degree generators lands relative to I \\ J."""

    IN_B = "B"
    IN_C = "C"
    IN_J = "J"
    DEG_TOO_BIG = "big"
    EQUALS_GENERATOR = "generator"


def lcm_pairs(pair: IdealPair) -> dict[tuple[int, int], tuple[Monomial, LcmClass]]:
    """Classify lcm(f_i, f_j) for the degree-d generators f_1 < f_2 < ... of I.

    Keys are 1-based (i, j) with i < j, indexing the canonically sorted
    degree-d generators. The EQUALS_GENERATOR class can only appear for
    non-minimal generator sets, which a validated pair never has.
    """
    gens = pair.degree_d_gens()
    d = pair.d
    jm = pair.j_masks
    out: dict[tuple[int, int], tuple[Monomial, LcmClass]] = {}
    for a, b in itertools.combinations(range(len(gens)), 2):
        w = gens[a].lcm(gens[b])
        if w.mask in (gens[a].mask, gens[b].mask):
            cls = LcmClass.EQUALS_GENERATOR
        elif masks_contain(jm, w.mask):
            cls = LcmClass.IN_J
        elif w.degree == d + 1:
            cls = LcmClass.IN_B
        elif w.degree == d + 2:
            cls = LcmClass.IN_C
        else:
            cls = LcmClass.DEG_TOO_BIG
        out[(a + 1, b + 1)] = (w, cls)
    return out


def intersect_masks(masks_a, masks_b) -> tuple[int, ...]:
    """Minimal generators of the intersection of two squarefree monomial ideals."""
    return minimalize_masks(a | b for a in masks_a for b in masks_b)


def sum_masks(masks_a, masks_b) -> tuple[int, ...]:
    return minimalize_masks(itertools.chain(masks_a, masks_b))


def subquotient_pair(n: int, num_masks, den_masks) -> IdealPair | None:
    """Present the module (num)/(den cap num) as a validated ideal pair.

    Generators of the numerator lying inside the denominator contribute no
    monomials to the difference and are dropped first; what remains always
    satisfies the degree rule for J. Returns None when the numerator sinks
    entirely into the denominator (the zero module).
    """
    den = minimalize_masks(den_masks)
    live = [g for g in minimalize_masks(num_masks) if not masks_contain(den, g)]
    if not live:
        return None
    j = intersect_masks(live, den) if den else ()
    return IdealPair.from_masks(n, live, j)


def extend_pair(pair: IdealPair, extra: int = 1) -> IdealPair:
    """The same generators viewed in a ring with ``extra`` fresh variables."""
    if extra < 0:
        raise ValidationError("cannot remove variables from the ambient ring")
    return IdealPair.from_masks(pair.n + extra, pair.i_masks, pair.j_masks)
