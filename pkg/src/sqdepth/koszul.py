"""Depth of I/J from the multigraded strands of its Koszul complex.

The Koszul complex of x1..xn over the module I/J splits into strands, one
per multidegree. For a squarefree multidegree sigma the strand in
homological index i has basis {tau subset of sigma : |tau| = i and the
monomial with support sigma \\ tau lies in I \\ J}, with boundary

    d(e_tau) = sum over j in tau of sign(j, tau) * e_(tau minus j),

where a summand is dropped when the shifted monomial falls into J and
sign(j, tau) = (-1)^(position of j in the sorted tau). Then

    depth(I/J) = n - max{ i : H_i(strand) != 0 for some sigma }.

Homology of squarefree modules is concentrated in squarefree multidegrees,
so scanning the 2^n squarefree strands is exhaustive; the paranoid mode
re-verifies that concentration on every multidegree with one squared
variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import is_prime, rank_char0, rank_mod_p
from .monomial import IdealPair, Monomial, mask_key, masks_contain


class StrandInvariantError(AssertionError):
    """A constructed strand failed boundary(boundary) = 0."""


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field, identified by its characteristic (0 or a prime)."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0 and not is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {self.characteristic}")

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"


def _strand_spaces(pair: IdealPair, exponents: tuple[int, ...]):
    """Bases and integer boundary matrices of one multidegree strand.

    ``exponents`` is the multidegree as an exponent vector; entries beyond 1
    only occur in the paranoid concentration check. Returns (bases,
    boundaries) where bases[i] lists the tau masks in canonical order and
    boundaries[i] is the matrix of d_i : C_i -> C_(i-1), rows indexed by
    bases[i-1].
    """
    n = pair.n
    support = [v for v in range(n) if exponents[v] > 0]
    support_mask = 0
    for v in support:
        support_mask |= 1 << v
    im, jm = pair.i_masks, pair.j_masks

    def complement_support(tau: int) -> int:
        mask = 0
        for v in support:
            if exponents[v] - (tau >> v & 1) > 0:
                mask |= 1 << v
        return mask

    def in_difference(tau: int) -> bool:
        m = complement_support(tau)
        return masks_contain(im, m) and not masks_contain(jm, m)

    top = len(support)
    bases: list[list[int]] = [[] for _ in range(top + 1)]
    for size in range(top + 1):
        for combo in itertools.combinations(support, size):
            tau = 0
            for v in combo:
                tau |= 1 << v
            if in_difference(tau):
                bases[size].append(tau)

    boundaries: list[list[list[int]]] = [[]]
    for i in range(1, top + 1):
        rows = {t: r for r, t in enumerate(bases[i - 1])}
        matrix = [[0] * len(bases[i]) for _ in rows]
        for col, tau in enumerate(bases[i]):
            sign = 1
            for v in support:
                if tau >> v & 1:
                    smaller = tau & ~(1 << v)
                    r = rows.get(smaller)
                    if r is not None:
                        matrix[r][col] = sign
                    sign = -sign
        boundaries.append(matrix)
    return [tuple(b) for b in bases], boundaries


def _check_complex(bases, boundaries) -> None:
    for i in range(2, len(boundaries)):
        a, b = boundaries[i - 1], boundaries[i]
        if not a or not b or not b[0]:
            continue
        for r in range(len(a)):
            for c in range(len(b[0])):
                acc = sum(a[r][k] * b[k][c] for k in range(len(b)))
                if acc:
                    raise StrandInvariantError(f"d_{i-1} after d_{i} is nonzero at ({r}, {c})")


@dataclass(frozen=True)
class KoszulStrand:
    """One multidegree strand with its homology over a chosen field."""

    pair: IdealPair
    exponents: tuple[int, ...]
    field: FieldSpec
    bases: tuple[tuple[int, ...], ...]
    homology: tuple[int, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    @property
    def sigma(self) -> Monomial:
        mask = 0
        for v, e in enumerate(self.exponents):
            if e:
                mask |= 1 << v
        return Monomial(mask, len(self.exponents))


def _homology_dims(bases, boundaries, characteristic: int) -> tuple[int, ...]:
    rank = (lambda m: rank_char0(m)) if characteristic == 0 else (
        lambda m: rank_mod_p(m, characteristic)
    )
    ranks = [0] * (len(boundaries) + 1)
    for i in range(1, len(boundaries)):
        ranks[i] = rank(boundaries[i]) if boundaries[i] and boundaries[i][0] else 0
    out = []
    for i, basis in enumerate(bases):
        out.append(len(basis) - ranks[i] - (ranks[i + 1] if i + 1 < len(ranks) else 0))
    return tuple(out)


def build_strand(pair: IdealPair, sigma: Monomial, field: FieldSpec = FieldSpec(0)) -> KoszulStrand:
    """The strand at a squarefree multidegree, with boundary^2 = 0 verified."""
    exponents = tuple(sigma.mask >> v & 1 for v in range(pair.n))
    bases, boundaries = _strand_spaces(pair, exponents)
    _check_complex(bases, boundaries)
    return KoszulStrand(
        pair=pair,
        exponents=exponents,
        field=field,
        bases=tuple(bases),
        homology=_homology_dims(bases, boundaries, field.characteristic),
    )


@dataclass(frozen=True)
class DepthResult:
    depth: int
    proj_dim: int
    witness_sigma: Monomial
    witness_index: int
    field: FieldSpec


def _scan_masks(n: int) -> list[int]:
    """All squarefree multidegrees, largest support first, canonical within a size."""
    return sorted(range(1 << n), key=lambda m: (-m.bit_count(), mask_key(m)))


def depth_profile(
    pair: IdealPair, fields=(FieldSpec(0), FieldSpec(2), FieldSpec(3)), paranoid: bool = False
) -> dict[int, DepthResult]:
    """Depth of I/J over each requested field, sharing strand construction.

    Strands are scanned by descending support size, so once some field has a
    nonvanishing H_i no later strand (all of smaller support) can raise that
    field's record; a field also stops at the proven floor i = n - d. The
    scan ends when every requested field is settled.
    """
    fields = tuple(fields)
    n, d = pair.n, pair.d
    best: dict[int, tuple[int, Monomial]] = {}
    open_chars = {f.characteristic for f in fields}
    cap = n - d
    for mask in _scan_masks(n):
        size = mask.bit_count()
        if not open_chars:
            break
        # A strand on |sigma| variables has homology only in indices <= |sigma|,
        # so once every still-open field holds a witness at index >= size no
        # smaller support can improve anything.
        if all(c in best and best[c][0] >= size for c in open_chars):
            break
        exponents = tuple(mask >> v & 1 for v in range(n))
        bases, boundaries = _strand_spaces(pair, exponents)
        if all(not b for b in bases):
            continue
        _check_complex(bases, boundaries)
        for char in sorted(open_chars):
            if char in best and best[char][0] >= size:
                continue
            hom = _homology_dims(bases, boundaries, char)
            for i in range(len(hom) - 1, -1, -1):
                if hom[i] > 0:
                    if char not in best or i > best[char][0]:
                        best[char] = (i, Monomial(mask, n))
                    break
        for char in list(open_chars):
            if char in best and best[char][0] >= cap:
                open_chars.discard(char)
    if paranoid:
        _paranoid_concentration(pair, fields)
    out: dict[int, DepthResult] = {}
    for f in fields:
        proj, sigma = best[f.characteristic]
        out[f.characteristic] = DepthResult(
            depth=n - proj, proj_dim=proj, witness_sigma=sigma, witness_index=proj, field=f
        )
    return out


def depth(
    pair: IdealPair, field: FieldSpec = FieldSpec(0), paranoid: bool = False
) -> DepthResult:
    return depth_profile(pair, (field,), paranoid=paranoid)[field.characteristic]


def _paranoid_concentration(pair: IdealPair, fields) -> None:
    """Check that no multidegree with one squared variable carries homology."""
    n = pair.n
    if n > 6:
        raise ValueError("paranoid concentration check is limited to n <= 6")
    for mask in range(1 << n):
        for v in range(n):
            if not mask >> v & 1:
                continue
            exponents = tuple((mask >> u & 1) + (1 if u == v else 0) for u in range(n))
            bases, boundaries = _strand_spaces(pair, exponents)
            if all(not b for b in bases):
                continue
            _check_complex(bases, boundaries)
            for f in fields:
                hom = _homology_dims(bases, boundaries, f.characteristic)
                if any(hom):
                    raise StrandInvariantError(
                        f"nonzero homology {hom} at non-squarefree multidegree "
                        f"{exponents} over {f}"
                    )
