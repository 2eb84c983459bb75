"""Instance enumeration, theorem checks, lcm configuration analysis, h-maps.

This module turns the engines (interval-partition solver, Koszul homology,
numeric criteria) into verification campaigns:

* enumerate or sample ideal pairs matching a family description,
* check the depth-floor statement (sdepth = d forces depth = d) and the
  depth-step statement (for the proved generator shapes, sdepth = d+1
  forces depth <= d+1) on each instance,
* classify the lcm configuration of 2- and 3-generator instances and check
  the counting bounds that hold for each configuration,
* extract the injection h: B\\{b} -> C from a normalized partition of the
  derived pair I_b/J_b, and walk its maximal/bad paths,
* hunt for counterexamples over a family, reporting reproducible counts.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
import time
from dataclasses import dataclass, field

from .koszul import FieldSpec, depth_profile
from .monomial import (
    IdealPair,
    LcmClass,
    Monomial,
    PosetEmpty,
    build_poset,
    intersect_masks,
    lcm_pairs,
    mask_key,
    masks_contain,
    minimalize_masks,
    subquotient_pair,
    sum_masks,
)
from .partition import sdepth_decision, sdepth_exact


class EmptyFamily(ValueError):
    """The family constraints admit no instance."""


class HypothesisMismatch(ValueError):
    """The instance shape does not match the statement's hypotheses."""


class NotApplicable(ValueError):
    """The lcm classifier preconditions fail for this instance."""


class NotNormalized(ValueError):
    """A partition interval headed by a B-element does not end in C."""


DEFAULT_FIELDS = (FieldSpec(0), FieldSpec(2), FieldSpec(3))


# ---------------------------------------------------------------------------
# variable permutations and canonical forms


def permute_mask(mask: int, perm: tuple[int, ...]) -> int:
    """Image of a monomial mask under the variable permutation i -> perm[i]."""
    out = 0
    for i, target in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << target
    return out


@functools.lru_cache(maxsize=8)
def _perm_tables(n: int) -> list[list[int]]:
    """One mask -> permuted-mask lookup table per permutation of n variables."""
    tables = []
    for perm in itertools.permutations(range(n)):
        tables.append([permute_mask(m, perm) for m in range(1 << n)])
    return tables


@functools.lru_cache(maxsize=8)
def _mask_ranks(n: int) -> list[int]:
    """Rank of each mask in the canonical (degree, variables) order."""
    ranks = [0] * (1 << n)
    for i, m in enumerate(sorted(range(1 << n), key=mask_key)):
        ranks[m] = i
    return ranks


def _rank_key(masks, table, ranks):
    return tuple(sorted(ranks[table[m]] for m in masks))


def canonical_key(pair: IdealPair):
    """Minimal (sorted I ranks, sorted J ranks) over all variable permutations.

    Ranks follow the canonical monomial order, so comparing rank tuples is
    the same as comparing sorted generator lists lexicographically.
    """
    ranks = _mask_ranks(pair.n)
    best = None
    for table in _perm_tables(pair.n):
        key = (
            _rank_key(pair.i_masks, table, ranks),
            _rank_key(pair.j_masks, table, ranks),
        )
        if best is None or key < best:
            best = key
    return best


def is_canonical(pair: IdealPair) -> bool:
    """True when the pair's own key is minimal in its permutation orbit."""
    ranks = _mask_ranks(pair.n)
    ident = list(range(1 << pair.n))
    own = (
        _rank_key(pair.i_masks, ident, ranks),
        _rank_key(pair.j_masks, ident, ranks),
    )
    return own == canonical_key(pair)


# ---------------------------------------------------------------------------
# instance families


@dataclass(frozen=True)
class InstanceFamily:
    """Shape description for generated instances.

    ``k`` counts degree-``d`` generators.  ``with_e`` admits extra minimal
    generators of degree exactly d+1.  ``j_policy`` is one of "zero",
    "exhaustive", "random".
    """

    n: int
    d: int
    k: int
    with_e: bool = False
    j_policy: str = "zero"
    symmetry_reduction: bool = False

    def __post_init__(self):
        if not 1 <= self.d <= self.n:
            raise EmptyFamily(f"degree d={self.d} impossible with n={self.n}")
        if self.k < 1:
            raise EmptyFamily("at least one degree-d generator required")
        if self.k > math.comb(self.n, self.d):
            raise EmptyFamily(f"k={self.k} exceeds the number of degree-{self.d} monomials")
        if self.j_policy not in ("zero", "exhaustive", "random"):
            raise EmptyFamily(f"unknown J policy {self.j_policy!r}")


def degree_masks(n: int, deg: int) -> list[int]:
    """All squarefree masks of the given degree, canonical order."""
    out = [
        sum(1 << (v - 1) for v in combo)
        for combo in itertools.combinations(range(1, n + 1), deg)
    ]
    return sorted(out, key=mask_key)


def _antichains(elements: list[int]):
    """All antichains (as lists of masks) of the divisibility poset, DFS order.

    Includes the empty antichain.
    """
    n_el = len(elements)

    def dfs(start: int, chosen: list[int]):
        yield list(chosen)
        for idx in range(start, n_el):
            m = elements[idx]
            if all(c & m != c and c & m != m for c in chosen):
                chosen.append(m)
                yield from dfs(idx + 1, chosen)
                chosen.pop()

    yield from dfs(0, [])


def _poset_above(pair: IdealPair) -> list[int]:
    """Masks of I \\ {degree <= d} usable as J generators, canonical order."""
    out = [
        m
        for deg in range(pair.d + 1, pair.n + 1)
        for m in degree_masks(pair.n, deg)
        if masks_contain(pair.i_masks, m)
    ]
    return out


def _i_candidates(fam: InstanceFamily):
    """Yield generator mask tuples (degree-d choices plus optional E)."""
    low = degree_masks(fam.n, fam.d)
    highs = degree_masks(fam.n, fam.d + 1) if fam.with_e else []
    for combo in itertools.combinations(low, fam.k):
        free_highs = [h for h in highs if all(h & f != f for f in combo)]
        if fam.with_e:
            for r in range(len(free_highs) + 1):
                for extra in itertools.combinations(free_highs, r):
                    yield combo + extra
        else:
            yield combo


def enumerate_instances(fam: InstanceFamily):
    """Stream distinct valid pairs matching the family, deterministically.

    With symmetry_reduction only the canonical representative of each
    variable-permutation orbit is emitted.  Raises EmptyFamily when nothing
    matches.
    """
    if fam.j_policy == "random":
        raise EmptyFamily("random J policy requires sample_instances with a seed")

    def stream():
        for gens in _i_candidates(fam):
            if fam.j_policy == "zero":
                j_choices = [[]]
            else:
                base = IdealPair.from_masks(fam.n, gens, ())
                elements = _poset_above(base)
                j_choices = (
                    js
                    for js in _antichains(elements)
                    if not any(masks_contain(js, g) for g in gens)
                )
            for js in j_choices:
                pair = IdealPair.from_masks(fam.n, gens, tuple(js))
                if fam.symmetry_reduction and not is_canonical(pair):
                    continue
                yield pair

    it = stream()
    try:
        first = next(it)
    except StopIteration:
        raise EmptyFamily(f"no instances match {fam}") from None
    return itertools.chain([first], it)


def sample_instances(fam: InstanceFamily, count: int, seed: int):
    """Yield ``count`` seeded random valid pairs matching the family shape."""
    rng = random.Random(seed)
    low = degree_masks(fam.n, fam.d)
    highs = degree_masks(fam.n, fam.d + 1) if fam.with_e else []
    produced = 0
    while produced < count:
        gens = tuple(sorted(rng.sample(low, fam.k), key=mask_key))
        free_highs = [h for h in highs if all(h & f != f for f in gens)]
        if fam.with_e and free_highs:
            extra = tuple(h for h in free_highs if rng.random() < 0.5)
            gens = gens + extra
        if fam.j_policy == "zero":
            js = ()
        else:
            base = IdealPair.from_masks(fam.n, gens, ())
            elements = _poset_above(base)
            picked = [m for m in elements if rng.random() < 0.3]
            js = tuple(sorted(minimalize_masks(picked), key=mask_key))
            if any(masks_contain(js, g) for g in gens):
                continue
        yield IdealPair.from_masks(fam.n, gens, js)
        produced += 1


def enumerate_all_pairs(n: int, symmetry: bool = False):
    """Every valid pair on n variables: I over nonzero antichains (including
    the unit ideal), J over antichains of I's poset above degree d.

    With ``symmetry`` only canonical representatives are emitted: a pair is
    kept exactly when its (sorted I, sorted J) key is minimal over all
    variable permutations.  The I-part is screened first, because only an
    I-minimal pair can be pair-minimal; the J-part is then compared only
    under the permutations that achieve the minimal I-key.
    """
    all_masks = sorted(range(1, 1 << n), key=mask_key)
    tables = _perm_tables(n) if symmetry else None
    ranks = _mask_ranks(n) if symmetry else None
    i_choices = itertools.chain([[0]], (a for a in _antichains(all_masks) if a))
    for gens in i_choices:
        gens = tuple(gens)
        achievers = None
        if symmetry:
            keys = [(_rank_key(gens, t, ranks), t) for t in tables]
            best = min(k for k, _ in keys)
            if _rank_key(gens, tables[0], ranks) != best:
                continue
            achievers = [t for k, t in keys if k == best]
        base = IdealPair.from_masks(n, gens, ())
        for js in _antichains(_poset_above(base)):
            if symmetry:
                own = _rank_key(js, tables[0], ranks)
                if any(_rank_key(js, t, ranks) < own for t in achievers):
                    continue
            yield IdealPair.from_masks(n, gens, tuple(js))


# ---------------------------------------------------------------------------
# theorem checks


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one statement check on one instance."""

    status: str
    instance: IdealPair
    details: dict = field(compare=False, default_factory=dict)


def _depths(pair: IdealPair, fields) -> dict[int, int]:
    profile = depth_profile(pair, fields=fields)
    return {char: res.depth for char, res in profile.items()}


def check_depth_floor(inst: IdealPair, fields=DEFAULT_FIELDS) -> CheckResult:
    """sdepth = d must force depth = d over every field; skip otherwise."""
    res = sdepth_exact(inst)
    if res.value > inst.d:
        return CheckResult("skip", inst, {"sdepth": res.value})
    depths = _depths(inst, fields)
    bad = {c: v for c, v in depths.items() if v != inst.d}
    status = "fail" if bad else "pass"
    return CheckResult(status, inst, {"sdepth": res.value, "depths": depths})


def step_shape(inst: IdealPair) -> str:
    """Classify the instance for the depth-step statement.

    "single" = one degree-d generator, extras all of degree exactly d+1;
    "few" = two or three degree-d generators and nothing else.
    Raises HypothesisMismatch for any other shape.
    """
    k = len(inst.degree_d_gens())
    extras = inst.extra_gens()
    if k == 1 and all(g.degree == inst.d + 1 for g in extras):
        return "single"
    if k in (2, 3) and not extras:
        return "few"
    raise HypothesisMismatch(
        f"{k} degree-{inst.d} generators with extras {[str(g) for g in extras]}"
    )


def check_depth_step(inst: IdealPair, fields=DEFAULT_FIELDS) -> CheckResult:
    """For the proved shapes: sdepth = d+1 must force depth <= d+1."""
    shape = step_shape(inst)
    res = sdepth_exact(inst)
    if res.value != inst.d + 1:
        return CheckResult("skip", inst, {"sdepth": res.value, "shape": shape})
    depths = _depths(inst, fields)
    bad = {c: v for c, v in depths.items() if v > inst.d + 1}
    status = "fail" if bad else "pass"
    return CheckResult(status, inst, {"sdepth": res.value, "shape": shape, "depths": depths})


def check_depth_step_open(inst: IdealPair, fields=DEFAULT_FIELDS) -> CheckResult:
    """The unrestricted step statement: no shape filter, findings are news."""
    res = sdepth_exact(inst)
    if res.value != inst.d + 1:
        return CheckResult("skip", inst, {"sdepth": res.value})
    depths = _depths(inst, fields)
    bad = {c: v for c, v in depths.items() if v > inst.d + 1}
    status = "fail" if bad else "pass"
    return CheckResult(status, inst, {"sdepth": res.value, "depths": depths})


_CHECKS = {
    "floor": check_depth_floor,
    "step": check_depth_step,
    "step-open": check_depth_step_open,
}


# ---------------------------------------------------------------------------
# lcm configuration classifier


@dataclass(frozen=True)
class BoundCheck:
    """One counting bound evaluated on an instance."""

    description: str
    observed: int
    required: int
    holds: bool


def _ge(desc: str, observed: int, required: int) -> BoundCheck:
    return BoundCheck(desc, observed, required, observed >= required)


def _eq(desc: str, observed: int, required: int) -> BoundCheck:
    return BoundCheck(desc, observed, required, observed == required)


def _le(desc: str, observed: int, required: int) -> BoundCheck:
    return BoundCheck(desc, observed, required, observed <= required)


@dataclass(frozen=True)
class LcmConfiguration:
    """Configuration label plus measured counts and evaluated bounds."""

    label: str
    s: int
    q: int
    q_pair: dict = field(compare=False)
    checks: tuple = ()

    @property
    def violations(self):
        return [c for c in self.checks if not c.holds]


def _q_pair_counts(pair: IdealPair, lcms) -> dict:
    layers = build_poset(pair)
    c_masks = [c.mask for c in layers.c_layer]
    out = {}
    for ij, (w, _cls) in lcms.items():
        out[ij] = sum(1 for c in c_masks if c & w.mask == w.mask)
    return out


def classify_lcm_configuration(inst: IdealPair) -> LcmConfiguration:
    """Label the lcm configuration of a 2- or 3-generator instance and check
    the counting bounds provable for that configuration.

    Preconditions: exactly 2 or 3 generators, all of degree d, and every
    element of C is a multiple of some pairwise lcm; otherwise NotApplicable.
    """
    gens = inst.degree_d_gens()
    k = len(gens)
    if k not in (2, 3) or inst.extra_gens():
        raise NotApplicable(f"classifier needs 2 or 3 degree-d generators, got {k}")
    layers = build_poset(inst)
    s, q = layers.s, layers.q
    lcms = lcm_pairs(inst)
    if any(cls is LcmClass.EQUALS_GENERATOR for _, cls in lcms.values()):
        raise NotApplicable("some pairwise lcm equals a generator")
    w_masks = [w.mask for w, _ in lcms.values()]
    for c in layers.c_layer:
        if not any(c.mask & w == w for w in w_masks):
            raise NotApplicable(f"C element {c} avoids every pairwise lcm")
    qp = _q_pair_counts(inst, lcms)

    if k == 2:
        (w, cls) = lcms[(1, 2)]
        label = {
            LcmClass.IN_B: "k2-lcm-in-B",
            LcmClass.IN_C: "k2-lcm-in-C",
            LcmClass.IN_J: "k2-lcm-in-J",
            LcmClass.DEG_TOO_BIG: "k2-lcm-too-big",
        }[cls]
        checks = []
        if cls is LcmClass.IN_B:
            checks.append(_ge("s >= 2q+1", s, 2 * q + 1))
        elif cls is LcmClass.IN_C:
            checks.append(_eq("q = 1", q, 1))
        else:
            checks.append(_eq("q = 0", q, 0))
        return LcmConfiguration(label, s, q, qp, tuple(checks))

    by_class: dict[LcmClass, list] = {}
    for ij, (w, cls) in lcms.items():
        by_class.setdefault(cls, []).append(ij)
    n_b = len(by_class.get(LcmClass.IN_B, ()))
    n_c = len(by_class.get(LcmClass.IN_C, ()))
    w_of = {ij: w for ij, (w, _) in lcms.items()}
    checks: list[BoundCheck] = []

    if n_b == 3:
        masks = {w_of[ij].mask for ij in by_class[LcmClass.IN_B]}
        if len(masks) == 1:
            label = "k3-all-B-equal"
            checks.append(_ge("s >= 3q+1", s, 3 * q + 1))
        else:
            # two equal and one different is impossible for lcms in B
            label = "k3-all-B-distinct"
    elif n_b == 2:
        b_pairs = by_class[LcmClass.IN_B]
        (other_ij,) = [ij for ij in lcms if ij not in b_pairs]
        other_cls = lcms[other_ij][1]
        qb1, qb2 = qp[b_pairs[0]], qp[b_pairs[1]]
        checks.append(_ge("s >= 2q_a+1", s, 2 * qb1 + 1))
        checks.append(_ge("s >= 2q_b+1", s, 2 * qb2 + 1))
        if other_cls is LcmClass.IN_C:
            label = "k3-two-B-one-C"
            checks.append(_eq("q = q_a+q_b-1", q, qb1 + qb2 - 1))
            checks.append(_ge("s >= q+max+2", s, q + max(qb1, qb2) + 2))
            if q > 2:
                checks.append(_ge("s > q+3", s, q + 4))
        elif other_cls is LcmClass.IN_J:
            label = "k3-two-B-one-J"
            checks.append(_eq("q = q_a+q_b", q, qb1 + qb2))
            checks.append(_ge("s >= q+max", s, q + max(qb1, qb2)))
        else:
            # unreachable for valid pairs: two lcms in B force the third
            # to have degree at most d+2
            label = "k3-two-B-one-big"
            checks.append(_eq("q = q_a+q_b", q, qb1 + qb2))
    elif n_b == 1:
        (b_ij,) = by_class[LcmClass.IN_B]
        qb = qp[b_ij]
        others = [ij for ij in lcms if ij != b_ij]
        other_classes = sorted(lcms[ij][1].value for ij in others)
        if all(lcms[ij][1] is LcmClass.IN_C for ij in others):
            if w_of[others[0]].mask == w_of[others[1]].mask:
                label = "k3-one-B-two-C-equal"
                checks.append(_eq("q = q_B", q, qb))
                checks.append(_ge("s >= 2q+1", s, 2 * q + 1))
            else:
                label = "k3-one-B-two-C-distinct"
                checks.append(_eq("q = q_B+2", q, qb + 2))
                checks.append(_ge("s >= 2q", s, 2 * q))
                if q > 2:
                    checks.append(_ge("s >= q+4", s, q + 4))
        elif any(lcms[ij][1] is LcmClass.IN_C for ij in others):
            label = "k3-one-B-one-C-one-" + (
                "J" if LcmClass.IN_J.value in other_classes else "big"
            )
            checks.append(_eq("q = q_B+1", q, qb + 1))
            checks.append(_ge("s >= 2q+1", s, 2 * q + 1))
        else:
            label = "k3-one-B-no-C"
            checks.append(_eq("q = q_B", q, qb))
            checks.append(_ge("s >= 2q+1", s, 2 * q + 1))
    else:
        c_masks = {w_of[ij].mask for ij in by_class.get(LcmClass.IN_C, ())}
        if n_c == 3:
            if len(c_masks) == 3:
                label = "k3-all-C-distinct"
                checks.append(_eq("q = 3", q, 3))
                for ij in lcms:
                    checks.append(_eq(f"q_{ij[0]}{ij[1]} = 1", qp[ij], 1))
                checks.append(_ge("s >= 9", s, 9))
                if inst.d == 2:
                    checks.append(_ge("s >= 12 (disjoint generators)", s, 12))
            else:
                label = "k3-all-C-equal"
                checks.append(_le("q <= 2", q, 2))
        else:
            label = f"k3-no-B-{n_c}C"
            checks.append(_le(f"q <= {len(c_masks)}", q, len(c_masks)))
    return LcmConfiguration(label, s, q, qp, tuple(checks))


# ---------------------------------------------------------------------------
# configuration instance builders


def truncation_pair(n: int, gens: tuple[int, ...], kept_c: tuple[int, ...]) -> IdealPair:
    """Pair with I = (gens), C = exactly kept_c, nothing above degree d+2.

    J is generated by every degree-(d+2) monomial of I outside kept_c plus
    every degree-(d+3) monomial of I not already covered.  All of B survives.
    """
    base = IdealPair.from_masks(n, gens, ())
    d = base.d
    kept = set(kept_c)
    j_gens = [m for m in degree_masks(n, d + 2) if masks_contain(gens, m) and m not in kept]
    j_gens += [
        m
        for m in degree_masks(n, d + 3)
        if masks_contain(gens, m) and not masks_contain(j_gens, m)
    ]
    return IdealPair.from_masks(n, gens, tuple(j_gens))


def _mask_of(vs) -> int:
    return sum(1 << (v - 1) for v in vs)


def _class_pattern(n: int, gens: tuple[int, ...]) -> tuple:
    """(sorted degree list of the pairwise lcms, number of distinct lcms)."""
    ls = [a | b for a, b in itertools.combinations(gens, 2)]
    return tuple(sorted(m.bit_count() for m in ls)), len(set(ls))


def _multiplier_sets(n: int, w_mask: int, banned: set[int]) -> list[int]:
    return [
        w_mask | 1 << t
        for t in range(n)
        if not w_mask >> t & 1 and w_mask | 1 << t not in banned
    ]


def configuration_instances(label: str, count: int):
    """Yield ``count`` instances classifying as ``label``, deterministically.

    Supported labels cover every configuration with an asserted bound plus
    the all-B-distinct shape.  Instances come from exhaustive scans of
    generator triples (or pairs) at growing (d, n) with truncated J.
    """
    produced = 0
    for d, n in _DN_ORDER:
        if produced >= count:
            return
        k = 2 if label.startswith("k2") else 3
        if math.comb(n, d) < k:
            continue
        for gens in itertools.combinations(degree_masks(n, d), k):
            if produced >= count:
                return
            for kept in _kept_choices(label, n, d, gens):
                pair = truncation_pair(n, gens, kept)
                try:
                    conf = classify_lcm_configuration(pair)
                except (NotApplicable, PosetEmpty):
                    continue
                if conf.label != label:
                    continue
                yield pair
                produced += 1
                if produced >= count:
                    return


_DN_ORDER = [
    (1, 3), (2, 3), (1, 4), (2, 4), (3, 4), (1, 5), (2, 5), (3, 5),
    (2, 6), (3, 6), (4, 6), (2, 7), (3, 7), (4, 7), (5, 7),
]


def _kept_choices(label: str, n: int, d: int, gens):
    """Candidate kept-C sets for a generator tuple, per configuration label."""
    ls = {
        (i, j): gens[i - 1] | gens[j - 1]
        for i, j in itertools.combinations(range(1, len(gens) + 1), 2)
    }
    b_ws = sorted({w for w in ls.values() if w.bit_count() == d + 1})
    c_ws = sorted({w for w in ls.values() if w.bit_count() == d + 2})

    if label in ("k2-lcm-in-B", "k3-all-B-equal", "k3-all-B-distinct"):
        if c_ws:
            return
        pool = sorted({m for w in b_ws for m in _multiplier_sets(n, w, set())})
        # small subsets keep the scan bounded; larger C arise at larger n
        for r in range(min(len(pool), 3) + 1):
            for kept in itertools.combinations(pool, r):
                yield kept
    elif label in ("k2-lcm-in-C", "k3-all-C-distinct", "k3-all-C-equal"):
        if b_ws:
            return
        yield tuple(c_ws)
    elif label == "k2-lcm-in-J":
        if b_ws or not c_ws:
            return
        yield ()
    elif label in ("k3-two-B-one-C", "k3-two-B-one-J"):
        if len(b_ws) != 2 or len(c_ws) != 1:
            return
        banned = set(c_ws)
        pool = sorted({m for w in b_ws for m in _multiplier_sets(n, w, banned)})
        base = tuple(c_ws) if label.endswith("C") else ()
        for r in range(min(len(pool), 2) + 1):
            for kept in itertools.combinations(pool, r):
                yield base + kept
    elif label.startswith("k3-one-B-two-C") or label.startswith("k3-one-B-one-C"):
        if len(b_ws) != 1:
            return
        c_set = [w for w in set(ls.values()) if w.bit_count() == d + 2]
        if label == "k3-one-B-two-C-equal" and len(c_set) != 1:
            return
        if label != "k3-one-B-two-C-equal" and len(c_set) != 2:
            return
        banned = set(c_ws)
        pool = _multiplier_sets(n, b_ws[0], banned)
        if label == "k3-one-B-one-C-one-J":
            c_kept = (min(c_ws),)
        else:
            c_kept = tuple(sorted(set(c_ws)))
        for r in range(min(len(pool), 2) + 1):
            for kept in itertools.combinations(pool, r):
                yield c_kept + kept
    elif label == "k3-one-B-no-C":
        if len(b_ws) != 1 or not c_ws:
            return
        pool = _multiplier_sets(n, b_ws[0], set(c_ws))
        for r in range(min(len(pool), 2) + 1):
            for kept in itertools.combinations(pool, r):
                yield kept
    else:
        raise ValueError(f"no builder for configuration {label!r}")


# ---------------------------------------------------------------------------
# h-maps and paths


@dataclass
class HMap:
    """Assignment b' -> c_{b'} read off a normalized partition of I_b/J_b."""

    b: Monomial
    assignments: dict

    @property
    def image(self):
        return sorted({c for c in self.assignments.values()}, key=lambda m: m.sort_key())


@dataclass(frozen=True)
class PathReport:
    """A divisor path through an h-map.

    ``is_bad``: the final image is a multiple of the removed element b.
    ``is_maximal``: the path cannot be extended (final image in (b), or all
    its B-divisors are used up or equal b).
    """

    path: tuple
    is_bad: bool
    is_maximal: bool


def removal_pair(inst: IdealPair, b: Monomial) -> IdealPair | None:
    """The derived pair I_b/J_b for b in B: I_b = (B \\ {b}), J_b = J cap I_b."""
    layers = build_poset(inst)
    rest = [m.mask for m in layers.b_layer if m.mask != b.mask]
    if not rest:
        return None
    jb = intersect_masks(inst.j_masks, tuple(rest))
    return IdealPair.from_masks(inst.n, tuple(rest), tuple(jb))


def extract_h_map(inst: IdealPair, b: Monomial, part) -> HMap:
    """Read h: B\\{b} -> C off a normalized sdepth-(d+2) partition of I_b/J_b.

    Every element of B\\{b} must head an interval ending in degree d+2;
    injectivity and image size s-1 <= q are asserted.
    """
    layers = build_poset(inst)
    rest = [m for m in layers.b_layer if m.mask != b.mask]
    if not rest:
        return HMap(b, {})
    by_lo = {iv.lo.mask: iv for iv in part.intervals}
    assignments = {}
    for bp in rest:
        iv = by_lo.get(bp.mask)
        if iv is None:
            raise NotNormalized(f"{bp} does not head an interval")
        if iv.hi.degree != inst.d + 2:
            raise NotNormalized(f"interval at {bp} ends at degree {iv.hi.degree}")
        assert inst.contains(iv.hi), "interval tops stay inside the original module"
        assignments[bp] = iv.hi
    image = {c.mask for c in assignments.values()}
    assert len(image) == len(assignments), "interval tops must be distinct"
    assert len(image) <= layers.q, "image cannot exceed |C|"
    return HMap(b, assignments)


def h_map_via_solver(inst: IdealPair, b: Monomial, budget: int = 10_000_000):
    """Build I_b/J_b, search a partition with tops at degree d+2, extract h.

    Returns None when no such partition exists (then s-1 > q or the layer
    structure obstructs; the pigeonhole direction is checked by callers).
    """
    sub = removal_pair(inst, b)
    if sub is None:
        return HMap(b, {})
    if inst.d + 2 > inst.n:
        return None
    part = sdepth_decision(sub, inst.d + 2, budget=budget)
    if part is None:
        return None
    return extract_h_map(inst, b, part)


def find_maximal_bad_paths(inst: IdealPair, h: HMap, max_reports: int = 100_000):
    """All maximal divisor paths through h, bad ones flagged, DFS order."""
    if not h.assignments:
        return []
    b_mask = h.b.mask
    starts = sorted(h.assignments, key=lambda m: m.sort_key())
    reports: list[PathReport] = []

    def dfs(path: list[Monomial], used: set[int]):
        if len(reports) >= max_reports:
            raise RuntimeError("path explosion; raise max_reports to continue")
        tail_image = h.assignments[path[-1]]
        if tail_image.mask & b_mask == b_mask:
            reports.append(PathReport(tuple(path), True, True))
            return
        extensions = [
            a
            for a in starts
            if a.mask not in used and tail_image.mask & a.mask == a.mask
        ]
        if not extensions:
            reports.append(PathReport(tuple(path), False, True))
            return
        for a in extensions:
            path.append(a)
            used.add(a.mask)
            dfs(path, used)
            used.discard(a.mask)
            path.pop()

    for a1 in starts:
        dfs([a1], {a1.mask})
    return reports


# ---------------------------------------------------------------------------
# counterexample hunting


def _instance_dict(pair: IdealPair) -> dict:
    return {
        "n": pair.n,
        "I": [list(m.variables) for m in pair.gens_i],
        "J": [list(m.variables) for m in pair.gens_j],
    }


def _failure_record(result: CheckResult) -> dict:
    inst = result.instance
    record = {"instance": _instance_dict(inst), "details": {}}
    det = result.details
    if "sdepth" in det:
        record["details"]["sdepth"] = det["sdepth"]
        res = sdepth_exact(inst)
        record["details"]["certificate"] = [
            [str(iv.lo), str(iv.hi)] for iv in res.certificate.intervals
        ]
    if "depths" in det:
        record["details"]["depths"] = {str(c): v for c, v in det["depths"].items()}
    return record


def hunt_counterexamples(
    fam: InstanceFamily,
    check: str,
    fields=DEFAULT_FIELDS,
    limit: int | None = None,
    seed: int = 0,
    timing: bool = False,
) -> dict:
    """Run a statement check over a family; return a reproducible report.

    ``check`` is "floor", "step" or "step-open".  Failures carry the full
    instance and certificates.  For "floor" and "step" any failure is an
    implementation bug; for "step-open" failures are genuine findings.
    """
    if check not in _CHECKS:
        raise ValueError(f"unknown check {check!r}")
    fn = _CHECKS[check]
    t0 = time.monotonic()
    if fam.j_policy == "random":
        stream = sample_instances(fam, limit if limit is not None else 1000, seed)
    else:
        stream = enumerate_instances(fam)
        if limit is not None:
            stream = itertools.islice(stream, limit)
    counts = {"pass": 0, "fail": 0, "skip": 0}
    failures = []
    for inst in stream:
        try:
            result = fn(inst, fields)
        except HypothesisMismatch:
            counts["skip"] += 1
            continue
        counts[result.status] += 1
        if result.status == "fail":
            failures.append(_failure_record(result))
    return {
        "family": {
            "n": fam.n,
            "d": fam.d,
            "k": fam.k,
            "with_e": fam.with_e,
            "j_policy": fam.j_policy,
            "symmetry_reduction": fam.symmetry_reduction,
        },
        "check": check,
        "fields": [str(f) for f in fields],
        "counts": counts,
        "failures": failures,
        "seed": seed,
        "elapsed_ms": int((time.monotonic() - t0) * 1000) if timing else None,
    }


# ---------------------------------------------------------------------------
# short exact sequence splits


def split_modules(pair: IdealPair, subset_masks: tuple[int, ...]):
    """The two side modules of 0 -> I'/J' -> I/J -> I/(J+I') -> 0.

    ``subset_masks`` generate I' <= I with J' = J cap I'.  Returns
    (left, right) as pairs, either possibly None when the corresponding
    module vanishes.
    """
    if not subset_masks:
        raise ValueError("subset must be nonempty")
    left = subquotient_pair(pair.n, subset_masks, pair.j_masks)
    right = subquotient_pair(pair.n, pair.i_masks, sum_masks(pair.j_masks, subset_masks))
    return left, right
