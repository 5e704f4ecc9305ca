"""S-truncated partial zeta values at negative integers, Δ-operators, and the
summed-integrality test.

Base side (classes x of (Z/f)^×): the partial zeta value is the Hurwitz sum

    ζ_S(1−k, δ^(x)) = −f^(k−1) · B_k(a/f) / k,   a ∈ [1, f], a ≡ x (mod f),

valid because every prime of S divides f, so the congruence class already
encodes coprimality to S.  A second, independent route assembles the same
value from character orthogonality and L-values; the two must agree exactly.

Extension side (classes y of the index-p subgroup H): ideals of L enter only
through their norms, so the partial zeta value is assembled by Artin
induction at the finite level:

    ζ_{L,S}(1−k, δ^(y)) = |G|^{−1} · Σ_{ψ ∈ Ĝ} ψ(y)^{−1} · Π(ψ),

where Π(ψ) is the product of L_S(1−k, ·) over the p characters of G that
share the restriction ψ|_H.  The cyclotomic result is asserted rational;
NotRational propagating out of here signals broken character bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CyclotomicNumber, cyclo_reduce_rational
from .dirichlet import DirichletCharacter, characters_of, l_value_neg
from .exact import PValuation, Rational, bernoulli_poly_at, p_valuation
from .levels import L_SIDE, Q_SIDE, FrobeniusChoice, LevelData, LocallyConstantFn
from .units import factorize, unit_group

__all__ = [
    "HypothesisViolated",
    "delta_of",
    "delta_sum_integrality",
    "delta_table",
    "norm_residue",
    "partial_zeta",
    "partial_zeta_q_characters",
    "scaled_zeta_of",
    "zeta_of",
]


class HypothesisViolated(ValueError):
    """The twisted-sum precondition of the integrality test fails."""


@lru_cache(maxsize=None)
def _l_value(modulus: int, exponents: tuple[int, ...], k: int, s_primes: tuple[int, ...]):
    chi = DirichletCharacter(unit_group(modulus), exponents)
    return l_value_neg(chi, k, s_primes)


@lru_cache(maxsize=None)
def _q_table(level: LevelData, k: int) -> dict[int, Fraction]:
    f = level.modulus
    table = {}
    for cls in level.classes(Q_SIDE):
        a = cls if cls >= 1 else f
        table[cls] = -(Fraction(f) ** (k - 1)) * bernoulli_poly_at(k, Fraction(a, f)) / k
    return table


def _removal_primes(level: LevelData) -> tuple[int, ...]:
    # classes are coprime to the modulus, so the character decomposition of a
    # one-class sum needs the Euler factor of every prime dividing the level
    # removed, along with the S-primes (for imprimitive characters these are
    # the level-imprimitivity factors; l_value_neg skips conductor primes)
    return tuple(sorted(set(level.s_primes) | set(factorize(level.modulus))))


@lru_cache(maxsize=None)
def _q_table_characters(level: LevelData, k: int) -> dict[int, Fraction]:
    """Independent route: character orthogonality on the full class group."""
    f = level.modulus
    s = _removal_primes(level)
    chars = characters_of(f)
    order = chars[0].ambient_order
    lvals = [_l_value(f, chi.exponents, k, s) for chi in chars]
    table = {}
    for cls in level.classes(Q_SIDE):
        acc = CyclotomicNumber.zero(order)
        for chi, lv in zip(chars, lvals):
            acc = acc + lv.mul_root(-chi.exponent_at(cls))
        table[cls] = cyclo_reduce_rational(acc) / len(chars)
    return table


@lru_cache(maxsize=None)
def _l_table(level: LevelData, k: int) -> dict[int, Fraction]:
    if level.field is None:
        raise ValueError("extension-side values need a level with field data")
    f = level.modulus
    s = _removal_primes(level)
    chars = characters_of(f)
    order = chars[0].ambient_order
    h = level.h_classes

    fibers: dict[tuple[int, ...], list[DirichletCharacter]] = {}
    for chi in chars:
        restriction = tuple(chi.exponent_at(y) for y in h)
        fibers.setdefault(restriction, []).append(chi)
    expected = len(chars) // len(h) if len(h) < len(chars) else 1
    assert all(len(members) == max(expected, 1) for members in fibers.values())

    fiber_product: dict[tuple[int, ...], CyclotomicNumber] = {}
    for restriction, members in fibers.items():
        prod = CyclotomicNumber.one(order)
        for psi in members:
            prod = prod * _l_value(f, psi.exponents, k, s)
        fiber_product[restriction] = prod

    table = {}
    for y in h:
        acc = CyclotomicNumber.zero(order)
        for restriction, members in fibers.items():
            # every member shares ψ(y) for y ∈ H; weight once per member
            root = CyclotomicNumber.root(order, -members[0].exponent_at(y))
            acc = acc + (fiber_product[restriction] * root).scale(len(members))
        table[y] = cyclo_reduce_rational(acc) / len(chars)
    return table


def partial_zeta(level: LevelData, side: str, cls: int, k: int) -> Fraction:
    """ζ_S(1−k, δ^(cls)) on the requested side."""
    if k < 1:
        raise ValueError("k must be ≥ 1")
    if side == Q_SIDE:
        return _q_table(level, k)[cls % level.modulus]
    return _l_table(level, k)[cls % level.modulus]


def partial_zeta_q_characters(level: LevelData, cls: int, k: int) -> Fraction:
    """Dual-route base-side value (cross-check against the Hurwitz route)."""
    return _q_table_characters(level, k)[cls % level.modulus]


def zeta_of(level: LevelData, side: str, eps: LocallyConstantFn, k: int) -> Fraction:
    """Linear extension of partial_zeta to a locally constant function."""
    if eps.level != level or eps.side != side:
        raise ValueError("function does not live on the requested level/side")
    table = _q_table(level, k) if side == Q_SIDE else _l_table(level, k)
    return sum((eps.values[x] * table[x] for x in level.classes(side)), Fraction(0))


def scaled_zeta_of(level: LevelData, side: str, eps: LocallyConstantFn, k: int) -> Fraction:
    """Archimedean normalization 2^{−r}: r = 1 on the base, p on the extension."""
    r = 1 if side == Q_SIDE else level.p
    return zeta_of(level, side, eps, k) / 2**r


def delta_of(
    level: LevelData, side: str, g: FrobeniusChoice, eps: LocallyConstantFn, k: int
) -> Fraction:
    """Δ_g(1−k, ε) = ζ(1−k, ε) − n^k · ζ(1−k, ε_g), with ε_g(x) = ε(g·x)."""
    if side == L_SIDE and not level.in_h(g.cls):
        raise ValueError("extension-side Δ needs a pick inside the subgroup")
    shifted = eps.shift(g.cls)
    return zeta_of(level, side, eps, k) - g.n**k * zeta_of(level, side, shifted, k)


def delta_table(
    level: LevelData, side: str, g: FrobeniusChoice, k: int
) -> dict[int, Fraction]:
    """Δ_g(1−k, δ^(x)) for every class x of the side.

    Shifting the indicator moves its support: (δ^(x))_g = δ^(g⁻¹x), so each
    entry needs just two partial zeta values.
    """
    f = level.modulus
    table = _q_table(level, k) if side == Q_SIDE else _l_table(level, k)
    g_inv = pow(g.cls, -1, f) if f > 1 else 0
    out = {}
    for x in level.classes(side):
        out[x] = table[x] - g.n**k * table[(g_inv * x) % f]
    return out


def norm_residue(level: LevelData, cls: int) -> int:
    """Finite-level cyclotomic-character value: the class mod p^a, in [1, p^a]."""
    mod = level.norm_exponent_modulus()
    r = cls % mod
    return r if r else mod


def delta_sum_integrality(
    level: LevelData,
    side: str,
    g: FrobeniusChoice,
    eps_by_k: dict[int, LocallyConstantFn],
) -> PValuation:
    """Valuation of Σ_k Δ_g(1−k, ε_k) under the twisted-sum hypothesis.

    Hypothesis checked per class x: v_p(Σ_k ε_k(x)·ñ(x)^(k−1)) ≥ 0, with ñ(x)
    the norm residue mod p^a.  Using the finite residue in place of the full
    norm is sound only when no ε_k has a denominator worse than p^a — the
    residue then determines the sum's integrality — so v_p(ε_k) ≥ −a is part
    of the check.  Violations raise instead of returning a misleading verdict.
    """
    p = level.p
    a = level.a
    for k, eps in eps_by_k.items():
        if k < 1:
            raise ValueError("k must be ≥ 1")
        if eps.min_p_valuation() < -a:
            raise HypothesisViolated(
                f"ε_{k} has a denominator beyond p^{a}; the finite level cannot "
                "certify the twisted-sum hypothesis"
            )
    for x in level.classes(side):
        n_tilde = norm_residue(level, x)
        twisted = sum(
            (eps.values[x] * n_tilde ** (k - 1) for k, eps in eps_by_k.items()),
            Fraction(0),
        )
        if p_valuation(twisted, p) < 0:
            raise HypothesisViolated(f"twisted sum at class {x} is not p-integral")
    total = sum(
        (delta_of(level, side, g, eps, k) for k, eps in eps_by_k.items()),
        Fraction(0),
    )
    return p_valuation(total, p)
