"""Finite abelian levels, locally constant functions on them, and Frobenius picks.

A level models one layer of the admissible tower: the base-side class group
G = (Z/f)^× together with the index-p subgroup H cut out by the degree-p
field L (classes whose reduction mod f_L is a p-th power).  Two tiers exist:

* scenario levels enforce the full running hypotheses — S exactly the prime
  support of f, p ∈ S, f_L ∈ S, modulus f = p^a · ∏_{q ∈ S∖{p}} q with a ≥ 1 —
  so that congruence-class membership mod f already encodes coprimality to S
  and the depth invariant m = a holds;
* zeta levels only require S ⊆ primes(f) (and f_L | f when the extension side
  is used) and exist for oracle computations at bare moduli such as f = f_L.

Functions on a level are stored as complete value tables over the classes of
one side, with evenness (invariance under the class of −1) and p-integrality
checked once at construction.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .exact import Rational, p_valuation
from .numberfield import AbelianFieldSpec, IdealFactored, artin_symbol, field_spec
from .units import factorize, is_prime, unit_group

__all__ = [
    "FrobeniusChoice",
    "LevelData",
    "LocallyConstantFn",
    "even_orbit_indicators",
    "scenario_level",
    "zeta_level",
]

Q_SIDE = "Q"
L_SIDE = "L"


class LevelData:
    """One finite level: modulus, S, both class groups, and the field data."""

    def __init__(
        self,
        p: int,
        field: AbelianFieldSpec | None,
        modulus: int,
        s_primes: frozenset[int],
        a: int,
        scenario: bool,
    ):
        self.p = p
        self.field = field
        self.modulus = modulus
        self.s_primes = frozenset(s_primes)
        self.a = a
        self.scenario = scenario
        self.group = unit_group(modulus)
        if field is not None:
            h = tuple(
                x for x in self.group.elements if field.coset_of[x % field.conductor] == 0
            )
        else:
            h = self.group.elements
        self.h_classes = h
        self._h_set = frozenset(h)

    # -- class bookkeeping -----------------------------------------------------
    def classes(self, side: str) -> tuple[int, ...]:
        return self.group.elements if side == Q_SIDE else self.h_classes

    def class_of(self, n: int) -> int:
        cls = n % self.modulus
        if self.modulus > 1 and gcd(cls, self.modulus) != 1:
            raise ValueError(f"{n} is not a unit mod {self.modulus}")
        return cls

    def in_h(self, cls: int) -> bool:
        return cls in self._h_set

    def neg_class(self, cls: int) -> int:
        return (-cls) % self.modulus

    def transfer_class(self, cls: int) -> int:
        """ver on classes: the p-th power map into the index-p subgroup."""
        out = pow(cls, self.p, self.modulus)
        assert self.field is None or self.in_h(out)
        return out

    def norm_exponent_modulus(self) -> int:
        if not self.scenario:
            raise ValueError("norm residues require a scenario level")
        return self.p**self.a

    # -- identity-ish plumbing ---------------------------------------------------
    def key(self) -> tuple:
        return (
            self.p,
            None if self.field is None else self.field.conductor,
            self.modulus,
            tuple(sorted(self.s_primes)),
            self.a,
            self.scenario,
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LevelData) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"LevelData(p={self.p}, modulus={self.modulus}, "
            f"S={sorted(self.s_primes)}, a={self.a}, scenario={self.scenario})"
        )


@lru_cache(maxsize=None)
def scenario_level(p: int, conductor: int, s_primes: tuple[int, ...], a: int) -> LevelData:
    """Full-hypothesis level with modulus p^a · ∏_{q ∈ S, q ≠ p} q."""
    s = frozenset(s_primes)
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if p not in s:
        raise ValueError("S must contain p")
    if conductor not in s:
        raise ValueError("S must contain the ramified prime (the conductor of L)")
    if not all(is_prime(q) for q in s):
        raise ValueError("S must consist of primes")
    if a < 1:
        raise ValueError("p-exponent a must be ≥ 1")
    field = field_spec(p, conductor)
    modulus = p**a
    for q in sorted(s - {p}):
        modulus *= q
    return LevelData(p, field, modulus, s, a, scenario=True)


@lru_cache(maxsize=None)
def zeta_level(
    modulus: int,
    s_primes: tuple[int, ...],
    p: int | None = None,
    conductor: int | None = None,
) -> LevelData:
    """Relaxed level for bare zeta computations (oracles and spot values)."""
    s = frozenset(s_primes)
    if modulus < 1:
        raise ValueError("modulus must be ≥ 1")
    if any(modulus % q for q in s):
        raise ValueError("every S-prime must divide the modulus")
    field = None
    if conductor is not None:
        if p is None:
            raise ValueError("a field side needs the degree p")
        field = field_spec(p, conductor)
        if modulus % conductor:
            raise ValueError("the field conductor must divide the modulus")
    return LevelData(p if p is not None else 0, field, modulus, s, a=0, scenario=False)


class LocallyConstantFn:
    """A function on one side's classes, with evenness/integrality flags."""

    __slots__ = ("level", "side", "values", "even", "p_integral")

    def __init__(self, level: LevelData, side: str, values: dict[int, Fraction]):
        if side not in (Q_SIDE, L_SIDE):
            raise ValueError("side must be 'Q' or 'L'")
        domain = level.classes(side)
        if set(values) != set(domain):
            raise ValueError("value table must cover the side's classes exactly")
        self.level = level
        self.side = side
        self.values = {x: Fraction(values[x]) for x in domain}
        self.even = all(
            self.values[x] == self.values[level.neg_class(x)] for x in domain
        )
        p = level.p
        self.p_integral = p == 0 or all(
            v.denominator % p != 0 for v in self.values.values()
        )

    # -- constructors -----------------------------------------------------------
    @staticmethod
    def delta_fn(level: LevelData, side: str, cls: int) -> "LocallyConstantFn":
        base = cls % level.modulus
        if base not in level.classes(side):
            raise ValueError(f"{cls} is not a class of side {side}")
        return LocallyConstantFn(
            level, side, {x: Fraction(int(x == base)) for x in level.classes(side)}
        )

    @staticmethod
    def constant_fn(level: LevelData, side: str, value) -> "LocallyConstantFn":
        v = Fraction(value)
        return LocallyConstantFn(level, side, {x: v for x in level.classes(side)})

    @staticmethod
    def from_table(level: LevelData, side: str, table: dict[int, object]) -> "LocallyConstantFn":
        return LocallyConstantFn(
            level, side, {int(k): Fraction(v) for k, v in table.items()}
        )

    # -- evaluation and operators -------------------------------------------------
    def __call__(self, cls: int) -> Fraction:
        return self.values[cls % self.level.modulus]

    def shift(self, g_cls: int) -> "LocallyConstantFn":
        """ε_g with ε_g(x) = ε(g·x)."""
        f = self.level.modulus
        return LocallyConstantFn(
            self.level,
            self.side,
            {x: self.values[(g_cls * x) % f] for x in self.values},
        )

    def compose_transfer(self) -> "LocallyConstantFn":
        """ε_L∘ver on the full group: x ↦ ε_L(x^p)."""
        if self.side != L_SIDE:
            raise ValueError("only extension-side functions compose with the transfer")
        level = self.level
        return LocallyConstantFn(
            level,
            Q_SIDE,
            {x: self.values[level.transfer_class(x)] for x in level.classes(Q_SIDE)},
        )

    def scale(self, factor) -> "LocallyConstantFn":
        c = Fraction(factor)
        return LocallyConstantFn(
            self.level, self.side, {x: v * c for x, v in self.values.items()}
        )

    def __add__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        if self.level != other.level or self.side != other.side:
            raise ValueError("mismatched function domains")
        return LocallyConstantFn(
            self.level,
            self.side,
            {x: v + other.values[x] for x, v in self.values.items()},
        )

    def __sub__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def min_p_valuation(self):
        p = self.level.p
        if p == 0:
            return None
        return min(p_valuation(v, p) for v in self.values.values())

    def __repr__(self) -> str:
        support = sum(1 for v in self.values.values() if v)
        return (
            f"LocallyConstantFn(side={self.side}, support={support}, "
            f"even={self.even}, p_integral={self.p_integral})"
        )


def even_orbit_indicators(level: LevelData, side: str) -> tuple[LocallyConstantFn, ...]:
    """Indicator functions of the {x, −x} orbits, in ascending representative order."""
    seen = set()
    out = []
    for x in level.classes(side):
        if x in seen:
            continue
        orbit = {x, level.neg_class(x)}
        seen |= orbit
        out.append(
            LocallyConstantFn(
                level,
                side,
                {y: Fraction(int(y in orbit)) for y in level.classes(side)},
            )
        )
    return tuple(out)


class FrobeniusChoice:
    """A Frobenius pick: the symbol of a positive integer n, with norm value n."""

    __slots__ = ("level", "n", "cls")

    def __init__(self, level: LevelData, n: int):
        if n < 1:
            raise ValueError("the norm value must be a positive integer")
        self.level = level
        self.n = n
        self.cls = level.class_of(n)

    @staticmethod
    def from_ideal(level: LevelData, ideal: IdealFactored) -> "FrobeniusChoice":
        """Extension-side pick: symbol and norm of an ideal coprime to the level."""
        return FrobeniusChoice(level, ideal.norm())

    def transfer(self) -> "FrobeniusChoice":
        """The image pick under ver: class cls^p with norm n^p."""
        return FrobeniusChoice(self.level, self.n**self.level.p)

    def __repr__(self) -> str:
        return f"FrobeniusChoice(n={self.n}, cls={self.cls})"


def assert_norm_compatibility(level: LevelData, ideal: IdealFactored) -> None:
    """Guard: the symbol of an ideal is the class of its norm (used in tests)."""
    assert artin_symbol(ideal, level.modulus) == level.class_of(ideal.norm())
