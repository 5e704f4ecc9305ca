"""pmcong: exact desk-scale verifier for transfer congruences between
abelian pseudomeasure approximations.

The package checks, with exact rational/cyclotomic arithmetic at finite
abelian levels, that the transfer of the base pseudomeasure approximation
agrees with the extension-field approximation modulo the trace ideal, along
with the zeta-value, q-expansion, and group-algebra identities feeding that
congruence.
"""

__version__ = "0.1.0"
