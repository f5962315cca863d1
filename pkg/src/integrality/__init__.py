"""Diophantine definitions of valuation rings over global fields.

For ``k = F_q(t)`` (``q`` odd) or ``k = Q`` and a finite prime ``P`` of ``k``,
the package builds an explicit existential definition of
``{x in k : ord_P(x) >= 0}`` out of a quaternion algebra ramified at two
primes, decides membership through that definition with a local-global
engine, and does the same for the perfect closure of ``F_q(t)``.
"""

__version__ = "0.1.0"
