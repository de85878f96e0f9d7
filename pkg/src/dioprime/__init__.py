"""Numerical companion to a sieve-and-circle-method theorem on prime triples
``p1, p2, p3`` with ``|l1 p1 + l2 p2 + l3 p3 + eta|`` small and every
``p_i + 2`` an almost-prime.

Modules, bottom-up: ``ntheory`` (primes and arithmetic functions),
``approx`` (continued fractions), ``params`` (the derived parameter chain),
``rosser`` (sieve weights), ``mollifier`` (the smoothed indicator),
``expsum`` (exponential sums and circle-method integrals), ``hunt``
(explicit triple search) and ``cli``.
"""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, OutOfRangeError, ResourceError
from .mollifier import Mollifier
from .ntheory import PrimeTable, sieve_primes
from .params import ParamSet, derive_params
from .rosser import WeightTable, build_weights

__all__ = [
    "ConfigError",
    "DomainError",
    "Mollifier",
    "OutOfRangeError",
    "ParamSet",
    "PrimeTable",
    "ResourceError",
    "WeightTable",
    "build_weights",
    "derive_params",
    "sieve_primes",
]
