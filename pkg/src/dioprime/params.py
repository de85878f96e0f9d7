"""The derived parameter chain for a fixed convergent denominator ``q0``.

Every logarithm is natural.  Only ``q0``, ``delta``, ``s``, ``lambda0`` and
``k`` are free; the rest follows:

    X = q0**(12/5)          tau = X**(-5/6) * ln X       vartheta = X**(-1/12 + delta)
    H = (ln X)**2 / vartheta   D = X**(47/450 - eps0)    beta = (47/450 - eps0) / s
    z = X**beta                h = floor(1/beta)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError

EPS0 = 0.001
LEVEL_EXPONENT = 47 / 450 - EPS0
BETA_CEILING = 1 / 30
DEFAULT_S = 2.948
DEFAULT_DELTA = 0.05
DEFAULT_LAMBDA0 = 0.5
DEFAULT_K = 10
H_BUDGET = 1e8


@dataclass(frozen=True)
class ParamSet:
    q0: int
    delta: float
    s: float
    lambda0: float
    k: int
    eps0: float
    X: float
    tau: float
    vartheta: float
    H: float
    beta: float
    z: float
    D: float
    h: int

    @property
    def s_check(self) -> float:
        """``ln D / ln z`` recomputed from the derived levels."""
        return math.log(self.D) / math.log(self.z)

    @property
    def beta_below_ceiling(self) -> bool:
        """Whether ``beta < 1/30``.

        False for every ``s`` in [2, 3]: the level exponent over 30 is about
        3.103, so the ceiling is only met for ``s > 3.103``.
        """
        return self.beta < BETA_CEILING

    def as_dict(self) -> dict:
        return asdict(self)


def sieve_exponent(s: float) -> float:
    """``beta = (47/450 - eps0) / s``."""
    return LEVEL_EXPONENT / s


def derive_params(
    q0: int,
    delta: float = DEFAULT_DELTA,
    s: float = DEFAULT_S,
    lambda0: float = DEFAULT_LAMBDA0,
    k: int = DEFAULT_K,
) -> ParamSet:
    if int(q0) != q0 or q0 < 2:
        raise DomainError("q0 must be an integer >= 2")
    if not 0 < delta < 1 / 12:
        raise DomainError("delta must lie in (0, 1/12)")
    if not 2 <= s <= 3:
        raise DomainError("s must lie in [2, 3]")
    if not 0 < lambda0 < 1:
        raise DomainError("lambda0 must lie in (0, 1)")
    if int(k) != k or k < 2:
        raise DomainError("k must be an integer >= 2")
    q0 = int(q0)
    X = float(q0) ** (12 / 5)
    logX = math.log(X)
    vartheta = X ** (-1 / 12 + delta)
    beta = sieve_exponent(s)
    return ParamSet(
        q0=q0,
        delta=float(delta),
        s=float(s),
        lambda0=float(lambda0),
        k=int(k),
        eps0=EPS0,
        X=X,
        tau=X ** (-5 / 6) * logX,
        vartheta=vartheta,
        H=logX**2 / vartheta,
        beta=beta,
        z=X**beta,
        D=X**LEVEL_EXPONENT,
        h=math.floor(1 / beta),
    )


def validate_scale(p: ParamSet, h_budget: float = H_BUDGET) -> list[str]:
    """Warnings for the distortions that appear when X is small."""
    warnings = []
    if p.z < 3:
        warnings.append(f"z < 3: sieve trivial (z = {p.z:.4g}, P(z) = 1)")
    if p.D < 3:
        warnings.append(f"D < 3: weights trivial (D = {p.D:.4g})")
    if p.vartheta >= 1:
        warnings.append(f"vartheta >= 1 (vartheta = {p.vartheta:.4g})")
    if p.H > h_budget:
        warnings.append(f"H = {p.H:.4g} beyond quadrature budget {h_budget:.4g}")
    return warnings
