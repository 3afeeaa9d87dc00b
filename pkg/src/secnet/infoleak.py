"""Information measures on exact joint distributions.

Probabilities stay rational until the final logarithm. Entropies are floats;
compare them with a tolerance of about 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .dist import JointDist

TOL = 1e-9

Vars = str | Iterable[str]


@dataclass(frozen=True)
class Measure:
    """A computed quantity with its logarithm base.

    Attributes:
        value: The number itself (float; exact quantities are converted).
        base: Logarithm base, 2, e or q; 0 for log-free quantities.
        exact: Rational value when no logarithm was involved.
    """

    value: float
    base: float
    exact: Fraction | None = None

    def __float__(self) -> float:
        return self.value


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def _entropy_of(pmf: Mapping[tuple, Fraction], base: float) -> float:
    h = 0.0
    for p in pmf.values():
        if p > 0:  # 0·log 0 = 0
            h -= float(p) * _log(float(p), base)
    return h


def _names(v: Vars) -> tuple[str, ...]:
    return (v,) if isinstance(v, str) else tuple(v)


def entropy(dist: JointDist, names: Vars, base: float = 2) -> Measure:
    return Measure(_entropy_of(dist.marginal(_names(names)), base), base)


def cond_entropy(dist: JointDist, target: Vars, given: Vars, base: float = 2) -> Measure:
    """H(target | given) = H(target, given) − H(given)."""
    t, g = _names(target), _names(given)
    return Measure(
        _entropy_of(dist.marginal(t + g), base) - _entropy_of(dist.marginal(g), base), base
    )


def mutual_info(dist: JointDist, a: Vars, b: Vars, base: float = 2) -> Measure:
    """I(A;B) = H(A) + H(B) − H(A,B).

    Args:
        dist: Joint distribution.
        a, b: Variable name or names for each side.
        base: Logarithm base (2 for bits).
    """
    na, nb = _names(a), _names(b)
    v = (
        _entropy_of(dist.marginal(na), base)
        + _entropy_of(dist.marginal(nb), base)
        - _entropy_of(dist.marginal(na + nb), base)
    )
    # clamp float noise around zero; the quantity is nonnegative
    if -TOL < v < 0:
        v = 0.0
    return Measure(v, base)


def l1_security(dist: JointDist, secret: Vars, observed: Vars, secret_size: int | None = None) -> Measure:
    """d1(X|Y) = Σ_y Σ_x |P_Y(y)/|X| − P_XY(x, y)|, exactly.

    Args:
        dist: Joint distribution.
        secret: Secret variable(s) X.
        observed: Observed variable(s) Y.
        secret_size: |X|; defaults to the size of X's support.
    """
    ns, no = _names(secret), _names(observed)
    pxy = dist.marginal(ns + no)
    py = dist.marginal(no)
    xs = sorted({k[:len(ns)] for k in pxy})
    size = secret_size or len(xs)
    if size < len(xs):
        raise ValueError("secret_size is smaller than the secret's support")
    total = Fraction(0)
    for y, p_y in py.items():
        for x in xs:
            total += abs(p_y / size - pxy.get(x + y, Fraction(0)))
        # secret values outside the support each contribute P_Y(y)/|X|
        total += (size - len(xs)) * p_y / size
    return Measure(float(total), 0, total)


def _check_s(s: float):
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s}")


def renyi_cond(dist: JointDist, x: Vars, z: Vars, s: float, base: float = 2) -> Measure:
    """H_{1+s}(X|Z) = −(1/s)·log Σ_z P_Z(z) Σ_x P(x|z)^{1+s}."""
    _check_s(s)
    nx, nz = _names(x), _names(z)
    cond = dist.conditional(nz, nx)
    pz = dist.marginal(nz)
    acc = 0.0
    for zv, row in cond.items():
        acc += float(pz[zv]) * sum(float(p) ** (1 + s) for p in row.values())
    return Measure(-_log(acc, base) / s, base)


def leakage_bound(y_size: int, h: float, s: float, base: float = 2) -> Measure:
    """Right-hand side e^{s·log|Y| − H_{1+s}}/s with logs in ``base``.

    The exponential is taken in the same base as ``h`` so the bound is
    base**(s·log_base|Y| − h) / s.
    """
    _check_s(s)
    return Measure(base ** (s * _log(y_size, base) - h) / s, base)


def renyi_lower_bound_holds(dist: JointDist, x: Vars, z: Vars, s: float, base: float = 2,
                            tol: float = TOL) -> bool:
    """Check H_{1+s}(X|Z) ≥ log(|X|/|Z|) for a uniform X."""
    hx = renyi_cond(dist, x, z, s, base).value
    nx = len(dist.marginal(_names(x)))
    nz = len(dist.marginal(_names(z)))
    return hx >= _log(nx / nz, base) - tol
