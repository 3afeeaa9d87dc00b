"""Exact finite joint distributions with named coordinates."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence


@dataclass(frozen=True)
class JointDist:
    """Joint pmf over named variables with exact rational probabilities.

    Attributes:
        names: Variable names, one per tuple coordinate.
        pmf: Outcome tuple -> probability. Zero-probability outcomes are
            never stored.
    """

    names: tuple[str, ...]
    pmf: Mapping[tuple, Fraction]

    def __post_init__(self):
        total = sum(self.pmf.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        if any(p < 0 for p in self.pmf.values()):
            raise ValueError("negative probability")

    @classmethod
    def from_weights(cls, names: Sequence[str], weights: Mapping[tuple, int | Fraction]) -> JointDist:
        """Normalize nonnegative weights into a distribution."""
        total = sum(weights.values())
        if total <= 0:
            raise ValueError("weights sum to zero")
        return cls(tuple(names), {k: Fraction(w) / total for k, w in weights.items() if w})

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; have {', '.join(self.names)}") from None

    def _indices(self, names: str | Iterable[str]) -> list[int]:
        if isinstance(names, str):
            names = [names]
        return [self.index(n) for n in names]

    def marginal(self, names: str | Iterable[str]) -> dict[tuple, Fraction]:
        """Marginal pmf keyed by tuples of the requested coordinates."""
        idx = self._indices(names)
        out: dict[tuple, Fraction] = defaultdict(Fraction)
        for k, p in self.pmf.items():
            out[tuple(k[i] for i in idx)] += p
        return dict(out)

    def project(self, names: Sequence[str]) -> JointDist:
        return JointDist(tuple(names), self.marginal(names))

    def conditional(self, given: str | Iterable[str], names: str | Iterable[str]) -> dict[tuple, dict[tuple, Fraction]]:
        """P(names | given) as nested dicts."""
        gi, ni = self._indices(given), self._indices(names)
        joint: dict[tuple, dict[tuple, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for k, p in self.pmf.items():
            joint[tuple(k[i] for i in gi)][tuple(k[i] for i in ni)] += p
        out = {}
        for g, row in joint.items():
            tot = sum(row.values())
            out[g] = {v: p / tot for v, p in row.items()}
        return out

    def support(self) -> list[tuple]:
        return list(self.pmf)


def is_function_of(dist: JointDist, target: str | Iterable[str], source: str | Iterable[str]) -> bool:
    """True when ``target`` is a deterministic function of ``source`` on the support."""
    seen: dict[tuple, tuple] = {}
    ti, si = dist._indices(target), dist._indices(source)
    for k in dist.pmf:
        s = tuple(k[i] for i in si)
        t = tuple(k[i] for i in ti)
        if seen.setdefault(s, t) != t:
            return False
    return True


Outcome = Hashable
