"""Python front end for the hyperreg C++ library.

Graphs, complexes and ensembles are plain dicts in the same JSON layout the
command-line tool reads. Exact results come back as "a/b" strings, which
``fractions.Fraction`` accepts directly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable, Optional

from . import _hyperreg
from ._hyperreg import BudgetError

__all__ = [
    "BudgetError",
    "check_ensemble",
    "count",
    "make_ensemble",
    "minimality",
    "random_partite",
    "regcheck",
    "thc_random",
]


def _dump(obj: Any) -> str:
    return json.dumps(obj)


def count(graph: dict, complex: dict, exact: bool = True) -> Fraction | float:
    """Partite homomorphism weight of ``complex`` in ``graph``."""
    if exact:
        return Fraction(json.loads(_hyperreg.count_exact(_dump(graph), _dump(complex))))
    return float(json.loads(_hyperreg.count_float(_dump(graph), _dump(complex))))


def regcheck(g: dict, gamma: dict, eps: str | float, d: Optional[str | float] = None, exact: bool = True) -> dict:
    fn = _hyperreg.regcheck_exact if exact else _hyperreg.regcheck_float
    return json.loads(fn(_dump(g), _dump(gamma), str(eps), None if d is None else str(d)))


def minimality(g: dict, exact: bool = True) -> dict:
    fn = _hyperreg.minimality_exact if exact else _hyperreg.minimality_float
    return json.loads(fn(_dump(g)))


def make_ensemble(k: int, Delta: int, c_star: int, h_star: int, delta: Iterable[str | Fraction], eta_k: str | Fraction) -> dict:
    return json.loads(_hyperreg.make_ensemble(k, Delta, c_star, h_star, [str(x) for x in delta], str(eta_k)))


def check_ensemble(ensemble: dict) -> dict:
    return json.loads(_hyperreg.check_ensemble(_dump(ensemble)))


def random_partite(k: int, n: int, p: float, seed: int, parts: Iterable[int]) -> dict:
    """Samples G^(k)(n, p) and restricts it to a balanced partition."""
    return json.loads(_hyperreg.random_partite(k, n, p, seed, list(parts)))


def thc_random(k: int, n: int, p: float, pattern: dict, eta: float, c_star: int, trials: int = 1, seed: int = 0) -> dict:
    return json.loads(_hyperreg.thc_random(k, n, p, _dump(pattern), eta, c_star, trials, seed))
