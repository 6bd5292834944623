"""Certified experiments on bounded remainder sets of ({a_n alpha}).

Thin wrapper over the compiled ``_remlab`` module: big integers come back as
Python ints, exact rationals as ``fractions.Fraction``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from . import _remlab
from ._remlab import (
    Error,
    beta_expand,
    cf_expand,
    kesten_lengths,
    parse_real,
    pisot_power_dist,
    zero_run_find,
)

__all__ = [
    "Error",
    "beta_expand",
    "build_qn_plus_n",
    "cf_expand",
    "convergents",
    "counterexample_boundary",
    "extreme_discrepancy",
    "frac_part",
    "generate",
    "kesten_lengths",
    "nearest_int_dist",
    "parse_real",
    "pisot_power_dist",
    "run_experiment",
    "simultaneous_approx",
    "snbrs_thresholds",
    "tail_index",
    "zero_run_find",
]


def frac_part(x: str, m: int, tol: float = 1e-12) -> tuple[float, float]:
    """{m x} as (midpoint, radius)."""
    return _remlab.frac_part(x, str(m), tol)


def nearest_int_dist(x: str, m: int, tol: float = 1e-12) -> tuple[float, float]:
    """||m x|| as (midpoint, radius)."""
    return _remlab.nearest_int_dist(x, str(m), tol)


def convergents(x: str, n: int) -> list[tuple[int, int]]:
    return [(int(p), int(q)) for p, q in _remlab.convergents(x, n)]


def simultaneous_approx(alphas: Sequence[str], eps: Fraction | str, q_cap: int) -> int:
    return int(_remlab.simultaneous_approx(list(alphas), str(Fraction(eps)), str(q_cap)))


def tail_index(base: str, eps: Fraction | str) -> int:
    return _remlab.tail_index(base, str(Fraction(eps)))


def generate(sequence: dict, n: int, tol: float = 1e-12) -> list[list[float]]:
    return _remlab.generate(json.dumps(sequence), n, tol)


def build_qn_plus_n(alpha: str, n: int) -> list[int]:
    return [int(a) for a in _remlab.build_qn_plus_n(alpha, n)]


def counterexample_boundary(depth: int) -> dict:
    out = _remlab.counterexample_boundary(depth)
    out["n"] = [int(v) for v in out["n"]]
    return out


def extreme_discrepancy(points: Iterable[Fraction | int | str]) -> Fraction:
    return Fraction(_remlab.extreme_discrepancy([str(Fraction(p)) for p in points]))


def snbrs_thresholds(c: Fraction | int | str, interval: str) -> tuple[int, int]:
    k_in, k_out = _remlab.snbrs_thresholds(str(Fraction(c)), interval)
    return int(k_in), int(k_out)


def run_experiment(config: dict) -> tuple[dict, str]:
    """Runs one experiment; returns the summary and the trace CSV text."""
    summary, csv = _remlab.run_experiment(json.dumps(config))
    return json.loads(summary), csv
