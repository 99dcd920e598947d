"""Seeded random k-SAT generators: uniform, rich-get-richer, neighborhood.

Every generator consumes one stream of uniform doubles drawn from numpy's
PCG64 seeded with the instance seed, so output is a pure function of
``(spec, seed)`` on every platform. Variables inside a clause are distinct
(duplicates are redrawn) and each literal's sign is a fair coin drawn after
its variable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import kernels
from .cnf import CnfFormula

Rational = Union[Fraction, int, float, str]


def as_fraction(x: Rational) -> Fraction:
    """Exact rational from user input; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def num_clauses(v: int, gamma: Rational) -> int:
    """``round-half-up(v * gamma)``, computed exactly."""
    g = as_fraction(gamma)
    if v < 1 or g < 0:
        raise ValueError("need v >= 1 and gamma >= 0")
    return int((v * g + Fraction(1, 2)) // 1)


def _fmt_gamma(g: Fraction) -> str:
    return format(float(g), "g")


@dataclass(frozen=True)
class UniformSpec:
    v: int
    k: int
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if not (self.v >= self.k >= 1):
            raise ValueError(f"need v >= k >= 1, got v={self.v} k={self.k}")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    def tag(self, seed: int) -> str:
        return f"uniform v={self.v} k={self.k} g={_fmt_gamma(self.gamma)} seed={seed}"


@dataclass(frozen=True)
class RichSpec(UniformSpec):
    copies: int = 1

    def __post_init__(self):
        super().__post_init__()
        if self.copies < 1:
            raise ValueError("copies must be >= 1")

    def tag(self, seed: int) -> str:
        return f"rich v={self.v} k={self.k} g={_fmt_gamma(self.gamma)} copies={self.copies} seed={seed}"


@dataclass(frozen=True)
class NeighborhoodSpec(UniformSpec):
    bucket_size: int = 10
    p: float = 0.3

    def __post_init__(self):
        super().__post_init__()
        if self.bucket_size < self.k:
            raise ValueError(f"bucket_size {self.bucket_size} smaller than k={self.k}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        tail = self.v % self.bucket_size
        if 0 < tail < self.k:
            raise ValueError(f"last bucket holds {tail} variables, fewer than k={self.k}")

    def tag(self, seed: int) -> str:
        return (
            f"nbhd v={self.v} k={self.k} g={_fmt_gamma(self.gamma)} "
            f"b={self.bucket_size} p={self.p:g} seed={seed}"
        )


GeneratorSpec = Union[UniformSpec, RichSpec, NeighborhoodSpec]


def _draw(seed: int, budget: int, fill) -> None:
    """Run ``fill(u)`` on a prefix of the seed's uniform stream, growing it
    until the sampler stops asking for more. Longer prefixes of the same
    stream agree, so the result does not depend on the initial budget."""
    while True:
        u = np.random.Generator(np.random.PCG64(seed)).random(budget)
        if fill(u) >= 0:
            return
        budget *= 2


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def gen_uniform(spec: UniformSpec, seed: int) -> CnfFormula:
    seed = _check_seed(seed)
    m = num_clauses(spec.v, spec.gamma)
    out = np.zeros(m * spec.k, np.int64)
    _draw(seed, 2 * m * spec.k + 64, lambda u: kernels.sample_uniform(u, spec.v, spec.k, m, out))
    return CnfFormula.from_flat(spec.v, out, spec.k, spec.tag(seed))


def gen_rich(spec: RichSpec, seed: int) -> CnfFormula:
    seed = _check_seed(seed)
    m = num_clauses(spec.v, spec.gamma)
    out = np.zeros(m * spec.k, np.int64)
    _draw(
        seed,
        3 * m * spec.k + 64,
        lambda u: kernels.sample_rich(u, spec.v, spec.k, m, spec.copies, out),
    )
    return CnfFormula.from_flat(spec.v, out, spec.k, spec.tag(seed))


def gen_neighborhood(spec: NeighborhoodSpec, seed: int) -> CnfFormula:
    seed = _check_seed(seed)
    m = num_clauses(spec.v, spec.gamma)
    out = np.zeros(m * spec.k, np.int64)
    _draw(
        seed,
        4 * m * spec.k + 64,
        lambda u: kernels.sample_neighborhood(
            u, spec.v, spec.k, m, spec.bucket_size, float(spec.p), out
        ),
    )
    return CnfFormula.from_flat(spec.v, out, spec.k, spec.tag(seed))


def generate(spec: GeneratorSpec, seed: int) -> CnfFormula:
    """Dispatch on the generator spec class."""
    if isinstance(spec, NeighborhoodSpec):
        return gen_neighborhood(spec, seed)
    if isinstance(spec, RichSpec):
        return gen_rich(spec, seed)
    return gen_uniform(spec, seed)


def bucket_of(var: int, bucket_size: int) -> int:
    """0-based bucket index of a 1-based variable."""
    return (var - 1) // bucket_size
