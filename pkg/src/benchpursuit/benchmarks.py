"""Benchmark construction: the known-structure sample a projection is scored against.

Four kinds are supported: an external file with matching columns, an
independent per-column permutation of the data (breaking joint structure
while keeping marginals), a split of the data by class label, and classic
linear congruential generator triplets whose lattice defects are the
structure to find.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatch, EmptyPartition, UnknownColumn
from .frames import DataMatrix, subset_rows

# name -> (modulus, multiplier); the recurrence is state' = multiplier * state mod modulus.
GENERATORS: dict[str, tuple[int, int]] = {
    "randu": (2**31, 65539),
    "minstd": (2**31 - 1, 16807),
}


@dataclass(frozen=True)
class LcgState:
    """A multiplicative congruential generator frozen at one state."""

    modulus: int
    multiplier: int
    state: int

    def __post_init__(self):
        if self.modulus < 2 or self.multiplier < 1:
            raise ValueError("need modulus >= 2 and multiplier >= 1")
        if not 1 <= self.state < self.modulus:
            raise ValueError(f"state must be in [1, {self.modulus - 1}], got {self.state}")


def lcg_state(generator: str, seed: int) -> LcgState:
    """Initial state of a named generator."""
    key = generator.lower()
    if key not in GENERATORS:
        raise ConfigError(f"unknown generator '{generator}' (have {sorted(GENERATORS)})")
    modulus, multiplier = GENERATORS[key]
    return LcgState(modulus=modulus, multiplier=multiplier, state=seed)


def lcg_next(state: LcgState) -> tuple[int, LcgState]:
    """One exact step: the new raw value and the advanced state.

    Python integers are arbitrary precision, so the product never overflows
    and the result is exact for any modulus.
    """
    value = (state.multiplier * state.state) % state.modulus
    return value, LcgState(state.modulus, state.multiplier, value)


def lcg_triplets(generator: str, seed: int, n: int) -> DataMatrix:
    """n non-overlapping consecutive triplets of a generator, scaled to (0, 1).

    Triplet i holds draws 3i+1, 3i+2, 3i+3 of the stream divided by the
    modulus, in columns x1, x2, x3.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    state = lcg_state(generator, seed)
    raw = np.empty(3 * n, dtype=np.int64)
    for i in range(3 * n):
        value, state = lcg_next(state)
        raw[i] = value
    values = raw.reshape(n, 3) / float(state.modulus)
    return DataMatrix(values=values, column_names=("x1", "x2", "x3"))


def permutation_benchmark(x: DataMatrix, seed: int) -> DataMatrix:
    """Independent per-column permutation of ``x``.

    Marginal distributions are kept exactly (each column is the same
    multiset) while the joint structure is destroyed. Column names are
    preserved; row labels are dropped because rows no longer correspond to
    observations.
    """
    rng = np.random.default_rng(seed)
    cols = [rng.permutation(x.values[:, j]) for j in range(x.p)]
    return DataMatrix(values=np.column_stack(cols), column_names=x.column_names)


def class_split(x: DataMatrix, label_column: str, level: str) -> tuple[DataMatrix, DataMatrix]:
    """Split ``x`` into (rows with label == level, the rest).

    ``label_column`` must name the label column held by ``x`` (the label is
    excluded from the numeric values at ingest time). Both parts keep their
    row labels.
    """
    if x.row_labels is None or x.label_name != label_column:
        raise UnknownColumn(
            f"'{label_column}' is not the designated label column"
            + (f" ('{x.label_name}')" if x.label_name else " (none present)")
        )
    level = str(level)
    in_level = [i for i, lab in enumerate(x.row_labels) if lab == level]
    rest = [i for i, lab in enumerate(x.row_labels) if lab != level]
    if not in_level:
        raise EmptyPartition(f"no rows have {label_column} == '{level}'")
    if not rest:
        raise EmptyPartition(f"every row has {label_column} == '{level}'")
    return subset_rows(x, in_level), subset_rows(x, rest)


@dataclass(frozen=True)
class BenchmarkSpec:
    """Declarative description of how to build the benchmark sample.

    ``kind`` is one of "external", "permutation", "class_split", "lcg"; the
    remaining fields apply per kind and are validated by :meth:`validate`.
    """

    kind: str
    path: str | None = None
    seed: int | None = None
    label_column: str | None = None
    level: str | None = None
    generator: str | None = None
    n_rows: int | None = None

    def validate(self) -> None:
        if self.kind == "external":
            if not self.path:
                raise ConfigError("external benchmark needs a path")
        elif self.kind == "permutation":
            if self.seed is None:
                raise ConfigError("permutation benchmark needs a seed")
        elif self.kind == "class_split":
            if not self.label_column or self.level is None:
                raise ConfigError("class_split benchmark needs label_column and level")
        elif self.kind == "lcg":
            if not self.generator or self.seed is None:
                raise ConfigError("lcg benchmark needs generator and seed")
            if self.generator.lower() not in GENERATORS:
                raise ConfigError(f"unknown generator '{self.generator}'")
            if self.n_rows is not None and self.n_rows < 1:
                raise ConfigError("n_rows must be at least 1")
        else:
            raise ConfigError(f"unknown benchmark kind '{self.kind}'")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key in ("path", "seed", "label_column", "level", "generator", "n_rows"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchmarkSpec":
        known = {"kind", "path", "seed", "label_column", "level", "generator", "n_rows"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown benchmark fields: {sorted(unknown)}")
        if "kind" not in raw:
            raise ConfigError("benchmark spec needs a 'kind'")
        spec = cls(**raw)
        spec.validate()
        return spec


def build_benchmark(spec: BenchmarkSpec, x: DataMatrix) -> tuple[DataMatrix, DataMatrix]:
    """Resolve ``spec`` against ``x`` into the (data, benchmark) pair.

    For a class split the data side is the selected level; for every other
    kind the data side is ``x`` unchanged.
    """
    spec.validate()
    if spec.kind == "external":
        from .dataio import ingest_csv

        y = ingest_csv(spec.path)
        if y.p != x.p:
            raise DimensionMismatch(f"benchmark has {y.p} columns but data has {x.p}")
        return x, y
    if spec.kind == "permutation":
        return x, permutation_benchmark(x, spec.seed)
    if spec.kind == "class_split":
        return class_split(x, spec.label_column, spec.level)
    # lcg
    if x.p != 3:
        raise DimensionMismatch(f"lcg triplets have 3 columns but data has {x.p}")
    n = spec.n_rows if spec.n_rows is not None else x.n
    return x, lcg_triplets(spec.generator, spec.seed, n)
