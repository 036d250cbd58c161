"""CSV ingestion and serialization with lossless numeric round-trips."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import (
    EmptyResult,
    EmptySelection,
    IndexOutOfRange,
    MissingColumn,
    NonFiniteValue,
    ParseError,
    UnknownLabel,
)
from .frames import DataMatrix, subset_rows


def fmt_float(x: float) -> str:
    """Decimal form at 17 significant digits: parses back to the same float."""
    return f"{float(x):.17g}"


def ingest_csv(path, label_column: str | None = None) -> DataMatrix:
    """Read a headed CSV into a :class:`DataMatrix`.

    Every cell outside the optional label column must parse as a finite
    decimal number; the label column is held as row labels and excluded from
    the numeric values. Errors carry the 1-based line number and column name.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(f"{path}: empty file", line=1) from None
        label_idx: int | None = None
        if label_column is not None:
            if label_column not in header:
                raise MissingColumn(f"no column '{label_column}' in {path}")
            label_idx = header.index(label_column)
        numeric_idx = [j for j in range(len(header)) if j != label_idx]
        names = tuple(header[j] for j in numeric_idx)

        rows: list[list[float]] = []
        labels: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}",
                    line=line_no,
                )
            parsed = []
            for j in numeric_idx:
                cell = row[j].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}:{line_no}: column '{header[j]}': cannot parse '{cell}'",
                        line=line_no,
                        column=header[j],
                    ) from None
                if not math.isfinite(value):
                    raise NonFiniteValue(
                        f"{path}:{line_no}: column '{header[j]}': non-finite value '{cell}'"
                    )
                parsed.append(value)
            rows.append(parsed)
            if label_idx is not None:
                labels.append(row[label_idx].strip())
    if not rows:
        raise ParseError(f"{path}: no data rows", line=1)
    return DataMatrix(
        values=np.array(rows, dtype=float),
        column_names=names,
        row_labels=tuple(labels) if label_idx is not None else None,
        label_name=label_column,
    )


def write_csv(data: DataMatrix, path) -> None:
    """Write ``data`` so that :func:`ingest_csv` reproduces it exactly.

    The label column (if any) comes first under its original name; numeric
    cells are serialized at 17 significant digits. Line endings are fixed to
    \\n so identical data yields identical bytes.
    """
    path = Path(path)
    label_name = data.label_name or ("label" if data.row_labels is not None else None)
    with path.open("w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(data.column_names)
        if data.row_labels is not None:
            header = [label_name] + header
        writer.writerow(header)
        for i in range(data.n):
            row = [fmt_float(v) for v in data.values[i]]
            if data.row_labels is not None:
                row = [data.row_labels[i]] + row
            writer.writerow(row)


def standardize_columns(data: DataMatrix) -> DataMatrix:
    """Center each column and scale it by its sample standard deviation.

    A constant column (or a single-row matrix) is centered only, since its
    scale carries no information.
    """
    values = data.values
    means = values.mean(axis=0)
    if data.n > 1:
        stds = values.std(axis=0, ddof=1)
    else:
        stds = np.ones(data.p)
    stds = np.where(stds > 0, stds, 1.0)
    return DataMatrix(
        values=(values - means) / stds,
        column_names=data.column_names,
        row_labels=data.row_labels,
        label_name=data.label_name,
    )


def filter_rows(
    data: DataMatrix,
    labels=None,
    indices=None,
    mode: str = "remove",
) -> DataMatrix:
    """Reduce ``data`` to or by a set of rows, selected by label or index.

    Exactly one of ``labels`` (matched against the row labels) and
    ``indices`` (0-based row numbers) must be given; ``mode`` is "keep" or
    "remove". Raises :class:`UnknownLabel` for labels absent from the data
    and :class:`EmptyResult` if nothing remains.
    """
    if (labels is None) == (indices is None):
        raise ValueError("give exactly one of labels= or indices=")
    if mode not in ("keep", "remove"):
        raise ValueError(f"mode must be 'keep' or 'remove', got '{mode}'")
    if labels is not None:
        if data.row_labels is None:
            raise UnknownLabel("data has no label column to match against")
        wanted = {str(lab) for lab in labels}
        present = set(data.row_labels)
        missing = sorted(wanted - present)
        if missing:
            raise UnknownLabel(f"labels not present in data: {missing}")
        selected = [i for i, lab in enumerate(data.row_labels) if lab in wanted]
    else:
        selected = sorted({int(i) for i in indices})
        if selected and (selected[0] < 0 or selected[-1] >= data.n):
            bad = selected[0] if selected[0] < 0 else selected[-1]
            raise IndexOutOfRange(f"row index {bad} outside [0, {data.n - 1}]")
    if mode == "keep":
        final = selected
    else:
        chosen = set(selected)
        final = [i for i in range(data.n) if i not in chosen]
    try:
        return subset_rows(data, final)
    except EmptySelection:
        raise EmptyResult(f"filter (mode={mode}) removed every row") from None
