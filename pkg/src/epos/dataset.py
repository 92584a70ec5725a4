"""Labeled feature datasets and their on-disk CSV forms.

Dataset CSV layout: column 1 graph6 key, columns 2..d+1 features in schema
order (header row carries the names), last column the 0/1 e-positivity label.
Floats are written with 17 significant digits so files are byte-reproducible
and lossless. Label CSV layout: graph6, e_positive, min_e_coeff,
witness_partition (semicolon-joined parts, empty when e-positive).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .csf import LabelRow
from .errors import ValidationError

__all__ = [
    "Dataset",
    "format_float",
    "write_dataset_csv",
    "read_dataset_csv",
    "write_label_csv",
    "read_label_csv",
]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class Dataset:
    keys: list[str]
    feature_names: list[str]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        if self.X.shape != (len(self.keys), len(self.feature_names)):
            raise ValidationError("feature matrix shape does not match keys/names")
        if self.y.shape != (len(self.keys),):
            raise ValidationError("label vector length does not match keys")

    def __len__(self) -> int:
        return len(self.keys)

    def select_features(self, names) -> "Dataset":
        idx = [self.feature_names.index(n) for n in names]
        return Dataset(self.keys, list(names), self.X[:, idx].copy(), self.y.copy())

    def subset(self, rows) -> "Dataset":
        rows = list(rows)
        return Dataset(
            [self.keys[i] for i in rows],
            self.feature_names,
            self.X[rows],
            self.y[rows],
        )

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_names.index(name)]

    def with_column(self, name: str, values) -> "Dataset":
        values = np.asarray(values, dtype=float).reshape(len(self), 1)
        return Dataset(
            self.keys,
            self.feature_names + [name],
            np.hstack([self.X, values]),
            self.y,
        )


def write_dataset_csv(path, ds: Dataset) -> None:
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["graph6", *ds.feature_names, "e_positive"])
        for i, key in enumerate(ds.keys):
            writer.writerow(
                [key, *(format_float(x) for x in ds.X[i]), str(int(ds.y[i]))]
            )


def read_dataset_csv(path) -> Dataset:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty dataset file") from None
        if header[0] != "graph6" or header[-1] != "e_positive":
            raise ValidationError(f"{path}: unexpected dataset header")
        names = header[1:-1]
        keys = []
        rows = []
        labels = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValidationError(f"{path}:{lineno}: expected {len(header)} fields")
            keys.append(row[0])
            rows.append([float(x) for x in row[1:-1]])
            labels.append(int(row[-1]))
    return Dataset(keys, names, np.array(rows, dtype=float), np.array(labels, dtype=np.int64))


def write_label_csv(path, rows: list[LabelRow]) -> None:
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["graph6", "e_positive", "min_e_coeff", "witness_partition"])
        for row in rows:
            writer.writerow(row.to_csv_fields())


def read_label_csv(path) -> list[LabelRow]:
    path = Path(path)
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["graph6", "e_positive", "min_e_coeff", "witness_partition"]:
            raise ValidationError(f"{path}: unexpected label header")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ValidationError(f"{path}:{lineno}: expected 4 fields")
            witness = tuple(int(p) for p in row[3].split(";")) if row[3] else None
            out.append(
                LabelRow(
                    graph6=row[0],
                    e_positive=bool(int(row[1])),
                    min_e_coeff=int(row[2]),
                    witness_partition=witness,
                )
            )
    return out
