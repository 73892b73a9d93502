"""JSON serialization for modules, complexes, summaries and witnesses.

Rational coefficients travel as strings like "3" or "-1/2"; prime-field
coefficients as integers in [0, p).  Infinite caps and infinite counts
are null.  Rows and columns are 1-based on the wire, 0-based in memory.
Omitted entries are zero.
"""

from __future__ import annotations

import json

from .degrees import Cell, cell_lattice_count
from .dmcore import (
    BoxDifferentialModule,
    ComplexLevel,
    GeneratorSpec,
    GradedComplex,
    RingContext,
)
from .exactla import PrimeField, Rationals
from .homology import HomologySummary
from .structure import FlagOrder
from .torbetti import CancellationProvenance


def field_to_json(field):
    if isinstance(field, Rationals):
        return "QQ"
    if isinstance(field, PrimeField):
        return {"Fp": field.p}
    raise TypeError(f"unknown field {field!r}")


def field_from_json(data):
    if data == "QQ":
        return Rationals()
    if isinstance(data, dict) and set(data) == {"Fp"}:
        return PrimeField(int(data["Fp"]))
    raise ValueError(f"unknown field spec {data!r}")


def _coeff_to_json(field, value):
    if isinstance(field, PrimeField):
        return value % field.p
    return field.show(value)


def _entries_to_json(field, rows):
    out = []
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            if value != field.zero:
                out.append({"row": i + 1, "col": j + 1, "coeff": _coeff_to_json(field, value)})
    return out


def _entries_from_json(field, data, nrows, ncols):
    rows = [[field.zero] * ncols for _ in range(nrows)]
    for item in data:
        i, j = item["row"] - 1, item["col"] - 1
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ValueError(f"entry ({item['row']}, {item['col']}) out of range")
        rows[i][j] = field.of(item["coeff"])
    return rows


def _generator_to_json(g: GeneratorSpec):
    return {"shift": list(g.shift), "cap": list(g.cap)}


def _generator_from_json(data, d) -> GeneratorSpec:
    shift = tuple(int(x) for x in data["shift"])
    cap = tuple(None if c is None else int(c) for c in data.get("cap", [None] * d))
    return GeneratorSpec(shift=shift, cap=cap)


def module_to_json(module: BoxDifferentialModule) -> dict:
    return {
        "d": module.ring.d,
        "field": field_to_json(module.ring.field),
        "diff_degree": list(module.diff_degree),
        "generators": [_generator_to_json(g) for g in module.generators],
        "entries": _entries_to_json(module.ring.field, module.coeffs),
    }


def module_from_json(data: dict) -> BoxDifferentialModule:
    d = int(data["d"])
    field = field_from_json(data["field"])
    ring = RingContext(d=d, field=field)
    gens = tuple(_generator_from_json(g, d) for g in data["generators"])
    rows = _entries_from_json(field, data.get("entries", []), len(gens), len(gens))
    return BoxDifferentialModule(
        ring=ring,
        generators=gens,
        diff_degree=tuple(int(x) for x in data["diff_degree"]),
        coeffs=tuple(tuple(row) for row in rows),
    )


def complex_to_json(complex_: GradedComplex) -> dict:
    levels = []
    for level in complex_.levels:
        levels.append({
            "generators": [_generator_to_json(g) for g in level.generators],
            "matrix_to_previous": _entries_to_json(
                complex_.ring.field, level.matrix_to_previous
            ),
        })
    return {
        "d": complex_.ring.d,
        "field": field_to_json(complex_.ring.field),
        "levels": levels,
    }


def complex_from_json(data: dict) -> GradedComplex:
    d = int(data["d"])
    field = field_from_json(data["field"])
    ring = RingContext(d=d, field=field)
    levels = []
    prev_count = 0
    for idx, item in enumerate(data["levels"]):
        gens = tuple(_generator_from_json(g, d) for g in item["generators"])
        if idx == 0:
            matrix = ()
        else:
            rows = _entries_from_json(
                field, item.get("matrix_to_previous", []), prev_count, len(gens)
            )
            matrix = tuple(tuple(row) for row in rows)
        levels.append(ComplexLevel(generators=gens, matrix_to_previous=matrix))
        prev_count = len(gens)
    return GradedComplex(ring=ring, levels=tuple(levels))


def _cell_to_json(cell: Cell, dim: int) -> dict:
    return {
        "intervals": [list(iv) for iv in cell.intervals],
        "dimension": dim,
        "lattice_count": cell_lattice_count(cell),
    }


def summary_to_json(summary: HomologySummary) -> dict:
    support = None
    if summary.support_box is not None:
        support = {
            "low": list(summary.support_box[0]),
            "high": list(summary.support_box[1]),
        }
    return {
        "cells": [
            _cell_to_json(cell, dim)
            for cell, dim in zip(summary.decomposition.cells, summary.dims)
            if dim != 0
        ],
        "finite_length": summary.finite_length,
        "total_length": summary.total_length,
        "support_box": support,
    }


def flag_to_json(order: FlagOrder) -> list:
    return list(order.levels)


def flag_from_json(data) -> FlagOrder:
    return FlagOrder(levels=tuple(int(x) for x in data))


def provenance_to_json(provenance: CancellationProvenance) -> dict:
    out = {
        "source": module_to_json(provenance.source),
        "steps": [{"row": r + 1, "col": c + 1} for r, c in provenance.steps],
    }
    if provenance.source_flag is not None:
        out["source_flag"] = flag_to_json(provenance.source_flag)
    return out


def provenance_from_json(data: dict) -> CancellationProvenance:
    flag = data.get("source_flag")
    return CancellationProvenance(
        source=module_from_json(data["source"]),
        steps=tuple((int(s["row"]) - 1, int(s["col"]) - 1) for s in data["steps"]),
        source_flag=None if flag is None else flag_from_json(flag),
    )


def dump(data, path) -> None:
    with open(path, "w") as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load(path):
    with open(path) as handle:
        return json.load(handle)


def module_to_text(module: BoxDifferentialModule) -> str:
    """Canonical serialized form; identical modules give identical text."""
    return json.dumps(module_to_json(module), sort_keys=True)


def coerce_field(module: BoxDifferentialModule, field) -> BoxDifferentialModule:
    """Reinterpret a module's coefficients in another exact field.

    Prime-field values lift through their symmetric representatives in
    (-p/2, p/2], so reducing and lifting back preserves small integers.
    """
    if module.ring.field == field:
        return module
    old = module.ring.field
    if isinstance(old, PrimeField):
        half = old.p // 2
        raw = [
            [c % old.p if c % old.p <= half else c % old.p - old.p for c in row]
            for row in module.coeffs
        ]
    else:
        raw = [list(row) for row in module.coeffs]
    rows = tuple(tuple(field.of(c) for c in row) for row in raw)
    return BoxDifferentialModule(
        ring=RingContext(d=module.ring.d, field=field),
        generators=module.generators,
        diff_degree=module.diff_degree,
        coeffs=rows,
    )
