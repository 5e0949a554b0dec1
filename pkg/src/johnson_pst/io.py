"""JSON design documents and CSV amplitude sweeps.

Real numbers are written as decimal strings with 17 significant digits so
that a document reads back bit-for-bit in any language.  Integer fields
(m, l_offsets, f_bits) stay JSON integers.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .design import DesignInput, PSTDesign
from .errors import DomainError, IntegrityError
from .evolution import AmplitudeSeries
from .spectral import SpectralMeasure, eigenmatrix, gauss_weights, johnson_qd, monic_values

SCHEMA_VERSION = "1"


def fmt(x: float) -> str:
    return format(float(x), "#.17g")


def design_to_dict(design: PSTDesign, arithmetic_mode: str = "exact") -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "design": {
            "m": design.m,
            "t0": fmt(design.t0),
            "theta": fmt(design.theta),
            "l_offsets": list(design.input.l_offsets),
            "f_bits": list(design.f_bits),
            "support": [fmt(x) for x in design.measure.points],
            "weights": [fmt(g) for g in design.measure.weights],
            "couplings": [fmt(j) for j in design.couplings],
            "hamiltonian_eigenvalues": [fmt(e) for e in design.hamiltonian_eigenvalues],
        },
        "provenance": {
            "tool": "johnson-pst",
            "tool_version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "arithmetic_mode": arithmetic_mode,
        },
    }


def design_from_dict(doc: dict) -> PSTDesign:
    """Rebuild a design; the eigenmatrix is recomputed from the stored support.

    Raises
    ------
    DomainError
        Malformed document or unsupported schema version.
    IntegrityError
        Stored support or weights do not belong to J(2m, m).
    """
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        d = doc["design"]
        m = int(d["m"])
        inp = DesignInput(m, float(d["t0"]), float(d["theta"]), tuple(d["l_offsets"]))
        points = [float(x) for x in d["support"]]
        weights = [float(g) for g in d["weights"]]
        J = np.array([float(v) for v in d["couplings"]])
        E = np.array([float(v) for v in d["hamiltonian_eigenvalues"]])
        f_bits = tuple(int(b) for b in d["f_bits"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed design document: {exc}") from exc
    if not (len(points) == len(weights) == J.size == E.size == m + 1):
        raise DomainError("array lengths do not match m + 1")

    qd = johnson_qd(m, exact=True)
    exact_points = [Fraction(x).limit_denominator(10**6) for x in points]
    if any(monic_values(qd, r)[0][-1] != 0 for r in exact_points):
        raise IntegrityError("stored support is not the J(2m, m) spectrum")
    mu = gauss_weights(qd, exact_points)
    if max(abs(float(a) - b) for a, b in zip(mu.weights, weights)) > 1e-12:
        raise IntegrityError("stored weights disagree with the spectral measure")
    em = eigenmatrix(qd, mu).as_float()
    measure = SpectralMeasure(tuple(points), tuple(weights))
    return PSTDesign(inp, f_bits, J, E, measure, em)


def write_design(path, design: PSTDesign, arithmetic_mode: str = "exact") -> dict:
    doc = design_to_dict(design, arithmetic_mode)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
    return doc


def read_design(path) -> PSTDesign:
    return design_from_dict(json.loads(Path(path).read_text()))


def sweep_header(m: int) -> list[str]:
    cols = ["t"]
    for i in range(m + 1):
        cols += [f"re_f{i}", f"im_f{i}"]
    return cols + [f"abs_f{m}"]


def write_sweep(path, series: AmplitudeSeries) -> None:
    m = series.amplitudes.shape[1] - 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(sweep_header(m))
        for t, row in zip(series.times, series.amplitudes):
            out = [f"{t:.15g}"]
            for z in row:
                out += [f"{z.real:.15g}", f"{z.imag:.15g}"]
            out.append(f"{abs(row[-1]):.15g}")
            w.writerow(out)
