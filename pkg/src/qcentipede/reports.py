"""Angle parsing and CSV/JSON serialization of sweep results."""

from __future__ import annotations

import csv
import io
import json
import re
from typing import Iterable

import numpy as np

from . import __version__
from .equilibrium import SweepRow
from .game import PayoffPair, PayoffSchedule

CSV_COLUMNS = ("theta1", "theta2", "theta3", "exact_p1", "exact_p2", "mc_p1", "mc_p2", "shots", "seed")

_PI_TOKEN = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_angle(token: str) -> float:
    """Parse ``0``, ``pi``, ``pi/2``, ``-3pi/4``, ``2*pi`` or a decimal in radians."""
    text = token.strip().lower().replace(" ", "").replace("π", "pi")
    m = _PI_TOKEN.match(text)
    if m:
        sign, coeff, denom = m.groups()
        value = float(coeff or 1.0) * np.pi / float(denom or 1.0)
        return -value if sign == "-" else value
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse angle {token!r}") from None


def parse_angles(text: str) -> list[float]:
    return [parse_angle(t) for t in text.split(",") if t.strip()]


def format_number(x: float, chop: float = 0.0) -> str:
    """12 significant digits; magnitudes below ``chop`` print as 0."""
    if abs(x) < chop:
        x = 0.0
    return f"{x + 0.0:.12g}"


def meta_block(schedule: PayoffSchedule, **extra) -> dict:
    return {"tool": f"qcentipede {__version__}", "schedule_sha256": schedule.digest(), **extra}


def header_lines(schedule: PayoffSchedule, **extra) -> list[str]:
    return [f"# {k}: {v}" for k, v in meta_block(schedule, **extra).items()]


def sweep_to_csv(rows: Iterable[SweepRow], schedule: PayoffSchedule, shots: int, seed: int) -> str:
    buf = io.StringIO()
    for line in header_lines(schedule, seed=seed, shots=shots):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                *(format_number(t) for t in row.thetas),
                format_number(row.exact_payoffs.player1, chop=1e-15),
                format_number(row.exact_payoffs.player2, chop=1e-15),
                format_number(row.mc_payoffs.player1),
                format_number(row.mc_payoffs.player2),
                row.shots,
                row.seed,
            ]
        )
    return buf.getvalue()


def sweep_from_csv(text: str) -> list[SweepRow]:
    """Inverse of :func:`sweep_to_csv`; ``#`` header lines are skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            SweepRow(
                thetas=tuple(parse_angle(rec[f"theta{k}"]) for k in (1, 2, 3)),
                exact_payoffs=PayoffPair(float(rec["exact_p1"]), float(rec["exact_p2"])),
                mc_payoffs=PayoffPair(float(rec["mc_p1"]), float(rec["mc_p2"])),
                shots=int(rec["shots"]),
                seed=int(rec["seed"]),
            )
        )
    return rows


def sweep_to_json(rows: Iterable[SweepRow], schedule: PayoffSchedule, shots: int, seed: int) -> str:
    records = [
        {
            "theta1": row.thetas[0],
            "theta2": row.thetas[1],
            "theta3": row.thetas[2],
            "exact_p1": row.exact_payoffs.player1,
            "exact_p2": row.exact_payoffs.player2,
            "mc_p1": row.mc_payoffs.player1,
            "mc_p2": row.mc_payoffs.player2,
            "shots": row.shots,
            "seed": row.seed,
        }
        for row in rows
    ]
    doc = {"meta": meta_block(schedule, seed=seed, shots=shots), "rows": records}
    return dump_json(doc)


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
