"""Error-term experiment harness: scans, dyadic exponent fits, manifests.

A scan walks t over a stride grid, records the exact count, the discrepancy
against the disk area, and the discrepancy normalized by t^(1/4), and
writes a versioned CSV.  Every number except the wall-clock column is
reproducible bit for bit; the manifest stores a digest over exactly the
deterministic bytes (wall_ns excluded) so reruns can be compared.

The exponent fit takes per-dyadic-block maxima of |delta| and regresses
log max against log t (at the t where the maximum is attained, which makes
pure-power synthetic inputs fit exactly).
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, getcontext
from pathlib import Path

import numpy as np

from .counting import BRUTE_LIMIT, count_lattice, count_range

SCHEMA = "circlesum.scan.v1"
CSV_HEADER = "t,P,delta,normalized,method,wall_ns"
_PI_40 = Decimal("3.141592653589793238462643383279502884197")


@dataclass(frozen=True)
class ScanRecord:
    t: int
    P: int
    delta: float
    normalized: float
    method: str
    wall_ns: int


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    version: str
    started_utc: str
    finished_utc: str
    digest_sha256: str
    rows: int

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def _deltas_for(ts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Discrepancies; exact double arithmetic below 1e8, decimal above."""
    deltas = counts.astype(np.float64) - np.pi * ts.astype(np.float64)
    big = ts > 10 ** 8
    if np.any(big):
        getcontext().prec = 50
        for i in np.nonzero(big)[0]:
            deltas[i] = float(Decimal(int(counts[i])) - _PI_40 * int(ts[i]))
    return deltas


def _count_chunk(args) -> tuple[int, np.ndarray]:
    lo, hi, stride, method = args
    if method == "rows":
        return lo, count_range(lo, hi, stride)
    counts = np.empty((hi - lo) // stride + 1, dtype=np.int64)
    for i, t in enumerate(range(lo, hi + 1, stride)):
        counts[i] = count_lattice(t, method).count
    return lo, counts


def scan(t_min: int, t_max: int, stride: int = 1, method: str = "rows",
         jobs: int = 1, slow_ok: bool = False) -> list[ScanRecord]:
    """Scan the discrepancy over [t_min, t_max]; deterministic content.

    Work may be split across processes; records are always assembled in
    ascending t regardless of completion order.
    """
    if not (1 <= t_min <= t_max):
        raise ValueError("need 1 <= t_min <= t_max")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if method not in ("rows", "brute"):
        raise ValueError("scan method must be 'rows' or 'brute'")
    if method == "brute":
        if t_max > BRUTE_LIMIT:
            raise ValueError(f"brute scans capped at t = {BRUTE_LIMIT}")
        if t_max > 10 ** 6 and not slow_ok:
            raise ValueError("brute scans past 1e6 require slow_ok")

    ts = np.arange(t_min, t_max + 1, stride, dtype=np.int64)
    chunk = 8192
    bounds = []
    for s in range(0, ts.size, chunk):
        sub = ts[s:s + chunk]
        bounds.append((int(sub[0]), int(sub[-1]), stride, method))

    pieces: list[tuple[int, np.ndarray, int]] = []
    if jobs > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            t0 = time.perf_counter_ns()
            for (lo, counts) in pool.map(_count_chunk, bounds):
                pieces.append((lo, counts, time.perf_counter_ns() - t0))
                t0 = time.perf_counter_ns()
    else:
        for b in bounds:
            t0 = time.perf_counter_ns()
            lo, counts = _count_chunk(b)
            pieces.append((lo, counts, time.perf_counter_ns() - t0))

    pieces.sort(key=lambda p: p[0])
    records: list[ScanRecord] = []
    for lo, counts, elapsed in pieces:
        sub = np.arange(lo, lo + stride * counts.size, stride, dtype=np.int64)
        deltas = _deltas_for(sub, counts)
        normalized = deltas / sub.astype(np.float64) ** 0.25
        per_row = max(1, elapsed // counts.size)
        for t, p, d, nz in zip(sub, counts, deltas, normalized):
            records.append(ScanRecord(int(t), int(p), float(d), float(nz),
                                      method, int(per_row)))
    return records


def digest_records(records) -> str:
    """SHA-256 over the deterministic scan bytes (wall_ns excluded)."""
    h = hashlib.sha256()
    h.update(f"# schema: {SCHEMA}\n".encode())
    h.update((CSV_HEADER + "\n").encode())
    for r in records:
        h.update(f"{r.t},{r.P},{r.delta!r},{r.normalized!r},{r.method}\n".encode())
    return h.hexdigest()


def write_csv(records, out_path: Path | str) -> str:
    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8") as fh:
        fh.write(f"# schema: {SCHEMA}\n")
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(f"{r.t},{r.P},{r.delta!r},{r.normalized!r},{r.method},{r.wall_ns}\n")
    return digest_records(records)


def read_csv(path: Path | str) -> list[ScanRecord]:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != f"# schema: {SCHEMA}":
        raise ValueError(f"unknown or missing scan schema (expected {SCHEMA})")
    if len(lines) < 2 or lines[1].strip() != CSV_HEADER:
        raise ValueError("malformed scan header")
    out = []
    for line in lines[2:]:
        if not line.strip():
            continue
        t, p, d, nz, method, wall = line.split(",")
        out.append(ScanRecord(int(t), int(p), float(d), float(nz), method, int(wall)))
    return out


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    stderr: float
    ci_low: float
    ci_high: float
    n_blocks: int
    block_t: tuple
    block_max: tuple
    residuals: tuple


def fit_exponent(records) -> ExponentFit:
    """Dyadic-max slope of log |delta| against log t.

    Blocks are [2^k, 2^(k+1)); each contributes its max |delta| at the t
    attaining it.  Requires at least 4 nonempty blocks.
    """
    ts = np.asarray([r.t for r in records], dtype=np.int64)
    deltas = np.abs(np.asarray([r.delta for r in records]))
    if ts.size == 0:
        raise ValueError("empty scan")
    k_lo = int(math.floor(math.log2(ts.min())))
    k_hi = int(math.floor(math.log2(ts.max())))
    block_t, block_max = [], []
    for k in range(k_lo, k_hi + 1):
        mask = (ts >= 2 ** k) & (ts < 2 ** (k + 1))
        if not np.any(mask):
            continue
        i = np.argmax(deltas[mask])
        block_t.append(int(ts[mask][i]))
        block_max.append(float(deltas[mask][i]))
    if len(block_t) < 4:
        raise ValueError(f"need >= 4 dyadic blocks, found {len(block_t)}")
    x = np.log(np.asarray(block_t, dtype=float))
    y = np.log(np.asarray(block_max, dtype=float))
    n = x.size
    xm, ym = x.mean(), y.mean()
    sxx = ((x - xm) ** 2).sum()
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    dof = max(n - 2, 1)
    stderr = float(math.sqrt((resid ** 2).sum() / dof / sxx))
    half = 1.96 * stderr
    return ExponentFit(slope, stderr, slope - half, slope + half, n,
                       tuple(block_t), tuple(block_max),
                       tuple(float(r) for r in resid))
