"""
Serialisation of result records (JSON, CSV, LaTeX) and the on-disk cache.

JSON output is deterministic: keys are sorted, terms are listed in
increasing order and every integer is written as a decimal string.  The
cache is keyed by the kind of computation, (n, N), the equivariant flag, the
package version and a hash of the monomial basis; entries are revalidated
against the record invariants when loaded.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Callable

from filelock import FileLock
from platformdirs import user_cache_dir

from . import __version__
from .assembler import ResultRecord, _serre, check_record

__all__ = ["to_json", "from_json", "to_csv", "to_latex", "emit", "cache_dir", "cached"]

log = logging.getLogger(__name__)


def _terms(poly: dict) -> list:
    return [[str(t), str(u), str(v), str(c)] for (t, u, v), c in sorted(poly.items())]


def _from_terms(rows: list) -> dict:
    return {(int(t), int(u), int(v)): int(c) for t, u, v, c in rows}


def to_json(rec: ResultRecord) -> str:
    doc = {
        "n": str(rec.n),
        "level": None if rec.N is None else str(rec.N),
        "betti": [str(b) for b in rec.betti],
        "poincare_serre": _terms(rec.mhdg),
        "equivariant": {lab: _terms(p) for lab, p in sorted(rec.equivariant.items())},
        "meta": {k: str(v) for k, v in sorted(rec.meta.items())},
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> ResultRecord:
    doc = json.loads(text)
    mhdg = _from_terms(doc["poincare_serre"])
    meta = {k: (int(v) if k == "elapsed_ms" else v) for k, v in doc["meta"].items()}
    return ResultRecord(
        n=int(doc["n"]),
        N=None if doc["level"] is None else int(doc["level"]),
        betti=tuple(int(b) for b in doc["betti"]),
        poincare_serre=_serre(mhdg),
        mhdg=mhdg,
        equivariant={lab: _from_terms(rows) for lab, rows in doc["equivariant"].items()},
        meta=meta,
    )


def to_csv(rec: ResultRecord) -> str:
    """One row per (t, u, v) term, preceded by the Betti numbers."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "betti"])
    for m, b in enumerate(rec.betti):
        w.writerow([m, b])
    w.writerow([])
    w.writerow(["representation", "t", "u", "v", "coefficient"])
    for (t, u, v), c in sorted(rec.mhdg.items()):
        w.writerow(["all", t, u, v, c])
    for lab, poly in sorted(rec.equivariant.items()):
        for (t, u, v), c in sorted(poly.items()):
            w.writerow([lab, t, u, v, c])
    return buf.getvalue()


def _latex_poly(terms: dict) -> str:
    parts = []
    for (u, v), c in sorted(terms.items()):
        mono = "".join(s if e == 1 else f"{s}^{{{e}}}" for s, e in (("u", u), ("v", v)) if e)
        parts.append(f"{c}{mono}" if mono and c != 1 else (mono or str(c)))
    return " + ".join(parts) if parts else "0"


def to_latex(rec: ResultRecord) -> str:
    """A tabular environment with one row per degree."""
    by_deg: dict = {}
    for (t, u, v), c in rec.mhdg.items():
        by_deg.setdefault(t, {})[u, v] = c
    lines = ["\\begin{tabular}{rrl}", "$m$ & $b_m$ & Hodge numbers \\\\", "\\hline"]
    for m, b in enumerate(rec.betti):
        lines.append(f"{m} & {b} & ${_latex_poly(by_deg.get(m, {}))}$ \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"


_FORMATS = {"json": to_json, "csv": to_csv, "latex": to_latex}


def emit(rec: ResultRecord, fmt: str = "json", out: str | os.PathLike | None = None) -> str:
    """Serialise ``rec``; also write it to ``out`` when given."""
    if fmt not in _FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    text = _FORMATS[fmt](rec)
    if out is not None:
        Path(out).write_text(text)
    return text


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def cache_dir() -> Path:
    env = os.environ.get("ELLCOH_CACHE_DIR")
    return Path(env) if env else Path(user_cache_dir("ellcoh"))


def _key(kind: str, n: int, N: int | None, equivariant: bool, bhash: str) -> str:
    level = "x" if N is None else str(N)
    return f"{kind}-n{n}-N{level}-{'eq' if equivariant else 'plain'}-v{__version__}-{bhash}.json"


def cached(kind: str, n: int, N: int | None, equivariant: bool,
           compute: Callable[[], ResultRecord], use_cache: bool = True) -> ResultRecord:
    """
    Return the cached record if present and valid, otherwise compute and store
    it.  A corrupt entry is recomputed with a warning; an unusable cache
    directory only disables caching.
    """
    if not use_cache:
        return compute()
    from .cohomology import basis_hash

    bhash = basis_hash(n)
    try:
        d = cache_dir()
        d.mkdir(parents=True, exist_ok=True)
        path = d / _key(kind, n, N, equivariant, bhash)
        lock = FileLock(str(path) + ".lock")
        lock.acquire(timeout=600)
    except OSError as exc:
        log.warning("cache unavailable (%s); computing without cache", exc)
        return compute()
    try:
        if path.exists():
            try:
                rec = from_json(path.read_text())
                if (rec.n, rec.N) != (n, N) or rec.meta.get("basis_hash") != bhash:
                    raise ValueError("cache entry does not match its key")
                check_record(rec)
                return rec
            except (ValueError, KeyError, TypeError, ArithmeticError) as exc:
                log.warning("corrupt cache entry %s (%s); recomputing", path.name, exc)
        rec = compute()
        try:
            tmp = path.with_suffix(".tmp")
            tmp.write_text(to_json(rec))
            tmp.replace(path)
        except OSError as exc:
            log.warning("could not write cache entry (%s)", exc)
        return rec
    finally:
        lock.release()
