"""On-disk cache of the constructed arrangement data in POLY4 v1 files.

Layout: ``<cache>/<sha256 of recipe>/`` holding one ``.poly4`` file per
polynomial and a ``manifest.json`` with the sha256 of every file. A missing
or mismatching file invalidates the entry, which is then rebuilt.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .g31build import (
    DET_E_CONSTANT,
    EXPONENTS,
    InvariantSet,
    PrimedColumns,
    SyzygyBasis,
    build_f,
    build_invariants,
    build_syzygy_basis,
    gradient,
    primed_columns,
)
from .poly import PolyMatrix, Polynomial, dot, parse_poly4

log = logging.getLogger(__name__)

CACHE_ENV = "ARRMONO_CACHE"
RECIPE = {
    "format": "POLY4 v1",
    "arrangement": "G31",
    "factors": "xyzt, u^4-v^4, (a^2 -+ b^2) over the 16 quadrics",
    "C_row2": ["0", "f4", "-f1/5", "-f2/1620"],
    "f4": "Hess(f1)/265531392",
    "layout": 1,
}


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "arrmono"


def recipe_hash() -> str:
    blob = json.dumps(RECIPE, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class ArrangementData:
    f: Polynomial
    basic: tuple[Polynomial, Polynomial, Polynomial, Polynomial]
    E: SyzygyBasis
    P: PrimedColumns
    invariants: InvariantSet | None = None

    @property
    def grad(self) -> tuple[Polynomial, ...]:
        return gradient(self.f)


def construct() -> ArrangementData:
    f = build_f()
    inv = build_invariants()
    E = build_syzygy_basis(inv, f)
    P = primed_columns(E)
    return ArrangementData(f, inv.basic, E, P, inv)


def _files(data: ArrangementData) -> dict[str, Polynomial]:
    out = {"f.poly4": data.f}
    for i, p in enumerate(data.basic, 1):
        out[f"f{i}.poly4"] = p
    for i in range(4):
        for j in range(4):
            out[f"E_{i + 1}_{j + 1}.poly4"] = data.E.E[i, j]
    for j, g in enumerate(data.E.g, 2):
        out[f"g_{j}.poly4"] = g
    for letter, row in zip("mnpq", data.P.rows):
        for i, p in enumerate(row, 1):
            out[f"{letter}prime_{i}.poly4"] = p
    return out


def _sha(b: bytes) -> str:
    return hashlib.sha256(b).hexdigest()


def entry_dir(cache_dir: Path) -> Path:
    return Path(cache_dir) / recipe_hash()


def store(data: ArrangementData, cache_dir: Path) -> Path:
    d = entry_dir(cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    hashes = {}
    for name, p in _files(data).items():
        blob = p.serialize().encode()
        (d / name).write_bytes(blob)
        hashes[name] = _sha(blob)
    manifest = {"recipe": RECIPE, "version": __version__, "files": hashes, "checks": data.E.checks}
    tmp = d / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=1, sort_keys=True))
    tmp.replace(d / "manifest.json")
    return d


class CacheInvalid(Exception):
    pass


def load(cache_dir: Path) -> ArrangementData:
    """Read a cache entry, checking hashes and re-verifying the syzygy identities."""
    d = entry_dir(cache_dir)
    mpath = d / "manifest.json"
    if not mpath.exists():
        raise CacheInvalid("no manifest")
    try:
        manifest = json.loads(mpath.read_text())
    except ValueError as exc:
        raise CacheInvalid(f"unreadable manifest: {exc}") from None
    polys = {}
    for name, digest in manifest.get("files", {}).items():
        path = d / name
        if not path.exists():
            raise CacheInvalid(f"missing {name}")
        blob = path.read_bytes()
        if _sha(blob) != digest:
            raise CacheInvalid(f"hash mismatch in {name}")
        try:
            polys[name] = parse_poly4(blob.decode())
        except ValueError as exc:
            raise CacheInvalid(f"{name}: {exc}") from None
    try:
        f = polys["f.poly4"]
        basic = tuple(polys[f"f{i}.poly4"] for i in range(1, 5))
        E = PolyMatrix([[polys[f"E_{i}_{j}.poly4"] for j in range(1, 5)] for i in range(1, 5)])
        g = tuple(polys[f"g_{j}.poly4"] for j in (2, 3, 4))
        rows = [tuple(polys[f"{c}prime_{i}.poly4"] for i in (1, 2, 3)) for c in "mnpq"]
    except KeyError as exc:
        raise CacheInvalid(f"manifest lacks {exc}") from None
    basis = SyzygyBasis(E, g, dict(manifest.get("checks", {})))
    _reverify(f, basis, rows)
    return ArrangementData(f, basic, basis, PrimedColumns(*rows))


def _reverify(f: Polynomial, basis: SyzygyBasis, rows) -> None:
    grad = gradient(f)
    coords = Polynomial.gens()
    if basis.column(0) != coords:
        raise CacheInvalid("first column is not the Euler derivation")
    for j in (1, 2, 3):
        if not dot(basis.column(j), grad).is_zero():
            raise CacheInvalid(f"E[{j + 1}] does not annihilate grad f")
    if basis.column_degrees != EXPONENTS:
        raise CacheInvalid(f"column degrees {basis.column_degrees}")
    if basis.E.det() != DET_E_CONSTANT * f:
        raise CacheInvalid("det E differs from -486 f")
    for i, v in enumerate(coords):
        for j in range(3):
            if rows[i][j] * v != basis.E[i, j + 1]:
                raise CacheInvalid("primed rows inconsistent with E")


def load_or_build(cache_dir: Path | None) -> tuple[ArrangementData, str]:
    """Return the arrangement data and one of ``hit``, ``built``, ``rebuilt``, ``nocache``."""
    if cache_dir is None:
        return construct(), "nocache"
    status = "built"
    if (entry_dir(cache_dir) / "manifest.json").exists():
        try:
            return load(cache_dir), "hit"
        except CacheInvalid as exc:
            log.warning("cache entry invalid (%s); rebuilding", exc)
            status = "rebuilt"
    data = construct()
    store(data, cache_dir)
    return data, status
