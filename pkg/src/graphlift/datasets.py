"""Named network-repository datasets with a local, checksum-pinned cache."""

from __future__ import annotations

import gzip
import hashlib
import io
import json
import logging
import os
import shutil
import urllib.request
import zipfile
from dataclasses import dataclass
from pathlib import Path

from .graph import Graph, largest_component, load_edge_list

logger = logging.getLogger(__name__)

CACHE_ENV = "GRAPHLIFT_DATA"
BASE_URL = "https://nrvis.com/download/data"


class DatasetError(RuntimeError):
    """Unknown dataset, failed download or checksum mismatch."""


@dataclass(frozen=True)
class Dataset:
    name: str
    category: str
    vertices: int
    edges: int
    sha256: str | None = None

    @property
    def url(self) -> str:
        return f"{BASE_URL}/{self.category}/{self.name}.zip"


REGISTRY = {
    d.name: d
    for d in (
        Dataset("bio-celegansneural", "bio", 297, 2148),
        Dataset("ia-email-univ", "ia", 1133, 5451),
        Dataset("misc-polblogs", "misc", 1224, 16718),
        Dataset("misc-as-caida", "misc", 26475, 52281),
        Dataset("misc-fullb", "misc", 199187, 5754445),
    )
}


def cache_dir(path: str | os.PathLike | None = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "graphlift"


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _lookup(name: str) -> Dataset:
    try:
        return REGISTRY[name]
    except KeyError:
        raise DatasetError(f"unknown dataset {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


def _pins(root: Path) -> dict:
    f = root / "checksums.json"
    return json.loads(f.read_text()) if f.exists() else {}


def _save_pins(root: Path, pins: dict) -> None:
    (root / "checksums.json").write_text(json.dumps(pins, indent=2, sort_keys=True) + "\n")


def cached_path(name: str, root: str | os.PathLike | None = None) -> Path | None:
    """Path of the extracted edge file if ``name`` has been fetched."""
    _lookup(name)
    candidate = cache_dir(root) / name / f"{name}.edges"
    return candidate if candidate.exists() else None


def _download(url: str, dest: Path) -> None:
    with urllib.request.urlopen(url, timeout=60) as resp, open(dest, "wb") as out:
        shutil.copyfileobj(resp, out)


def _extract_edges(archive: Path, name: str, dest: Path) -> None:
    """Pull the edge-list member out of the archive, normalized to plain text."""
    with zipfile.ZipFile(archive) as zf:
        members = [m for m in zf.namelist() if not m.endswith("/") and not m.lower().endswith((".txt", ".readme", ".md"))]
        if not members:
            raise DatasetError(f"archive for {name} holds no edge list")
        member = next((m for m in members if m.endswith(".mtx")), members[0])
        raw = zf.read(member)
    fmt = "mtx" if member.endswith(".mtx") else "plain"
    g = load_edge_list(io.BytesIO(raw), fmt)
    with open(dest, "w", encoding="utf-8") as out:
        out.write(f"% {name}: {g.n} vertices, {g.m} edges (simplified from {member})\n")
        for u, v in g.edges:
            out.write(f"{g.labels[u]} {g.labels[v]}\n")


def fetch(name: str, root: str | os.PathLike | None = None, sha256: str | None = None,
          force: bool = False, downloader=_download) -> Path:
    """Download ``name`` into the cache and return its edge file.

    The archive checksum is verified against ``sha256``, then against the
    registry pin, then against the pin recorded on first download.
    """
    ds = _lookup(name)
    root = cache_dir(root)
    target = root / name
    edges = target / f"{name}.edges"
    if edges.exists() and not force:
        return edges
    target.mkdir(parents=True, exist_ok=True)
    archive = target / f"{name}.zip"
    try:
        downloader(ds.url, archive)
    except OSError as exc:
        raise DatasetError(f"could not download {ds.url}: {exc}") from exc
    digest = _sha256(archive)
    pins = _pins(root)
    expected = sha256 or ds.sha256 or pins.get(name)
    if expected is not None and digest != expected:
        archive.unlink()
        raise DatasetError(f"checksum mismatch for {name}: got {digest}, expected {expected}")
    try:
        _extract_edges(archive, name, edges)
    except zipfile.BadZipFile as exc:
        raise DatasetError(f"download of {name} is not a zip archive") from exc
    if expected is None:
        pins[name] = digest
        _save_pins(root, pins)
        logger.info("pinned %s sha256 %s", name, digest)
    return edges


def open_stream(path: str | os.PathLike):
    """Binary stream for ``path``, transparently gunzipped."""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def guess_format(path: str | os.PathLike) -> str:
    name = Path(path).name
    if name.endswith(".gz"):
        name = name[:-3]
    return "mtx" if name.endswith(".mtx") else "plain"


def load_graph(path: str | os.PathLike, format: str = "auto", connected: bool = True) -> Graph:
    fmt = guess_format(path) if format == "auto" else format
    with open_stream(path) as fh:
        g = load_edge_list(fh, fmt)
    return largest_component(g) if connected else g


def load_dataset(name: str, root: str | os.PathLike | None = None) -> Graph:
    """Load a fetched dataset; raises :class:`DatasetError` if it is not cached."""
    ds = _lookup(name)
    path = cached_path(name, root)
    if path is None:
        raise DatasetError(f"dataset {name} is not cached; run `graphlift fetch {name}`")
    g = load_graph(path, "plain")
    if (g.n, g.m) != (ds.vertices, ds.edges):
        logger.warning("%s has %d vertices and %d edges; reference sizes are %d and %d",
                       name, g.n, g.m, ds.vertices, ds.edges)
    return g
