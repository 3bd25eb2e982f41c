"""Fetching the real-world networks used by the ``realworld-paper`` preset.

The networks are not redistributed with the package.  ``fetch_dolphins``
downloads Newman's copy of the Lusseau dolphin network (GML inside a zip)
and stores it as an edge list under ``netsens/data`` so that the network
source ``dolphins`` resolves.

    python scripts/fetch_networks.py            # download
    python scripts/fetch_networks.py dolphins.zip   # convert a local copy
"""

from __future__ import annotations

import io
import re
import urllib.request
import zipfile
from importlib import resources
from pathlib import Path

from .graph import Graph, largest_connected_component, write_edge_list

DOLPHINS_URL = "http://www-personal.umich.edu/~mejn/netdata/dolphins.zip"
DOLPHINS_SIZE = (62, 159)

_BLOCK = re.compile(r"\b(node|edge)\s*\[(.*?)\]", re.S)
_FIELD = re.compile(r"\b(id|label|source|target)\s+(\"[^\"]*\"|\S+)")


def gml_to_graph(text: str) -> Graph:
    """Undirected simple graph from the node/edge blocks of a GML document.

    Node labels become graph labels; nodes without one keep their id.
    """
    labels: dict[str, str] = {}
    pairs = []
    for kind, body in _BLOCK.findall(text):
        fields = {k: v.strip('"') for k, v in _FIELD.findall(body)}
        if kind == "node":
            labels[fields["id"]] = fields.get("label", fields["id"])
        else:
            pairs.append((fields["source"], fields["target"]))
    if not labels:
        raise ValueError("no nodes found in GML input")
    ids = list(labels)
    index = {k: i for i, k in enumerate(ids)}
    edges = [(index[a], index[b]) for a, b in pairs if a != b]
    edges = {(min(e), max(e)) for e in edges}
    return Graph.from_edges(len(ids), sorted(edges), [labels[k] for k in ids])


def _gml_from_archive(data: bytes) -> str:
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        name = next(n for n in zf.namelist() if n.endswith(".gml"))
        return zf.read(name).decode("utf-8", errors="replace")


def data_dir() -> Path:
    return Path(str(resources.files("netsens") / "data"))


def fetch_dolphins(source: str | Path | None = None, dest: Path | None = None) -> Path:
    """Store the dolphin network as ``dolphins.txt``; returns the written path.

    ``source`` may be a local ``.zip`` or ``.gml`` file; by default the zip is
    downloaded from :data:`DOLPHINS_URL`.

    Raises:
        ValueError: the network does not have the expected 62 nodes and 159 edges.
    """
    if source is None:
        with urllib.request.urlopen(DOLPHINS_URL, timeout=60) as resp:
            text = _gml_from_archive(resp.read())
    else:
        raw = Path(source).read_bytes()
        text = _gml_from_archive(raw) if zipfile.is_zipfile(io.BytesIO(raw)) else raw.decode()
    g = largest_connected_component(gml_to_graph(text))
    if (g.n, g.m) != DOLPHINS_SIZE:
        raise ValueError(f"expected {DOLPHINS_SIZE[0]} nodes and {DOLPHINS_SIZE[1]} edges, "
                         f"got {g.n} and {g.m}")
    dest = dest or data_dir() / "dolphins.txt"
    dest.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, dest)
    return dest
