"""Download the dolphin network into the package data directory.

Usage:
    python scripts/fetch_networks.py [local dolphins.zip or .gml]
"""

import sys

from netsens.datasets import fetch_dolphins

if __name__ == "__main__":
    path = fetch_dolphins(sys.argv[1] if len(sys.argv) > 1 else None)
    print(f"wrote {path}")
