"""Regenerate src/optchain/data/moebius.json.

Searches the 2x2x2 Freudenthal cube for a closed zig-zag strip
v0..v(L-1) with triangles (v_i, v_i+1, v_i+2) mod L. For odd L the strip
is a Moebius band whose boundary is the single cycle v0, v2, v4, ...
"""
import hashlib
import json
import sys
from pathlib import Path

from optchain.gadgets import freudenthal_cube


def find_strip(X, L):
    tris = set(X.simplices[2])
    adj = {v: set() for v in range(X.vertex_count)}
    for a, b in X.simplices[1]:
        adj[a].add(b)
        adj[b].add(a)
    tri = lambda a, b, c: tuple(sorted((a, b, c))) in tris

    def extend(seq):
        if len(seq) == L:
            closing = [(seq[-2], seq[-1], seq[0]), (seq[-1], seq[0], seq[1])]
            if all(tri(*t) for t in closing):
                return seq
            return None
        for v in sorted(adj[seq[-1]]):
            if v in seq or v < seq[0]:
                continue
            if len(seq) >= 2 and not tri(seq[-2], seq[-1], v):
                continue
            found = extend(seq + [v])
            if found:
                return found
        return None

    for start in range(X.vertex_count):
        found = extend([start])
        if found:
            return found
    return None


def main():
    X = freudenthal_cube(2)
    for L in (7, 9, 11):
        seq = find_strip(X, L)
        if seq:
            break
    else:
        sys.exit("no strip found")
    strip = [sorted((seq[i], seq[(i + 1) % L], seq[(i + 2) % L])) for i in range(L)]
    curve = [[seq[(2 * i) % L], seq[(2 * i + 2) % L]] for i in range(L)]
    doc = {
        "description": "Freudenthal 2x2x2 cube with a Moebius strip in its 2-skeleton",
        "tetrahedra": [list(t) for t in X.simplices[3]],
        "coordinates": [[int(c) for c in X.coordinates[v]] for v in range(X.vertex_count)],
        "strip_cycle": seq,
        "strip": strip,
        "boundary_curve": curve,
    }
    out = Path(__file__).resolve().parents[1] / "src/optchain/data/moebius.json"
    raw = (json.dumps(doc, indent=1) + "\n").encode()
    out.write_bytes(raw)
    print(out, "L =", L, "sha256", hashlib.sha256(raw).hexdigest())


if __name__ == "__main__":
    main()
