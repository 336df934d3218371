"""Regenerate the shipped category documents in src/anyonlab/catalog/.

Run from the repo root: python tools/make_catalog.py
"""

from __future__ import annotations

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "anyonlab" / "catalog"


def fusion_keys(labels, N):
    out = {}
    k = len(labels)
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if N[a][b][c]:
                    out[f"{labels[a]},{labels[b]},{labels[c]}"] = N[a][b][c]
    return out


def full_f_table(labels, N, special):
    """All demanded F keys; ``special`` maps (a,b,c,d,e,f) label tuples to values."""
    k = len(labels)
    F = {}
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    for e in range(k):
                        for f in range(k):
                            n1 = N[a][b][e] * N[e][c][d]
                            n2 = N[b][c][f] * N[a][f][d]
                            if not (n1 and n2):
                                continue
                            assert n1 == 1 and n2 == 1, "catalog is multiplicity-free"
                            key = (labels[a], labels[b], labels[c], labels[d],
                                   labels[e], labels[f])
                            val = special.get(key, 1.0)
                            F[f"{key[0]},{key[1]},{key[2]};{key[3]};{key[4]},{key[5]};0,0,0,0"] = [
                                float(val), 0.0]
    return F


def vec_zn(n):
    labels = [str(i) for i in range(n)]
    N = [[[1 if (a + b) % n == c else 0 for c in range(n)] for b in range(n)]
         for a in range(n)]
    return {
        "simples": labels,
        "unit": "0",
        "dual": {str(a): str((-a) % n) for a in range(n)},
        "fusion": fusion_keys(labels, N),
        "F": full_f_table(labels, N, {}),
        "unitary": True,
    }


def fibonacci():
    labels = ["1", "t"]
    idx = {"1": 0, "t": 1}
    N = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    for a in labels:
        for b in labels:
            for c in labels:
                if a == "1" or b == "1":
                    N[idx[a]][idx[b]][idx[c]] = int(c == (b if a == "1" else a))
    N[1][1][0] = 1
    N[1][1][1] = 1
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    special = {
        ("t", "t", "t", "t", "1", "1"): 1.0 / phi,
        ("t", "t", "t", "t", "1", "t"): 1.0 / math.sqrt(phi),
        ("t", "t", "t", "t", "t", "1"): 1.0 / math.sqrt(phi),
        ("t", "t", "t", "t", "t", "t"): -1.0 / phi,
    }
    return {
        "simples": labels,
        "unit": "1",
        "dual": {"1": "1", "t": "t"},
        "fusion": fusion_keys(labels, N),
        "F": full_f_table(labels, N, special),
        "unitary": True,
    }


def ising():
    labels = ["1", "p", "s"]  # vacuum, fermion, sigma
    idx = {l: i for i, l in enumerate(labels)}
    N = [[[0] * 3 for _ in range(3)] for _ in range(3)]

    def setN(a, b, cs):
        for c in cs:
            N[idx[a]][idx[b]][idx[c]] = 1

    setN("1", "1", ["1"]); setN("1", "p", ["p"]); setN("1", "s", ["s"])
    setN("p", "1", ["p"]); setN("p", "p", ["1"]); setN("p", "s", ["s"])
    setN("s", "1", ["s"]); setN("s", "p", ["s"]); setN("s", "s", ["1", "p"])
    s2 = 1.0 / math.sqrt(2.0)
    special = {
        ("s", "s", "s", "s", "1", "1"): s2,
        ("s", "s", "s", "s", "1", "p"): s2,
        ("s", "s", "s", "s", "p", "1"): s2,
        ("s", "s", "s", "s", "p", "p"): -s2,
        ("p", "s", "p", "s", "s", "s"): -1.0,
        ("s", "p", "s", "1", "s", "s"): 1.0,
        ("s", "p", "s", "p", "s", "s"): -1.0,
    }
    return {
        "simples": labels,
        "unit": "1",
        "dual": {"1": "1", "p": "p", "s": "s"},
        "fusion": fusion_keys(labels, N),
        "F": full_f_table(labels, N, special),
        "unitary": True,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    docs = {
        "vec-z2": vec_zn(2),
        "vec-z3": vec_zn(3),
        "fibonacci": fibonacci(),
        "ising": ising(),
    }
    for name, doc in docs.items():
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        print(f"wrote {name}.json ({len(doc['F'])} F entries)")


if __name__ == "__main__":
    main()
