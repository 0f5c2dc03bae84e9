#!/usr/bin/env python3
"""Smoke test for the sogkit_py extension module.

Builds nothing itself: run `cargo build -p sogkit-py` (or --release) first.
The script locates the compiled cdylib, exposes it under the importable
module name, and drives a miniature end-to-end pipeline.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsogkit_py.so", "sogkit_py.so", "libsogkit_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("cdylib not found; run `cargo build -p sogkit-py` first")
    stage = Path(tempfile.mkdtemp(prefix="sogkit-py-"))
    shutil.copy2(built, stage / "sogkit_py.so")
    sys.path.insert(0, str(stage))
    import sogkit_py

    return sogkit_py


def check(label, condition):
    status = "ok" if condition else "FAIL"
    print(f"  [{status}] {label}")
    if not condition:
        sys.exit(1)


def main():
    sk = load_module()
    print("sogkit_py loaded")

    prism = sk.Graph(
        ["u1", "u2", "u3", "w1", "w2", "w3"],
        [
            ("u1", "u2"), ("u2", "u3"), ("u1", "u3"),
            ("w1", "w2"), ("w2", "w3"), ("w1", "w3"),
            ("u1", "w1"), ("u2", "w2"), ("u3", "w3"),
        ],
    )
    print(f"input: {prism!r}")
    check("prism is connected", prism.is_connected())
    check("prism has no 2-coloring", sk.find_k_coloring(prism, 2) is None)

    coloring = sk.find_k_coloring(prism, 3)
    check("prism has a 3-coloring", coloring is not None)

    amplified = sk.amplify_3con(prism)
    check("amplification triples the vertex count", amplified.vertex_count() == 18)
    check("amplification is 3-connected", sk.vertex_connectivity(amplified) >= 3)

    blocked, labels = sk.build_blocked_graph(prism, 3, 0)
    check("blocked graph has 137 vertices", blocked.vertex_count() == 137)

    rep, blocked2, labels2 = sk.represent_blocked_on_star(prism, coloring, 3)
    verdict = sk.verify_representation(rep, blocked2, "overlap")
    check("canonical star representation verifies", verdict["passed"])
    check("no illegal pairs", sk.find_illegal_pairs(rep, labels2, prism) == [])

    decoded = sk.decode_coloring(rep, labels2, prism, 3)
    recovered = decoded["coloring"]["assignment"]
    proper = all(
        recovered[a] != recovered[b] for (a, b) in prism.edges()
    )
    check(f"decode recovers a proper coloring from copy {decoded['copy']!r}", proper)

    sub_rep, sub_blocked, sub_labels = sk.represent_empty_blocked_subpaths(prism, coloring, 3)
    both = all(
        sk.verify_representation(sub_rep, sub_blocked, mode)["passed"]
        for mode in ("overlap", "intersection")
    )
    check("subpath representation verifies in both modes", both)

    c5 = sk.Graph(
        ["0", "1", "2", "3", "4"],
        [("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("0", "4")],
    )
    found = sk.find_representation(c5, 10, relation="overlap", leafage=2)
    check("search finds the 5-cycle on a path host", found["status"] == "found")
    host = found["representation"].host()
    check("witness host is a path", host.analyze()["is_path"])

    report = sk.audit_spanbranch(7, offset=2)
    check("boundary-count audit is clean", report["counterexamples"] == [])

    # Round-trip through JSON to exercise the wire formats.
    back = sk.Representation.from_json(rep.to_json())
    check("representation JSON round-trips", back.vertices() == rep.vertices())
    tree = sk.HostTree.from_json(json.dumps({
        "nodes": ["c1", "c2", "a", "b", "d", "e"],
        "edges": [["c1", "c2"], ["a", "c1"], ["b", "c1"], ["c2", "d"], ["c2", "e"]],
    }))
    d, u, k = sk.reduction_params_for_tree(tree)
    check("double star yields (d, u, k) = (3, 2, 4)", (d, u, k) == (3, 2, 4))

    print("smoke test passed")


if __name__ == "__main__":
    main()
