"""Smoke test for the fatdecomp_py extension.

Build first:  pip install --no-build-isolation ./crates/py
Then run:     python3 python/smoke_test.py
"""

import itertools

import fatdecomp_py as fd


def subdivided(pairs, s):
    """Replace every edge of a small graph by a path with s inner vertices."""
    n = 1 + max(max(p) for p in pairs)
    edges = []
    for u, v in pairs:
        prev = u
        for _ in range(s):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, v))
    return edges, n


def main():
    c = fd.constants(1)
    assert c["f1"] == 22 and c["f0"] > c["r2"] > c["r1"], c

    path = [(i, i + 1) for i in range(30)]
    out = fd.decompose(path, target="k4minus")
    assert out["branch"] == "decomposition", out
    graph = fd.edge_list(path)
    ok, msg = fd.verify(graph, out["certificate"], "decomposition", target="k4minus", fat=1)
    assert ok, msg
    ok, msg = fd.verify(graph, out["qi"], "qi", decomposition=out["certificate"])
    assert ok, msg

    # drop vertex 5 from every bag: the check must fail
    lines = []
    for line in out["certificate"].splitlines():
        if line.startswith("bag"):
            head, tail = line.split(":", 1)
            line = head + ":" + " ".join(t for t in tail.split() if t != "5")
        lines.append(line)
    ok, msg = fd.verify(graph, "\n".join(lines) + "\n", "decomposition")
    assert not ok and "covering" in msg, msg

    k4_minus = [p for p in itertools.combinations(range(4), 2) if p != (2, 3)]
    edges, n = subdivided(k4_minus, 60)
    out = fd.decompose(edges, n=n, target="k4minus", fat=1)
    assert out["branch"] == "witness", out["branch"]
    assert out["fatness"] >= 1
    ok, msg = fd.verify(fd.edge_list(edges, n), out["certificate"], "model", target="k4minus", fat=1)
    assert ok, msg
    assert not fd.is_minor_free(fd.edge_list(edges, n), "k4minus")
    assert fd.is_minor_free(graph, "k4")

    out = fd.decompose(path, target="k4", budget=0, scaled_constants=4)
    assert out["branch"] in ("decomposition", "budget-error"), out

    try:
        fd.decompose(path, target="k5")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown target accepted")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
