"""Smoke test for the apartlab extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`
or `pip install --no-build-isolation ./crates/py`, then run
`python python/smoke_test.py`.
"""

import json
import sys

import apartlab


def main() -> int:
    d = apartlab.Space.discrete(3)
    assert d.n == 3
    assert all(r["holds"] for r in d.check_axioms())
    assert d.apart([0], [1, 2])
    assert not d.apart([0], [0])

    # neq = p = {(0,1)}: a pre-apartness that is not an apartness.
    m = [[False, True, False], [True, False, False], [False, False, False]]
    s = apartlab.Space(m, m)
    b5 = s.check("B5")
    assert not b5["holds"]
    assert b5["witness"] == {"A": [0], "x": 1}, b5
    assert s.check("B5", brute_force=True)["holds"] is False
    v = s.verdicts()
    assert v["B4"] and not v["EF"] and not v["NN"]

    back = apartlab.Space.from_json(s.to_json())
    assert back == s
    assert json.loads(s.to_json())["kind"] == "abstract"

    metric = apartlab.from_metric([["0", "1/2"], ["1/2", "0"]])
    assert metric == apartlab.Space.discrete(2)
    assert apartlab.cantor(2).n == 4

    u = apartlab.disjoint_union(d, metric)
    assert u.n == 5 and all(r["holds"] for r in u.check_axioms())
    assert apartlab.product(d, metric).n == 6
    assert apartlab.subspace(d, [0, 2]).n == 2

    sc = apartlab.is_strongly_continuous([0, 0, 0], d, d)
    assert sc["holds"]
    domain, image = apartlab.glue_map([0, 1], [1, 2], d)
    assert image == [0, 1, 1, 2]
    assert apartlab.is_strongly_continuous(image, domain, d)["holds"]

    found = apartlab.search(3, require=["B1", "B2", "B3", "B4"], forbid=["B5"])
    assert len(found) == 3
    assert apartlab.search(3, require=["B4"], forbid=["B5"], canonical=True)[0]["canonical"]["n"] == 3

    harness = apartlab.union_harness(3)
    assert [c["holds"] for c in harness["checks"]] == [True] * 5

    net = apartlab.net_report(d, [[True, True], [False, True]], [0, 2])
    assert net["totally_cauchy"]["holds"] and net["converges_to"] == [2]

    cat = apartlab.catalog(3)
    assert cat["levels"][2]["classes"] == 10

    try:
        apartlab.Space.from_json('{"version": 1, "kind": "abstract", "neq": [[0,1],[1]], "p": [[0]]}')
    except apartlab.ParseError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("ragged matrix accepted")
    try:
        apartlab.subspace(d, [])
    except apartlab.InvariantError:
        pass
    else:
        raise AssertionError("empty carrier accepted")

    print("apartlab smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
