"""Smoke test for the g2braid Python bindings.

Run after `pip install -e crates/g2braid-py --no-build-isolation`:

    python python/smoke.py
"""

import json
import sys

import g2braid_py as g


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    return cond


def main():
    ok = True

    mult = dict(g.multiplicities(3))
    ok &= check(mult[(1, 0)] == 4, "m((1,0),3) = 4")
    ok &= check(sum(m * m for m in mult.values()) == 35, "sum of squared multiplicities at level 3 is 35")

    d = json.loads(g.bratteli("g2", 0))
    ok &= check(len(d["levels"]) == 1, "level 0 diagram has a single node")
    ok &= check(g.bratteli("young", 4, "dot").startswith("digraph"), "DOT export")

    q = g.QScalar.q_pow
    ok &= check(g.QScalar.qint(2) == q(1) + q(-1), "[2] = q + q^-1")
    x = g.QScalar(4) / (g.QScalar(2) - q(1))
    ok &= check(g.QScalar.from_json(x.to_json()) == x, "QScalar JSON round trip")
    ok &= check(g.qdim(1, 0).eval("1") == ("7", "1"), "qdim V at q = 1 is 7")

    t = g.Tower("g2", "exact", seed=1)
    t.build_to(3)
    ok &= check(t.levels == 3, "exact tower built to level 3")
    ok &= check(t.block("0,0", "2,0") == [["q^2"]], "sigma_1 on the (2,0) channel is q^2")
    rows = t.verify()
    ok &= check(all(r[2] != "fail" for r in rows), f"{len(rows)} default checks pass")

    rows = g.verify_json(t.to_json(), "g2", ["braid", "central"])
    ok &= check(all(r[2] == "pass" for r in rows), "stored representation verifies")

    y = g.Tower("young", "eval", seed=2, eval_point="5/3")
    y.build_to(4)
    rows = y.verify(["braid", "spectrum"])
    ok &= check(all(r[2] == "pass" for r in rows), "Young tower at q = 5/3")

    try:
        g.Tower("g2", "eval", eval_point="0")
        ok &= check(False, "q = 0 rejected")
    except ValueError:
        ok &= check(True, "q = 0 rejected")

    print("smoke: " + ("pass" if ok else "FAIL"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
