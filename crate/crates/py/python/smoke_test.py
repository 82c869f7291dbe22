"""Quick end-to-end check of the pyrmove extension module."""

import math
import os
import tempfile

import pyrmove


def main():
    gap = pyrmove.gen_integrality_gap(3, 1.0, 6)
    assert (gap.n, gap.k, gap.r) == (11, 2, 3), gap
    lp, rows = pyrmove.solve_lp(gap)
    assert math.isclose(lp, 0.25, rel_tol=1e-6), lp
    assert len(rows) == gap.n and all(math.isclose(sum(r), 1.0) for r in rows)
    exact = pyrmove.solve(gap, "exact")
    assert exact.cut_value == 1.0 and exact.moves <= gap.r, exact

    inst = pyrmove.Instance(
        4, [(0, 2, 2.0), (2, 3, 1.0), (3, 1, 2.0), (2, 1, 0.5)], [0, 1, 0, 1], [0, 1], 1
    )
    assert inst.initial_cut() == 1.5
    assert pyrmove.Instance.from_text(inst.to_text()) == inst
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "t.inst")
        inst.save(path)
        assert pyrmove.Instance.load(path) == inst
    points = pyrmove.breakpoints(inst)
    assert points[-1][0] == 0

    sbm = pyrmove.gen_sbm(15, 3, 0.3, 0.1, seed=7, r=2)
    for name in pyrmove.algorithms():
        if name == "two-part":
            try:
                pyrmove.solve(sbm, name)
            except pyrmove.RmoveError:
                continue
            raise AssertionError("two-part accepted k = 3")
        res = pyrmove.solve(sbm, name, seed=1)
        bound = 4 * sbm.r if name == "bicriteria" else sbm.r
        assert res.moves <= bound, (name, res)
        assert math.isclose(res.cut_value, sbm.cut_value(res.labels)), name
        print(f"{name:16s} cut={res.cut_value:g} moves={res.moves}")

    try:
        pyrmove.solve(sbm, "simplex")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown algorithm accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
