"""Smoke test for the pline extension module."""

import pline


def main():
    z4 = pline.Ring("Z/4")
    assert z4.size == 4 and z4.is_commutative
    assert z4.units() == ["1", "3"]
    assert z4.add("3", "3") == "2"

    line = pline.ProjectiveLine("Z/4")
    assert len(line) == 6
    assert line.is_connected and line.diameters() == [2]
    assert line.distance("R(1,0)", "R(1,2)") == 2
    assert sorted(line.e2_orbit()) == sorted(line.points())

    word = line.chain_to_word(["R(1,0)", "R(0,1)", "R(1,1)"])
    assert line.word_to_point(word) == ["R(1,0)", "R(0,1)", "R(1,1)"]

    f3 = pline.ProjectiveLine("F3")
    assert f3.diameters() == [1] and len(f3.export()["edges"]) == 6

    assert pline.ge2_report("F2[e]")["is_ge2_ring"]
    assert pline.unimodular_report("M2(F2)")["equivalent"]

    form = pline.decompose("F2[X]", ["X^2+1", "X", "X", "1"])
    assert form["params"] == ["X", "X"] and (form["u"], form["v"]) == (1, 1)
    assert pline.compose("F3[X]", 1, 1, ["X"]) == ["X", "1", "2", "0"]

    assert pline.certify("F2[X]", "X", 8)["unbounded"]
    assert pline.xy_check("F5[X,Y]", 10)["all_hold"]

    chains = pline.ProjectiveLine("F2[e]").chains(["0", "1"])
    assert chains["axioms"]["passed"] and chains["contained_in_components"]

    try:
        pline.Ring("Z/0")
    except ValueError:
        pass
    else:
        raise AssertionError("Z/0 accepted")

    results = pline.verify(samples=100)
    failed = [r["name"] for r in results if not r["passed"]]
    assert not failed, failed
    print(f"smoke test ok: {len(results)} suite checks passed")


if __name__ == "__main__":
    main()
