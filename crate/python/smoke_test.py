"""Smoke test for the Python extension: `python python/smoke_test.py` or pytest."""

import json

import ufolab

Z2 = {"kind": "cayley", "group": {"backend": "free_abelian", "params": {"dim": 2}}, "radius": 0}


def wall():
    box = lambda xs, ys: [[x, y] for x in xs for y in ys]
    return {"u": box(range(7, 14), range(-3, 0)), "f": box(range(0, 21), [0]), "o": box(range(7, 14), range(1, 4))}


def test_wall():
    rep = ufolab.verify_ufo(Z2, wall(), (1, 4, 18))
    assert rep["accept"] and rep["cond3"]["min_avoiding_distance"] == 18
    assert not ufolab.verify_ufo(json.dumps(Z2), wall(), (1, 4, 19))["accept"]


def test_families():
    ufo, params = ufolab.zd_ufo(2, 1, 2)
    assert params == (1, 4, 8)
    assert ufolab.verify_ufo(Z2, ufo, params)["accept"]
    _, params = ufolab.pentagon_ufo(1, 2)
    assert params == (1, 7, 2)


def test_groups_and_graphs():
    assert ufolab.britton_reduce(1, 2, "b a b_inv a_inv a_inv") == ""
    assert ufolab.britton_reduce(1, 2, "b_inv a b") == "b_inv a b"
    f2 = {"kind": "cayley", "group": {"backend": "free", "params": {"rank": 2}}, "radius": 0}
    assert ufolab.ends_lower_bound(f2, 0, 3) == 4


def test_mirror_and_qi():
    keys = ["", "a", "a_inv", "a a", "a_inv a_inv"]
    codes = ["u+1", "o+0", "star+0", "star+1", "star+0"]
    pattern = {"rank": 1, "k": 1, "A": 1, "values": dict(zip(keys, codes))}
    assert ufolab.mirror_check(pattern) == "ALLOWED"
    pattern["values"]["a"] = "o-0"
    assert ufolab.mirror_check(pattern) == "MATCHING_VIOLATION"
    alpha, m2, k2, r2 = ufolab.derived_constants(1.0, 0.0, 0.0, 4, 100, 4, 18)
    assert (alpha, m2, k2, r2) == (1.0, 23, 4, 18)


def test_errors_and_cli():
    try:
        ufolab.verify_ufo(Z2, {"u": [[0, 0]], "f": [[0, 0]], "o": [[1, 0]]}, (1, 1, 1))
    except ValueError as e:
        assert "disjoint" in str(e)
    else:
        raise AssertionError("overlapping sets accepted")
    code, out, _ = ufolab.run_cli(["--json-indent", "0", "mirror-enumerate", "--k", "1", "--A", "1", "--budget", "100"])
    assert code == 0 and json.loads(out)["exhausted"] is False


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
