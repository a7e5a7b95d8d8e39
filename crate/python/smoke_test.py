"""Smoke test for the `capset` Python module.

Uses an installed `capset` if importable, otherwise the library built by
`cargo build -p capset-py` under target/{release,debug}.
"""

import importlib.util
import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import capset
        return capset
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libcapset.so", "libcapset.dylib", "capset.dll"):
            built = ROOT / "target" / profile / name
            if built.exists():
                tmp = Path(tempfile.mkdtemp())
                target = tmp / ("capset.pyd" if name.endswith(".dll") else "capset.so")
                shutil.copy(built, target)
                spec = importlib.util.spec_from_file_location("capset", target)
                module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(module)
                return module
    sys.exit("capset module not found; run `cargo build -p capset-py` first")


def main():
    cs = load()

    f = cs.PrimeField(7)
    assert f.mul(3, 5) == 1 and f.inv(3) == 5 and f.neg(0) == 0
    try:
        cs.PrimeField(9)
    except cs.CapsetError:
        pass
    else:
        raise AssertionError("9 accepted as a prime")

    assert 2.835 <= cs.headline_base(3) <= 2.845
    assert cs.dim_l(3, 4, 3) == 23
    assert cs.extended_binomial(3, 4, 2) == 6
    assert cs.verify_duality(5, 5)
    report = cs.verify_entropy_lemma(3, 9)
    assert report["holds"], report

    assert cs.rank(3, [[1, 2], [2, 1]]) == 1
    assert cs.solve(5, [[1, 1], [0, 1]], [3, 1]) == [2, 1]

    poly = cs.Poly.parse(3, 2, "1 + x1*x2^2")
    values = poly.evaluate_all()
    assert cs.Poly.interpolate(3, 2, values) == poly
    assert poly.evaluate([1, 2]) == 2 and poly.degree() == 3

    square = cs.PointSet(3, 2, [[0, 0], [1, 0], [0, 1], [1, 1]])
    ok, witness = square.is_progression_free()
    assert ok and witness is None and len(square) == 4

    line = cs.PointSet.parse("p=3 n=2\n0 0\n1 1\n2 2\n")
    ok, witness = line.is_progression_free()
    assert not ok and witness is not None

    size, optimal, best = cs.max_progression_free(3, 3)
    assert size == 9 and optimal and len(best) == 9

    transcript = cs.prove(best)
    assert transcript["conclusion"]["holds"]
    assert all(c["holds"] for c in transcript["checks"])
    verdict = cs.verify_transcript(json.dumps(transcript))
    assert verdict["all_hold"] and not verdict["mismatches"], verdict

    greedy = cs.greedy_progression_free(3, 6, seed=1)
    assert greedy.is_progression_free()[0]
    assert len(greedy) <= cs.main_bound(3, 6)

    print("smoke test ok")


if __name__ == "__main__":
    main()
