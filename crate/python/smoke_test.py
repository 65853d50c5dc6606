"""Smoke test for the transmean Python extension.

Build and run:
    cargo build --release -p transmean-python --features extension-module
    cp target/release/libtransmean_py.so python/transmean.so
    python3 python/smoke_test.py
"""

from fractions import Fraction

import transmean
from transmean import Ordinal, Seq


def main():
    w = Ordinal.omega()
    assert str(Ordinal("1") + w) == "w"
    assert str(w * Ordinal("2")) == "w*2"
    assert Ordinal("w") < Ordinal("w+1")
    assert Ordinal("w^2*3 + w*2 + 5").decomp() == (Ordinal("2"), "3", Ordinal("w*2 + 5"))
    assert str(Ordinal("w").subtract_from(Ordinal("w^2"))) == "w^2"

    osc = Seq("osc(0,1)")
    assert osc.upper_mean() == Fraction(2, 3)
    assert osc.lower_mean() == Fraction(1, 3)
    assert osc.mean() is None
    assert osc.prefix(7) == [0, 1, 1, 0, 0, 0, 0]
    assert Seq("cat(const(1;3), const(0;w))").mean() == 0

    halves = Seq("repw(cat(const(0;w),const(1;w)))").divide(w)
    assert str(halves) == "repw(cat(const(0;1), const(1;1)))"
    assert halves.mean() == Fraction(1, 2)
    try:
        Seq("const(1; w+1)").divide(w)
    except transmean.DivisionError as e:
        assert str(e).startswith("NotDivisible")
    else:
        raise AssertionError("w + 1 is not divisible by w")

    try:
        Seq("const(a;w)")
    except ValueError:
        pass
    else:
        raise AssertionError("labels are not real values")

    laws = transmean.run_laws(seed=42, cases=50)
    assert len(laws) == 13 and all(passed for _, passed, _, _ in laws), laws

    space = "outcome a 1/2\noutcome b 1/3\noutcome c 1/6\n"
    x = transmean.build_capture(space, depth=1)
    ok, lines = transmean.verify_capture(space, x, w)
    assert ok and "EVENT {a,c} m=2/3 M=2/3 PASS" in lines, lines

    print("smoke test passed")


if __name__ == "__main__":
    main()
