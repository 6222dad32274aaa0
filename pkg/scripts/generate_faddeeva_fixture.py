"""Regenerate the arbitrary-precision Faddeeva reference table.

Writes tests/fixtures/faddeeva_reference.txt: 30 entries spanning the
argument ranges the propagation kernel visits (near-real resonance
arguments, rotated third-quadrant points, moderate |z|), each evaluated
with mpmath at 40 decimal digits.  Arguments are rounded to doubles
before evaluation and printed with shortest round-trip notation, so a
consumer parsing the file evaluates at exactly the tabulated point; w is
printed to 17 significant digits (sub-ulp as a double).

Run from the repository root:

    python3 scripts/generate_faddeeva_fixture.py
"""

from __future__ import annotations

import pathlib

import mpmath as mp

mp.mp.dps = 40

_ROT = mp.exp(-3j * mp.pi / 4)


def faddeeva_reference(z: mp.mpc) -> mp.mpc:
    """w(z) = exp(-z^2) * erfc(-i z) at working precision."""
    return mp.exp(-(z**2)) * mp.erfc(-1j * z)


def fixture_points() -> list:
    pts = []
    # axis and near-axis arguments where cancellation is worst
    for x in (0.25, 1.0, 3.0, 7.5):
        pts.append(mp.mpc(x, 0.001))
        pts.append(mp.mpc(-x, 0.25))
    # upper half-plane: plain asymptotic region
    for x, y in ((0.5, 0.5), (2.0, 1.5), (5.0, 0.1), (8.0, 4.0), (0.0, 6.0)):
        pts.append(mp.mpc(x, y))
    # third-quadrant points of the form rot*(kappa*sqrt(t)) that the
    # kernel produces for decaying poles
    for kappa in (mp.mpc(3.11, -0.001), mp.mpc(6.26, -0.004), mp.mpc(9.4, -0.009)):
        for t in (0.5, 5.0, 50.0):
            pts.append(_ROT * kappa * mp.sqrt(t))
    # mirror-pole images in the first quadrant
    for kappa in (mp.mpc(-3.11, -0.001), mp.mpc(-6.26, -0.004)):
        for t in (1.0, 10.0):
            pts.append(_ROT * kappa * mp.sqrt(t))
    # small |z| where the series region matters
    pts += [mp.mpc(0.01, 0.02), mp.mpc(-0.1, -0.05), mp.mpc(0.0, 0.0), mp.mpc(1.0, -1.0)]
    return pts[:30]


def main() -> None:
    root = pathlib.Path(__file__).resolve().parent.parent
    target = root / "tests" / "fixtures" / "faddeeva_reference.txt"
    target.parent.mkdir(parents=True, exist_ok=True)
    points = fixture_points()
    assert len(points) == 30
    lines = [
        "# Faddeeva function reference values, mpmath dps=40",
        "# columns: re(z) im(z) re(w) im(w); z exact as doubles, w to 17 digits",
    ]
    for z in points:
        # round the argument to doubles first: the tabulated w then belongs
        # to exactly the z a double-precision consumer will reconstruct
        zr, zi = float(z.real), float(z.imag)
        w = faddeeva_reference(mp.mpc(zr, zi))
        lines.append(
            f"{zr!r} {zi!r} "
            f"{mp.nstr(w.real, 17, strip_zeros=False)} "
            f"{mp.nstr(w.imag, 17, strip_zeros=False)}"
        )
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {target} ({len(points)} entries)")


if __name__ == "__main__":
    main()
