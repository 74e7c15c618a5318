#!/usr/bin/env python3
"""Smoke test for the moonring_py extension module.

Builds the cdylib if needed, loads it, and exercises every exposed
operation against known values. Run from anywhere:

    python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import sysconfig
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_or_build_extension() -> Path:
    names = ["libmoonring_py.so", "libmoonring_py.dylib", "moonring_py.dll"]
    for profile in ("release", "debug"):
        for name in names:
            p = ROOT / "target" / profile / name
            if p.exists():
                return p
    print("building moonring-py ...")
    subprocess.run(
        ["cargo", "build", "-p", "moonring-py", "--release"], cwd=ROOT, check=True
    )
    for name in names:
        p = ROOT / "target" / "release" / name
        if p.exists():
            return p
    raise SystemExit("could not locate the built extension module")


def load_module():
    lib = find_or_build_extension()
    tmp = Path(tempfile.mkdtemp(prefix="moonring_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, tmp / f"moonring_py{suffix}")
    sys.path.insert(0, str(tmp))
    import moonring_py

    return moonring_py


def main() -> None:
    m = load_module()
    checks = 0

    def ok(cond, what):
        nonlocal checks
        assert cond, what
        checks += 1
        print(f"  ok: {what}")

    # catalog series
    j = m.j_series(3)
    ok(j.coeff(1) == 196884, "j q^1 coefficient")
    ok(j.coeff(0) == 744, "j constant term")
    t6a = m.hauptmodul("6A", 3)
    ok([t6a.coeff(e) for e in (1, 2, 3)] == [79, 352, 1431], "T_6A coefficients")
    ok(m.power_map("4A") == ["4A", "2B", "4A", "1A"], "4A power map")

    # series arithmetic
    q = m.Series([(1, Fraction(1))], 8)
    e = q.exp()
    ok(e.coeff(3) == Fraction(1, 6), "exp(q) q^3 = 1/6")
    back = e.log()
    ok(back.coeff(1) == 1 and back.coeff(2) == 0, "log(exp(q)) = q")
    prod = q * q
    ok(prod.coeff(2) == 1, "q * q = q^2")
    ok(m.eta_pow24(3).coeff(2) == -24, "eta^24 q^2 coefficient")

    # Green rings and characters
    ok(m.ring_labels("Z4")[:3] == ["A", "B", "C"], "Z4 labels")
    homs = m.ring_homs("Z4")
    ok(len(homs) == 8, "Z4 has 8 characters")
    ok(([1, 1, 2, 4, 2, 3, 3, 4, 4], "rank") in homs, "rank character present")
    ok(len(m.ring_homs("Z6_6A")) == 5, "Z6_6A has 5 characters")
    ok(m.adams("Z4", "C", 2) == {"A": -2, "E": 2}, "psi^2(C) = 2E - 2A")
    ok(m.adams("Z4", "D", 8) == {"A": 4}, "psi^8(D) = 4A")
    ok(m.tensor("Z4", "C^A", "C^B") == {"B": 1, "D": 2}, "C^A * C^B")
    ok(m.exterior_power("Z4", "D", 2) == {"C": 1, "D": 1}, "Lambda^2 D")
    ok(m.restrict("Z4", "C", "Z2") == {"I": 2}, "C restricts to 2I")
    ok(m.rank_of("Z6_6A", "G(1,2,3)") == 4, "rank of G(1,2,3)")

    # decompositions
    grades = m.decompose_4a_grades(3)
    ok(grades[2] == {"A": 276, "D": 49152}, "4A grade 2 multiplicities")
    ok(grades[3] == {"D": 5371904, "C^A": 2048}, "4A grade 3 multiplicities")
    d4b = m.d_series_4b_series(3)
    ok(d4b.coeff(1) == 48128, "4B d-series q^1")
    lower, upper, stride = m.feasibility_6a_interval(2)
    ok((lower, stride) == (79, 2) and upper <= 783, "6A feasibility at n=2")
    ok(
        m.feasibility_6a_multiplicities(2, 79) == [79, 352, 1431, 0, 31968],
        "6A witness multiplicities",
    )

    # quasi-replicability
    passed, violations = m.quasirep("4A", "trace-g", pmax=4, qmax=8)
    ok(passed and violations == [], "4A trace family vanishing")
    ok(m.knz(pmax=4, qmax=6), "denominator identity")
    residuals = m.probe_4b("2A", 4)
    ok(all(r == 0 for _, r in residuals), "replicable series satisfies the probe")

    print(f"all {checks} smoke checks passed")


if __name__ == "__main__":
    main()
