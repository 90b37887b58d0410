#!/usr/bin/env python3
"""Smoke test for the matchings_py extension module.

Builds the cdylib if needed, imports it, and exercises the main types and
operations end to end: carrier arithmetic, matching search, witness
generation, and certificate re-validation.
"""

import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    lib = REPO / "target" / "release" / "libmatchings_py.so"
    if not lib.exists():
        print("building matchings-py (release)...")
        subprocess.run(
            ["cargo", "build", "--release", "-p", "matchings-py"],
            cwd=REPO,
            check=True,
        )
    if not lib.exists():  # e.g. macOS
        dylib = REPO / "target" / "release" / "libmatchings_py.dylib"
        if dylib.exists():
            lib = dylib
        else:
            sys.exit("cdylib not found under target/release")
    return lib


def import_module(lib: Path, workdir: Path):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = workdir / f"matchings_py{suffix}"
    shutil.copyfile(lib, target)
    sys.path.insert(0, str(workdir))
    import matchings_py  # noqa: E402

    return matchings_py


CHECKS = 0


def check(label: str, ok: bool) -> None:
    global CHECKS
    CHECKS += 1
    status = "ok" if ok else "FAIL"
    print(f"  {label}: {status}")
    if not ok:
        sys.exit(1)


def main() -> None:
    lib = build_extension()
    with tempfile.TemporaryDirectory() as tmp:
        m = import_module(lib, Path(tmp))
        print(f"imported matchings_py {m.__version__}")

        # carrier arithmetic
        z7 = m.Carrier("z:7")
        check("Z_7 add", z7.add("3", "5") == "1")
        check("Z_7 neg", z7.neg("3") == "4")
        check("Z_7 order", z7.element_order("3") == 7)
        check("Z_7 elements", z7.elements() == [str(i) for i in range(7)])
        klein = m.Carrier("z:2x2")
        check("Klein neg", klein.neg("(1,0)") == "(1,0)")
        dyadic = m.Carrier("dyadic")
        check("dyadic add", dyadic.add("1/2^1", "1/2^1") == "1")
        check("integer order", m.Carrier("int").element_order("2") is None)

        # Legendre symbol
        check("legendre(3,7)", m.legendre(3, 7) == -1)
        check("legendre(2,7)", m.legendre(2, 7) == 1)
        check("legendre(0,11)", m.legendre(0, 11) == 0)

        # matching search
        swap = m.find_matching("z:5", ["1", "2"], ["1", "2"])
        check("Z_5 swap matching", swap == [("1", "2"), ("2", "1")])
        check("Z_4 unmatchable pair", m.find_matching("z:4", ["0", "2"], ["1", "2"]) is None)
        unique = m.enumerate_matchings("z:5", ["1", "2", "3"], ["1", "2", "3"])
        check("Z_5 unique matching", unique == [[("1", "3"), ("2", "2"), ("3", "1")]])

        ok, violation = m.is_matching("z:5", ["1", "2"], ["1", "2"], [("1", "1"), ("2", "2")])
        check("violation reported", not ok and "2" in violation)

        prof = m.profile("z:7", [("1", "2"), ("2", "4"), ("4", "1")])
        check("profile fibers", prof == {"3": ["1"], "5": ["4"], "6": ["2"]})
        check("three-cycle not acyclic", m.is_acyclic("z:7", [("1", "2"), ("2", "4"), ("4", "1")]) is False)
        check(
            "orbit decomposition",
            m.orbits("z:7", [("1", "2"), ("2", "4"), ("4", "1")]) == [["1", "2", "4"]],
        )

        found = m.find_acyclic_matching("int", ["1", "3"], ["2", "5"])
        check("acyclic matching on integers", found == [("1", "5"), ("3", "2")])

        # failure searches
        status, cert = m.fails_at_order("z:7", 3)
        check("Z_7 fails at order 3", status == "found" and cert is not None)
        ok, failures = m.check_certificate(cert)
        check("failure certificate re-validates", ok and not failures)
        status, _ = m.fails_at_order("z:5", 3)
        check("Z_5 exhaustively clean at order 3", status == "none")
        counterexample = m.matching_property_upto("z:4", 2)
        check("Z_4 matching-property counterexample", counterexample is not None)

        # witness certificates
        qr = json.loads(m.qr_witness(11))
        check("qr witness A", qr["A"] == ["1", "3", "4", "5", "9"])
        ok, _ = m.check_certificate(m.qr_witness(11))
        check("qr certificate re-validates", ok)
        tampered = json.loads(m.qr_witness(7))
        tampered["f"][0][1] = tampered["f"][1][1]
        ok, failures = m.check_certificate(json.dumps(tampered))
        check("tampered certificate rejected", not ok and failures)

        ok, _ = m.check_certificate(m.cycle_witness(11, 8))
        check("cycle certificate re-validates", ok)
        ok, _ = m.check_certificate(m.window_witness("dyadic", 48))
        check("window certificate re-validates", ok)
        ok, _ = m.check_certificate(m.pairing_witness(13, seed=9))
        check("pairing certificate re-validates", ok)

        # pairing bijection round trip
        f = [("1", "2"), ("2", "4"), ("4", "1")]
        g = [("1", "4"), ("2", "1"), ("4", "2")]
        phi = m.build_pairing("z:7", f, g)
        check("pairing built", phi == [("1", "2"), ("2", "4"), ("4", "1")])
        check("pairing verifies", m.verify_pairing("z:7", f, g, phi))

        # linear side
        check("GF(16) has GF(4) inside", m.intermediate_fields("gf:2^4") == [2])
        check("GF(128) has nothing inside", m.intermediate_fields("gf:2^7") == [])
        lw = json.loads(m.linear_witness("gf:5^3", m=1))
        check("linear witness claims", all(lw["claims"].values()))
        ok, _ = m.check_certificate(json.dumps(lw))
        check("linear certificate re-validates", ok)
        ok, _ = m.check_certificate(m.transcendental_witness(m=2))
        check("transcendental certificate re-validates", ok)
        check(
            "alpha line is strongly matchable",
            m.strong_matching_exists("gf:3^2:1,0,1", [[0, 1]], [[0, 1]]),
        )
        check(
            "base line is not",
            not m.strong_matching_exists("gf:3^2:1,0,1", [[1, 0]], [[1, 0]]),
        )
        status, cert = m.lmp_counterexample("gf:2^4")
        ok, _ = m.check_certificate(cert)
        check("lmp counterexample found and re-validates", status == "found" and ok)

        # a quick suite run
        report = json.loads(m.verify_suite("group", max_p=7, seed=42))
        check("group suite passes at max_p=7", report["overall"] == "pass")

    print(f"all {CHECKS} smoke checks passed")


if __name__ == "__main__":
    main()
