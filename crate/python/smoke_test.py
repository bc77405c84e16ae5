#!/usr/bin/env python3
"""Smoke test for the heffter_py extension module.

Builds nothing itself: run `cargo build -p heffter-py --release` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib in
the workspace target directory (override with HEFFTER_PY_LIB), links it into
a temporary directory under the importable name, and exercises the main
types and operations end to end.
"""

import os
import shutil
import sys
import tempfile
from pathlib import Path

WORKSPACE = Path(__file__).resolve().parent.parent


def locate_library() -> Path:
    override = os.environ.get("HEFFTER_PY_LIB")
    if override:
        return Path(override)
    candidates = [
        WORKSPACE / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libheffter_py.so", "heffter_py.so", "libheffter_py.dylib")
    ]
    for candidate in candidates:
        if candidate.exists():
            return candidate
    sys.exit(
        "heffter_py library not found; run `cargo build -p heffter-py --release` first"
    )


def import_module():
    library = locate_library()
    staging = Path(tempfile.mkdtemp(prefix="heffter-py-"))
    shutil.copy2(library, staging / "heffter_py.so")
    sys.path.insert(0, str(staging))
    import heffter_py

    return heffter_py


def main() -> None:
    hp = import_module()
    checks = 0

    def check(condition, label):
        nonlocal checks
        assert condition, label
        checks += 1
        print(f"ok: {label}")

    # Array model.
    a = hp.PFArray.from_rows([[1, -2], [-3, 4]])
    check(a.rows == 2 and a.cols == 2 and a.filled == 4, "array construction")
    check(a.is_shiftable(), "block is shiftable")
    check(a.shift(10).get(1, 2) == -12, "shift moves entries from zero")
    check(a.support() == [1, 2, 3, 4], "support is sorted")

    # A published 4x4 array over Z_48 and its verification.
    h16 = hp.builtin_example("h16_4_4")
    params = hp.RingParams.square(4, 4, 16)
    check(params.v == 48 and params.q == 3 and params.r == 16, "ring parameters")
    report = hp.verify_integer(h16, params)
    check(report["passes"], "builtin verifies as integer")
    broken = hp.PFArray.from_rows(
        [[2, -7, -16, 22], [23, 2, -8, -17], [-13, 19, 4, -10], [-11, -14, 20, 5]]
    )
    bad = hp.verify_relative_heffter(broken, params)
    check(not bad["passes"] and len(bad["failures"]) > 0, "tampered array fails")

    # Builders and the dispatcher.
    h3 = hp.build_h3_even(12)
    check(h3.is_cyclically_k_diagonal(3), "H_3(12;3) is 3-diagonal")
    check(h3.is_cyclically_sk_diagonal(2, 2), "H_3(12;3) views as (2,2)-diagonal")
    h9 = hp.build_hk(12, 9)
    check(
        hp.verify_integer(h9, hp.RingParams.square(12, 9, 9))["passes"],
        "H_9(12;9) assembled and verified",
    )
    check(h9.get(1, 4) == -38, "extension shifted filler entry")
    try:
        hp.build_hk(5, 3)
        sys.exit("expected build_hk(5, 3) to be ruled out")
    except ValueError:
        check(True, "ruled-out pair raises")

    # Orderings and partial sums.
    check(hp.partial_sums([1, -7, -16, 22], 48) == [1, 42, 26, 0], "partial sums")
    check(hp.is_simple([1, -7, -16, 22], 48), "simplicity")
    check(hp.find_simple_ordering([1, 1, -1, -1], 7) is None, "no simple ordering")
    plan = hp.ordering_plan(h16, params)
    check(plan["row_orderings"][0] == [1, -7, -16, 22], "scan order kept when simple")

    # Decomposition pipeline over K_{3x16}.
    summary = hp.decompose(h16, params)
    check(summary["row_blocks"] == 192, "192 developed row blocks")
    check(summary["orthogonal"], "row and column decompositions orthogonal")
    check(
        summary["row_decomposition_verified"] and summary["col_decomposition_verified"],
        "decompositions verified",
    )

    # Search: a witness where one exists, certified emptiness where not.
    found = hp.search(4, 3, 3, skeleton="k-diagonal")
    check(found["status"] == "found", "search finds H_3(4;3)")
    witness = found["witness"]
    check(
        hp.verify_integer(witness, hp.RingParams.square(4, 3, 3))["passes"],
        "witness verifies",
    )
    nodes = hp.certify_nonexistence("h8_4_3")
    check(nodes > 0, "H_8(4;3) certified nonexistent")
    check(
        hp.check_necessary(5, 3, 3).startswith("ruled-out"),
        "necessary conditions rule out (5,3,3)",
    )

    # Serialization round trip.
    text = h16.to_csv()
    check(hp.PFArray.from_csv(text) == h16, "csv round trip")
    array, t = hp.PFArray.from_json(hp.encode_json(h16, 16))
    check(array == h16 and t == 16, "json round trip")

    print(f"\nsmoke test passed: {checks} checks")


if __name__ == "__main__":
    main()
