"""Time the canonical-form kernel on both backends.

    python3 benchmarks/bench_canonical.py            # both backends
    python3 benchmarks/bench_canonical.py --backend numpy --repeat 5

Each backend runs in its own interpreter because the choice is made at
import time from SEMIEQ_NO_NUMBA.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

CASES = [
    ("3.6", "planar:7,4,1"),
    ("3.6", "planar:12,10,0"),
    ("4.4", "planar:10,12,1"),
    ("3.4.6.4", "planar:6,20,2"),
    ("4.8.8", "planar:8,15,3"),
    ("3.6", "mobius:plain,11,10"),
]


def run_cases(repeat: int) -> dict:
    from semieq.isomorphism import backend, canonical_form
    from semieq.mapcore import to_flags
    from semieq.representations import build, parse_rep

    first = _timed(canonical_form, build("3.6", parse_rep("planar:3,3,0")))
    rows = []
    for name, rep in CASES:
        m = build(name, parse_rep(rep))
        best = min(_timed(canonical_form, m) for _ in range(repeat))
        rows.append({"type": name, "rep": rep, "n": m.n_vertices, "flags": to_flags(m).size, "seconds": best})
    return {"backend": backend(), "first_call": first, "cases": rows}


def _timed(fn, arg) -> float:
    start = time.perf_counter()
    fn(arg)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--backend", choices=["numba", "numpy", "both"], default="both")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        print(json.dumps(run_cases(args.repeat)))
        return

    wanted = ["numba", "numpy"] if args.backend == "both" else [args.backend]
    results = []
    for name in wanted:
        env = dict(os.environ)
        env.pop("SEMIEQ_NO_NUMBA", None)
        if name == "numpy":
            env["SEMIEQ_NO_NUMBA"] = "1"
        out = subprocess.run(
            [sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results.append(json.loads(out.stdout))

    header = f"{'type':<9}{'rep':<22}{'n':>5}{'flags':>7}" + "".join(f"{r['backend']:>12}" for r in results)
    print(header)
    for i, (name, rep) in enumerate(CASES):
        case = results[0]["cases"][i]
        times = "".join(f"{r['cases'][i]['seconds'] * 1000:>10.1f}ms" for r in results)
        print(f"{name:<9}{rep:<22}{case['n']:>5}{case['flags']:>7}{times}")
    for r in results:
        print(f"{r['backend']}: first call (including compilation or cache load) {r['first_call']:.2f}s")


if __name__ == "__main__":
    main()
