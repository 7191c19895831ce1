"""Compare the compiled and pure-Python kernel backends on the hot workloads.

Each backend runs in a fresh interpreter because the choice is made at import.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import minent
from minent.groups import Presentation, make_backend, ball_counts, surface_presentation
from minent.entropy import count_loops
from minent.zoo import ZooSpec, build

quick = sys.argv[1] == "1"
repeat = int(sys.argv[2])

def timed(fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out

free = make_backend(Presentation.free(2))
dehn = make_backend(surface_presentation(2), "sc")
fig8 = build(ZooSpec("wedge_circles", {"k": 2})).metric()
n_free, n_dehn, t_loops = (8, 4, 7.0) if quick else (11, 5, 10.0)

rows = {}
rows["free ball F2"] = timed(lambda: ball_counts(free, n_max=n_free).counts[-1])
rows["dehn ball genus 2"] = timed(lambda: ball_counts(dehn, n_max=n_dehn).counts[-1])
rows["loop count figure-8"] = timed(lambda: count_loops(fig8, 0, "auto", t_loops).counts[-1])
print(json.dumps({"kernels": minent.KERNEL_BACKEND,
                  "rows": {k: {"seconds": s, "result": r} for k, (s, r) in rows.items()}}))
"""


def run(pure: bool, quick: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("MINENT_PURE_PYTHON", None)
    if pure:
        env["MINENT_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKER, "1" if quick else "0", str(repeat)],
                         env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller radii")
    args = ap.parse_args(argv)

    fast = run(False, args.quick, args.repeat)
    slow = run(True, args.quick, args.repeat)
    if fast["kernels"] != "cython":
        print("note: compiled extension not built; both columns use pure Python")
    print(f"{'workload':<22}{'compiled s':>12}{'python s':>12}{'speedup':>10}  result")
    for name, row in fast["rows"].items():
        other = slow["rows"][name]
        if row["result"] != other["result"]:
            print(f"{name}: backends disagree ({row['result']} vs {other['result']})")
            return 1
        print(f"{name:<22}{row['seconds']:>12.3f}{other['seconds']:>12.3f}"
              f"{other['seconds'] / row['seconds']:>9.1f}x  {row['result']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
