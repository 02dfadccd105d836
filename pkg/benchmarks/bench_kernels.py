"""Compare the numba-compiled kernels with the interpreted fallback.

Each path runs in its own interpreter (the flag is read at import time):

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOAD = r"""
import json, sys, time
import numpy as np
from bellscope import kernels, quantum
from bellscope._jit import JIT_ENABLED

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
coeff, const = quantum.chsh_functional()
zeros = quantum.zeros_from_indices({3, 6, 7})
n = kernels.n_params(2, 2, 2)
params = rng.uniform(0, 2 * np.pi, (repeat, n))
mats = rng.normal(size=(repeat, 9, 9))
mats = np.ascontiguousarray(mats + mats.transpose(0, 2, 1))

# warm-up triggers compilation outside the timed region
kernels.value_and_gradient(params[0], 2, 2, 2, coeff, const, zeros, 0.0, 1e-6)
kernels.jacobi_eigh(mats[0])
kernels.born_probs(*kernels.unpack_model(params[0], 2, 2, 2))

out = {"jit": JIT_ENABLED}
t = time.perf_counter()
for x in params:
    psi, u, w = kernels.unpack_model(x, 2, 2, 2)
    kernels.born_probs(psi, u, w)
out["born_probs"] = (time.perf_counter() - t) / repeat
t = time.perf_counter()
for x in params:
    kernels.value_and_gradient(x, 2, 2, 2, coeff, const, zeros, 0.0, 1e-6)
out["value_and_gradient"] = (time.perf_counter() - t) / repeat
t = time.perf_counter()
for m in mats:
    kernels.jacobi_eigh(m)
out["jacobi_eigh_9x9"] = (time.perf_counter() - t) / repeat
t = time.perf_counter()
quantum.max_chsh_qubits({3, 6, 7}, restarts=3, seed=0)
out["qubit_search_3_restarts"] = time.perf_counter() - t
print(json.dumps(out))
"""


def run(disable_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable_jit:
        env["BELLSCOPE_DISABLE_JIT"] = "1"
    else:
        env.pop("BELLSCOPE_DISABLE_JIT", None)
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'kernel':<26}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for key in ("born_probs", "value_and_gradient", "jacobi_eigh_9x9", "qubit_search_3_restarts"):
        print(f"{key:<26}{fast[key]:>12.2e}{slow[key]:>12.2e}{slow[key] / fast[key]:>10.1f}")
    print(f"(jit active: {fast['jit']} / {slow['jit']}; wall {time.perf_counter() - t0:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
