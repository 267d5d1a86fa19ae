"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat N]

Also times complete flows with each backend (the backend is fixed at import,
so those runs go through subprocesses with KN_DISABLE_NUMBA set).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from kempfness import _kernels
from kempfness.rep_model import get_rep

FLOW_SNIPPET = """
import time, numpy as np
from kempfness.kempf_ness import minimize_norm
from kempfness.rep_model import get_rep
rep = get_rep({label!r})
minimize_norm(rep, np.ones(rep.dim_v) + 1j)  # warm-up / JIT
t = time.perf_counter()
its = 0
for seed in range({n}):
    rng = np.random.default_rng(seed)
    its += minimize_norm(rep, rng.standard_normal(rep.dim_v) + 1j * rng.standard_normal(rep.dim_v)).iterations
print(time.perf_counter() - t, its)
"""


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'rep':<10}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for label in ("sl2x4", "sl2x5", "sl2x6", "so4pair"):
        rep = get_rep(label)
        basis = rep.k_basis
        v = rng.standard_normal(rep.dim_v) + 1j * rng.standard_normal(rep.dim_v)
        c = rng.standard_normal(rep.group_dim) + 0j
        h = _kernels.combine_np(basis, 1j * c)
        evals, evecs = np.linalg.eigh(h)
        coord = evecs.conj().T @ v
        cases = {
            "quad_forms": ((basis, v), _kernels.quad_forms_np, _kernels.quad_forms_nb),
            "combine": ((basis, c), _kernels.combine_np, _kernels.combine_nb),
            "action_columns": ((basis, v), _kernels.action_columns_np, _kernels.action_columns_nb),
            "exp_apply": ((evals.astype(complex), evecs, coord, 0.1), _kernels.exp_apply_np, _kernels.exp_apply_nb),
            "energy_delta": ((evals, coord, 0.1), _kernels.energy_delta_np, _kernels.energy_delta_nb),
        }
        for name, (args, f_np, f_nb) in cases.items():
            f_nb(*args)  # compile
            t_np = min(timeit.repeat(lambda: f_np(*args), number=200, repeat=repeat)) / 200 * 1e6
            t_nb = min(timeit.repeat(lambda: f_nb(*args), number=200, repeat=repeat)) / 200 * 1e6
            print(f"{name:<16}{label:<10}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>10.2f}")


def bench_flows(n):
    print(f"\n{'flow':<10}{'backend':<10}{'seconds':>10}{'iterations':>12}")
    for label in ("sl2x4", "sl2x5"):
        for flag, name in (("1", "numpy"), ("0", "numba")):
            env = {**os.environ, "KN_DISABLE_NUMBA": flag}
            out = subprocess.run([sys.executable, "-c", FLOW_SNIPPET.format(label=label, n=n)],
                                 capture_output=True, text=True, env=env, check=True).stdout.split()
            print(f"{label:<10}{name:<10}{float(out[0]):>10.2f}{int(out[1]):>12}")


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--flows", type=int, default=10, help="random flows per representation")
    args = p.parse_args()
    if _kernels.numba is None:
        sys.exit("numba is not installed")
    bench_kernels(args.repeat)
    bench_flows(args.flows)


if __name__ == "__main__":
    main()
