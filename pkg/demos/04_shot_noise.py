"""Reconstruction from finite-count data.

Counts in every (projector, mode) cell are Poisson distributed.  Each
cell draws from its own seeded stream, so datasets are reproducible.
"""

import numpy as np

from ptychoqudit import PieConfig, make_family, reconstruct, select_modes, simulate_dataset
from ptychoqudit.scenarios import paper_state

target = paper_state(12, "a")
family = make_family(12, (0, 2, 4, 6, 8))
plan = select_modes(12)

# %% Fidelity against the number of shots
for shots in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
    fids = []
    for seed in range(10):
        data = simulate_dataset(target, family, plan, np.pi / 10, shots=shots, seed=seed)
        res = reconstruct(data, family, PieConfig(max_iterations=16, seed=7, track_target=target))
        fids.append(res.final_fidelity)
    print(f"shots={shots:>8d}  median F={np.median(fids):.6f}  min F={np.min(fids):.6f}")

# %% Same seed, same counts
a = simulate_dataset(target, family, plan, np.pi / 10, shots=10 ** 4, seed=3)
b = simulate_dataset(target, family, plan, np.pi / 10, shots=10 ** 4, seed=3)
print("identical datasets:", np.array_equal(a.values, b.values))
