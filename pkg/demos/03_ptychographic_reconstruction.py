"""Reconstruct a qudit state from ptychographic OAM data.

The engine starts from a random guess and cycles over the projectors,
imposing the measured Fourier magnitudes on each masked exit wave.
"""

import numpy as np

from ptychoqudit import PieConfig, make_family, reconstruct, select_modes, simulate_dataset
from ptychoqudit.scenarios import paper_state

alpha = np.pi / 10

# %% Five projectors for a five-level state
target = paper_state(5, "a")
family = make_family(5, range(5))
data = simulate_dataset(target, family, select_modes(5), alpha)
result = reconstruct(data, family, PieConfig(eta=1.5, max_iterations=8, seed=7, track_target=target))
for i, d, f in result.trace_rows():
    print(f"iter {i:2d}  delta={d:.3e}  fidelity={f:.12f}")

# %% Only five projectors for a twelve-level state
target = paper_state(12, "b")
family = make_family(12, (0, 2, 4, 6, 8))
data = simulate_dataset(target, family, select_modes(12), alpha)
result = reconstruct(data, family, PieConfig(max_iterations=40, seed=7, track_target=target))
first = next(i for i, f in enumerate(result.fidelity_trace, 1) if f >= 1 - 1e-6)
print(f"D=12 with J=5: fidelity >= 1-1e-6 first reached at iteration {first}")
print("estimate:", np.round(result.estimate.amplitudes, 4))

# %% Stop on a trace-distance threshold instead of a fixed count
result = reconstruct(data, family, PieConfig(max_iterations=500, delta_threshold=1e-10, seed=7))
print(f"converged={result.converged} after {result.iterations_run} iterations")
