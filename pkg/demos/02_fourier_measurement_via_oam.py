"""Fourier-basis measurements carried out as OAM measurements.

Detecting OAM mode ell after the aperture measures the Fourier state
``|f_n>`` with ``n = ell mod D``, up to a sinc weight.  ``A_ln`` shows this
selection rule, the mode plan picks one ell per n, and dividing by the
envelope compensates the weights.
"""

import numpy as np

from ptychoqudit import a_ln, compensate, make_family, select_modes, sinc_envelope
from ptychoqudit.measurement import fourier_probabilities, oam_probabilities
from ptychoqudit.scenarios import paper_state

dim, alpha = 5, np.pi / 20

# %% Selection rule: A_ln vanishes unless ell = n (mod D)
ell = np.arange(-7, 8)
table = a_ln(ell[:, None], np.arange(dim)[None, :], dim, alpha)
print("nonzero pattern of A_ln (rows ell=-7..7, columns n=0..4):")
for l, row in zip(ell, table):
    print(f"  {l:+3d}  " + " ".join("#" if v > 1e-12 else "." for v in row))

# %% Mode plan: the smallest |ell| in each residue class
plan = select_modes(dim)
print("mode plan ell(n):", plan.assignment)
print("envelope weights:", np.round(sinc_envelope(np.array(plan.assignment), alpha) ** 2, 6))

# %% Physical OAM probabilities equal scaled Fourier probabilities after compensation
state = paper_state(dim, "a")
family = make_family(dim, range(dim))
raw = oam_probabilities(state.amplitudes, family, plan, alpha)
comp = compensate(raw, plan, alpha)
abstract = fourier_probabilities(state.amplitudes, family)
scale = alpha ** 2 * dim / (2 * np.pi)
print("max |compensated - scale * abstract| =", np.max(np.abs(comp - scale * abstract)))

# %% Projector family: shifted windows of rank ceil(D/2)
for j in range(family.J):
    print(f"  P_{j} support: {family.support(j)}")
print("pairwise overlaps:\n", family.overlap_matrix())
