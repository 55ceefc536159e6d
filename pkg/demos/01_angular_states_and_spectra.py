"""Angular qudit states and their orbital-angular-momentum spectra.

A D-slit angular aperture prepares a pure qudit.  Its OAM spectrum is a
sinc envelope set by the slit width, modulated by interference between
the slits.  Run with ``python demos/01_angular_states_and_spectra.py``.
"""

import numpy as np

from ptychoqudit import ApertureSpec, oam_spectrum, prepare_state, sinc_envelope
from ptychoqudit.scenarios import paper_state

# %% A five-slit aperture with uniform transmission and a phase ramp
alpha = np.pi / 10
aperture = ApertureSpec(dim=5, alpha=alpha, modulations=np.exp(1j * 2 * np.pi * np.arange(5) / 5))
state = prepare_state(aperture)
print("amplitudes:", np.round(state.amplitudes, 4))

# %% The transmission function is a comb of slits of angular width alpha
phi = np.linspace(-np.pi, np.pi, 13, endpoint=False)
print("transmission magnitude on a coarse grid:", np.round(np.abs(aperture.transmission(phi)), 3))

# %% OAM spectrum in the default window of +/- ceil(2 pi / alpha)
spec = oam_spectrum(state, aperture)
print(f"window: {spec.ell_min} .. {spec.ell_max}")
top = np.argsort(spec.probabilities)[::-1][:5]
for i in sorted(top):
    print(f"  ell={spec.ell[i]:+3d}  |d|^2={spec.probabilities[i]:.5f}")

# A linear phase ramp of one Fourier unit moves all the weight onto ell = 1 mod 5
print("weight on ell = 1 mod 5:", spec.probabilities[spec.ell % 5 == 1].sum() / spec.probabilities.sum())

# %% The envelope alone
ell = np.arange(-25, 26, 5)
print("sinc^2 envelope at multiples of 5:", np.round(sinc_envelope(ell, alpha) ** 2, 4))

# %% Example states with random and fixed phases
for name in "abc":
    s = paper_state(5, name)
    sp = oam_spectrum(s, alpha)
    print(f"state {name}: max normalized OAM prob = {sp.normalized_distribution().max():.3f},"
          f" |C_n|^2 = {np.round(np.abs(s.amplitudes) ** 2, 3)}")
