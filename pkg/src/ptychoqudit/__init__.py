"""Ptychographic estimation of photonic angular qudit states."""

from ._version import __version__
from .angular_optics import (
    ApertureSpec,
    ModePlan,
    OamSpectrum,
    a_ln,
    compensate,
    oam_spectrum,
    phi_ln,
    prepare_state,
    select_modes,
    sinc_envelope,
)
from .errors import *  # noqa: F401,F403
from .measurement import (
    ProjectorFamily,
    PtychoDataset,
    apply_projector,
    fourier_probabilities,
    make_family,
    simulate_dataset,
)
from .pie import PieConfig, PieResult, initial_estimate, pie_update, reconstruct
from .qudit_core import (
    ComparisonReport,
    QuditState,
    compare,
    fidelity,
    fix_global_phase,
    fourier_matrix,
    iqft,
    normalize,
    qft,
    random_state,
    trace_distance,
)
from .scenarios import paper_state, reproduce, run_scenario
