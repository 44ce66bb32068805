"""Analytic monochromatic field models: polarized beam, SPP, slab and fiber modes."""
from ._roots import NoGuidedModeError
from .beam import BeamParams, paraxial_gaussian_field
from .fiber import (
    SINGLE_MODE_CUTOFF,
    FiberMode,
    FiberParams,
    fiber_he11_field,
    guided_roots,
    solve_fiber_he11_dispersion,
)
from .jones import (
    E_LEFT,
    E_RIGHT,
    E_X,
    E_Y,
    E_Z,
    apply_ellipticity,
    circular_about,
    is_unit,
    norm_sq,
    qwp_jones,
    vec3,
)
from .slab import (
    ModeComponent,
    SlabMix,
    SlabMode,
    SlabParams,
    slab_mix_field,
    slab_te_mode_field,
    slab_tm_mode_field,
    solve_slab_mode,
    solve_slab_te_dispersion,
    solve_slab_tm_dispersion,
)
from .spp import SppParams, spp_mode_field
