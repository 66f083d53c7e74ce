"""Two-mode single-atom laser: field-mode coefficients, moment dynamics,
entanglement witness and Fock-space oracles."""

from pathlib import Path

from ._entlaser import (
    CoefficientSet,
    DegenerateDenominator,
    DegenerateSteadyState,
    Error,
    InvalidParameter,
    MomentState,
    PhysicalParams,
    PParams,
    RegimeMismatch,
    SEPARABLE_BOUND,
    SpectralDegenerate,
    TruncationTooSmall,
    atomic_steady_state,
    classify_regime,
    coherent_state,
    compare_oracle,
    compute_coefficients,
    compute_p_params,
    parametric_closed_forms,
    parametric_limits,
    photon_number,
    run_config_text,
    simulate,
    two_mode_squeezed_state,
    vacuum_state,
    variance_sum,
)
from . import _entlaser

__version__ = "0.1.0"


def preset_dir() -> Path:
    """Presets shipped inside the wheel, else the library default."""
    bundled = Path(__file__).with_name("presets")
    if bundled.is_dir():
        return bundled
    return Path(_entlaser.default_preset_directory())


def presets() -> list[str]:
    return _entlaser.preset_names(preset_dir())


def preset_params(name: str) -> PhysicalParams:
    return _entlaser.preset_params(name, preset_dir())


def run_preset(name: str, method: str = "") -> dict:
    """Trajectory arrays plus 'report' and 'info' dicts for a named preset."""
    return _entlaser.run_preset(name, preset_dir(), method)
