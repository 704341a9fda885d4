"""Specific heats and effective densities of states of damped quantum systems."""
from .bathdisc import BathSpec, ModeSpectrum, discretize_drude, normal_modes, specific_heat_difference
from .dos import BromwichConfig, DeltaComb, DosCurve, bromwich_dos, delta_comb_osc_minimal, dos_free_minimal
from .drude import (DrudeParams, MatsubaraConfig, log_partition_matsubara, specific_heat_free_drude,
                    specific_heat_osc_drude)
from .errors import ConvergenceError, NumericalError, PoleError
from .minimal import (HeatCurve, HeatCurvePoint, MinimalModelParams, specific_heat_free_minimal,
                      specific_heat_osc_minimal)

__version__ = "0.1.0"
