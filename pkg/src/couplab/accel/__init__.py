from .aitken import AitkenRelaxation, aitken_omega
from .base import ACCELERATORS, Accelerator, build_accelerator
from .iqn import IqnColumn, IqnIls, IqnState, iqn_advance_step, iqn_update
from .relaxation import ConstantRelaxation, relax_constant

__all__ = [
    "ACCELERATORS",
    "Accelerator",
    "AitkenRelaxation",
    "ConstantRelaxation",
    "IqnColumn",
    "IqnIls",
    "IqnState",
    "aitken_omega",
    "build_accelerator",
    "iqn_advance_step",
    "iqn_update",
    "relax_constant",
]
