"""Følner tilings of Z^d: R-boundaries, Tempelman constants, greedy Vitali
covers, the multi-scale tiling cascade, and ergodic-average experiments."""

__version__ = "0.1.0"

from .group import (
    FiniteGroupSet,
    GroupElement,
    average,
    boundary,
    compose,
    element,
    identity,
    inverse,
    set_inverse,
    set_product,
)
from .foelner import FolnerSequence, folner_ratio, tempelman_report, tempered_report
from .vitali import Tile, VitaliResult, verify_vitali, vitali_cover
from .kernels import BACKEND
