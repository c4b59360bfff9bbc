"""Exact computation of Whittaker annihilators and irreducibility of
universal quasi-Whittaker modules over presented Lie algebras."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402
from .annihilator import (  # noqa: E402
    AnnihilatorReport,
    Window,
    compute_annihilator,
    is_extendable,
    membership,
    rank_criterion,
)
from .catalog import build, phi_from_assignments  # noqa: E402
from .criteria import criterion_for  # noqa: E402
from .liealgebra import Basis, LieElement, LiePresentation, PhiMap  # noqa: E402
from .qwmodule import ModuleContext, act, irreducibility_probe, reduce, whittaker_vectors  # noqa: E402

__all__ = [
    "BACKEND", "AnnihilatorReport", "Basis", "LieElement", "LiePresentation", "ModuleContext", "PhiMap",
    "Window", "act", "build", "compute_annihilator", "criterion_for", "irreducibility_probe", "is_extendable",
    "membership", "phi_from_assignments", "rank_criterion", "reduce", "whittaker_vectors",
]
