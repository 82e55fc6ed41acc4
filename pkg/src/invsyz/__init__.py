"""Involutive bases, their syzygies, quasi-stable position and signature-based completion."""

from .polyring import (
    ModuleElement,
    ModuleOrderSpec,
    OrderSpec,
    Polynomial,
)
from .division import DivisionKind, InvolutiveIndex, Janet, Pommaret, cls, multiplicative
from .groebner import buchberger, normal_form, reduced_groebner_basis, schreyer_syzygies
from .invbasis import (
    CompletionCapExceeded,
    DegenerateInput,
    InvBasisResult,
    gerdt_classic,
    inv_basis,
    next_inv_basis,
    syzygies_direct,
)

__all__ = [
    "ModuleElement", "ModuleOrderSpec", "OrderSpec", "Polynomial",
    "DivisionKind", "InvolutiveIndex", "Janet", "Pommaret", "cls", "multiplicative",
    "buchberger", "normal_form", "reduced_groebner_basis", "schreyer_syzygies",
    "CompletionCapExceeded", "DegenerateInput", "InvBasisResult",
    "gerdt_classic", "inv_basis", "next_inv_basis", "syzygies_direct",
]

__version__ = "0.1.0"
