"""Low-depth CNOT and low-count XOR synthesis for GF(2) linear layers,
with a recursive transformation for block-circulant matrices."""

from .circuit import Circuit, DepthReport, Gate, simulate
from .cost import CostKind
from .gf2 import BitMatrix, ElemOp, OpKind

__version__ = "0.1.0"

__all__ = ["BitMatrix", "Circuit", "CostKind", "DepthReport", "ElemOp", "Gate", "OpKind", "simulate"]
