"""Kernel backend selection: compiled extension when present, else pure Python."""

try:
    from . import _ckernel as _impl
except ImportError:
    from . import pykernel as _impl

BACKEND = _impl.BACKEND
wedge_sign = _impl.wedge_sign
contract_sign = _impl.contract_sign
push_contractions = _impl.push_contractions
poly_mul_terms = _impl.poly_mul_terms
poly_add_terms = _impl.poly_add_terms

__all__ = [
    "BACKEND",
    "wedge_sign",
    "contract_sign",
    "push_contractions",
    "poly_mul_terms",
    "poly_add_terms",
]
