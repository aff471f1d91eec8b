"""Exterior algebra sections with rational-function coefficients.

A FormSection is a local section of the exterior algebra on a chart
with trivialized generators e_1..e_n: a map from generator subsets
(stored as bitmasks, bit a-1 for generator a) to RationalFunction
coefficients.  Rank is capped at 7 and coordinates at 3 variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._kernel import wedge_sign
from .coeffs import RationalFunction


class SignatureMismatch(ValueError):
    pass


MAX_RANK = 7
MAX_COORDS = 3


@dataclass(frozen=True)
class AlgebraSignature:
    """Chart data: ordered coordinate names and the generator count."""

    coords: tuple[str, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not 1 <= len(self.coords) <= MAX_COORDS:
            raise ValueError(f"need 1..{MAX_COORDS} coordinates, got {self.coords}")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"duplicate coordinate names in {self.coords}")
        if not 1 <= self.rank <= MAX_RANK:
            raise ValueError(f"rank must be 1..{MAX_RANK}, got {self.rank}")

    @property
    def full_mask(self) -> int:
        return (1 << self.rank) - 1

    def subset_mask(self, indices) -> int:
        mask = 0
        for a in indices:
            if not 1 <= a <= self.rank:
                raise ValueError(f"generator index {a} out of range 1..{self.rank}")
            bit = 1 << (a - 1)
            if mask & bit:
                raise ValueError(f"repeated generator index {a}")
            mask |= bit
        return mask

    def mask_indices(self, mask: int) -> tuple[int, ...]:
        return tuple(a for a in range(1, self.rank + 1) if mask >> (a - 1) & 1)


def mask_str(sig: AlgebraSignature, mask: int) -> str:
    return "e[" + ",".join(str(a) for a in sig.mask_indices(mask)) + "]"


class FormSection:
    """Element of the exterior algebra over the rational-function field."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: dict):
        self.sig = sig
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sig):
        return cls(sig, {})

    @classmethod
    def scalar(cls, sig, c) -> "FormSection":
        if isinstance(c, (int, Fraction)):
            c = RationalFunction.const(sig.coords, c)
        return cls(sig, {0: c})

    @classmethod
    def one(cls, sig):
        return cls.scalar(sig, 1)

    @classmethod
    def basis(cls, sig, indices, coeff=1) -> "FormSection":
        """coeff * e_I for ascending indices I."""
        if isinstance(coeff, (int, Fraction)):
            coeff = RationalFunction.const(sig.coords, coeff)
        return cls(sig, {sig.subset_mask(indices): coeff})

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, FormSection)
            and self.sig == other.sig
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.sig, frozenset(self.terms.items())))

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({m.bit_count() for m in self.terms}))

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous section (0 for the zero section)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"not homogeneous: degrees {ds}")
        return ds[0] if ds else 0

    def _check(self, other):
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return FormSection(self.sig, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FormSection(self.sig, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "FormSection":
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            if not c:
                return FormSection.zero(self.sig)
        elif c.is_zero():
            return FormSection.zero(self.sig)
        return FormSection(self.sig, {m: v * c for m, v in self.terms.items()})

    def wedge(self, other: "FormSection") -> "FormSection":
        self._check(other)
        out: dict[int, RationalFunction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sgn = wedge_sign(ma, mb)
                if not sgn:
                    continue
                m = ma | mb
                c = ca * cb
                if sgn < 0:
                    c = -c
                acc = out.get(m)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = acc
        return FormSection(self.sig, out)

    __mul__ = wedge

    def degree_project(self, j: int) -> "FormSection":
        """Keep exactly the terms of exterior degree j."""
        return FormSection(
            self.sig, {m: c for m, c in self.terms.items() if m.bit_count() == j}
        )

    def diff(self, var: str) -> "FormSection":
        """Coefficient-wise partial derivative."""
        return FormSection(self.sig, {m: c.diff(var) for m, c in self.terms.items()})

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (m.bit_count(), self.sig.mask_indices(m))):
            c = self.terms[m]
            cs = str(c)
            if m == 0:
                parts.append(cs)
                continue
            es = mask_str(self.sig, m)
            if cs == "1":
                parts.append(es)
            elif cs == "-1":
                parts.append("-" + es)
            elif len(c.num.terms) > 1 and c.is_polynomial():
                parts.append(f"({cs})*{es}")
            else:
                parts.append(f"{cs}*{es}")
        out = parts[0]
        for p in parts[1:]:
            out += "-" + p[1:] if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"FormSection({self})"


def wedge(a: FormSection, b: FormSection) -> FormSection:
    """Exterior product; bilinear, e_I ∧ e_J = sign(I,J) e_{I∪J}."""
    return a.wedge(b)


def degree_project(a: FormSection, j: int) -> FormSection:
    return a.degree_project(j)
