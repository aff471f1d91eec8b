"""Pure-Python kernel for the hot inner loops.

Generator subsets live in bitmasks (bit a-1 set means generator a is
present), polynomial term maps are plain dicts from exponent tuples to
Fraction.  supercech._kernel._ckernel mirrors this module one to one;
either backend may be active.
"""

from __future__ import annotations

BACKEND = "py"


def wedge_sign(a: int, b: int) -> int:
    """Sign of e_A ∧ e_B reordered ascending; 0 when the masks overlap.

    The sign is (-1)**inv with inv the number of pairs (i in A, j in B)
    with i > j.
    """
    if a & b:
        return 0
    inv = 0
    rest = a
    while rest:
        low = rest & -rest
        inv += (b & (low - 1)).bit_count()
        rest ^= low
    return -1 if inv & 1 else 1


def contract_sign(s: int, i: int) -> int:
    """Sign of the ascending contraction string C_S applied to e_I.

    C_S = d_{s1}∘...∘d_{sm} with s1<...<sm acts right to left; removing
    s from e_I costs (-1)**(number of generators of I below s).  Returns
    0 unless S ⊆ I.
    """
    if s & ~i:
        return 0
    tot = 0
    rest = s
    while rest:
        low = rest & -rest
        tot += (i & (low - 1)).bit_count()
        rest ^= low
    return -1 if tot & 1 else 1


def push_contractions(smask: int, jmask: int) -> list[tuple[int, int, int]]:
    """Normal-order C_S ∘ mult(e_J) into sum of mult(e_J') ∘ C_rem terms.

    Returns [(sign, jmask', rem_smask)]: each contraction either eats a
    matching generator of e_J or hops over it with the Koszul sign
    (-1)**deg(e_J').  Ascending order of the surviving string is kept
    because bits are peeled smallest first.
    """
    if not smask:
        return [(1, jmask, 0)]
    low = smask & -smask
    out = []
    for sg, jm, rm in push_contractions(smask ^ low, jmask):
        if low & jm:
            pos = (jm & (low - 1)).bit_count()
            out.append((-sg if pos & 1 else sg, jm ^ low, rm))
        k = jm.bit_count()
        out.append((-sg if k & 1 else sg, jm, rm | low))
    return out


def poly_mul_terms(a: dict, b: dict) -> dict:
    """Product of two exponent-tuple term maps with exact coefficients."""
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            acc = out.get(e)
            if acc is None:
                out[e] = c
            else:
                acc = acc + c
                if acc:
                    out[e] = acc
                else:
                    del out[e]
    return out


def poly_add_terms(a: dict, b: dict, sign: int = 1) -> dict:
    """a + sign*b on exponent-tuple term maps, zero terms pruned."""
    out = dict(a)
    for e, c in b.items():
        acc = out.get(e)
        if acc is None:
            out[e] = sign * c if sign != 1 else c
        else:
            acc = acc + sign * c
            if acc:
                out[e] = acc
            else:
                del out[e]
    return out
