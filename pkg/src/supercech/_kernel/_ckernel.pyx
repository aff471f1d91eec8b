# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython kernel: same surface as pykernel, loops and mask math in C."""

BACKEND = "c"

cdef inline int _popcount(unsigned long long x) nogil:
    cdef int n = 0
    while x:
        x &= x - 1
        n += 1
    return n


cpdef int wedge_sign(unsigned long long a, unsigned long long b):
    """Sign of e_A ∧ e_B reordered ascending; 0 when the masks overlap."""
    if a & b:
        return 0
    cdef int inv = 0
    cdef unsigned long long rest = a, low
    while rest:
        low = rest & (~rest + 1)
        inv += _popcount(b & (low - 1))
        rest ^= low
    return -1 if inv & 1 else 1


cpdef int contract_sign(unsigned long long s, unsigned long long i):
    """Sign of the ascending contraction string C_S applied to e_I; 0 if S ⊄ I."""
    if s & ~i:
        return 0
    cdef int tot = 0
    cdef unsigned long long rest = s, low
    while rest:
        low = rest & (~rest + 1)
        tot += _popcount(i & (low - 1))
        rest ^= low
    return -1 if tot & 1 else 1


cpdef list push_contractions(unsigned long long smask, unsigned long long jmask):
    """Normal-order C_S ∘ mult(e_J); see pykernel.push_contractions."""
    cdef list out = [(1, jmask, 0)]
    cdef list nxt
    cdef unsigned long long rest = smask, low, jm, rm
    cdef int sg, pos, k
    # peel from the highest bit down so the recursion order (smallest bit
    # outermost) is reproduced iteratively
    cdef list bits = []
    while rest:
        low = rest & (~rest + 1)
        bits.append(low)
        rest ^= low
    for low in reversed(bits):
        nxt = []
        for sg, jm, rm in out:
            if low & jm:
                pos = _popcount(jm & (low - 1))
                nxt.append((-sg if pos & 1 else sg, jm ^ low, rm))
            k = _popcount(jm)
            nxt.append((-sg if k & 1 else sg, jm, rm | low))
        out = nxt
    return out


cpdef dict poly_mul_terms(dict a, dict b):
    """Product of two exponent-tuple term maps with exact coefficients."""
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ea, eb, e
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
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


cpdef dict poly_add_terms(dict a, dict b, int sign=1):
    """a + sign*b on exponent-tuple term maps, zero terms pruned."""
    cdef dict out = dict(a)
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
