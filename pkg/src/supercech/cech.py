"""Covers, operator-valued Cech cochains, coboundaries and solvers.

Two cover flavours:

* formal: N >= 2 charts sharing global coordinates, every intersection
  nonempty, identity transitions.  The nerve is contractible, so the
  coboundary solvers use the explicit cone contraction over chart 0.

* p1: the two-chart cover of the projective line, coordinate z on chart
  0 and w on chart 1 with w = 1/z, bundle degrees l_1 <= ... <= l_n for
  a sum of line bundles.  Chart-1 frames satisfy te_a = z^(l_a) * e_a
  (coefficients transform with the classical z^l cocycle), hence

      d/dw   |->  -z^2 d/dz + sum_a l_a z e_a de_a
      de~_a  |->  z^(-l_a) de_a

  All intersection values are normalized to chart-0 coordinates, and
  sections regular on a chart are those with polynomial coefficients in
  that chart's coordinate.

Sign conventions the source material leaves implicit, fixed here:
cochains are alternating, (d0 v)_ij = v_i - v_j and
(d1 u)_ijk = u_ij + u_jk + u_ki; then d1 ∘ d0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .coeffs import NotLaurent, RationalFunction
from .exterior import AlgebraSignature, FormSection
from .liegroup import Automorphism, op_exp, op_log, truncate
from .linalg import solve_linear
from .operators import SuperOperator


class CechError(ValueError):
    pass


class TransportError(CechError):
    pass


class NotACocycle(CechError):
    pass


class NotDerivationValued(CechError):
    pass


# ---------------------------------------------------------------------------
# covers


@dataclass(frozen=True)
class CoverDescriptor:
    """Formal N-chart cover or the two-chart projective-line cover."""

    mode: str
    ncharts: int
    rank: int
    coords: tuple[str, ...]
    degrees: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.mode == "formal":
            if self.ncharts < 2:
                raise CechError("formal cover needs at least 2 charts")
            if self.degrees is not None:
                raise CechError("formal cover carries no bundle degrees")
        elif self.mode == "p1":
            if self.ncharts != 2:
                raise CechError("p1 cover has exactly 2 charts")
            if len(self.coords) != 2:
                raise CechError("p1 cover needs the two chart coordinate names")
            if self.degrees is None or len(self.degrees) != self.rank:
                raise CechError("p1 cover needs one bundle degree per generator")
            if list(self.degrees) != sorted(self.degrees):
                raise CechError(f"bundle degrees must be ascending: {self.degrees}")
        else:
            raise CechError(f"unknown cover mode {self.mode!r}")
        # signature constraints surface early
        for i in range(min(self.ncharts, 2)):
            self.signature(i)

    @classmethod
    def formal(cls, ncharts: int, variables=("x",), rank: int = 4):
        return cls("formal", ncharts, rank, tuple(variables))

    @classmethod
    def p1(cls, degrees, coords=("z", "w")):
        degrees = tuple(degrees)
        return cls("p1", 2, len(degrees), tuple(coords), degrees)

    @property
    def is_p1(self) -> bool:
        return self.mode == "p1"

    def signature(self, chart: int) -> AlgebraSignature:
        if not 0 <= chart < self.ncharts:
            raise CechError(f"chart {chart} out of range 0..{self.ncharts - 1}")
        if self.mode == "formal":
            return AlgebraSignature(self.coords, self.rank)
        return AlgebraSignature((self.coords[chart],), self.rank)

    def pair_signature(self, i: int, j: int) -> AlgebraSignature:
        return self.signature(min(i, j))

    def degree_sum(self, mask: int) -> int:
        return sum(self.degrees[a] for a in range(self.rank) if mask >> a & 1)

    def pairs(self):
        return combinations(range(self.ncharts), 2)

    def triples(self):
        return combinations(range(self.ncharts), 3)

    def quadruples(self):
        return combinations(range(self.ncharts), 4)


# ---------------------------------------------------------------------------
# transport between the two p1 charts


def transport(cover: CoverDescriptor, op: SuperOperator, src: int, dst: int) -> SuperOperator:
    """Push an operator from chart src coordinates to chart dst coordinates.

    Formal covers share coordinates, so transport is the identity there.
    On p1 the result must be Laurent in the destination coordinate, else
    the value is not regular on the intersection.
    """
    if src == dst:
        return op
    if not cover.is_p1:
        if op.sig != cover.signature(dst):
            raise TransportError(f"operator signature {op.sig} does not match cover")
        return op
    if op.sig != cover.signature(src):
        raise TransportError(f"operator signature {op.sig} is not chart {src}")
    tgt = cover.signature(dst)
    images = _p1_images(cover, src)
    out = SuperOperator.zero(tgt)
    for (im, alpha, sm), r in op.terms.items():
        coeff = r.subst(images["coord"])
        frame = FormSection.scalar(tgt, coeff)
        for a in op.sig.mask_indices(im):
            frame = frame.wedge(images["frame"][a])
        piece = SuperOperator.mult(frame)
        for _ in range(alpha[0]):
            piece = piece.compose(images["deriv"])
        for a in op.sig.mask_indices(sm):
            piece = piece.compose(images["contraction"][a])
        out = out + piece
    var = tgt.coords[0]
    for c in out.terms.values():
        if not c.is_laurent(var):
            raise TransportError(f"transported value not regular on the intersection: {c}")
    return out


def _p1_images(cover: CoverDescriptor, src: int) -> dict:
    """Images of chart-src generators (coordinate, frames, d/dcoord,
    contractions) inside the other chart's operator algebra.

    With te_a = z^(l_a) e_a and w = 1/z, both directions look alike:
    the other chart's frame picks up t^(l_a), its contraction t^(-l_a),
    and d/d(src coord) becomes -t^2 d/dt + sum_a l_a t e_a de_a.
    """
    dst = 1 - src
    tgt = cover.signature(dst)
    tvar = tgt.coords[0]

    def frame_factor(a: int) -> RationalFunction:
        return RationalFunction.monomial(tgt.coords, tvar, cover.degrees[a - 1])

    t = RationalFunction.variable(tgt.coords, tvar)
    images = {
        "coord": {cover.coords[src]: t ** (-1)},
        "frame": {
            a: FormSection(tgt, {1 << (a - 1): frame_factor(a)})
            for a in range(1, cover.rank + 1)
        },
        "contraction": {
            a: SuperOperator(
                tgt,
                {(0, (0,), 1 << (a - 1)): frame_factor(a) ** (-1)},
            )
            for a in range(1, cover.rank + 1)
        },
    }
    deriv_terms = {(0, (1,), 0): -(t ** 2)}
    for a in range(1, cover.rank + 1):
        l = cover.degrees[a - 1]
        if l:
            bit = 1 << (a - 1)
            deriv_terms[(bit, (0,), bit)] = t * Fraction(l)
    images["deriv"] = SuperOperator(tgt, deriv_terms)
    return images


# ---------------------------------------------------------------------------
# cochains


def _check_value(cover, sig, op):
    if op.sig != sig:
        raise CechError(f"value signature {op.sig} does not match chart signature {sig}")


class Cochain0:
    """Assignment of an operator to each chart, in that chart's coordinates."""

    def __init__(self, cover: CoverDescriptor, values: dict):
        self.cover = cover
        self.values = {}
        for i, op in values.items():
            _check_value(cover, cover.signature(i), op)
            if not op.is_zero():
                self.values[i] = op

    @classmethod
    def zero(cls, cover):
        return cls(cover, {})

    def at(self, i: int) -> SuperOperator:
        if not 0 <= i < self.cover.ncharts:
            raise CechError(f"chart {i} out of range")
        return self.values.get(i, SuperOperator.zero(self.cover.signature(i)))

    def is_zero(self):
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, Cochain0)
            and self.cover == other.cover
            and self.values == other.values
        )

    def map_values(self, fn):
        return Cochain0(self.cover, {i: fn(op) for i, op in self.values.items()})

    def __add__(self, other):
        out = dict(self.values)
        for i, op in other.values.items():
            out[i] = out[i] + op if i in out else op
        return Cochain0(self.cover, out)

    def __neg__(self):
        return self.map_values(lambda op: -op)

    def __sub__(self, other):
        return self + (-other)


class Cochain1:
    """Alternating pair cochain; values live on increasing pairs in
    chart-min coordinates, the rest follows by alternation."""

    def __init__(self, cover: CoverDescriptor, values: dict, alternating: bool = True):
        self.cover = cover
        self.alternating = alternating
        self.values = {}
        for (i, j), op in values.items():
            if not 0 <= i < j < cover.ncharts:
                raise CechError(f"pair ({i},{j}) must be increasing chart indices")
            _check_value(cover, cover.pair_signature(i, j), op)
            if not op.is_zero():
                self.values[(i, j)] = op

    @classmethod
    def zero(cls, cover):
        return cls(cover, {})

    def at(self, i: int, j: int) -> SuperOperator:
        if i == j:
            return SuperOperator.zero(self.cover.pair_signature(i, j))
        if i < j:
            return self.values.get((i, j), SuperOperator.zero(self.cover.pair_signature(i, j)))
        if not self.alternating:
            raise CechError("reversed-pair access on a non-alternating cochain")
        return -self.values.get((j, i), SuperOperator.zero(self.cover.pair_signature(i, j)))

    def is_zero(self):
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, Cochain1)
            and self.cover == other.cover
            and self.values == other.values
        )

    def map_values(self, fn):
        return Cochain1(
            self.cover, {k: fn(op) for k, op in self.values.items()}, self.alternating
        )

    def project_shift(self, shift: int) -> "Cochain1":
        return self.map_values(lambda op: op.project_shift(shift))

    def truncate(self, q: int) -> "Cochain1":
        return self.map_values(lambda op: truncate(op, q))

    def __add__(self, other):
        out = dict(self.values)
        for k, op in other.values.items():
            out[k] = out[k] + op if k in out else op
        return Cochain1(self.cover, out, self.alternating)

    def __neg__(self):
        return self.map_values(lambda op: -op)

    def __sub__(self, other):
        return self + (-other)

    def check_derivation_valued(self):
        for k, op in self.values.items():
            if not op.is_derivation():
                raise NotDerivationValued(f"value at {k} is not a derivation")
            if not op.is_even():
                raise NotDerivationValued(f"value at {k} is odd")
            if op.min_shift() < 2:
                raise NotDerivationValued(f"value at {k} has a degree < 2 component")


class AutCochain1:
    """Automorphism-valued pair cochain; reversed pairs give inverses, so
    the pairwise inverse closure holds by construction."""

    def __init__(self, cover: CoverDescriptor, values: dict):
        self.cover = cover
        self.values = {}
        for (i, j), phi in values.items():
            if not 0 <= i < j < cover.ncharts:
                raise CechError(f"pair ({i},{j}) must be increasing chart indices")
            _check_value(cover, cover.pair_signature(i, j), phi.op)
            self.values[(i, j)] = phi

    def at(self, i: int, j: int) -> Automorphism:
        sig = self.cover.pair_signature(i, j)
        if i == j:
            return Automorphism.identity(sig)
        if i < j:
            return self.values.get((i, j), Automorphism.identity(sig))
        phi = self.values.get((j, i))
        return Automorphism.identity(sig) if phi is None else phi.inverse()


class Cochain2:
    """Triple cochain on increasing triples; odd permutations of the
    indices of abelian-valued cochains flip the sign (at3)."""

    def __init__(self, cover: CoverDescriptor, values: dict):
        self.cover = cover
        self.values = {}
        for (i, j, k), op in values.items():
            if not 0 <= i < j < k < cover.ncharts:
                raise CechError(f"triple ({i},{j},{k}) must be increasing chart indices")
            _check_value(cover, cover.signature(i), op)
            if not op.is_zero():
                self.values[(i, j, k)] = op

    @classmethod
    def zero(cls, cover):
        return cls(cover, {})

    def at3(self, i: int, j: int, k: int) -> SuperOperator:
        sig = self.cover.signature(min(i, j, k))
        idx = (i, j, k)
        if len(set(idx)) < 3:
            return SuperOperator.zero(sig)
        order = tuple(sorted(idx))
        val = self.values.get(order, SuperOperator.zero(sig))
        # parity of the permutation taking sorted order to idx
        perm = [order.index(t) for t in idx]
        inv = sum(perm[a] > perm[b] for a in range(3) for b in range(a + 1, 3))
        return -val if inv % 2 else val

    def is_zero(self):
        return not self.values

    def __eq__(self, other):
        return (
            isinstance(other, Cochain2)
            and self.cover == other.cover
            and self.values == other.values
        )

    def map_values(self, fn):
        return Cochain2(self.cover, {k: fn(op) for k, op in self.values.items()})

    def project_shift(self, shift: int) -> "Cochain2":
        return self.map_values(lambda op: op.project_shift(shift))

    def __add__(self, other):
        out = dict(self.values)
        for k, op in other.values.items():
            out[k] = out[k] + op if k in out else op
        return Cochain2(self.cover, out)

    def __neg__(self):
        return self.map_values(lambda op: -op)

    def __sub__(self, other):
        return self + (-other)

    def all_values(self, predicate) -> bool:
        return all(predicate(op) for op in self.values.values())


class AutCochain2:
    """Automorphism-like values on increasing triples (non-abelian side)."""

    def __init__(self, cover: CoverDescriptor, values: dict):
        self.cover = cover
        self.values = dict(values)

    def is_identity(self) -> bool:
        return all(op.is_identity() for op in self.values.values())


# ---------------------------------------------------------------------------
# coboundaries


def d0(v: Cochain0) -> Cochain1:
    """(d0 v)_ij = v_i - v_j, chart-j values transported to chart-i coordinates."""
    cover = v.cover
    out = {}
    for i, j in cover.pairs():
        out[(i, j)] = v.at(i) - transport(cover, v.at(j), j, i)
    return Cochain1(cover, out)


def d1(u: Cochain1) -> Cochain2:
    """(d1 u)_ijk = u_ij + u_jk + u_ki with u_ki = -u_ik."""
    cover = u.cover
    out = {}
    for i, j, k in cover.triples():
        out[(i, j, k)] = u.at(i, j) + u.at(j, k) - u.at(i, k)
    return Cochain2(cover, out)


def d2(c: Cochain2) -> dict:
    """(d c)_ijkl = c_jkl - c_ikl + c_ijl - c_ijk on increasing quadruples."""
    cover = c.cover
    out = {}
    for i, j, k, l in cover.quadruples():
        val = (
            c.at3(j, k, l)
            - c.at3(i, k, l)
            + c.at3(i, j, l)
            - c.at3(i, j, k)
        )
        if not val.is_zero():
            out[(i, j, k, l)] = val
    return out


def exp_cochain(u: Cochain1) -> AutCochain1:
    return AutCochain1(u.cover, {k: op_exp(op) for k, op in u.values.items()})


def log_cochain(phi: AutCochain1) -> Cochain1:
    return Cochain1(phi.cover, {k: op_log(a) for k, a in phi.values.items()})


def nab_d(phi: AutCochain1) -> AutCochain2:
    """Non-abelian coboundary: (d phi)_ijk = phi_ij phi_jk phi_ki."""
    cover = phi.cover
    out = {}
    for i, j, k in cover.triples():
        out[(i, j, k)] = phi.at(i, j).compose(phi.at(j, k)).compose(phi.at(k, i))
    return AutCochain2(cover, out)


def nonabelian_cocycle(phi: AutCochain1) -> bool:
    """All triple products equal Id; inverse closure holds by construction."""
    return nab_d(phi).is_identity()


# ---------------------------------------------------------------------------
# twisted action and the F maps


def _v_at_pair(v: Cochain0, i: int, j: int):
    """(v_i, v_j) both expressed in chart-min(i,j) coordinates."""
    cover = v.cover
    lo = min(i, j)
    vi = transport(cover, v.at(i), i, lo)
    vj = transport(cover, v.at(j), j, lo)
    return vi, vj


def twisted_pair(v: Cochain0, u: Cochain1, i: int, j: int) -> Automorphism:
    """exp(v_i) exp(u_ij) exp(-v_j), expressed in chart-min(i,j) coordinates."""
    vi, vj = _v_at_pair(v, i, j)
    return op_exp(vi).compose(op_exp(u.at(i, j))).compose(op_exp(-vj))


def twisted_action(v: Cochain0, u: Cochain1) -> Cochain1:
    """lambda(v,u)_ij = log(exp(v_i) exp(u_ij) exp(-v_j)).

    Sends non-abelian cocycles to non-abelian cocycles: the triple
    products of exp(lambda(v,u)) are conjugates of those of exp(u).
    """
    cover = u.cover
    out = {}
    for i, j in cover.pairs():
        out[(i, j)] = op_log(twisted_pair(v, u, i, j))
    return Cochain1(cover, out)


def F2q(v: Cochain0, u: Cochain1, q: int) -> Cochain1:
    """pr_(2q) of the twisted product of the (q-1)-truncated exponentials.

    Endomorphism-valued and not alternating; values only on increasing
    pairs.
    """
    if q < 2:
        raise CechError("F2q needs q >= 2")
    vt = v.map_values(lambda op: truncate(op, q - 1))
    ut = u.truncate(q - 1)
    out = {}
    for i, j in u.cover.pairs():
        out[(i, j)] = truncate(twisted_pair(vt, ut, i, j), q)
    return Cochain1(u.cover, out, alternating=False)


# ---------------------------------------------------------------------------
# solvers


@dataclass
class SolveObstruction:
    """Why an exact p1 solve failed: the offending operator-basis line."""

    kind: str  # "vector" (d/dz line) or "contraction"
    imask: int
    contraction: int | None
    exponent: int
    window: int

    def describe(self) -> str:
        line = f"e-mask {self.imask:#x}"
        if self.contraction is not None:
            line += f", de[{self.contraction}]"
        return (
            f"{self.kind} line ({line}): Laurent exponent {self.exponent} "
            f"inside the gap window ({self.window}, 0)"
        )


def solve_d0(c: Cochain1, bound: int = 0):
    """Solve d0(v) = c exactly.

    Formal covers: cone contraction over chart 0 (every cocycle is a
    coboundary there).  p1: Laurent-window splitting per operator-basis
    line, with the degree-twist corrections; decisions are exact.
    Returns (v, None) on success, (None, SolveObstruction) on an exact
    negative.  Raises NotACocycle when d1(c) != 0.
    """
    if not d1(c).is_zero():
        raise NotACocycle("solve_d0 needs an abelian cocycle")
    if c.cover.is_p1:
        return _solve_d0_p1(c)
    v = Cochain0(c.cover, {i: c.at(i, 0) for i in range(c.cover.ncharts)})
    if d0(v) != c:
        raise CechError("cone contraction failed; cocycle precondition violated")
    return v, None


def solve_d1(c: Cochain2, bound: int = 0):
    """Find u with d1(u) = -c (the sign matches the obstruction usage).

    Formal covers: cone contraction over chart 0.  p1 covers have no
    triples, so u = 0.  Raises NotACocycle when d2(c) != 0.
    """
    if d2(c):
        raise NotACocycle("solve_d1 needs d2(c) = 0")
    cover = c.cover
    if cover.is_p1:
        if not c.is_zero():
            raise CechError("nonzero 2-cochain on a 2-chart cover")
        return Cochain1.zero(cover), None
    values = {}
    for i, j in cover.pairs():
        if i == 0:
            continue
        values[(i, j)] = -c.at3(0, i, j)
    u = Cochain1(cover, values)
    if d1(u) != -c:
        raise CechError("cone contraction failed; cocycle precondition violated")
    return u, None


def _derivation_lines(op: SuperOperator, var: str):
    """Split a derivation-valued operator into Laurent data per basis line.

    Returns (vector_lines, contraction_lines): imask -> {exp: Fraction}
    and (imask, a) -> {exp: Fraction}.
    """
    vec: dict[int, dict[int, Fraction]] = {}
    con: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (im, alpha, sm), r in op.terms.items():
        order = sum(alpha) + sm.bit_count()
        if order != 1:
            raise NotDerivationValued(f"atom of order {order} in {op}")
        try:
            lt = r.laurent_terms(var)
        except NotLaurent as exc:
            raise TransportError(f"coefficient not Laurent on the intersection: {r}") from exc
        data = {k: coeff.const_value() for k, coeff in lt.items()}
        if sm == 0:
            dst = vec.setdefault(im, {})
        else:
            a = sm.bit_length()  # single contraction: index of its bit
            dst = con.setdefault((im, a), {})
        for k, val in data.items():
            dst[k] = dst.get(k, Fraction(0)) + val
    return vec, con


def _solve_d0_p1(c: Cochain1):
    cover = c.cover
    sig0, sig1 = cover.signature(0), cover.signature(1)
    z, w = cover.coords
    op = c.at(0, 1)
    vec, _ = _derivation_lines(op, z)

    v0 = SuperOperator.zero(sig0)
    v1 = SuperOperator.zero(sig1)

    # vector-field lines first: their chart-1 side twists into contraction
    # lines, so they must be fixed before the contraction residual is known
    for im, lterms in vec.items():
        twist = cover.degree_sum(im) + 2
        for x, val in lterms.items():
            if x >= 0:
                v0 = v0 + SuperOperator(
                    sig0, {(im, (1,), 0): RationalFunction.monomial(sig0.coords, z, x, val)}
                )
            elif x <= twist:
                # T(w^m te_I d/dw) has d/dz part -z^(twist-m) e_I d/dz
                v1 = v1 + SuperOperator(
                    sig1,
                    {(im, (1,), 0): RationalFunction.monomial(sig1.coords, w, twist - x, val)},
                )
            else:
                return None, SolveObstruction("vector", im, None, x, twist)

    resid = op - (v0 - transport(cover, v1, 1, 0))
    _, con = _derivation_lines(resid, z)  # vector lines cancel exactly

    gap: dict[tuple[int, int, int], Fraction] = {}
    for (im, a), lterms in con.items():
        twist = cover.degree_sum(im) - cover.degrees[a - 1]
        for x, val in lterms.items():
            if x >= 0:
                v0 = v0 + SuperOperator(
                    sig0,
                    {(im, (0,), 1 << (a - 1)): RationalFunction.monomial(sig0.coords, z, x, val)},
                )
            elif x <= twist:
                v1 = v1 + SuperOperator(
                    sig1,
                    {
                        (im, (0,), 1 << (a - 1)): RationalFunction.monomial(
                            sig1.coords, w, twist - x, -val
                        )
                    },
                )
            else:
                gap[(im, a, x)] = val

    if gap:
        fixed = _connecting_correction(cover, gap)
        if fixed is None:
            im, a, x = max(gap, key=lambda k: gap[k] != 0)
            twist = cover.degree_sum(im) - cover.degrees[a - 1]
            return None, SolveObstruction("contraction", im, a, x, twist)
        dv0, dv1 = fixed
        v0 = v0 + dv0
        v1 = v1 + dv1
        # re-split the corrected residual (now gap-free by construction)
        resid2 = op - (d0(Cochain0(cover, {0: v0, 1: v1})).at(0, 1))
        sub0, sub1, leftover = _split_contraction_residual(cover, resid2)
        if leftover:
            raise CechError("connecting correction left a gap residue")
        v0 = v0 + sub0
        v1 = v1 + sub1

    v = Cochain0(cover, {0: v0, 1: v1})
    if d0(v) != c:
        raise CechError("p1 solver produced a non-solution")
    return v, None


def _split_contraction_residual(cover, resid):
    """Window-split a pure contraction-line residual; returns the chart
    pieces and any leftover gap terms."""
    sig0, sig1 = cover.signature(0), cover.signature(1)
    z, w = cover.coords
    vec, con = _derivation_lines(resid, z)
    if any(lt for lt in vec.values()):
        raise CechError("residual has vector-field lines")
    s0 = SuperOperator.zero(sig0)
    s1 = SuperOperator.zero(sig1)
    leftover = {}
    for (im, a), lterms in con.items():
        twist = cover.degree_sum(im) - cover.degrees[a - 1]
        for x, val in lterms.items():
            if x >= 0:
                s0 = s0 + SuperOperator(
                    sig0,
                    {(im, (0,), 1 << (a - 1)): RationalFunction.monomial(sig0.coords, z, x, val)},
                )
            elif x <= twist:
                s1 = s1 + SuperOperator(
                    sig1,
                    {
                        (im, (0,), 1 << (a - 1)): RationalFunction.monomial(
                            sig1.coords, w, twist - x, -val
                        )
                    },
                )
            else:
                leftover[(im, a, x)] = val
    return s0, s1, leftover


def _quotient_global_pairs(cover: CoverDescriptor, shifts):
    """Global vector-field-type lift pairs (m = 0): candidates whose d0
    hits the exponent -1 contraction windows (the connecting map)."""
    sig0, sig1 = cover.signature(0), cover.signature(1)
    z, w = cover.coords
    out = []
    for im in range(1, 1 << cover.rank):
        if im.bit_count() not in shifts:
            continue
        twist = cover.degree_sum(im) + 2
        if twist < 0:
            continue
        p0 = SuperOperator(sig0, {(im, (1,), 0): RationalFunction.one(sig0.coords)})
        p1 = SuperOperator(
            sig1, {(im, (1,), 0): RationalFunction.monomial(sig1.coords, w, twist, -1)}
        )
        corr = p0 - transport(cover, p1, 1, 0)
        # corr is supported on contraction lines at exponent -1
        _, con = _derivation_lines(corr, z)
        coords = {}
        for (jm, a), lterms in con.items():
            for x, val in lterms.items():
                if val:
                    coords[(jm, a, x)] = val
        if coords:
            out.append((im, p0, p1, coords))
    return out


def _connecting_correction(cover, gap):
    """Solve the gap residue against the connecting-map images; returns
    the (chart0, chart1) correction operators or None when the residue
    is not a coboundary."""
    shifts = {im.bit_count() - 1 for (im, _, _) in gap}  # quotient lines are one lower
    pairs = _quotient_global_pairs(cover, shifts)
    keys = sorted(gap)
    rows = [[p[3].get(k, Fraction(0)) for p in pairs] for k in keys]
    rhs = [gap[k] for k in keys]
    if not pairs:
        return None if any(rhs) else (
            SuperOperator.zero(cover.signature(0)),
            SuperOperator.zero(cover.signature(1)),
        )
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    v0 = SuperOperator.zero(cover.signature(0))
    v1 = SuperOperator.zero(cover.signature(1))
    for lam, (_, p0, p1, _) in zip(sol, pairs):
        if lam:
            v0 = v0 + p0.scale(lam)
            v1 = v1 + p1.scale(lam)
    return v0, v1
