"""Integral forms, balanced triples, and global bases at bounded height.

The integral form of the quotient algebra is the F[q, q^-1]-span of
products of real divided powers and imaginary primitive generators; a
highest weight module inherits its own form by acting on the highest
vector.  At a fixed weight the monomial span is column-reduced over
Laurent polynomials into a module basis, and the intersection with the
crystal lattice and the bar image of the lattice is cut out by finitely
many F-linear conditions on power series coefficients.  When that
intersection maps isomorphically onto the crystal residues, the inverse
images of the crystal vectors form the global basis: integral, inside
both lattices, congruent to the crystal basis at q = 0, and fixed by the
bar involution.
"""

from .crystal import CrystalBasis, CrystalVertex, ModuleCrystalBasis, pi_residue
from .freealg import FreeElement, free_one
from .highest_weight import HighestWeightModule
from .linalg import column_span_coords, inverse, nullspace, rank, solve_unique
from .scalars import (
    LP_ONE,
    LP_ZERO,
    LaurentPolynomial,
    RF_ONE,
    RF_ZERO,
    RR_ONE,
    RR_ZERO,
    RationalFunction,
    _laurent_gcd,
    q_factorial,
    qbinom,
)


def laurent_divmod(b: LaurentPolynomial, a: LaurentPolynomial):
    """Division over F[q, q^-1]: b = s*a + r with r spanning fewer powers
    of q than a.

    Units here are the q-power monomials, so the right notion of size is
    the spread between top and bottom exponent, not the degree.
    """
    if a.is_zero():
        raise ZeroDivisionError("Laurent division by zero")
    span = a.degree() - a.order()
    lead = a.coeff(a.degree())
    s, r = LP_ZERO, b
    while not r.is_zero() and r.degree() - r.order() >= span:
        c = r.coeff(r.degree()) / lead
        t = LaurentPolynomial.q_power(r.degree() - a.degree()).scale(c)
        s = s + t
        r = r - t * a
    return s, r


def _laurent_lcm(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    return a.divexact(_laurent_gcd(a, b)) * b


def laurent_column_basis(cols, dim: int):
    """Echelon basis over F[q, q^-1] of the span of the given coordinate
    columns of rational functions.

    A common denominator is cleared first (scaling is an isomorphism onto
    the scaled span) and divided back out at the end.  Columns are then
    reduced row by row with Euclidean division, so each surviving column
    is the single generator of the span's projection onto its pivot row.
    """
    den = LP_ONE
    for col in cols:
        for v in col:
            if not v.is_zero() and not v.is_laurent():
                den = _laurent_lcm(den, v.den)
    scale = RationalFunction.from_laurent(den)
    work = []
    for col in cols:
        lcol = [(v * scale).as_laurent() for v in col]
        if any(not v.is_zero() for v in lcol):
            work.append(lcol)
    basis = []
    for row in range(dim):
        active = [c for c in work if not c[row].is_zero()]
        work = [c for c in work if c[row].is_zero()]
        while len(active) > 1:
            active.sort(key=lambda c: c[row].degree() - c[row].order())
            pivot = active[0]
            keep = [pivot]
            for col in active[1:]:
                s, r = laurent_divmod(col[row], pivot[row])
                if not s.is_zero():
                    col = [x - s * y for x, y in zip(col, pivot)]
                if all(x.is_zero() for x in col):
                    continue
                (keep if not col[row].is_zero() else work).append(col)
            active = keep
        if active:
            basis.append(active[0])
    out = []
    for col in basis:
        rcol = [RationalFunction.from_laurent(v) / scale for v in col]
        # canonical unit: leading entry has order zero and value one
        lead = next(v for v in rcol if not v.is_zero())
        o = lead.order_at_zero()
        unit = RationalFunction.q_power(-o) / RationalFunction.from_radical(
            (lead * RationalFunction.q_power(-o)).value_at_zero()
        )
        out.append([v * unit for v in rcol])
    return out


def aform_monomials(U, beta) -> list[FreeElement]:
    """All ordered products of real divided powers and imaginary
    primitive generators of total weight beta.

    Their F[q, q^-1]-span at each weight is the integral form of the
    quotient algebra there, and acting on a highest vector gives the
    integral form of the module.
    """
    datum = U.datum
    beta = tuple(beta)
    out: list[FreeElement] = []

    def rec(rem, acc):
        if not any(rem):
            out.append(acc)
            return
        for i in range(datum.rank):
            for n in range(1, rem[i] + 1):
                if datum.is_real(i):
                    head = U.algebra.divided_power(i, n)
                else:
                    head = U.primitive(i, n)
                nrem = tuple(r - n if t == i else r for t, r in enumerate(rem))
                rec(nrem, acc * head)

    rec(beta, free_one())
    return out


def _order_bound(cols) -> int:
    """Lower bound for the q-order of coordinates over these columns of
    any vector whose entries are regular at q = 0.

    Pick rows that make an invertible square submatrix; inverting it
    expresses the coordinates through the selected entries, so the worst
    q-order of the inverse bounds the coordinates' orders from below.
    """
    m = len(cols)
    chosen: list[list[RationalFunction]] = []
    for r in range(len(cols[0])):
        cand = chosen + [[cols[j][r] for j in range(m)]]
        if rank(cand, RF_ZERO, RF_ONE) > len(chosen):
            chosen.append(cand[-1])
            if len(chosen) == m:
                break
    if len(chosen) < m:
        raise ArithmeticError("columns are linearly dependent")
    inv = inverse(chosen, RF_ZERO, RF_ONE)
    return min(v.order_at_zero() for row in inv for v in row if not v.is_zero())


def balanced_intersection(acols, lattice, bar_coords):
    """F-basis of the set of A-combinations of the given columns lying in
    the lattice together with their bar images.

    Coordinates over the columns are Laurent polynomials with bounded
    window: the lower exponent bound comes from the coordinate matrix of
    the columns in the lattice basis, the upper one from the same matrix
    for their bar images.  Inside the window, membership in both lattices
    is the vanishing of every negative series coefficient, a finite
    F-linear system solved exactly.
    """
    m = len(acols)
    if m == 0:
        return []
    C, Cb = [], []
    for col in acols:
        cc = lattice.solve_coords(col)
        cb = lattice.solve_coords(bar_coords(col))
        if cc is None or cb is None:
            raise ArithmeticError("column outside the span of the lattice")
        C.append(cc)
        Cb.append(cb)
    lo = _order_bound(C)
    hi = -_order_bound(Cb)
    if lo > hi:
        return []
    width = hi - lo + 1
    nunk = m * width
    rows = []
    for mat, flip in ((C, 1), (Cb, -1)):
        upto = -lo if flip == 1 else hi
        for r in range(len(mat[0])):
            sers = [
                mat[j][r].series_at_zero(upto) if not mat[j][r].is_zero() else {}
                for j in range(m)
            ]
            tmin = min(
                (
                    mat[j][r].order_at_zero() - (hi if flip == -1 else -lo)
                    for j in range(m)
                    if not mat[j][r].is_zero()
                ),
                default=0,
            )
            for t in range(tmin, 0):
                row = [RR_ZERO] * nunk
                hit = False
                for j in range(m):
                    for k in range(lo, hi + 1):
                        c = sers[j].get(t - flip * k)
                        if c is not None:
                            row[j * width + (k - lo)] = c
                            hit = True
                if hit:
                    rows.append(row)
    out = []
    for a in nullspace(rows, nunk, RR_ZERO, RR_ONE):
        col = [RF_ZERO] * len(acols[0])
        for j in range(m):
            for k in range(lo, hi + 1):
                c = a[j * width + (k - lo)]
                if c.is_zero():
                    continue
                f = RationalFunction.from_radical(c) * RationalFunction.q_power(k)
                col = [x + f * y for x, y in zip(col, acols[j])]
        out.append(col)
    return out


class _WeightData:
    __slots__ = ("acols", "ecols", "gcols")

    def __init__(self, acols, ecols, gcols):
        self.acols = acols
        self.ecols = ecols
        self.gcols = gcols


class GlobalBasis:
    """Global basis attached to a crystal basis at bounded height.

    Works on the algebra side when built from a plain crystal and on the
    module side when built from a module crystal; all weight data is
    solved lazily and cached.
    """

    def __init__(self, crystal: CrystalBasis):
        self.crystal = crystal
        self.U = crystal.U
        self._mono: dict[tuple, list[FreeElement]] = {}
        self._data: dict[tuple, _WeightData] = {}

    def monomials(self, beta) -> list[FreeElement]:
        beta = tuple(beta)
        hit = self._mono.get(beta)
        if hit is None:
            hit = aform_monomials(self.U, beta)
            self._mono[beta] = hit
        return hit

    def _bar_coords(self, beta, col):
        rep = self.crystal._lift(beta, col)
        return self.crystal._coords(beta, self.U.bar(rep))

    def data(self, beta) -> _WeightData:
        beta = tuple(beta)
        hit = self._data.get(beta)
        if hit is None:
            hit = self._solve(beta)
            self._data[beta] = hit
        return hit

    def _solve(self, beta) -> _WeightData:
        d = self.crystal._ambient_dim(beta)
        if d == 0:
            return _WeightData([], [], [])
        verts = self.crystal.vertices(beta)
        lattice = self.crystal.lattice(beta)
        if lattice.rank != d or len(verts) != d:
            raise ArithmeticError("crystal does not span this weight space")
        cols = [self.crystal._coords(beta, x) for x in self.monomials(beta)]
        acols = laurent_column_basis(cols, d)
        if len(acols) != d:
            raise ArithmeticError("integral form has deficient rank")
        ecols = balanced_intersection(
            acols, lattice, lambda col: self._bar_coords(beta, col)
        )
        if len(ecols) != d:
            raise ArithmeticError("triple is not balanced")
        res = [lattice.residue(col) for col in ecols]
        rmat = [[res[t][r] for t in range(d)] for r in range(d)]
        gcols = []
        for v in verts:
            try:
                c = solve_unique(rmat, list(v.residue), RR_ZERO, RR_ONE)
            except ValueError as exc:
                raise ArithmeticError(
                    "residues of the balanced part do not span"
                ) from exc
            col = [RF_ZERO] * d
            for t, ct in enumerate(c):
                if ct.is_zero():
                    continue
                f = RationalFunction.from_radical(ct)
                col = [x + f * y for x, y in zip(col, ecols[t])]
            gcols.append(col)
        return _WeightData(acols, ecols, gcols)

    def coords(self, vertex: CrystalVertex):
        return self.data(vertex.beta).gcols[vertex.index]

    def element(self, vertex: CrystalVertex) -> FreeElement:
        """Canonical representative of the global vector over a vertex."""
        return self.crystal._lift(vertex.beta, self.coords(vertex))

    def elements(self, beta) -> list[FreeElement]:
        return [self.crystal._lift(beta, col) for col in self.data(beta).gcols]

    def integral_coords(self, beta, x: FreeElement):
        """Coordinates of x over the echelon basis of the integral form,
        or None when x lies outside the weight space's span."""
        col = self.crystal._coords(beta, x)
        return column_span_coords(
            self.data(beta).acols, col, RF_ZERO, RF_ONE
        )

    def contains_integral(self, beta, x: FreeElement) -> bool:
        c = self.integral_coords(beta, x)
        return c is not None and all(v.is_laurent() for v in c)


def check_balanced(gb: GlobalBasis, beta) -> bool:
    """The triple (integral form, lattice, bar of lattice) is balanced at
    this weight: the intersection has full dimension and its residues
    match the crystal bijectively."""
    try:
        gb.data(beta)
    except ArithmeticError:
        return False
    return True


def check_global_basis(gb: GlobalBasis, beta) -> bool:
    """Every global vector reduces to its crystal vector at q = 0 and is
    fixed by the bar involution, exactly."""
    beta = tuple(beta)
    data = gb.data(beta)
    if not data.gcols:
        return True
    lattice = gb.crystal.lattice(beta)
    for v, g in zip(gb.crystal.vertices(beta), data.gcols):
        if lattice.residue(g) != v.residue:
            return False
        if gb._bar_coords(beta, g) != g:
            return False
    return True


def check_global_integral(gb: GlobalBasis, beta) -> bool:
    """Global vectors lie in the integral form, with Laurent coordinates
    over its echelon basis."""
    beta = tuple(beta)
    for v in gb.crystal.vertices(beta):
        if not gb.contains_integral(beta, gb.element(v)):
            return False
    return True


def in_lowering_image(crystal: CrystalBasis, vertex: CrystalVertex, i: int, l: int, n: int = 1) -> bool:
    """Whether the vertex survives n raising steps at (i, l) and comes
    back to itself under n lowering steps, modulo q."""
    u = vertex.rep
    for _ in range(n):
        u = crystal._raise(i, l, u)
        if u.is_zero():
            return False
    for _ in range(n):
        u = crystal._lower(i, l, u)
    return crystal.residue_of(u, vertex.beta) == vertex.residue


def in_string_image(crystal: CrystalBasis, vertex: CrystalVertex, i: int, c) -> bool:
    """Whether the vertex is a lowering string in the levels of c applied
    to some vertex: strip the levels in order, then reapply them."""
    u = vertex.rep
    for l in c:
        u = crystal._raise(i, l, u)
        if u.is_zero():
            return False
    for l in reversed(tuple(c)):
        u = crystal._lower(i, l, u)
    return crystal.residue_of(u, vertex.beta) == vertex.residue


def _submodule_global_match(gb: GlobalBasis, beta, span, target) -> bool:
    """The balanced part of the A-span of the given elements is spanned by
    precisely the global vectors of the expected vertices.

    Matching each expected residue inside the smaller balanced part and
    comparing with the full global vector certifies both directions at
    once: the submodule's balanced part contains those global vectors,
    and dimension equality rules out anything else.
    """
    beta = tuple(beta)
    d = gb.crystal._ambient_dim(beta)
    if d == 0:
        return not target
    lattice = gb.crystal.lattice(beta)
    cols = [gb.crystal._coords(beta, x) for x in span]
    acols = laurent_column_basis(cols, d)
    if not acols:
        return not target
    ecols = balanced_intersection(
        acols, lattice, lambda col: gb._bar_coords(beta, col)
    )
    if len(ecols) != len(target):
        return False
    if not target:
        return True
    res = [lattice.residue(col) for col in ecols]
    rmat = [[res[t][r] for t in range(len(ecols))] for r in range(lattice.rank)]
    data = gb.data(beta)
    for v in target:
        try:
            c = solve_unique(rmat, list(v.residue), RR_ZERO, RR_ONE)
        except ValueError:
            return False
        col = [RF_ZERO] * d
        for t, ct in enumerate(c):
            if ct.is_zero():
                continue
            f = RationalFunction.from_radical(ct)
            col = [x + f * y for x, y in zip(col, ecols[t])]
        if col != data.gcols[v.index]:
            return False
    return True


def _shift_weight(beta, i, n):
    return tuple(b - n if t == i else b for t, b in enumerate(beta))


def check_real_string_submodule(gb: GlobalBasis, i: int, n: int, beta) -> bool:
    """Left multiples of the n-th and higher divided powers at a real
    index meet the lattices in the global vectors n deep in their
    lowering strings."""
    beta = tuple(beta)
    if not gb.U.datum.is_real(i):
        raise ValueError("expected a real index")
    span = []
    for k in range(n, beta[i] + 1):
        head = gb.U.algebra.divided_power(i, k)
        for m in gb.monomials(_shift_weight(beta, i, k)):
            span.append(head * m)
    target = [
        v
        for v in gb.crystal.vertices(beta)
        if in_lowering_image(gb.crystal, v, i, 1, n)
    ]
    return _submodule_global_match(gb, beta, span, target)


def check_imaginary_string_submodule(gb: GlobalBasis, i: int, c, beta) -> bool:
    """Left multiples of a primitive monomial at an imaginary index meet
    the lattices in the global vectors of its lowering string."""
    beta = tuple(beta)
    c = tuple(c)
    if gb.U.datum.is_real(i):
        raise ValueError("expected an imaginary index")
    total = sum(c)
    if beta[i] < total:
        span = []
    else:
        head = gb.U.b_monomial_free(i, c)
        span = [head * m for m in gb.monomials(_shift_weight(beta, i, total))]
    target = [
        v for v in gb.crystal.vertices(beta) if in_string_image(gb.crystal, v, i, c)
    ]
    return _submodule_global_match(gb, beta, span, target)


def check_isotropic_star_submodule(gb: GlobalBasis, i: int, partition, beta) -> bool:
    """At an isotropic index the star-shaped union over the levels of a
    partition: multiples of each level's full power, against vertices
    reachable by that many lowerings at that level."""
    beta = tuple(beta)
    if not gb.U.datum.is_isotropic(i):
        raise ValueError("expected an isotropic index")
    counts: dict[int, int] = {}
    for k in partition:
        counts[k] = counts.get(k, 0) + 1
    span = []
    for k, lk in sorted(counts.items()):
        if beta[i] < k * lk:
            continue
        head = gb.U.b_monomial_free(i, (k,) * lk)
        for m in gb.monomials(_shift_weight(beta, i, k * lk)):
            span.append(head * m)
    target = [
        v
        for v in gb.crystal.vertices(beta)
        if any(
            in_lowering_image(gb.crystal, v, i, k, lk) for k, lk in counts.items()
        )
    ]
    return _submodule_global_match(gb, beta, span, target)


def check_projection_compatibility(gb_inf: GlobalBasis, gb_mod: GlobalBasis, beta) -> bool:
    """Acting on the highest vector sends an algebra-side global vector to
    the module-side global vector of its projected residue, and to zero
    exactly when the residue dies."""
    if not isinstance(gb_mod.crystal, ModuleCrystalBasis):
        raise ValueError("second argument must be built from a module crystal")
    beta = tuple(beta)
    module = gb_mod.crystal.module
    mverts = gb_mod.crystal.vertices(beta)
    for v in gb_inf.crystal.vertices(beta):
        pc = module.coords(gb_inf.element(v), beta)
        res = pi_residue(gb_inf.crystal, gb_mod.crystal, v)
        if res is None:
            if any(not x.is_zero() for x in pc):
                return False
            continue
        w = next((w for w in mverts if w.residue == res), None)
        if w is None:
            return False
        if pc != gb_mod.data(beta).gcols[w.index]:
            return False
    return True


def check_real_recovery(module: HighestWeightModule, i: int, beta) -> bool:
    """Module vectors at strictly negative pairing are recovered from
    their raised images:

        u = sum over k >= n of (-1)^(k-n) [k-1 choose k-n] b^(k) A^(k) u,

    where n is minus the pairing, b^(k) the divided powers of the lowering
    generator, and A the raising generator scaled so that the bracket
    [A, b] is the usual Cartan quotient."""
    beta = tuple(beta)
    if not module.U.datum.is_real(i):
        raise ValueError("expected a real index")
    n = -module.mu_coroot(i, beta)
    if n < 1:
        raise ValueError("recovery needs strictly negative pairing")
    ri = module.U.datum.q_index_exponent(i)
    one = RF_ONE
    denom = module.U.tau(i, 1) * (
        RationalFunction.q_power(ri) - RationalFunction.q_power(-ri)
    )
    for u in module.basis(beta):
        want = module.coords(u, beta)
        acc = [RF_ZERO] * len(want)
        raised = u
        denom_pow = one
        for _ in range(n):
            raised = module.raising(i, 1, raised)
            denom_pow = denom_pow * denom
        k = n
        while not raised.is_zero():
            scaled = raised.scale(one / (denom_pow * q_factorial(k, ri)))
            coeff = qbinom(k - 1, k - n, ri)
            if (k - n) % 2:
                coeff = RF_ZERO - coeff
            term = (module.U.algebra.divided_power(i, k) * scaled).scale(coeff)
            acc = [a + b for a, b in zip(acc, module.coords(term, beta))]
            raised = module.raising(i, 1, raised)
            denom_pow = denom_pow * denom
            k += 1
        if acc != want:
            return False
    return True
