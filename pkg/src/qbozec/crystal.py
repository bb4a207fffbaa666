"""Crystal lattices and crystal bases at bounded height.

The crystal lattice of the quotient algebra is the span, over rational
functions regular at q = 0, of everything the lowering operators generate
from 1; the crystal basis is the set of residues of those vectors modulo q
times the lattice.  The module-side lattice and basis repeat the picture
under the projection P -> P v_lambda, where lowering operators can die at
the walls.

A lattice at one weight is stored as a basis in column-reduced form over
the regular-at-zero subring: repeatedly pick the entry of minimal q-order
as a pivot and clear its row from the other columns (the quotients are
regular at zero, so the span never changes), then read residues off the
basis coordinates at q = 0.
"""

from .freealg import FreeElement
from .highest_weight import HighestWeightModule
from .linalg import solve
from .scalars import RF_ONE, RF_ZERO, RationalFunction
from .uminus import UMinus


class Lattice:
    """A free module over the regular-at-zero subring inside one
    weight space, with residue coordinates at q = 0."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, generators: list[list[RationalFunction]], ambient_dim: int):
        self.ambient_dim = ambient_dim
        cols = [list(g) for g in generators if any(not v.is_zero() for v in g)]
        basis: list[list[RationalFunction]] = []
        used_rows: set[int] = set()
        while cols:
            best = None
            for ci, col in enumerate(cols):
                for r, v in enumerate(col):
                    if r in used_rows or v.is_zero():
                        continue
                    order = v.order_at_zero()
                    if best is None or order < best[0]:
                        best = (order, ci, r)
            if best is None:
                break
            _, ci, r = best
            pivot_col = cols.pop(ci)
            pivot = pivot_col[r]
            remaining = []
            for col in cols:
                if not col[r].is_zero():
                    ratio = col[r] / pivot
                    col = [a - ratio * b for a, b in zip(col, pivot_col)]
                if any(not v.is_zero() for v in col):
                    remaining.append(col)
            cols = remaining
            used_rows.add(r)
            basis.append(pivot_col)
        self.basis = basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def solve_coords(self, vec) -> list[RationalFunction] | None:
        """Coordinates of vec over the basis inside the ambient space, or
        None when vec is outside the rational-function span."""
        if not self.basis:
            return None if any(not v.is_zero() for v in vec) else []
        matrix = [
            [self.basis[c][r] for c in range(self.rank)]
            for r in range(self.ambient_dim)
        ]
        return solve(matrix, list(vec), RF_ZERO, RF_ONE)

    def contains(self, vec) -> bool:
        coords = self.solve_coords(vec)
        if coords is None:
            return False
        return all(a.is_zero() or a.order_at_zero() >= 0 for a in coords)

    def residue(self, vec) -> tuple:
        """Image of a lattice vector in the quotient by q times the
        lattice, as exact coordinates at q = 0."""
        coords = self.solve_coords(vec)
        if coords is None:
            raise ArithmeticError("vector lies outside the lattice's span")
        out = []
        for a in coords:
            if not a.is_zero() and a.order_at_zero() < 0:
                raise ArithmeticError("vector lies outside the lattice")
            out.append(a.value_at_zero())
        return tuple(out)

    def same_module(self, other: "Lattice") -> bool:
        if self.rank != other.rank:
            return False
        return all(other.contains(col) for col in self.basis) and all(
            self.contains(col) for col in other.basis
        )


class CrystalVertex:
    """One crystal element: a residue with a stored representative."""

    __slots__ = ("beta", "index", "residue", "rep", "seq")

    def __init__(self, beta, index, residue, rep, seq):
        self.beta = beta
        self.index = index
        self.residue = residue
        self.rep = rep
        self.seq = seq

    @property
    def key(self):
        return (self.beta, self.index)

    def __repr__(self):
        word = " ".join(f"f[{i},{l}]" for (i, l) in self.seq) or "1"
        return f"CrystalVertex({word})"


class CrystalBasis:
    """The crystal basis of the quotient algebra up to a height bound:
    lattices per weight, deduplicated residues, and lowering edges."""

    # On the algebra side a nonzero lowering never lands inside q times the
    # lattice; module crystals override this because strings end at walls,
    # where the vector survives but its residue vanishes.
    _has_walls = False

    def __init__(self, uminus: UMinus, height: int):
        if height < 0:
            raise ValueError("height bound must be nonnegative")
        self.U = uminus
        self.height = height
        self._run()

    # subclass hooks: how to act and how to coordinatize
    def _lower(self, i: int, l: int, x: FreeElement) -> FreeElement:
        return self.U.kashiwara_f(i, l, x)

    def _raise(self, i: int, l: int, x: FreeElement) -> FreeElement:
        return self.U.kashiwara_e(i, l, x)

    def _coords(self, beta, x: FreeElement):
        return self.U.model(beta).coords(self.U.reduce(x))

    def _ambient_dim(self, beta) -> int:
        return self.U.model(beta).dim

    def _letters(self, budget: int):
        datum = self.U.datum
        for i in range(datum.rank):
            top = 1 if datum.is_real(i) else budget
            for l in range(1, top + 1):
                yield (i, l)

    def _run(self):
        rank = self.U.datum.rank
        zero = (0,) * rank
        one = FreeElement.from_word(())
        self.samples: dict[tuple, list] = {zero: [((), one)]}
        frontier = [((), one, zero)]
        while frontier:
            nxt = []
            for seq, vec, beta in frontier:
                h = sum(beta)
                for (i, l) in self._letters(self.height - h):
                    if h + l > self.height:
                        continue
                    low = self._lower(i, l, vec)
                    if low.is_zero():
                        continue
                    nbeta = tuple(
                        beta[t] + (l if t == i else 0) for t in range(rank)
                    )
                    nseq = seq + ((i, l),)
                    self.samples.setdefault(nbeta, []).append((nseq, low))
                    nxt.append((nseq, low, nbeta))
            frontier = nxt
        self._lattices: dict[tuple, Lattice] = {}
        self._vertices: dict[tuple, list[CrystalVertex]] = {}
        index_of: dict[tuple, dict[tuple, int]] = {}
        for beta, entries in sorted(self.samples.items()):
            lattice = Lattice(
                [self._coords(beta, vec) for _, vec in entries],
                self._ambient_dim(beta),
            )
            self._lattices[beta] = lattice
            verts: list[CrystalVertex] = []
            lookup: dict[tuple, int] = {}
            for seq, vec in entries:
                res = lattice.residue(self._coords(beta, vec))
                if all(v.is_zero() for v in res):
                    if not self._has_walls:
                        raise ArithmeticError(
                            f"nonzero lowering word lands in q times the lattice: {seq}"
                        )
                    continue
                if res not in lookup:
                    lookup[res] = len(verts)
                    verts.append(CrystalVertex(beta, len(verts), res, vec, seq))
            self._vertices[beta] = verts
            index_of[beta] = lookup
        self.edges: list[tuple[tuple, tuple, tuple]] = []
        for beta, verts in sorted(self._vertices.items()):
            h = sum(beta)
            for v in verts:
                for (i, l) in self._letters(self.height - h):
                    if h + l > self.height:
                        continue
                    low = self._lower(i, l, v.rep)
                    if low.is_zero():
                        continue
                    nbeta = tuple(
                        beta[t] + (l if t == i else 0)
                        for t in range(self.U.datum.rank)
                    )
                    res = self._lattices[nbeta].residue(self._coords(nbeta, low))
                    if all(r.is_zero() for r in res):
                        if not self._has_walls:
                            raise ArithmeticError(
                                f"lowering edge from {v.seq} by ({i},{l}) lands "
                                "in q times the lattice"
                            )
                        continue
                    target = index_of[nbeta].get(res)
                    if target is None:
                        raise ArithmeticError(
                            f"lowering edge from {v.seq} by ({i},{l}) misses "
                            "every crystal vertex"
                        )
                    self.edges.append((v.key, (i, l), (nbeta, target)))

    def _lift(self, beta, col) -> FreeElement:
        return self.U.model(tuple(beta)).lift(col)

    def weights(self) -> list[tuple]:
        return sorted(self._vertices)

    def lattice(self, beta) -> Lattice:
        """The lattice at a weight; weights no lowering word reaches carry
        the zero lattice."""
        beta = tuple(beta)
        hit = self._lattices.get(beta)
        if hit is None:
            hit = Lattice([], self._ambient_dim(beta))
            self._lattices[beta] = hit
        return hit

    def vertices(self, beta) -> list[CrystalVertex]:
        return self._vertices.get(tuple(beta), [])

    def vertex(self, key) -> CrystalVertex:
        beta, index = key
        return self._vertices[tuple(beta)][index]

    def all_vertices(self) -> list[CrystalVertex]:
        return [v for beta in self.weights() for v in self._vertices[beta]]

    def vertex_count(self, beta) -> int:
        return len(self.vertices(beta))

    def residue_of(self, x: FreeElement, beta) -> tuple:
        return self.lattice(beta).residue(self._coords(tuple(beta), x))


class ModuleCrystalBasis(CrystalBasis):
    """The crystal basis of a highest weight module up to a height bound.

    Strings end at walls here: a lowering may produce a nonzero vector that
    still lies in q times the lattice, and such a step counts as zero in the
    crystal."""

    _has_walls = True

    def __init__(self, module: HighestWeightModule, height: int):
        self.module = module
        super().__init__(module.U, height)

    def _lower(self, i, l, x):
        return self.module.kashiwara_f(i, l, x)

    def _raise(self, i, l, x):
        return self.module.kashiwara_e(i, l, x)

    def _coords(self, beta, x):
        return self.module.coords(x, beta)

    def _ambient_dim(self, beta):
        return self.module.dimension(beta)

    def _lift(self, beta, col):
        return self.module.model(tuple(beta)).lift(col)


# -- the q = 0 forms -------------------------------------------------------------
def crystal_pairing(crystal: CrystalBasis):
    """The bilinear form that belongs to this crystal: the Lusztig form on
    the algebra side, the contravariant form on the module side."""
    if isinstance(crystal, ModuleCrystalBasis):
        return crystal.module.ctr_pair
    return crystal.U.algebra.lusztig_pair


def check_lattice_pairs_regular(crystal: CrystalBasis, beta) -> bool:
    """Lattice basis vectors pair into the regular-at-zero subring."""
    pair = crystal_pairing(crystal)
    lifts = [crystal._lift(beta, col) for col in crystal.lattice(beta).basis]
    for a in lifts:
        for b in lifts:
            v = pair(a, b)
            if not v.is_zero() and v.order_at_zero() < 0:
                return False
    return True


def check_crystal_orthonormal(crystal: CrystalBasis, beta) -> bool:
    """Distinct residues pair to zero and each to one at q = 0."""
    pair = crystal_pairing(crystal)
    verts = crystal.vertices(beta)
    one = RF_ONE.value_at_zero()
    zero = RF_ZERO.value_at_zero()
    for a in verts:
        for b in verts:
            v = pair(a.rep, b.rep)
            if not v.is_zero() and v.order_at_zero() < 0:
                return False
            expect = one if a.index == b.index else zero
            if v.value_at_zero() != expect:
                return False
    return True


def check_crystal_adjoint_q0(crystal: CrystalBasis, i: int, l: int, beta) -> bool:
    """At q = 0 the raising operator is adjoint to the lowering one."""
    beta = tuple(beta)
    rank = crystal.U.datum.rank
    gamma = tuple(beta[t] - (l if t == i else 0) for t in range(rank))
    if any(v < 0 for v in gamma):
        return True
    lows = crystal.vertices(gamma)
    highs = crystal.vertices(beta)
    pair = crystal_pairing(crystal)
    ok = True
    for u in highs:
        eu = crystal._raise(i, l, u.rep)
        for v in lows:
            fv = crystal._lower(i, l, v.rep)
            lhs = pair(eu, v.rep)
            rhs = pair(u.rep, fv)
            for val in (lhs, rhs):
                if not val.is_zero() and val.order_at_zero() < 0:
                    return False
            ok = ok and lhs.value_at_zero() == rhs.value_at_zero()
    return ok


def check_representative_independence(crystal: CrystalBasis) -> bool:
    """Applying a lowering operator to two representatives of one residue
    gives one residue again."""
    rank = crystal.U.datum.rank
    for beta, entries in sorted(crystal.samples.items()):
        h = sum(beta)
        lattice = crystal.lattice(beta)
        groups: dict[tuple, list[FreeElement]] = {}
        for _, vec in entries:
            groups.setdefault(
                lattice.residue(crystal._coords(beta, vec)), []
            ).append(vec)
        for vecs in groups.values():
            if len(vecs) < 2:
                continue
            for (i, l) in crystal._letters(crystal.height - h):
                if h + l > crystal.height:
                    continue
                nbeta = tuple(
                    beta[t] + (l if t == i else 0) for t in range(rank)
                )
                seen = set()
                for vec in vecs:
                    low = crystal._lower(i, l, vec)
                    if low.is_zero():
                        seen.add(None)
                        continue
                    res = crystal._lattices[nbeta].residue(
                        crystal._coords(nbeta, low)
                    )
                    # a residue of zero is the same crystal zero as the
                    # zero vector
                    seen.add(None if all(v.is_zero() for v in res) else res)
                if len(seen) > 1:
                    return False
    return True


def check_edges_reversible(crystal: CrystalBasis) -> bool:
    """Raising walks every lowering edge backwards, modulo q."""
    for (src, (i, l), dst) in crystal.edges:
        v = crystal.vertex(dst)
        up = crystal._raise(i, l, v.rep)
        res = crystal.lattice(src[0]).residue(crystal._coords(src[0], up))
        if res != crystal.vertex(src).residue:
            return False
    return True


# -- comparison of the two crystals under the projection ---------------------------
def project_lattice(inf: CrystalBasis, lam: "ModuleCrystalBasis", beta) -> Lattice:
    """Image of the algebra-side lattice in the module's coordinates."""
    beta = tuple(beta)
    m = inf.U.model(beta)
    module = lam.module
    cols = [
        module.coords(m.lift(col), beta) for col in inf.lattice(beta).basis
    ]
    return Lattice(cols, module.dimension(beta))


def check_pi_lattice(inf: CrystalBasis, lam: "ModuleCrystalBasis", beta) -> bool:
    """The projection carries the algebra-side lattice onto the module-side
    one."""
    return project_lattice(inf, lam, beta).same_module(lam.lattice(tuple(beta)))


def pi_residue(inf: CrystalBasis, lam: "ModuleCrystalBasis", vertex: CrystalVertex):
    """Residue of the projected representative, or None when it dies."""
    beta = vertex.beta
    module = lam.module
    vec = module.coords(vertex.rep, beta)
    res = lam.lattice(beta).residue(vec)
    if all(v.is_zero() for v in res):
        return None
    return res


def check_pi_bijection(inf: CrystalBasis, lam: "ModuleCrystalBasis", beta) -> bool:
    """Vertices with nonzero projection map bijectively onto the module
    crystal."""
    beta = tuple(beta)
    images = []
    for v in inf.vertices(beta):
        res = pi_residue(inf, lam, v)
        if res is not None:
            images.append(res)
    targets = [v.residue for v in lam.vertices(beta)]
    if len(images) != len(set(images)) or len(images) != len(targets):
        return False
    return set(images) == set(targets)


def check_pi_intertwines(
    inf: CrystalBasis, lam: "ModuleCrystalBasis", i: int, l: int, beta
) -> bool:
    """Lowering commutes with the projection on residues, and raising does
    on vertices with nonzero image."""
    beta = tuple(beta)
    rank = inf.U.datum.rank
    module = lam.module
    up = tuple(beta[t] + (l if t == i else 0) for t in range(rank))
    down = tuple(beta[t] - (l if t == i else 0) for t in range(rank))
    for v in inf.vertices(beta):
        proj = module.project(v.rep)
        if sum(up) <= lam.height:
            # lowering, both routes, including the zero cases
            left = module.kashiwara_f(i, l, proj)
            right = module.project(inf.U.kashiwara_f(i, l, v.rep))
            lres = lam.lattice(up).residue(module.coords(left, up))
            rres = lam.lattice(up).residue(module.coords(right, up))
            if lres != rres:
                return False
        if pi_residue(inf, lam, v) is None:
            continue
        eu = inf.U.kashiwara_e(i, l, v.rep)
        if any(t < 0 for t in down):
            if not module.project(eu).is_zero():
                return False
            continue
        lres = lam.lattice(down).residue(
            module.coords(module.kashiwara_e(i, l, proj), down)
        )
        rres = lam.lattice(down).residue(module.coords(module.project(eu), down))
        if lres != rres:
            return False
    return True


# -- export -------------------------------------------------------------------------
def vertex_name(v: CrystalVertex) -> str:
    return "b_" + "_".join(f"{i}.{l}" for (i, l) in v.seq) if v.seq else "b_1"


def crystal_graph_json(crystal: CrystalBasis) -> dict:
    labels = crystal.U.datum.indices
    names = {}
    verts = []
    for v in crystal.all_vertices():
        name = f"v{len(names)}"
        names[v.key] = name
        verts.append(
            {
                "id": name,
                "weight": list(v.beta),
                "word": [[labels[i], l] for (i, l) in v.seq],
                "representative": str(v.rep),
            }
        )
    edges = [
        {"from": names[src], "to": names[dst], "index": labels[i], "level": l}
        for (src, (i, l), dst) in crystal.edges
    ]
    out = {
        "height": crystal.height,
        "vertices": verts,
        "edges": edges,
    }
    if isinstance(crystal, ModuleCrystalBasis):
        out["highest_weight"] = list(crystal.module.lam)
    return out


def crystal_graph_dot(crystal: CrystalBasis) -> str:
    labels = crystal.U.datum.indices
    lines = ["digraph crystal {", "  rankdir=TB;", "  node [shape=box];"]
    names = {}
    for v in crystal.all_vertices():
        name = f"v{len(names)}"
        names[v.key] = name
        word = " ".join(f"f[{labels[i]},{l}]" for (i, l) in v.seq) or "1"
        weight = ",".join(str(t) for t in v.beta)
        lines.append(f'  {name} [label="{word}\\n({weight})"];')
    for (src, (i, l), dst) in crystal.edges:
        lines.append(
            f'  {names[src]} -> {names[dst]} [label="({labels[i]},{l})"];'
        )
    lines.append("}")
    return "\n".join(lines)
