"""The negative half of the quantized enveloping algebra: the free algebra
modulo the radical of the bilinear form.

Weight spaces are coordinatized on the reduced-echelon pivot columns of the
word Gram matrix.  The pivot words' classes always form a basis of the
quotient and the principal Gram minor on them is automatically invertible,
so coordinates of any element come from one linear solve against that minor.
On top of the models live the primitive generators b_{il} (orthogonal to all
products of lower levels), the derivation operators adjoint to left/right
multiplication, the joint-kernel decompositions, and the Kashiwara crystal
operators (with square-root coefficients at isotropic indices).
"""

from __future__ import annotations

from math import factorial

from .cartan import BorcherdsCartanDatum, root_sub, simple_root
from .freealg import (
    FormConfig,
    FreeAlgebra,
    FreeElement,
    TensorElement,
    Word,
    free_one,
)
from .linalg import inverse, mat_mul, mat_vec, nullspace, rref, solve, solve_unique
from .scalars import (
    Q,
    RF_ONE,
    RF_ZERO,
    RadicalRational,
    RationalFunction,
    q_factorial,
    q_integer,
    qbinom,
)


def compositions(n: int) -> list[tuple[int, ...]]:
    """All compositions of n >= 0 (tuples of positive parts, order counts)."""
    if n < 0:
        raise ValueError("compositions of a negative integer")
    if n == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(rem: int, prefix: list):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for part in range(1, rem + 1):
            prefix.append(part)
            rec(rem - part, prefix)
            prefix.pop()

    rec(n, [])
    out.sort()
    return out


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n >= 0 as weakly decreasing tuples."""
    if n < 0:
        raise ValueError("partitions of a negative integer")
    if n == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(rem: int, maxpart: int, prefix: list):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(rem, maxpart), 0, -1):
            prefix.append(part)
            rec(rem - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    out.sort()
    return out


def multiplicity(c: tuple, l: int) -> int:
    return sum(1 for p in c if p == l)


class WeightSpaceModel:
    """One weight space of the quotient, in pivot-word coordinates."""

    __slots__ = ("words", "pivots", "basis_words", "dim", "_coords")

    def __init__(self, words: list[Word], gram):
        self.words = list(words)
        _, pivots = rref(gram, RF_ZERO, RF_ONE)
        self.pivots = pivots
        self.basis_words = [self.words[j] for j in pivots]
        self.dim = len(pivots)
        self._coords: dict[Word, list[RationalFunction]] = {}
        if self.dim:
            minor = [[gram[p][c] for c in pivots] for p in pivots]
            stripe = [[gram[p][c] for c in range(len(self.words))] for p in pivots]
            coords = mat_mul(inverse(minor, RF_ZERO, RF_ONE), stripe, RF_ZERO)
            for idx, w in enumerate(self.words):
                self._coords[w] = [coords[r][idx] for r in range(self.dim)]
        else:
            for w in self.words:
                self._coords[w] = []

    def word_coords(self, w: Word) -> list[RationalFunction]:
        return self._coords[w]

    def coords(self, x: FreeElement) -> list[RationalFunction]:
        out = [RF_ZERO] * self.dim
        for w, c in x.terms.items():
            wc = self._coords.get(w)
            if wc is None:
                raise ValueError(f"word {w} does not belong to this weight space")
            for r, v in enumerate(wc):
                if not v.is_zero():
                    out[r] = out[r] + v * c
        return out

    def lift(self, coords) -> FreeElement:
        return FreeElement(dict(zip(self.basis_words, coords)))

    def reduce(self, x: FreeElement) -> FreeElement:
        return self.lift(self.coords(x))


def lowering_step(datum, i: int, l: int, c: tuple):
    """Composition transition under the lowering operator: the enlarged
    composition and the coefficient carried over from the component at c.
    Divided-power rescaling at real indices, square-root normalization at
    isotropic ones, plain prepending otherwise."""
    if datum.is_real(i):
        n = len(c)
        return (1,) * (n + 1), RF_ONE / q_integer(n + 1, datum.q_index_exponent(i))
    if datum.is_isotropic(i):
        coeff = RationalFunction.from_radical(
            RadicalRational.sqrt_of_rational(Q(l, multiplicity(c, l) + 1))
        )
        return tuple(sorted(c + (l,), reverse=True)), coeff
    return (l,) + c, RF_ONE


def raising_step(datum, i: int, l: int, c: tuple):
    """Composition transition under the raising operator, or None when the
    component at c contributes nothing (no level-l part to remove)."""
    if datum.is_real(i):
        n = len(c)
        if n == 0:
            return None
        return (1,) * (n - 1), q_integer(n, datum.q_index_exponent(i))
    if datum.is_isotropic(i):
        count = multiplicity(c, l)
        if count == 0:
            return None
        pos = c.index(l)
        return c[:pos] + c[pos + 1 :], RationalFunction.from_radical(
            RadicalRational.sqrt_of_rational(Q(count, l))
        )
    if not c or c[0] != l:
        return None
    return c[1:], RF_ONE


class UMinus:
    """Context object for one datum and form choice: weight-space models,
    primitive generators, derivations, and crystal operators."""

    def __init__(self, datum: BorcherdsCartanDatum, form: FormConfig | None = None):
        self.datum = datum
        self.algebra = FreeAlgebra(datum, form)
        self._models: dict[tuple, WeightSpaceModel] = {}
        self._primitives: dict[tuple[int, int], FreeElement] = {}
        self._taus: dict[tuple[int, int], RationalFunction] = {}
        self._levels: dict[tuple[int, int], tuple] = {}
        self._kernels: dict[tuple, list[FreeElement]] = {}

    # -- weight spaces -----------------------------------------------------
    def model(self, beta) -> WeightSpaceModel:
        beta = tuple(beta)
        hit = self._models.get(beta)
        if hit is None:
            words, gram = self.algebra.gram_matrix(beta)
            hit = WeightSpaceModel(words, gram)
            self._models[beta] = hit
        return hit

    def dimension(self, beta) -> int:
        return self.model(beta).dim

    def basis(self, beta) -> list[FreeElement]:
        return [FreeElement.from_word(w) for w in self.model(beta).basis_words]

    def homogeneous_parts(self, x: FreeElement) -> dict[tuple, FreeElement]:
        parts: dict[tuple, dict] = {}
        for w, c in x.terms.items():
            parts.setdefault(self.algebra.weight_of_word(w), {})[w] = c
        return {beta: FreeElement(t) for beta, t in sorted(parts.items())}

    def reduce(self, x: FreeElement) -> FreeElement:
        """Canonical form: each homogeneous part rewritten on pivot words."""
        out = FreeElement()
        for beta, part in self.homogeneous_parts(x).items():
            out = out + self.model(beta).reduce(part)
        return out

    def is_zero(self, x: FreeElement) -> bool:
        return self.reduce(x).is_zero()

    def mul(self, x: FreeElement, y: FreeElement) -> FreeElement:
        return self.reduce(x * y)

    def one(self) -> FreeElement:
        return free_one()

    def bar(self, x: FreeElement) -> FreeElement:
        return self.reduce(x.bar_coefficients())

    def star(self, x: FreeElement) -> FreeElement:
        return self.reduce(x.star())

    # -- primitive generators ------------------------------------------------
    def level_compositions(self, i: int, n: int) -> list[tuple[int, ...]]:
        """The index set for the weight -n*alpha_i monomial basis b_{i,c}:
        all-ones tuples at real indices, partitions at isotropic ones,
        arbitrary compositions otherwise."""
        if n == 0:
            return [()]
        if self.datum.is_real(i):
            return [(1,) * n]
        if self.datum.is_isotropic(i):
            return partitions(n)
        return compositions(n)

    def primitive(self, i: int, l: int = 1) -> FreeElement:
        """Free-algebra representative of b_{il}: agrees with f_{il} modulo
        products of lower-level generators and is orthogonal to all such
        products.  At isotropic indices the correction is the closed sum
        over partitions with inverse multiplicity factorials; elsewhere it
        comes from one Gram solve in the weight space."""
        key = (i, l)
        hit = self._primitives.get(key)
        if hit is not None:
            return hit
        alg = self.algebra
        alg.check_letter(i, l)
        if l == 1 or self.datum.is_real(i):
            out = alg.letter(i, l)
        elif self.datum.is_isotropic(i):
            out = alg.letter(i, l)
            for lam in partitions(l):
                if lam == (l,):
                    continue
                denom = 1
                for part in set(lam):
                    denom *= factorial(multiplicity(lam, part))
                out = out - self.b_monomial_free(i, lam).scale(
                    RationalFunction.from_rational(Q(1, denom))
                )
        else:
            beta = simple_root(self.datum.rank, i, l)
            words, gram = alg.gram_matrix(beta)
            t = words.index(((i, l),))
            others = [a for a in range(len(words)) if a != t]
            M = [[gram[a][b] for b in others] for a in others]
            rhs = [gram[a][t] for a in others]
            sol = solve(M, rhs, RF_ZERO, RF_ONE)
            if sol is None:
                raise ArithmeticError(
                    f"level-{l} generator at index {self.datum.indices[i]}: "
                    "no element of the lower span has matching pairings"
                )
            for nv in nullspace(M, len(others), RF_ZERO, RF_ONE):
                ghost = FreeElement(
                    {words[others[j]]: nv[j] for j in range(len(others))}
                )
                if not alg.radical_contains(ghost):
                    raise ArithmeticError(
                        f"level-{l} generator at index {self.datum.indices[i]} "
                        "is not unique: the form degenerates on the lower span"
                    )
            out = alg.letter(i, l) - FreeElement(
                {words[others[j]]: sol[j] for j in range(len(others))}
            )
        self._primitives[key] = out
        return out

    def b_monomial_free(self, i: int, c: tuple) -> FreeElement:
        """Product b_{i,c_1} b_{i,c_2} ... as a free-algebra element."""
        out = free_one()
        for part in c:
            out = out * self.primitive(i, part)
        return out

    def b_monomial(self, i: int, c: tuple) -> FreeElement:
        return self.reduce(self.b_monomial_free(i, c))

    def tau(self, i: int, l: int = 1) -> RationalFunction:
        """Norm (b_{il}, b_{il}); equals (b_{il}, f_{il}) by orthogonality."""
        key = (i, l)
        hit = self._taus.get(key)
        if hit is None:
            hit = self.algebra.lusztig_pair(self.primitive(i, l), self.algebra.letter(i, l))
            self._taus[key] = hit
        return hit

    def _level_data(self, i: int, l: int):
        """For weight l*alpha_i: the index set C_{i,l} and, for every word
        of that weight, its expansion over the monomial basis b_{i,c}."""
        key = (i, l)
        hit = self._levels.get(key)
        if hit is not None:
            return hit
        beta = simple_root(self.datum.rank, i, l)
        m = self.model(beta)
        comps = self.level_compositions(i, l)
        if m.dim != len(comps):
            raise ArithmeticError(
                f"weight {l}*alpha_{self.datum.indices[i]} has dimension "
                f"{m.dim}, expected {len(comps)} monomials"
            )
        cols = [m.coords(self.b_monomial_free(i, c)) for c in comps]
        bmat = [[cols[j][r] for j in range(len(comps))] for r in range(m.dim)]
        binv = inverse(bmat, RF_ZERO, RF_ONE)
        expansion = {w: mat_vec(binv, m.word_coords(w), RF_ZERO) for w in m.words}
        hit = (comps, expansion)
        self._levels[key] = hit
        return hit

    def letter_in_b_basis(self, i: int, l: int) -> list[tuple[tuple, RationalFunction]]:
        """Expansion f_{il} = sum_c kappa_c b_{i,c} over C_{i,l}."""
        comps, expansion = self._level_data(i, l)
        coeffs = expansion[((i, l),)]
        return [(c, k) for c, k in zip(comps, coeffs) if not k.is_zero()]

    # -- derivations ---------------------------------------------------------
    def _derivation(self, side: str, i: int, l: int, x: FreeElement):
        """Components over C_{i,l} of the coproduct of x whose `side` factor
        lies in weight -l*alpha_i, expanded over the monomial basis there."""
        comps, expansion = self._level_data(i, l)
        out = [FreeElement() for _ in comps]
        for cw, piece in self.algebra.extract(side, i, l, x).items():
            coeffs = expansion[tuple((i, a) for a in cw)]
            reduced = self.reduce(piece)
            if reduced.is_zero():
                continue
            for j, coeff in enumerate(coeffs):
                if not coeff.is_zero():
                    out[j] = out[j] + reduced.scale(coeff)
        return dict(zip(comps, out))

    def eprime(self, i: int, l: int, x: FreeElement) -> FreeElement:
        """Left derivation e'_{i,l}: the right-hand companion of b_{il}
        itself in the coproduct.  Adjoint to left multiplication:
        (b_{il} P, Q) = tau_{il} (P, e'_{i,l} Q)."""
        self.algebra.check_letter(i, l)
        return self._derivation("left", i, l, x).get((l,), FreeElement())

    def eprime_star(self, i: int, l: int, x: FreeElement) -> FreeElement:
        """Right derivation (the star conjugate * e'_{i,l} *), computed
        independently from the right-hand extraction.  Adjoint to right
        multiplication: (P b_{il}, Q) = tau_{il} (P, *e'*(Q))."""
        self.algebra.check_letter(i, l)
        return self._derivation("right", i, l, x).get((l,), FreeElement())

    def edoubleprime(self, i: int, l: int, x: FreeElement) -> FreeElement:
        """The raising companion e''_{i,l} = q_i^{l<h_i, beta - l alpha_i>}
        * e' * on a weight -beta element; together with e' it expresses the
        commutator [a_{il}, x] = tau_{il} (K_i^l e''(x) - K_i^{-l} e'(x))."""
        self.algebra.check_letter(i, l)
        datum = self.datum
        out = FreeElement()
        for beta, part in self.homogeneous_parts(x).items():
            exp = datum.symmetrizer[i] * l * (
                datum.coroot_pairing(i, beta) - l * datum.cartan[i][i]
            )
            y = self.eprime_star(i, l, part)
            if not y.is_zero():
                out = out + y.scale(RationalFunction.q_power(exp))
        return out

    def eprime_power(self, i: int, n: int, x: FreeElement) -> FreeElement:
        out = self.reduce(x)
        for _ in range(n):
            if out.is_zero():
                break
            out = self.eprime(i, 1, out)
        return out

    # -- joint kernels and decompositions -------------------------------------
    def kernel_basis(self, i: int, beta) -> list[FreeElement]:
        """Canonical basis of the intersection of ker e'_{i,l} over all
        levels l inside the weight-beta component."""
        beta = tuple(beta)
        key = (i, beta)
        hit = self._kernels.get(key)
        if hit is not None:
            return hit
        m = self.model(beta)
        max_l = 0
        if beta[i]:
            max_l = 1 if self.datum.is_real(i) else beta[i]
        rows: list[list[RationalFunction]] = []
        for l in range(1, max_l + 1):
            target = self.model(root_sub(beta, simple_root(self.datum.rank, i, l)))
            if target.dim == 0:
                continue
            cols = [
                target.coords(self.eprime(i, l, FreeElement.from_word(w)))
                for w in m.basis_words
            ]
            for r in range(target.dim):
                rows.append([cols[j][r] for j in range(m.dim)])
        hit = [m.lift(v) for v in nullspace(rows, m.dim, RF_ZERO, RF_ONE)]
        self._kernels[key] = hit
        return hit

    def i_decomposition(self, i: int, u: FreeElement) -> dict[tuple, FreeElement]:
        """Write u = sum_c b_{i,c} u_c with every u_c killed by all
        e'_{i,l}; returns {c: u_c} in canonical form."""
        out: dict[tuple, FreeElement] = {}
        for beta, part in self.homogeneous_parts(self.reduce(u)).items():
            for c, comp in self._i_decomposition_weight(i, beta, part).items():
                prev = out.get(c)
                out[c] = comp if prev is None else prev + comp
        return {c: x for c, x in out.items() if not x.is_zero()}

    def _i_decomposition_weight(self, i: int, beta: tuple, u: FreeElement):
        m = self.model(beta)
        cols: list[list[RationalFunction]] = []
        tags: list[tuple[tuple, FreeElement]] = []
        for n in range(beta[i] + 1):
            gamma = root_sub(beta, simple_root(self.datum.rank, i, n))
            kernel = self.kernel_basis(i, gamma)
            if not kernel:
                continue
            for c in self.level_compositions(i, n):
                front = self.b_monomial_free(i, c)
                for k in kernel:
                    cols.append(m.coords(front * k))
                    tags.append((c, k))
        if len(cols) != m.dim:
            raise ArithmeticError(
                f"decomposition at weight {beta}: {len(cols)} monomial-kernel "
                f"products against dimension {m.dim}"
            )
        matrix = [[cols[j][r] for j in range(len(cols))] for r in range(m.dim)]
        sol = solve_unique(matrix, m.coords(u), RF_ZERO, RF_ONE)
        out: dict[tuple, FreeElement] = {}
        for (c, k), a in zip(tags, sol):
            if a.is_zero():
                continue
            prev = out.get(c)
            piece = k.scale(a)
            out[c] = piece if prev is None else prev + piece
        return out

    # -- crystal operators -----------------------------------------------------
    def kashiwara_f(self, i: int, l: int, u: FreeElement) -> FreeElement:
        """Lowering operator: shift the decomposition u = sum b_{i,c} u_c by
        one level-l part (divided powers at real indices, square-root
        normalization at isotropic ones)."""
        self.algebra.check_letter(i, l)
        out = FreeElement()
        for c, comp in self.i_decomposition(i, u).items():
            nc, coeff = lowering_step(self.datum, i, l, c)
            out = out + self.reduce(self.b_monomial_free(i, nc) * comp).scale(coeff)
        return out

    def kashiwara_e(self, i: int, l: int, u: FreeElement) -> FreeElement:
        """Raising operator: remove one level-l part where present."""
        self.algebra.check_letter(i, l)
        out = FreeElement()
        for c, comp in self.i_decomposition(i, u).items():
            step = raising_step(self.datum, i, l, c)
            if step is None:
                continue
            nc, coeff = step
            out = out + self.reduce(self.b_monomial_free(i, nc) * comp).scale(coeff)
        return out


# -- identity checks ------------------------------------------------------------
def check_left_leibniz(U: UMinus, i: int, l: int, x: FreeElement, y: FreeElement) -> bool:
    """e'_{i,l}(xy) = e'_{i,l}(x) y + q^{-l (alpha_i, beta)} x e'_{i,l}(y)
    for x of weight -beta."""
    lhs = U.eprime(i, l, U.mul(x, y))
    alpha = simple_root(U.datum.rank, i)
    acc = U.mul(U.eprime(i, l, x), y)
    ey = U.eprime(i, l, y)
    for beta, part in U.homogeneous_parts(U.reduce(x)).items():
        exp = -l * U.datum.pairing(alpha, beta)
        acc = acc + U.mul(part, ey).scale(RationalFunction.q_power(exp))
    return (lhs - acc).is_zero()


def check_b_monomial_derivation(U: UMinus, i: int, l: int, c: tuple) -> bool:
    """e'_{i,l}(b_{i,c}) = sum over level-l parts c_k of
    q_(i)^{-2l (c_1+...+c_{k-1})} b_{i, c minus c_k}."""
    lhs = U.eprime(i, l, U.b_monomial(i, c))
    qp = U.datum.q_paren_exponent(i)
    acc = FreeElement()
    for k, part in enumerate(c):
        if part != l:
            continue
        exp = -2 * l * qp * sum(c[:k])
        acc = acc + U.b_monomial(i, c[:k] + c[k + 1 :]).scale(
            RationalFunction.q_power(exp)
        )
    return (lhs - acc).is_zero()


def check_boson_relation(
    U: UMinus, i: int, l: int, j: int, k: int, u: FreeElement
) -> bool:
    """e'_{i,l}(b_{jk} u) = [ (i,l)=(j,k) ] u + q^{-kl (alpha_i,alpha_j)}
    b_{jk} e'_{i,l}(u)."""
    u = U.reduce(u)
    b = U.primitive(j, k)
    lhs = U.eprime(i, l, U.mul(b, u))
    exp = -k * l * U.datum.pairing_roots(i, j)
    rhs = U.mul(b, U.eprime(i, l, u)).scale(RationalFunction.q_power(exp))
    if i == j and k == l:
        rhs = rhs + u
    return (lhs - rhs).is_zero()


def check_boson_relation_raising(
    U: UMinus, i: int, l: int, j: int, k: int, u: FreeElement
) -> bool:
    """e''_{i,l}(b_{jk} u) = [ (i,l)=(j,k) ] u + q^{+kl (alpha_i,alpha_j)}
    b_{jk} e''_{i,l}(u)."""
    u = U.reduce(u)
    b = U.primitive(j, k)
    lhs = U.edoubleprime(i, l, U.mul(b, u))
    exp = k * l * U.datum.pairing_roots(i, j)
    rhs = U.mul(b, U.edoubleprime(i, l, u)).scale(RationalFunction.q_power(exp))
    if i == j and k == l:
        rhs = rhs + u
    return (lhs - rhs).is_zero()


def check_derivation_commutation(
    U: UMinus, i: int, l: int, j: int, k: int, u: FreeElement
) -> bool:
    """e'_{i,l} e''_{j,k} = q^{kl (alpha_i,alpha_j)} e''_{j,k} e'_{i,l}."""
    u = U.reduce(u)
    lhs = U.eprime(i, l, U.edoubleprime(j, k, u))
    exp = k * l * U.datum.pairing_roots(i, j)
    rhs = U.edoubleprime(j, k, U.eprime(i, l, u)).scale(RationalFunction.q_power(exp))
    return (lhs - rhs).is_zero()


def check_pairing_adjunctions(
    U: UMinus, i: int, l: int, P: FreeElement, Q: FreeElement
) -> bool:
    """(b_{il} P, Q) = tau (P, e' Q) and (P b_{il}, Q) = tau (P, *e'* Q)."""
    alg = U.algebra
    b = U.primitive(i, l)
    t = U.tau(i, l)
    left_ok = alg.lusztig_pair(b * P, Q) == t * alg.lusztig_pair(
        P, U.eprime(i, l, Q)
    )
    right_ok = alg.lusztig_pair(P * b, Q) == t * alg.lusztig_pair(
        P, U.eprime_star(i, l, Q)
    )
    return left_ok and right_ok


def check_star_route(U: UMinus, i: int, l: int, x: FreeElement) -> bool:
    """The right derivation equals the star conjugate of the left one."""
    lhs = U.eprime_star(i, l, x)
    rhs = U.star(U.eprime(i, l, U.star(x)))
    return (lhs - rhs).is_zero()


def check_divided_power_ladder(U: UMinus, i: int, m: int, u: FreeElement) -> bool:
    """e'_i(b^{(m)} u) = q_i^{1-m} b^{(m-1)} u + q_i^{-2m} b^{(m)} e'_i(u)
    at a real index."""
    u = U.reduce(u)
    ri = U.datum.q_index_exponent(i)
    alg = U.algebra
    lhs = U.eprime(i, 1, U.mul(alg.divided_power(i, m), u))
    rhs = U.mul(alg.divided_power(i, m - 1), u).scale(
        RationalFunction.q_power(ri * (1 - m))
    ) + U.mul(alg.divided_power(i, m), U.eprime(i, 1, u)).scale(
        RationalFunction.q_power(-2 * m * ri)
    )
    return (lhs - rhs).is_zero()


def check_divided_power_iterate(
    U: UMinus, i: int, n: int, m: int, u: FreeElement
) -> bool:
    """e'^n_i b^{(m)} = sum_k q_i^{-2nm + (m+n)k - k(k-1)/2} [n;k]_i
    b^{(m-k)} e'^{n-k}_i as operators at a real index."""
    u = U.reduce(u)
    ri = U.datum.q_index_exponent(i)
    alg = U.algebra
    lhs = U.eprime_power(i, n, U.mul(alg.divided_power(i, m), u))
    rhs = FreeElement()
    for k in range(min(n, m) + 1):
        exp = ri * (-2 * n * m + (m + n) * k - k * (k - 1) // 2)
        piece = U.mul(alg.divided_power(i, m - k), U.eprime_power(i, n - k, u))
        rhs = rhs + piece.scale(RationalFunction.q_power(exp) * qbinom(n, k, ri))
    return (lhs - rhs).is_zero()


def projector(U: UMinus, i: int, u: FreeElement) -> FreeElement:
    """P = sum_n (-1)^n q_i^{-n(n-1)/2} b^{(n)} e'^n at a real index;
    projects onto the joint kernel of e'_i along the image of b_i."""
    u = U.reduce(u)
    ri = U.datum.q_index_exponent(i)
    alg = U.algebra
    out = FreeElement()
    n = 0
    power = u
    while not power.is_zero():
        coeff = RationalFunction.q_power(-ri * (n * (n - 1) // 2))
        if n % 2:
            coeff = -coeff
        out = out + U.mul(alg.divided_power(i, n), power).scale(coeff)
        n += 1
        power = U.eprime(i, 1, power)
    return out


def check_projector(U: UMinus, i: int, u: FreeElement) -> bool:
    """P kills b_i U, e' kills P, and sum_n q^{n(n-1)/2} b^{(n)} P e'^n = id."""
    u = U.reduce(u)
    ri = U.datum.q_index_exponent(i)
    alg = U.algebra
    if not projector(U, i, U.mul(alg.letter(i), u)).is_zero():
        return False
    if not U.eprime(i, 1, projector(U, i, u)).is_zero():
        return False
    acc = FreeElement()
    n = 0
    power = u
    while not power.is_zero():
        acc = acc + U.mul(alg.divided_power(i, n), projector(U, i, power)).scale(
            RationalFunction.q_power(ri * (n * (n - 1) // 2))
        )
        n += 1
        power = U.eprime(i, 1, power)
    return (acc - u).is_zero()


def check_real_components(U: UMinus, i: int, u: FreeElement) -> bool:
    """The projector extracts the divided-power components: with
    u = sum b^{(n)} v_n, one has v_n = q_i^{n(n-1)/2} P e'^n u; these must
    match the generic decomposition up to the [n]! rescaling."""
    u = U.reduce(u)
    ri = U.datum.q_index_exponent(i)
    dec = U.i_decomposition(i, u)
    n = 0
    power = u
    while True:
        v = projector(U, i, power).scale(
            RationalFunction.q_power(ri * (n * (n - 1) // 2))
        )
        generic = dec.get((1,) * n, FreeElement())
        if not (v - generic.scale(q_factorial(n, ri))).is_zero():
            return False
        power = U.eprime(i, 1, power)
        n += 1
        if power.is_zero():
            return all(len(c) < n for c in dec)


def check_i_decomposition(U: UMinus, i: int, u: FreeElement) -> bool:
    """Components are joint e'-kernel members and reassemble to u."""
    u = U.reduce(u)
    dec = U.i_decomposition(i, u)
    acc = FreeElement()
    for c, comp in dec.items():
        for beta, part in U.homogeneous_parts(comp).items():
            max_l = 0
            if beta[i]:
                max_l = 1 if U.datum.is_real(i) else beta[i]
            for l in range(1, max_l + 1):
                if not U.eprime(i, l, part).is_zero():
                    return False
        acc = acc + U.reduce(U.b_monomial_free(i, c) * comp)
    return (acc - u).is_zero()


def check_crystal_inverse(U: UMinus, i: int, l: int, u: FreeElement) -> bool:
    """Raising after lowering at the same (i,l) is the identity."""
    u = U.reduce(u)
    return (U.kashiwara_e(i, l, U.kashiwara_f(i, l, u)) - u).is_zero()


def check_crystal_commutation(
    U: UMinus, i: int, l: int, lp: int, u: FreeElement
) -> bool:
    """For an isotropic index, lowering operators at distinct levels
    commute, and lowering commutes with raising at a distinct level.
    (For non-isotropic imaginary indices the operators prepend to an
    ordered composition, so this genuinely fails there.)"""
    if l == lp:
        raise ValueError("levels must differ")
    if not U.datum.is_isotropic(i):
        raise ValueError("distinct-level commutation is an isotropic identity")
    u = U.reduce(u)
    ff = (
        U.kashiwara_f(i, l, U.kashiwara_f(i, lp, u))
        - U.kashiwara_f(i, lp, U.kashiwara_f(i, l, u))
    ).is_zero()
    fe = (
        U.kashiwara_f(i, l, U.kashiwara_e(i, lp, u))
        - U.kashiwara_e(i, lp, U.kashiwara_f(i, l, u))
    ).is_zero()
    return ff and fe


def check_primitive_coproduct(U: UMinus, i: int, l: int) -> bool:
    """rho(b_{il}) = b_{il} (x) 1 + 1 (x) b_{il} modulo radicals, checked by
    pairing the defect against every word pair of matching weights."""
    alg = U.algebra
    b = U.primitive(i, l)
    expected = TensorElement({(w, ()): c for w, c in b.terms.items()}) + TensorElement(
        {((), w): c for w, c in b.terms.items()}
    )
    defect = alg.coproduct(b) - expected
    rank = U.datum.rank
    for k in range(l + 1):
        for w1 in alg.words_of_weight(simple_root(rank, i, k)):
            for w2 in alg.words_of_weight(simple_root(rank, i, l - k)):
                probe = TensorElement({(w1, w2): RF_ONE})
                if not alg.tensor_pair(defect, probe).is_zero():
                    return False
    return True


def check_primitive_normalization(U: UMinus, i: int, l: int) -> bool:
    """b_{il} - f_{il} lies in the span of longer words, is orthogonal to
    every product of lower levels, and is bar- and star-fixed."""
    alg = U.algebra
    b = U.primitive(i, l)
    if ((i, l),) in (b - alg.letter(i, l)).terms:
        return False
    for c in compositions(l):
        if c == (l,):
            continue
        word = tuple((i, p) for p in c)
        if not alg.lusztig_pair(b, FreeElement.from_word(word)).is_zero():
            return False
    rb = U.reduce(b)
    return (U.bar(b) - rb).is_zero() and (U.star(b) - rb).is_zero()
