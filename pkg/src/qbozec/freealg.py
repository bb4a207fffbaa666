"""The free algebra on generators f_{il} graded by the negative root
lattice, its twisted coproduct, and Lusztig's bilinear form.

Words are tuples of letters (index, level); real indices only admit level 1.
The coproduct sends f_{il} to sum_{m+n=l} q_(i)^{-mn} f_{im} (x) f_{in} and
is multiplicative for the twisted tensor product
    (x1 (x) x2)(y1 (x) y2) = q^{-(wt x2, wt y1)} x1 y1 (x) x2 y2.
The bilinear form is characterized by (f_{il}, f_{il}) = nu_{il},
biorthogonality of distinct weights, and adjunction with the coproduct;
its radical is the defining ideal of the quantized enveloping algebra's
negative half.
"""

from __future__ import annotations

import warnings

from .cartan import BorcherdsCartanDatum, root_add, simple_root
from .scalars import (
    RF_ONE,
    RF_ZERO,
    RationalFunction,
    nu_syntactically_regular,
    q_factorial,
)

Word = tuple  # tuple[tuple[int, int], ...]


class FormConfig:
    """Choice of the form parameters nu_{il}; defaults to 1 for all (i,l).

    Values are only *syntactically* screened for membership in
    1 + q Z>=0[[q]] (the written forms `1` and `1/(1-...)` pass); anything
    else emits a warning rather than an error.
    """

    def __init__(self, default: RationalFunction = RF_ONE, overrides=None):
        self.default = default
        self.overrides: dict[tuple[int, int], RationalFunction] = dict(overrides or {})
        self.warned: list[str] = []
        for label, value in [("default", default)] + [
            (f"({i},{l})", v) for (i, l), v in sorted(self.overrides.items())
        ]:
            if not nu_syntactically_regular(value):
                msg = (
                    f"form parameter nu {label} = {value} is not syntactically "
                    "of the form 1 or 1/(1 - nonnegative series); regularity "
                    "is assumed, not checked"
                )
                self.warned.append(msg)
                warnings.warn(msg, stacklevel=2)

    def nu(self, i: int, l: int) -> RationalFunction:
        return self.overrides.get((i, l), self.default)

    def key(self) -> tuple:
        return (
            self.default,
            tuple(sorted(self.overrides.items())),
        )


class FreeElement:
    """Finite K(q)-linear combination of words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, RationalFunction] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @staticmethod
    def from_word(w: Word, coeff: RationalFunction = RF_ONE) -> "FreeElement":
        return FreeElement({w: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for w, c in other.terms.items():
            v = terms.get(w)
            v = c if v is None else v + c
            if v.is_zero():
                terms.pop(w, None)
            else:
                terms[w] = v
        return FreeElement(terms)

    def __neg__(self) -> "FreeElement":
        return FreeElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, c: RationalFunction) -> "FreeElement":
        if c.is_zero():
            return FreeElement()
        return FreeElement({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        """Concatenation product (the twist lives in the tensor square)."""
        terms: dict[Word, RationalFunction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = terms.get(w)
                p = c1 * c2
                v = p if v is None else v + p
                if v.is_zero():
                    terms.pop(w, None)
                else:
                    terms[w] = v
        return FreeElement(terms)

    def bar_coefficients(self) -> "FreeElement":
        """Bar involution: fixes every word, conjugates coefficients."""
        return FreeElement({w: c.bar() for w, c in self.terms.items()})

    def star(self) -> "FreeElement":
        """Anti-automorphism reversing words and fixing the generators."""
        return FreeElement({tuple(reversed(w)): c for w, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, FreeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))

    def __repr__(self):
        if not self.terms:
            return "FreeElement(0)"
        bits = [f"{c}*{fmt_word(w)}" for w, c in sorted(self.terms.items())]
        return "FreeElement(" + " + ".join(bits) + ")"


FREE_ONE_WORD: Word = ()


def free_one() -> FreeElement:
    return FreeElement({FREE_ONE_WORD: RF_ONE})


def fmt_word(w: Word) -> str:
    if not w:
        return "1"
    return "*".join(f"f[{i},{l}]" for i, l in w)


class TensorElement:
    """Element of the tensor square, indexed by word pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[tuple[Word, Word], RationalFunction] = {
            k: c for k, c in (terms or {}).items() if not c.is_zero()
        }

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = terms.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = v
        return TensorElement(terms)

    def __sub__(self, other):
        return self + TensorElement({k: -c for k, c in other.terms.items()})

    def scale(self, c: RationalFunction) -> "TensorElement":
        return TensorElement({k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __repr__(self):
        bits = [
            f"{c}*({fmt_word(a)} (x) {fmt_word(b)})"
            for (a, b), c in sorted(self.terms.items())
        ]
        return "TensorElement(" + (" + ".join(bits) or "0") + ")"


class FreeAlgebra:
    """Free algebra attached to a Borcherds-Cartan datum and form config."""

    def __init__(self, datum: BorcherdsCartanDatum, form: FormConfig | None = None):
        self.datum = datum
        self.form = form or FormConfig()
        self._pair_cache: dict[tuple[Word, Word], RationalFunction] = {}
        self._letter_pair_cache: dict[tuple[int, int, tuple], RationalFunction] = {}
        self._gram_cache: dict[tuple, tuple] = {}
        self._words_cache: dict[tuple, list] = {}

    # -- words and weights ------------------------------------------------
    def check_letter(self, i: int, l: int):
        if not 0 <= i < self.datum.rank:
            raise ValueError(f"index position {i} out of range")
        if l < 1:
            raise ValueError(f"level must be >= 1, got {l}")
        if self.datum.is_real(i) and l != 1:
            raise ValueError(
                f"real index {self.datum.indices[i]} only admits level 1, got {l}"
            )

    def letter(self, i: int, l: int = 1) -> FreeElement:
        self.check_letter(i, l)
        return FreeElement.from_word(((i, l),))

    def weight_of_word(self, w: Word) -> tuple[int, ...]:
        """Multiplicity vector beta with actual weight -beta."""
        coords = [0] * self.datum.rank
        for i, l in w:
            coords[i] += l
        return tuple(coords)

    def weight_of(self, x: FreeElement) -> tuple[int, ...]:
        wts = {self.weight_of_word(w) for w in x.terms}
        if len(wts) != 1:
            raise ValueError(f"element is not homogeneous: weights {sorted(wts)}")
        return next(iter(wts))

    def words_of_weight(self, beta: tuple[int, ...]) -> list[Word]:
        """All words of weight -beta in the canonical order (lexicographic
        on the letter sequence; letters ordered by index position, level)."""
        beta = tuple(beta)
        hit = self._words_cache.get(beta)
        if hit is not None:
            return hit
        out: list[Word] = []

        def rec(prefix: list, rem: tuple[int, ...]):
            if not any(rem):
                out.append(tuple(prefix))
                return
            for i in range(self.datum.rank):
                if rem[i] == 0:
                    continue
                max_l = 1 if self.datum.is_real(i) else rem[i]
                for l in range(1, max_l + 1):
                    prefix.append((i, l))
                    rec(prefix, rem[:i] + (rem[i] - l,) + rem[i + 1 :])
                    prefix.pop()

        rec([], beta)
        out.sort()
        self._words_cache[beta] = out
        return out

    # -- coproduct ---------------------------------------------------------
    def tensor_mul(self, s: TensorElement, t: TensorElement) -> TensorElement:
        pairing = self.datum.pairing
        terms: dict[tuple[Word, Word], RationalFunction] = {}
        for (a1, a2), c1 in s.terms.items():
            wa2 = self.weight_of_word(a2)
            for (b1, b2), c2 in t.terms.items():
                twist = -pairing(wa2, self.weight_of_word(b1))
                k = (a1 + b1, a2 + b2)
                p = c1 * c2 * RationalFunction.q_power(twist)
                v = terms.get(k)
                v = p if v is None else v + p
                if v.is_zero():
                    terms.pop(k, None)
                else:
                    terms[k] = v
        return TensorElement(terms)

    def coproduct_letter(self, i: int, l: int) -> TensorElement:
        qp = self.datum.q_paren_exponent(i)
        terms = {}
        for m in range(l + 1):
            n = l - m
            left: Word = ((i, m),) if m else ()
            right: Word = ((i, n),) if n else ()
            terms[(left, right)] = RationalFunction.q_power(-qp * m * n)
        return TensorElement(terms)

    def coproduct(self, x: FreeElement) -> TensorElement:
        """Full coproduct, materialized over word pairs."""
        out = TensorElement()
        for w, c in x.terms.items():
            acc = TensorElement({((), ()): RF_ONE})
            for i, l in w:
                acc = self.tensor_mul(acc, self.coproduct_letter(i, l))
            out = out + acc.scale(c)
        return out

    # -- extractions --------------------------------------------------------
    def _split_word(self, w: Word, i: int, l: int, side: str):
        """Coproduct components of one word whose `side` factor is a word in
        the single index i of total level l.  Yields (composition, other
        word, integer q-exponent).  Every twist pairs the incoming left
        piece against the right-factor weight accumulated so far."""
        results: list[tuple[tuple, Word, int]] = []
        pairing_roots = self.datum.pairing_roots
        qp_i = self.datum.q_paren_exponent(i)
        rank = self.datum.rank

        def pair_with(acc_right_wt, j: int) -> int:
            return sum(acc_right_wt[t] * pairing_roots(t, j) for t in range(rank))

        def rec(p: int, taken: int, comp: list, other: list, exp: int, acc_right_wt):
            if taken > l:
                return
            if p == len(w):
                if taken == l:
                    results.append((tuple(comp), tuple(other), exp))
                return
            j, k = w[p]
            if j != i:
                if side == "left":
                    # letter is a right-factor piece: (1 (x) f_{jk}), no twist
                    rec(p + 1, taken, comp, other + [(j, k)], exp,
                        root_add(acc_right_wt, simple_root(rank, j, k)))
                else:
                    # letter is a left-factor piece: twist against acc
                    tw = -k * pair_with(acc_right_wt, j)
                    rec(p + 1, taken, comp, other + [(j, k)], exp + tw, acc_right_wt)
                return
            for a in range(0, min(k, l - taken) + 1):
                rem = k - a
                cop = -qp_i * a * rem
                if side == "left":
                    # left gets f_{i,a}; right gets f_{i,rem}
                    tw = -a * pair_with(acc_right_wt, i)
                    new_comp = comp + [a] if a else comp
                    new_other = other + [(i, rem)] if rem else other
                    new_acc = (
                        root_add(acc_right_wt, simple_root(rank, i, rem))
                        if rem
                        else acc_right_wt
                    )
                else:
                    # right gets f_{i,a}; left gets f_{i,rem}
                    tw = -rem * pair_with(acc_right_wt, i)
                    new_comp = comp + [a] if a else comp
                    new_other = other + [(i, rem)] if rem else other
                    new_acc = (
                        root_add(acc_right_wt, simple_root(rank, i, a))
                        if a
                        else acc_right_wt
                    )
                rec(p + 1, taken + a, new_comp, new_other, exp + cop + tw, new_acc)

        rec(0, 0, [], [], 0, tuple([0] * rank))
        return results

    def extract(self, side: str, i: int, l: int, x: FreeElement):
        """Extraction maps: the components of the coproduct whose left
        (side='left', map rho^{i,l}) or right (side='right', map rho_{i,l})
        factor runs over the monomial basis f_{i,c} of weight -l*alpha_i.
        Returns {composition: FreeElement}."""
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        out: dict[tuple, FreeElement] = {}
        for w, coeff in x.terms.items():
            for comp, other, exp in self._split_word(w, i, l, side):
                contrib = coeff * RationalFunction.q_power(exp)
                cur = out.get(comp)
                el = FreeElement.from_word(other, contrib)
                out[comp] = el if cur is None else cur + el
        return {c: e for c, e in out.items() if not e.is_zero()}

    # -- the bilinear form ---------------------------------------------------
    def _letter_monomial_pair(self, i: int, l: int, comp: tuple) -> RationalFunction:
        """(f_{il}, f_{i,c}) for a composition c of l."""
        key = (i, l, comp)
        hit = self._letter_pair_cache.get(key)
        if hit is not None:
            return hit
        if len(comp) == 1:
            out = self.form.nu(i, l)
        else:
            c1 = comp[0]
            qp = self.datum.q_paren_exponent(i)
            out = (
                RationalFunction.q_power(-qp * c1 * (l - c1))
                * self.form.nu(i, c1)
                * self._letter_monomial_pair(i, l - c1, comp[1:])
            )
        self._letter_pair_cache[key] = out
        return out

    def _pair_words(self, wx: Word, wy: Word) -> RationalFunction:
        """Form value on two words of EQUAL weight (precondition; the
        recursion and all callers preserve it)."""
        if not wx:
            return RF_ONE  # equal weights force wy empty too
        key = (wx, wy)
        hit = self._pair_cache.get(key)
        if hit is not None:
            return hit
        i, l = wx[0]
        rest = wx[1:]
        comps = self.extract("left", i, l, FreeElement.from_word(wy))
        acc = RF_ZERO
        for comp, element in comps.items():
            factor = self._letter_monomial_pair(i, l, comp)
            if factor.is_zero():
                continue
            inner = RF_ZERO
            for w2, c2 in element.terms.items():
                inner = inner + c2 * self._pair_words(rest, w2)
            acc = acc + factor * inner
        self._pair_cache[key] = acc
        return acc

    def lusztig_pair(
        self, x: FreeElement, y: FreeElement
    ) -> RationalFunction:
        """Lusztig's bilinear form; zero across distinct weights."""
        by_wt_x: dict[tuple, list] = {}
        for w, c in x.terms.items():
            by_wt_x.setdefault(self.weight_of_word(w), []).append((w, c))
        acc = RF_ZERO
        for w2, c2 in y.terms.items():
            wt2 = self.weight_of_word(w2)
            for w1, c1 in by_wt_x.get(wt2, ()):
                acc = acc + c1 * c2 * self._pair_words(w1, w2)
        return acc

    def tensor_pair(self, s: TensorElement, t: TensorElement) -> RationalFunction:
        """(x1 (x) x2, y1 (x) y2) = (x1,y1)(x2,y2), extended bilinearly."""
        acc = RF_ZERO
        for (a1, a2), c1 in s.terms.items():
            for (b1, b2), c2 in t.terms.items():
                if self.weight_of_word(a1) != self.weight_of_word(b1):
                    continue
                if self.weight_of_word(a2) != self.weight_of_word(b2):
                    continue
                p1 = self._pair_words(a1, b1)
                if p1.is_zero():
                    continue
                p2 = self._pair_words(a2, b2)
                if p2.is_zero():
                    continue
                acc = acc + c1 * c2 * p1 * p2
        return acc

    def gram_matrix(self, beta: tuple[int, ...]):
        """(words, G) with G[a][b] = (word_a, word_b) in canonical order."""
        beta = tuple(beta)
        hit = self._gram_cache.get(beta)
        if hit is not None:
            return hit
        words = self.words_of_weight(beta)
        G = [
            [self._pair_words(wa, wb) for wb in words]
            for wa in words
        ]
        self._gram_cache[beta] = (words, G)
        return words, G

    # -- distinguished elements ----------------------------------------------
    def divided_power(self, i: int, n: int) -> FreeElement:
        """f_i^{(n)} = f_i^n / [n]_i! for a real index i."""
        if not self.datum.is_real(i):
            raise ValueError("divided powers require a real index")
        if n < 0:
            raise ValueError("negative divided power")
        word = ((i, 1),) * n
        fact = q_factorial(n, self.datum.q_index_exponent(i))
        return FreeElement.from_word(word, RF_ONE / fact)

    def serre_element(
        self, i: int, j: int, m: int, n: int, comp: tuple, sign: int
    ) -> FreeElement:
        """Higher quantum Serre element
        sum_{r+s=m} (-1)^r q_i^{sign*r*(-a_ij*n - m + 1)} f_i^{(r)} f_{j,c} f_i^{(s)},
        a radical member whenever i is real, i != j, and m > -a_ij * n."""
        if not self.datum.is_real(i):
            raise ValueError("first index must be real")
        if i == j and n != 0:
            raise ValueError("indices must differ (unless n = 0)")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if n == 0:
            comp = ()
        if sum(comp) != n or any(c < 1 for c in comp):
            raise ValueError(f"{comp} is not a composition of {n}")
        if n and self.datum.is_real(j) and any(c != 1 for c in comp):
            raise ValueError("real middle index requires levels 1")
        if m <= -self.datum.cartan[i][j] * n:
            raise ValueError(
                f"need m > -a_ij*n = {-self.datum.cartan[i][j] * n}, got m={m}"
            )
        middle = FreeElement.from_word(tuple((j, c) for c in comp))
        exp_unit = -self.datum.cartan[i][j] * n - m + 1
        ri = self.datum.q_index_exponent(i)
        acc = FreeElement()
        for r in range(m + 1):
            s = m - r
            coeff = RationalFunction.q_power(sign * r * exp_unit * ri)
            if r % 2:
                coeff = -coeff
            term = (
                self.divided_power(i, r) * middle * self.divided_power(i, s)
            ).scale(coeff)
            acc = acc + term
        return acc

    def commutator_element(self, i: int, k: int, j: int, l: int) -> FreeElement:
        """f_{ik} f_{jl} - f_{jl} f_{ik}; a radical member when a_ij = 0."""
        self.check_letter(i, k)
        self.check_letter(j, l)
        if self.datum.cartan[i][j] != 0:
            raise ValueError("commutator element requires a_ij = 0")
        a = self.letter(i, k)
        b = self.letter(j, l)
        return a * b - b * a

    # -- radical ---------------------------------------------------------------
    def radical_contains(self, x: FreeElement) -> bool:
        """Membership in the radical of the form, checked weight by weight
        by pairing against every basis word."""
        if x.is_zero():
            return True
        by_wt: dict[tuple, FreeElement] = {}
        for w, c in x.terms.items():
            wt = self.weight_of_word(w)
            by_wt[wt] = by_wt.get(wt, FreeElement()) + FreeElement.from_word(w, c)
        for wt, part in by_wt.items():
            for w in self.words_of_weight(wt):
                if not self.lusztig_pair(part, FreeElement.from_word(w)).is_zero():
                    return False
        return True
