"""Named verification suites with deterministic reports.

Each suite assembles a list of keyed checks over one datum, and the
runner executes them (optionally on a thread pool) and prints one sorted
PASS/FAIL line per check plus a summary footer.  Keys are unique and
sorted lexicographically, so the report is byte-identical regardless of
worker count or scheduling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .cartan import BorcherdsCartanDatum, weights_up_to_height
from .crystal import (
    CrystalBasis,
    ModuleCrystalBasis,
    check_crystal_adjoint_q0,
    check_crystal_orthonormal,
    check_edges_reversible,
    check_lattice_pairs_regular,
    check_pi_bijection,
    check_pi_intertwines,
    check_pi_lattice,
    check_representative_independence,
)
from .globalbasis import (
    GlobalBasis,
    check_balanced,
    check_global_basis,
    check_global_integral,
    check_imaginary_string_submodule,
    check_isotropic_star_submodule,
    check_projection_compatibility,
    check_real_recovery,
    check_real_string_submodule,
)
from .highest_weight import (
    HighestWeightModule,
    check_contravariant_adjunction,
    check_form_comparison,
    check_gram_symmetric,
    check_ideal_vanishes,
    check_module_commutator,
    check_v_decomposition,
)
from .scalars import (
    Q,
    RF_ONE,
    RR_ONE,
    RadicalRational,
    RationalFunction,
    q_factorial,
    qbinom,
)
from .uminus import (
    UMinus,
    check_b_monomial_derivation,
    check_boson_relation,
    check_boson_relation_raising,
    check_crystal_commutation,
    check_crystal_inverse,
    check_derivation_commutation,
    check_divided_power_iterate,
    check_divided_power_ladder,
    check_i_decomposition,
    check_left_leibniz,
    check_pairing_adjunctions,
    check_primitive_coproduct,
    check_primitive_normalization,
    check_projector,
    check_real_components,
    compositions,
    multiplicity,
    partitions,
)

SUITE_NAMES = (
    "partition",
    "tau",
    "serre",
    "commutator",
    "operators",
    "crystal",
    "module",
    "projection",
    "balanced",
    "global",
    "strings",
    "compat",
)


class Report:
    """Sorted PASS/FAIL lines plus a one-line summary."""

    __slots__ = ("lines", "passed", "failed")

    def __init__(self, lines, passed, failed):
        self.lines = lines
        self.passed = passed
        self.failed = failed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def text(self) -> str:
        footer = f"checks={self.passed + self.failed} passed={self.passed} failed={self.failed}"
        return "\n".join(self.lines + [footer]) + "\n"


class VerifyContext:
    """Shared objects for one run; heavyweight pieces are built once,
    during suite assembly, and reused by every check."""

    def __init__(self, datum: BorcherdsCartanDatum, height: int, form=None, lambdas=None):
        if height < 0:
            raise ValueError("height must be nonnegative")
        self.datum = datum
        self.height = height
        self.U = UMinus(datum, form)
        if lambdas is None:
            lambdas = [(k,) * datum.rank for k in (0, 1, 5)]
        self.lambdas = [tuple(int(x) for x in lam) for lam in lambdas]
        for lam in self.lambdas:
            if len(lam) != datum.rank or any(x < 0 for x in lam):
                raise ValueError(f"bad dominant weight {lam}")
        self._inf = None
        self._gb_inf = None
        self._modules: dict[tuple, HighestWeightModule] = {}
        self._mod_crystals: dict[tuple, ModuleCrystalBasis] = {}
        self._gb_mods: dict[tuple, GlobalBasis] = {}

    def weights(self):
        return [w for w in weights_up_to_height(self.datum.rank, self.height) if sum(w)]

    def letters(self, max_level: int = 2):
        out = []
        for i in range(self.datum.rank):
            top = 1 if self.datum.is_real(i) else min(max_level, self.height)
            for l in range(1, top + 1):
                out.append((i, l))
        return out

    def infinity(self) -> CrystalBasis:
        if self._inf is None:
            self._inf = CrystalBasis(self.U, self.height)
        return self._inf

    def global_infinity(self) -> GlobalBasis:
        if self._gb_inf is None:
            self._gb_inf = GlobalBasis(self.infinity())
        return self._gb_inf

    def module(self, lam) -> HighestWeightModule:
        if lam not in self._modules:
            self._modules[lam] = HighestWeightModule(self.U, lam)
        return self._modules[lam]

    def module_crystal(self, lam) -> ModuleCrystalBasis:
        if lam not in self._mod_crystals:
            self._mod_crystals[lam] = ModuleCrystalBasis(self.module(lam), self.height)
        return self._mod_crystals[lam]

    def global_module(self, lam) -> GlobalBasis:
        if lam not in self._gb_mods:
            self._gb_mods[lam] = GlobalBasis(self.module_crystal(lam))
        return self._gb_mods[lam]

    def warm(self):
        """Precompute the shared per-weight caches sequentially so parallel
        workers only read them; failures are left for the owning checks to
        report."""
        ws = self.weights()
        gbs = list(self._gb_mods.values())
        if self._gb_inf is not None:
            gbs.append(self._gb_inf)
        for w in ws:
            try:
                self.U.model(w)
            except Exception:
                pass
            for V in self._modules.values():
                try:
                    V.gram(w)
                except Exception:
                    pass
            for gb in gbs:
                try:
                    gb.data(w)
                except Exception:
                    pass


def _wkey(beta) -> str:
    return ",".join(str(b) for b in beta)


def _lkey(lam) -> str:
    return ",".join(str(x) for x in lam)


def _all_over(fn, items):
    def thunk():
        return all(fn(*args) for args in items)

    return thunk


def _partition_identity(l: int) -> bool:
    total = Fraction(0)
    for p in partitions(l):
        denom = 1
        for k in set(p):
            mk = multiplicity(p, k)
            denom *= k**mk * math.factorial(mk)
        total += Fraction(1, denom)
    return total == 1


def _qbrace_identity(ri: int, lh: int, n: int, m: int) -> bool:
    """The Cartan q-brace acts on a highest vector by a Gaussian binomial:
    prod_{s<=m} [lh+n+1-s]_i / [m]_i! = [lh+n; m]_i."""
    lhs = RF_ONE
    unit = RationalFunction.q_power(ri) - RationalFunction.q_power(-ri)
    for s in range(1, m + 1):
        e = lh + n + 1 - s
        lhs = lhs * (RationalFunction.q_power(ri * e) - RationalFunction.q_power(-ri * e))
        lhs = lhs / unit
    lhs = lhs / q_factorial(m, ri)
    return lhs == qbinom(lh + n, m, ri)


def _star_isometry(U: UMinus, xs) -> bool:
    alg = U.algebra
    for a in xs:
        for b in xs:
            if alg.lusztig_pair(U.star(a), U.star(b)) != alg.lusztig_pair(a, b):
                return False
    return True


# -- suites -----------------------------------------------------------------


def _suite_partition(ctx: VerifyContext):
    return [
        (f"partition:l={l}", _all_over(_partition_identity, [(l,)]))
        for l in range(1, 9)
    ]


def _suite_tau(ctx: VerifyContext):
    U, datum = ctx.U, ctx.datum
    tasks = []
    for i in range(datum.rank):
        if datum.is_real(i):
            continue
        want_iso = datum.is_isotropic(i)
        for l in range(1, min(4, ctx.height) + 1):

            def thunk(i=i, l=l, want_iso=want_iso):
                tau = U.tau(i, l)
                if tau.order_at_zero() != 0:
                    return False
                want = (
                    RadicalRational.from_rational(Q(1) / Q(l)) if want_iso else RR_ONE
                )
                return tau.value_at_zero() == want

            tasks.append((f"tau:i={datum.indices[i]},l={l}", thunk))
    return tasks


def _suite_serre(ctx: VerifyContext):
    U, datum = ctx.U, ctx.datum
    alg = U.algebra
    tasks = []
    for i in range(datum.rank):
        if not datum.is_real(i):
            continue
        for j in range(datum.rank):
            if j == i:
                continue
            for n in (1, 2):
                lowest = -datum.cartan[i][j] * n + 1
                for m in range(lowest, ctx.height + 1):
                    comps = (
                        [(1,) * n] if datum.is_real(j) else compositions(n)
                    )
                    for comp in comps:
                        for sign in (1, -1):

                            def thunk(i=i, j=j, m=m, n=n, comp=comp, sign=sign):
                                el = alg.serre_element(i, j, m, n, comp, sign)
                                return alg.radical_contains(el)

                            key = (
                                f"serre:i={datum.indices[i]},j={datum.indices[j]},"
                                f"m={m},n={n},c={_wkey(comp)},s={sign:+d}"
                            )
                            tasks.append((key, thunk))
    return tasks


def _suite_commutator(ctx: VerifyContext):
    U, datum = ctx.U, ctx.datum
    alg = U.algebra
    tasks = []
    for i in range(datum.rank):
        for j in range(i + 1, datum.rank):
            if datum.cartan[i][j] != 0:
                continue
            ks = (1,) if datum.is_real(i) else range(1, min(3, ctx.height) + 1)
            ls = (1,) if datum.is_real(j) else range(1, min(3, ctx.height) + 1)
            for k in ks:
                for l in ls:

                    def thunk(i=i, k=k, j=j, l=l):
                        return alg.radical_contains(alg.commutator_element(i, k, j, l))

                    key = (
                        f"commutator:i={datum.indices[i]},k={k},"
                        f"j={datum.indices[j]},l={l}"
                    )
                    tasks.append((key, thunk))
    return tasks


def _suite_operators(ctx: VerifyContext):
    U, datum = ctx.U, ctx.datum
    alg = U.algebra
    letters = ctx.letters()
    tasks = []
    for i, l in letters:
        if min(3, ctx.height) >= l:
            tasks.append(
                (
                    f"operators:primitive:i={datum.indices[i]},l={l}",
                    _all_over(
                        lambda i, l: check_primitive_coproduct(U, i, l)
                        and check_primitive_normalization(U, i, l),
                        [(i, l)],
                    ),
                )
            )
    for i in range(datum.rank):
        if datum.is_real(i):
            continue
        for k in range(1, min(3, ctx.height) + 1):
            for c in compositions(k):
                tasks.append(
                    (
                        f"operators:bmonomial:i={datum.indices[i]},c={_wkey(c)}",
                        _all_over(
                            check_b_monomial_derivation,
                            [(U, i, l, c) for l in (1, 2)],
                        ),
                    )
                )
    single_letters = [alg.letter(i, l) for i, l in letters]
    for w in ctx.weights():
        wk = _wkey(w)
        xs = U.basis(w)
        if not xs:
            continue
        for i, l in letters:
            # the product b_{j,k} x lives at w + k alpha_j; keep it in budget
            pairs = [
                (U, i, l, j, k, x)
                for j, k in letters
                if sum(w) + k <= ctx.height
                for x in xs
            ]
            if pairs:
                tasks.append(
                    (
                        f"operators:boson:w={wk}:i={datum.indices[i]},l={l}",
                        _all_over(
                            lambda *a: check_boson_relation(*a)
                            and check_boson_relation_raising(*a),
                            pairs,
                        ),
                    )
                )
            tasks.append(
                (
                    f"operators:derivations:w={wk}:i={datum.indices[i]},l={l}",
                    _all_over(
                        check_derivation_commutation,
                        [(U, i, l, j, k, x) for j, k in letters for x in xs],
                    ),
                )
            )
            if sum(w) + l <= ctx.height:
                up = tuple(w[t] + (l if t == i else 0) for t in range(datum.rank))
                qs = U.basis(up)
                tasks.append(
                    (
                        f"operators:adjunction:w={wk}:i={datum.indices[i]},l={l}",
                        _all_over(
                            check_pairing_adjunctions,
                            [(U, i, l, p, qq) for p in xs for qq in qs],
                        ),
                    )
                )
            # x * letter(j, k) lives at w + k alpha_j; keep it in budget
            trios = [
                (U, i, l, x, y)
                for x in xs
                for (j, k), y in zip(letters, single_letters)
                if sum(w) + k <= ctx.height
            ]
            if trios:
                tasks.append(
                    (
                        f"operators:leibniz:w={wk}:i={datum.indices[i]},l={l}",
                        _all_over(check_left_leibniz, trios),
                    )
                )
            if sum(w) + l <= ctx.height:
                # the lowering lands at w + l alpha_i
                tasks.append(
                    (
                        f"operators:kashiwara:w={wk}:i={datum.indices[i]},l={l}",
                        _all_over(check_crystal_inverse, [(U, i, l, x) for x in xs]),
                    )
                )
        tasks.append(
            (
                f"operators:star:w={wk}",
                _all_over(_star_isometry, [(U, xs)]),
            )
        )
        for i in range(datum.rank):
            tasks.append(
                (
                    f"operators:idecomp:w={wk}:i={datum.indices[i]}",
                    _all_over(check_i_decomposition, [(U, i, x) for x in xs]),
                )
            )
            if datum.is_real(i):
                tasks.append(
                    (
                        f"operators:projector:w={wk}:i={datum.indices[i]}",
                        _all_over(
                            lambda U, i, x: check_projector(U, i, x)
                            and check_real_components(U, i, x),
                            [(U, i, x) for x in xs],
                        ),
                    )
                )
                tasks.append(
                    (
                        f"operators:divpow:w={wk}:i={datum.indices[i]}",
                        _all_over(
                            lambda U, i, x: check_divided_power_ladder(U, i, 2, x)
                            and check_divided_power_iterate(U, i, 2, 2, x),
                            [(U, i, x) for x in xs],
                        ),
                    )
                )
            elif datum.is_isotropic(i) and sum(w) + 3 <= ctx.height:
                # both composites land at w + 3 alpha_i; keep that inside
                # the height budget
                tasks.append(
                    (
                        f"operators:commuting:w={wk}:i={datum.indices[i]}",
                        _all_over(
                            check_crystal_commutation,
                            [(U, i, 1, 2, x) for x in xs],
                        ),
                    )
                )
    return tasks


def _crystal_tasks(name: str, crystal: CrystalBasis, ctx: VerifyContext):
    tasks = [
        (
            f"crystal:{name}:reversible",
            _all_over(check_edges_reversible, [(crystal,)]),
        ),
        (
            f"crystal:{name}:representatives",
            _all_over(check_representative_independence, [(crystal,)]),
        ),
    ]
    for w in crystal.weights():
        wk = _wkey(w)
        tasks.append(
            (
                f"crystal:{name}:w={wk}:orthonormal",
                _all_over(
                    lambda c, b: check_lattice_pairs_regular(c, b)
                    and check_crystal_orthonormal(c, b),
                    [(crystal, w)],
                ),
            )
        )
        for i, l in ctx.letters():
            tasks.append(
                (
                    f"crystal:{name}:w={wk}:adjoint:i={ctx.datum.indices[i]},l={l}",
                    _all_over(check_crystal_adjoint_q0, [(crystal, i, l, w)]),
                )
            )
    return tasks


def _suite_crystal(ctx: VerifyContext):
    tasks = _crystal_tasks("inf", ctx.infinity(), ctx)
    for lam in ctx.lambdas:
        tasks += _crystal_tasks(f"lam={_lkey(lam)}", ctx.module_crystal(lam), ctx)
    return tasks


def _suite_module(ctx: VerifyContext):
    datum = ctx.datum
    tasks = []
    for i in range(datum.rank):
        if not datum.is_real(i):
            continue
        for lam in ctx.lambdas:
            lh = lam[i]
            for n in (0, 1, 2):
                for m in range(0, 4):
                    tasks.append(
                        (
                            f"module:lam={_lkey(lam)}:qbrace:i={datum.indices[i]},n={n},m={m}",
                            _all_over(
                                _qbrace_identity,
                                [(datum.q_index_exponent(i), lh, n, m)],
                            ),
                        )
                    )
    for lam in ctx.lambdas:
        lk = _lkey(lam)
        V = ctx.module(lam)
        for i in range(datum.rank):
            if datum.is_real(i):
                tasks.append(
                    (
                        f"module:lam={lk}:ideal:i={datum.indices[i]}",
                        _all_over(check_ideal_vanishes, [(V, i)]),
                    )
                )
        for w in ctx.weights():
            wk = _wkey(w)
            if V.dimension(w) == 0:
                continue
            xs = V.basis(w)
            tasks.append(
                (
                    f"module:lam={lk}:w={wk}:gram",
                    _all_over(check_gram_symmetric, [(V, w)]),
                )
            )
            if V.dimension(w) == ctx.U.dimension(w):
                # the single-unit comparison of the two forms only holds
                # where the projection from the quotient algebra is injective
                tasks.append(
                    (
                        f"module:lam={lk}:w={wk}:formcompare",
                        _all_over(check_form_comparison, [(V, w)]),
                    )
                )
            for i in range(datum.rank):
                tasks.append(
                    (
                        f"module:lam={lk}:w={wk}:vdecomp:i={datum.indices[i]}",
                        _all_over(check_v_decomposition, [(V, i, x) for x in xs]),
                    )
                )
            for i, l in ctx.letters():
                if sum(w) + l > ctx.height:
                    # b_{il} x lives l levels deeper; keep it in budget
                    continue
                tasks.append(
                    (
                        f"module:lam={lk}:w={wk}:commutator:i={datum.indices[i]},l={l}",
                        _all_over(check_module_commutator, [(V, i, l, x) for x in xs]),
                    )
                )
                up = tuple(w[t] + (l if t == i else 0) for t in range(datum.rank))
                qs = V.basis(up)
                tasks.append(
                    (
                        f"module:lam={lk}:w={wk}:adjunction:i={datum.indices[i]},l={l}",
                        _all_over(
                            check_contravariant_adjunction,
                            [(V, i, l, p, qq) for p in xs for qq in qs],
                        ),
                    )
                )
            for i in range(datum.rank):
                if not datum.is_real(i):
                    continue
                if -V.mu_coroot(i, w) >= 1:
                    tasks.append(
                        (
                            f"module:lam={lk}:w={wk}:recovery:i={datum.indices[i]}",
                            _all_over(check_real_recovery, [(V, i, w)]),
                        )
                    )
    return tasks


def _suite_projection(ctx: VerifyContext):
    inf = ctx.infinity()
    tasks = []
    for lam in ctx.lambdas:
        lk = _lkey(lam)
        crys = ctx.module_crystal(lam)
        for w in ctx.weights():
            wk = _wkey(w)
            tasks.append(
                (
                    f"projection:lam={lk}:w={wk}:lattice",
                    _all_over(check_pi_lattice, [(inf, crys, w)]),
                )
            )
            tasks.append(
                (
                    f"projection:lam={lk}:w={wk}:bijection",
                    _all_over(check_pi_bijection, [(inf, crys, w)]),
                )
            )
            for i, l in ctx.letters():
                tasks.append(
                    (
                        f"projection:lam={lk}:w={wk}:intertwine:i={ctx.datum.indices[i]},l={l}",
                        _all_over(check_pi_intertwines, [(inf, crys, i, l, w)]),
                    )
                )
    return tasks


def _suite_balanced(ctx: VerifyContext):
    tasks = []
    gb = ctx.global_infinity()
    for w in ctx.weights():
        tasks.append(
            (f"balanced:inf:w={_wkey(w)}", _all_over(check_balanced, [(gb, w)]))
        )
    for lam in ctx.lambdas:
        gbm = ctx.global_module(lam)
        for w in ctx.weights():
            tasks.append(
                (
                    f"balanced:lam={_lkey(lam)}:w={_wkey(w)}",
                    _all_over(check_balanced, [(gbm, w)]),
                )
            )
    return tasks


def _suite_global(ctx: VerifyContext):
    tasks = []
    scopes = [("inf", ctx.global_infinity())]
    for lam in ctx.lambdas:
        scopes.append((f"lam={_lkey(lam)}", ctx.global_module(lam)))
    for name, gb in scopes:
        for w in ctx.weights():
            wk = _wkey(w)
            tasks.append(
                (
                    f"global:{name}:w={wk}:fixed",
                    _all_over(check_global_basis, [(gb, w)]),
                )
            )
            tasks.append(
                (
                    f"global:{name}:w={wk}:integral",
                    _all_over(check_global_integral, [(gb, w)]),
                )
            )
    return tasks


def _suite_strings(ctx: VerifyContext):
    datum = ctx.datum
    tasks = []
    scopes = [("inf", ctx.global_infinity(), min(3, ctx.height))]
    for lam in ctx.lambdas:
        scopes.append((f"lam={_lkey(lam)}", ctx.global_module(lam), min(2, ctx.height)))
    for name, gb, depth in scopes:
        for w in ctx.weights():
            wk = _wkey(w)
            for i in range(datum.rank):
                if datum.is_real(i):
                    for n in range(1, min(2, ctx.height) + 1):
                        tasks.append(
                            (
                                f"strings:{name}:w={wk}:real:i={datum.indices[i]},n={n}",
                                _all_over(
                                    check_real_string_submodule, [(gb, i, n, w)]
                                ),
                            )
                        )
                elif datum.is_isotropic(i):
                    for k in range(1, depth + 1):
                        for part in partitions(k):
                            tasks.append(
                                (
                                    f"strings:{name}:w={wk}:star:i={datum.indices[i]},p={_wkey(part)}",
                                    _all_over(
                                        check_isotropic_star_submodule,
                                        [(gb, i, part, w)],
                                    ),
                                )
                            )
                else:
                    for k in range(1, depth + 1):
                        for c in compositions(k):
                            tasks.append(
                                (
                                    f"strings:{name}:w={wk}:imag:i={datum.indices[i]},c={_wkey(c)}",
                                    _all_over(
                                        check_imaginary_string_submodule,
                                        [(gb, i, c, w)],
                                    ),
                                )
                            )
    return tasks


def _suite_compat(ctx: VerifyContext):
    gb = ctx.global_infinity()
    tasks = []
    for lam in ctx.lambdas:
        gbm = ctx.global_module(lam)
        for w in ctx.weights():
            tasks.append(
                (
                    f"compat:lam={_lkey(lam)}:w={_wkey(w)}",
                    _all_over(check_projection_compatibility, [(gb, gbm, w)]),
                )
            )
    return tasks


_SUITES = {
    "partition": _suite_partition,
    "tau": _suite_tau,
    "serre": _suite_serre,
    "commutator": _suite_commutator,
    "operators": _suite_operators,
    "crystal": _suite_crystal,
    "module": _suite_module,
    "projection": _suite_projection,
    "balanced": _suite_balanced,
    "global": _suite_global,
    "strings": _suite_strings,
    "compat": _suite_compat,
}


def _run_task(task):
    key, fn = task
    try:
        ok = bool(fn())
        return f"{'PASS' if ok else 'FAIL'} {key}"
    except Exception as exc:
        return f"FAIL {key} ({type(exc).__name__})"


def run_verification(
    datum: BorcherdsCartanDatum,
    height: int,
    suites=("all",),
    form=None,
    lambdas=None,
    jobs: int = 1,
) -> Report:
    """Assemble and execute the named suites, returning a deterministic
    report sorted by check key."""
    wanted = []
    for name in suites:
        if name == "all":
            wanted.extend(SUITE_NAMES)
        elif name in _SUITES:
            wanted.append(name)
        else:
            raise ValueError(f"unknown suite {name!r}")
    seen = set()
    wanted = [n for n in wanted if not (n in seen or seen.add(n))]
    ctx = VerifyContext(datum, height, form=form, lambdas=lambdas)
    tasks = []
    for name in wanted:
        tasks.extend(_SUITES[name](ctx))
    keys = [k for k, _ in tasks]
    if len(set(keys)) != len(keys):
        raise RuntimeError("duplicate check keys in suite assembly")
    if jobs > 1 and tasks:
        ctx.warm()
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lines = list(pool.map(_run_task, tasks))
    else:
        lines = [_run_task(t) for t in tasks]
    lines.sort()
    passed = sum(1 for ln in lines if ln.startswith("PASS "))
    return Report(lines, passed, len(lines) - passed)
