"""Command-line front end: config loading, dispatch, exports, caching.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 on usage or configuration errors.
"""

import argparse
import csv
import io
import json
import sys

from .cache import OutputCache, cache_key, resolve_cache_dir
from .cartan import BorcherdsCartanDatum, DatumError
from .crystal import (
    CrystalBasis,
    ModuleCrystalBasis,
    crystal_graph_dot,
    crystal_graph_json,
)
from .freealg import FormConfig
from .globalbasis import GlobalBasis, check_global_basis, check_global_integral
from .highest_weight import HighestWeightModule
from .parsing import ParseError, parse_dominant_weight, parse_scalar, parse_weight
from .uminus import UMinus, compositions
from .verify import SUITE_NAMES, run_verification

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    """Malformed project configuration."""


class ProjectConfig:
    """Validated configuration: datum block, form block, limits, cache dir.

    The datum itself is built lazily so the `validate` command can report
    axiom failures as check failures rather than configuration errors."""

    def __init__(self, datum_block, form_block, max_height, max_depth, cache_dir):
        self.datum_block = datum_block
        self.form_block = form_block
        self.max_height = max_height
        self.max_depth = max_depth
        self.cache_dir = cache_dir

    @classmethod
    def from_dict(cls, data: dict) -> "ProjectConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - {"datum", "form", "limits", "cache_dir"}
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        datum = data.get("datum")
        if not isinstance(datum, dict):
            raise ConfigError("config requires a 'datum' object")
        missing = {"indices", "cartan", "symmetrizer"} - set(datum)
        if missing:
            raise ConfigError(f"datum block is missing {sorted(missing)}")
        indices = datum["indices"]
        if not isinstance(indices, list) or not all(
            isinstance(s, str) and s for s in indices
        ):
            raise ConfigError("datum.indices must be a list of nonempty strings")
        cartan = datum["cartan"]
        if not isinstance(cartan, list) or not all(
            isinstance(row, list) and all(isinstance(v, int) for v in row)
            for row in cartan
        ):
            raise ConfigError("datum.cartan must be a matrix of integers")
        sym = datum["symmetrizer"]
        if not isinstance(sym, list) or not all(isinstance(v, int) for v in sym):
            raise ConfigError("datum.symmetrizer must be a list of integers")
        form = data.get("form", {})
        if not isinstance(form, dict) or set(form) - {"default", "overrides"}:
            raise ConfigError("form block accepts only 'default' and 'overrides'")
        overrides = form.get("overrides", {})
        if not isinstance(overrides, dict):
            raise ConfigError("form.overrides must be an object")
        for key, value in overrides.items():
            label, _, level = key.rpartition(",")
            if label not in indices or not level.isdigit() or int(level) < 1:
                raise ConfigError(
                    f"form override key {key!r} is not 'index,level' with a "
                    "known index and positive level"
                )
            if not isinstance(value, str):
                raise ConfigError(f"form override {key!r} must be a string")
        if "default" in form and not isinstance(form["default"], str):
            raise ConfigError("form.default must be a string")
        limits = data.get("limits", {})
        if not isinstance(limits, dict) or set(limits) - {"max_height", "max_depth"}:
            raise ConfigError(
                "limits block accepts only 'max_height' and 'max_depth'"
            )
        max_height = limits.get("max_height", 6)
        max_depth = limits.get("max_depth", 6)
        if not isinstance(max_height, int) or max_height < 1:
            raise ConfigError("limits.max_height must be an integer >= 1")
        if not isinstance(max_depth, int) or max_depth < 0:
            raise ConfigError("limits.max_depth must be an integer >= 0")
        cache_dir = data.get("cache_dir")
        if cache_dir is not None and not isinstance(cache_dir, str):
            raise ConfigError("cache_dir must be a string or null")
        return cls(
            {
                "indices": [str(s) for s in indices],
                "cartan": [list(row) for row in cartan],
                "symmetrizer": list(sym),
            },
            {
                "default": form.get("default", "1"),
                "overrides": dict(overrides),
            },
            max_height,
            max_depth,
            cache_dir,
        )

    @classmethod
    def from_file(cls, path: str) -> "ProjectConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "datum": {
                "indices": list(self.datum_block["indices"]),
                "cartan": [list(r) for r in self.datum_block["cartan"]],
                "symmetrizer": list(self.datum_block["symmetrizer"]),
            },
            "form": {
                "default": self.form_block["default"],
                "overrides": dict(self.form_block["overrides"]),
            },
            "limits": {"max_height": self.max_height, "max_depth": self.max_depth},
            "cache_dir": self.cache_dir,
        }

    def build_datum(self) -> BorcherdsCartanDatum:
        block = self.datum_block
        return BorcherdsCartanDatum(
            tuple(block["indices"]),
            block["cartan"],
            tuple(block["symmetrizer"]),
        )

    def build_form(self, datum: BorcherdsCartanDatum) -> FormConfig:
        default = parse_scalar(self.form_block["default"])
        overrides = {}
        for key, text in self.form_block["overrides"].items():
            label, _, level = key.rpartition(",")
            overrides[(datum.indices.index(label), int(level))] = parse_scalar(text)
        return FormConfig(default, overrides)


def _word_text(word, indices) -> str:
    if not word:
        return "1"
    return "*".join(f"f[{indices[i]},{l}]" for (i, l) in word)


def _expansion_rows(element, indices) -> list:
    rows = [
        (_word_text(w, indices), str(c)) for w, c in sorted(element.terms.items())
    ]
    return [[w, c] for w, c in rows]


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


class CommandContext:
    """Datum, form, and cache shared by one command invocation."""

    def __init__(self, cfg: ProjectConfig):
        self.cfg = cfg
        self.datum = cfg.build_datum()
        self.form = cfg.build_form(self.datum)
        self.cache = OutputCache(resolve_cache_dir(cfg.cache_dir))

    def uminus(self) -> UMinus:
        return UMinus(self.datum, self.form)

    def cached(self, command: str, params: dict, compute) -> str:
        key = cache_key(self.datum, self.form, command, params)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        out = compute()
        self.cache.put(key, out)
        return out


def cmd_validate(cfg: ProjectConfig, args) -> int:
    try:
        datum = cfg.build_datum()
    except DatumError as exc:
        print(f"FAIL datum axioms: {exc}")
        return EXIT_FAIL
    lines = [f"datum: rank={datum.rank} indices={','.join(datum.indices)}"]
    for i, label in enumerate(datum.indices):
        kind = (
            "real"
            if datum.is_real(i)
            else "isotropic"
            if datum.is_isotropic(i)
            else "imaginary"
        )
        lines.append(
            f"  {label}: {kind} (a={datum.cartan[i][i]}, r={datum.symmetrizer[i]})"
        )
    form = cfg.build_form(datum)
    over = ", ".join(
        f"{datum.indices[i]},{l}={v}" for (i, l), v in sorted(form.overrides.items())
    )
    lines.append(f"form: default={form.default}" + (f" overrides: {over}" if over else ""))
    lines.append(
        f"limits: max_height={cfg.max_height} max_depth={cfg.max_depth}"
    )
    for warning in form.warned:
        lines.append(f"  note: {warning}")
    lines.append("PASS datum axioms and form parameters")
    print("\n".join(lines))
    return EXIT_PASS


def cmd_gram(ctx: CommandContext, args) -> int:
    weight = parse_weight(args.weight, ctx.datum.indices)
    if sum(weight) > ctx.cfg.max_height:
        raise ConfigError(
            f"weight height {sum(weight)} exceeds limits.max_height "
            f"{ctx.cfg.max_height}"
        )

    def compute() -> str:
        U = ctx.uminus()
        words, gram = U.algebra.gram_matrix(weight)
        payload = {
            "weight": {
                ctx.datum.indices[i]: weight[i] for i in range(ctx.datum.rank)
            },
            "basis": [
                [[ctx.datum.indices[i], l] for (i, l) in w] for w in words
            ],
            "entries": [[str(v) for v in row] for row in gram],
        }
        return _json_text(payload)

    out = ctx.cached("gram", {"weight": list(weight)}, compute)
    sys.stdout.write(out)
    return EXIT_PASS


def cmd_serre_check(ctx: CommandContext, args) -> int:
    datum = ctx.datum
    U = ctx.uminus()
    alg = U.algebra
    lines = []
    failed = 0
    for i in range(datum.rank):
        if not datum.is_real(i):
            continue
        for j in range(datum.rank):
            if j == i:
                continue
            for n in range(1, args.max_n + 1):
                comps = [(1,) * n] if datum.is_real(j) else compositions(n)
                for m in range(-datum.cartan[i][j] * n + 1, args.max_m + 1):
                    for comp in comps:
                        for sign in (1, -1):
                            el = alg.serre_element(i, j, m, n, comp, sign)
                            ok = alg.radical_contains(el)
                            failed += not ok
                            word = ",".join(str(p) for p in comp)
                            lines.append(
                                f"{'PASS' if ok else 'FAIL'} serre "
                                f"i={datum.indices[i]},j={datum.indices[j]},"
                                f"m={m},n={n},c={word},s={sign:+d}"
                            )
    lines.sort()
    total = len(lines)
    lines.append(f"checks={total} passed={total - failed} failed={failed}")
    print("\n".join(lines))
    return EXIT_PASS if failed == 0 else EXIT_FAIL


def cmd_primitives(ctx: CommandContext, args) -> int:
    datum = ctx.datum
    if args.index not in datum.indices:
        raise ConfigError(f"unknown index {args.index!r}")
    pos = datum.indices.index(args.index)
    if args.max_l < 1:
        raise ConfigError("--max-l must be at least 1")
    if datum.is_real(pos) and args.max_l > 1:
        raise ConfigError(
            f"index {args.index!r} is real; primitive generators exist "
            "only at level 1"
        )

    def compute() -> str:
        U = ctx.uminus()
        levels = []
        for l in range(1, args.max_l + 1):
            p = U.primitive(pos, l)
            levels.append(
                {
                    "l": l,
                    "expansion": _expansion_rows(p, datum.indices),
                    "tau": str(U.tau(pos, l)),
                }
            )
        return _json_text({"index": args.index, "levels": levels})

    out = ctx.cached(
        "primitives", {"index": args.index, "max_l": args.max_l}, compute
    )
    sys.stdout.write(out)
    return EXIT_PASS


def cmd_crystal(ctx: CommandContext, args) -> int:
    if args.depth > ctx.cfg.max_depth:
        raise ConfigError(
            f"--depth {args.depth} exceeds limits.max_depth {ctx.cfg.max_depth}"
        )
    lam = (
        parse_dominant_weight(args.lam, ctx.datum.indices)
        if args.lam is not None
        else None
    )

    def compute() -> str:
        U = ctx.uminus()
        if lam is None:
            crystal = CrystalBasis(U, args.depth)
        else:
            crystal = ModuleCrystalBasis(
                HighestWeightModule(U, lam), args.depth
            )
        if args.format == "dot":
            return crystal_graph_dot(crystal) + "\n"
        return _json_text(crystal_graph_json(crystal))

    params = {
        "depth": args.depth,
        "lambda": list(lam) if lam is not None else None,
        "format": args.format,
    }
    out = ctx.cached("crystal", params, compute)
    sys.stdout.write(out)
    return EXIT_PASS


def cmd_global(ctx: CommandContext, args) -> int:
    if args.height > ctx.cfg.max_height:
        raise ConfigError(
            f"--height {args.height} exceeds limits.max_height "
            f"{ctx.cfg.max_height}"
        )
    lam = (
        parse_dominant_weight(args.lam, ctx.datum.indices)
        if args.lam is not None
        else None
    )
    indices = ctx.datum.indices

    def build_rows():
        U = ctx.uminus()
        if lam is None:
            crystal = CrystalBasis(U, args.height)
        else:
            crystal = ModuleCrystalBasis(HighestWeightModule(U, lam), args.height)
        gb = GlobalBasis(crystal)
        rows = []
        all_ok = True
        for beta in crystal.weights():
            verts = crystal.vertices(beta)
            if not verts:
                continue
            bar_fixed = check_global_basis(gb, beta)
            integral = check_global_integral(gb, beta)
            all_ok = all_ok and bar_fixed and integral
            for v in verts:
                rows.append(
                    {
                        "weight": ",".join(str(t) for t in beta),
                        "vertex": " ".join(
                            f"f[{indices[i]},{l}]" for (i, l) in v.seq
                        )
                        or "1",
                        "expansion": _expansion_rows(gb.element(v), indices),
                        "bar_fixed": bar_fixed,
                        "integral": integral,
                    }
                )
        return rows, all_ok

    def compute() -> str:
        rows, all_ok = build_rows()
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(
                ["weight", "vertex", "expansion", "bar_fixed", "integral"]
            )
            for row in rows:
                writer.writerow(
                    [
                        row["weight"],
                        row["vertex"],
                        "; ".join(f"({c})*{w}" for w, c in row["expansion"]),
                        str(row["bar_fixed"]).lower(),
                        str(row["integral"]).lower(),
                    ]
                )
            text = buf.getvalue()
        else:
            payload = {
                "scope": "module" if lam is not None else "algebra",
                "lambda": {indices[i]: lam[i] for i in range(len(lam))}
                if lam is not None
                else None,
                "height": args.height,
                "rows": rows,
            }
            text = _json_text(payload)
        marker = "" if all_ok else "# FAILED CERTIFICATES\n"
        return marker + text

    params = {
        "height": args.height,
        "lambda": list(lam) if lam is not None else None,
        "format": args.format,
    }
    out = ctx.cached("global", params, compute)
    sys.stdout.write(out)
    return EXIT_PASS if not out.startswith("# FAILED CERTIFICATES") else EXIT_FAIL


def cmd_verify(ctx: CommandContext, args) -> int:
    if args.height > ctx.cfg.max_height:
        raise ConfigError(
            f"--height {args.height} exceeds limits.max_height "
            f"{ctx.cfg.max_height}"
        )
    suites = []
    for chunk in args.suite:
        suites.extend(s.strip() for s in chunk.split(",") if s.strip())
    if not suites:
        suites = ["all"]
    try:
        report = run_verification(
            ctx.datum,
            args.height,
            suites=tuple(suites),
            form=ctx.form,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sys.stdout.write(report.text())
    return EXIT_PASS if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbozec",
        description=(
            "Exact computations with quantized Borcherds-Bozec algebras: "
            "bilinear forms, crystal bases, and global bases at bounded "
            "height."
        ),
    )
    parser.add_argument(
        "-c",
        "--config",
        default="qbozec.json",
        help="path to the project config (JSON; default ./qbozec.json)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="check the datum axioms and form parameters")

    p = sub.add_parser("gram", help="Gram matrix of the bilinear form at a weight")
    p.add_argument(
        "--weight", required=True, help="weight as k*index terms, e.g. '2*i,1*j'"
    )

    p = sub.add_parser("serre-check", help="Serre-type elements lie in the radical")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("primitives", help="primitive generators and their norms")
    p.add_argument("--index", required=True, help="index label")
    p.add_argument("--max-l", type=int, required=True, help="largest level")

    p = sub.add_parser("crystal", help="crystal graph up to a depth")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument(
        "--lambda",
        dest="lam",
        default=None,
        help="dominant weight 'index=value,...' for the module crystal",
    )
    p.add_argument("--format", choices=("dot", "json"), default="json")

    p = sub.add_parser("global", help="global basis vectors with certificates")
    p.add_argument("--height", type=int, required=True)
    p.add_argument(
        "--lambda",
        dest="lam",
        default=None,
        help="dominant weight 'index=value,...' for the module",
    )
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="run named verification suites")
    p.add_argument(
        "--suite",
        action="append",
        default=[],
        help=f"'all' or one of: {', '.join(SUITE_NAMES)} (repeatable)",
    )
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ProjectConfig.from_file(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "validate":
        return cmd_validate(cfg, args)
    handlers = {
        "gram": cmd_gram,
        "serre-check": cmd_serre_check,
        "primitives": cmd_primitives,
        "crystal": cmd_crystal,
        "global": cmd_global,
        "verify": cmd_verify,
    }
    try:
        ctx = CommandContext(cfg)
    except (DatumError, ParseError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return handlers[args.command](ctx, args)
    except ParseError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
