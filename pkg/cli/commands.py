"""
Command-line entry point: argument parsing and dispatch to the engine.

Exit codes: 0 success (or mathematically true), 1 mathematically false (not a PP, not
an orthomorphism, audit or table check failed), 2 usage or input error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from cli.output import FORMATS, render
from permpoly import field_core as fc
from permpoly import poly_core as pc
from permpoly.classify import PREFILTERS, classify_all, classify_normalized
from permpoly.criteria import (
    CRITERION_NAMES,
    criterion_report,
    turnwald_stats,
    wan_bound_check,
)
from permpoly.engine import AUDITS, audit_suite, list_audits, run_all, verify_table
from permpoly.families import FAMILY_BUILDERS, build_family
from permpoly.models import ClassificationResult, FieldSpec
from permpoly.ortho import (
    classify_orthomorphisms,
    classify_orthomorphisms_full,
    is_orthomorphism,
    ortho_degree_bound_scan,
)
from permpoly.search import sort_key
from permpoly.tables import expand_codes, get_row, list_rows
from permpoly.validation import PermPolyError, split_prime_power, validate_field_request
from services.cache import cache_dir, cached_classification, clear_cache, list_entries, load_result
from services.settings import get_setting, load_settings

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_ERROR = 2

MODES = ("normalized", "all", "ortho", "ortho-all")


class UsageError(Exception):
    """Input problems found before dispatch; each message is printed."""

    def __init__(self, messages: List[str]):
        super().__init__("; ".join(messages))
        self.messages = messages


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_codes(text: str) -> List[int]:
    """'0,2,0,1' -> [0, 2, 0, 1]; an empty string is the zero polynomial."""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_param(text: str) -> tuple:
    """'k=5' -> ('k', 5); 'coeffs=1,0,1' -> ('coeffs', [1, 0, 1])."""
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, parse_codes(value) if "," in value else int(value)


# named family parameters; --param key=value covers the same keys
FAMILY_OPTIONS: Dict[str, Tuple[Callable[[str], Any], str]] = {
    "n": (int, "Exponent (monomial)"),
    "k": (int, "Degree (dickson)"),
    "a": (int, "Coefficient code (binomials, dickson)"),
    "m": (int, "Divisor of q-1 with m > 1 (m-binomial)"),
    "h": (int, "Exponent h (specific-class)"),
    "s": (int, "Divisor s of q-1 (specific-class)"),
    "g": (parse_codes, "Coefficient codes of g (specific-class)"),
    "coeffs": (parse_codes, "Coefficient codes (linearized, all-extensions)"),
    "base": (int, "Base field order (linearized)"),
}


def _field(args: argparse.Namespace, settings: dict) -> FieldSpec:
    p, r = split_prime_power(args.q)
    modulus = getattr(args, "modulus", None)
    errors = validate_field_request(p, r, modulus, get_setting("field.max_order", 65536, settings))
    if errors:
        raise UsageError(errors)
    return fc.make_field(p, r, tuple(modulus) if modulus else None,
                         get_setting("field.table_cap", fc.DEFAULT_TABLE_CAP, settings))


def _jobs(args: argparse.Namespace, settings: dict) -> Optional[int]:
    return args.jobs if args.jobs is not None else get_setting("search.default_jobs", None, settings)


def _search_kwargs(args: argparse.Namespace, settings: dict) -> Dict[str, Any]:
    return {
        "jobs": _jobs(args, settings),
        "max_candidates": int(get_setting("search.max_candidates", 10 ** 8, settings)),
        "block_rows": int(get_setting("search.block_rows", 1 << 16, settings)),
        "chunk_target": int(get_setting("search.chunk_target", 1 << 22, settings)),
    }


def _classification(args: argparse.Namespace, settings: dict, field: FieldSpec, degree: int,
                    mode: str, prefilter: str = "none") -> ClassificationResult:
    kwargs = _search_kwargs(args, settings)
    compute: Dict[str, Callable[[], ClassificationResult]] = {
        "normalized": lambda: classify_normalized(field, degree, prefilter=prefilter, **kwargs),
        "all": lambda: classify_all(field, degree, **kwargs),
        "ortho": lambda: classify_orthomorphisms(field, degree, **kwargs),
        "ortho-all": lambda: classify_orthomorphisms_full(field, degree, **kwargs),
    }
    return cached_classification(
        field, degree, mode, compute[mode],
        directory=cache_dir(settings),
        use_cache=not args.no_cache,
        revalidate_members=int(get_setting("cache.revalidate_members", 10, settings)),
    )


def _classification_payload(result: ClassificationResult) -> Dict[str, Any]:
    # wall time is logged, not printed, so that output is reproducible
    log.info("%s degree %d (%s): %d polynomials in %.2fs", result.field, result.degree,
             result.mode, result.count, result.wall_time)
    return result.model_dump(mode="json", by_alias=True, exclude={"wall_time"})


# ---------------------------------------------------------------------------
# Subcommands; each returns (payload, exit code, rows key)
# ---------------------------------------------------------------------------

def cmd_field(args, settings):
    field = _field(args, settings)
    payload = {
        "field": field.model_dump(mode="json"),
        "q": field.q,
        "primitive_element": fc.primitive_element(field),
        "nonzero_squares": len(fc.nonzero_squares(field)),
        "nonsquares": len(fc.nonsquares(field)),
        "has_tables": field.has_tables,
    }
    return payload, EXIT_OK, None


def cmd_test(args, settings):
    field = _field(args, settings)
    f = pc.make_poly(field, args.poly)
    report = criterion_report(f, args.criteria, extension_check=not args.no_extension_check)
    payload = report.model_dump(mode="json", by_alias=True)
    if args.stats:
        payload["value_set_stats"] = turnwald_stats(f).model_dump(mode="json")
        payload["wan_bound"] = wan_bound_check(f).model_dump(mode="json")
    return payload, EXIT_OK if report.is_pp else EXIT_FALSE, None


def cmd_family(args, settings):
    name = args.name_option or args.name
    if name is None:
        raise UsageError(["family needs a name, e.g. --name dickson"])
    field = _field(args, settings)
    params = dict(args.param or [])
    for key in FAMILY_OPTIONS:
        value = getattr(args, f"family_{key}")
        if value is not None:
            params[key] = value
    instance = build_family(name, field, **params)
    return instance, EXIT_OK if instance.criterion_verdict else EXIT_FALSE, None


def cmd_classify(args, settings):
    field = _field(args, settings)
    result = _classification(args, settings, field, args.degree, args.mode, args.prefilter)
    return _classification_payload(result), EXIT_OK, "polynomials"


def cmd_table(args, settings):
    if args.table_command == "list":
        rows = [row.model_dump(mode="json") for row in list_rows(args.prefix)]
        return rows, EXIT_OK, None
    if args.table_command == "expand":
        row = get_row(args.row)
        field = _field(args, settings) if args.q else None
        codes = sorted(expand_codes(args.row, field), key=sort_key)
        payload = {"row": row.model_dump(mode="json"), "count": len(codes),
                   "polynomials": [list(c) for c in codes]}
        return payload, EXIT_OK, "polynomials"
    field = _field(args, settings)
    result = _classification(args, settings, field, args.degree, "normalized")
    check = verify_table(result)
    passed = check["equal"] and check["third_coefficient_zero"]
    return check, EXIT_OK if passed else EXIT_FALSE, None


def cmd_ortho(args, settings):
    field = _field(args, settings)
    if args.ortho_command == "test":
        report = is_orthomorphism(pc.make_poly(field, args.poly))
        return report, EXIT_OK if report.is_orthomorphism else EXIT_FALSE, None
    if args.ortho_command == "bound":
        max_q = int(get_setting("orthomorphism.max_bound_q", 9, settings))
        scan = ortho_degree_bound_scan(field, max_q)
        return {"q": field.q, **scan}, EXIT_OK if scan["violations"] == 0 else EXIT_FALSE, None
    mode = "ortho-all" if args.full else "ortho"
    result = _classification(args, settings, field, args.degree, mode)
    return _classification_payload(result), EXIT_OK, "polynomials"


def _audit_params(args, settings) -> Dict[str, Any]:
    name, q = args.name, args.q
    jobs = _jobs(args, settings)
    seed = args.seed if args.seed is not None else get_setting("audits.seed", 0, settings)
    max_bound_q = int(get_setting("orthomorphism.max_bound_q", 9, settings))
    if name == "mullen":
        return {"q": q} if q else {}
    if name == "wilson":
        params = {"max_exhaustive_q": int(get_setting("wilson.max_exhaustive_q", 7, settings)), "jobs": jobs}
        return {**params, "qs": [q]} if q else params
    if name == "wan-bound":
        params: Dict[str, Any] = {"qs": [q]} if q else {}
        if args.max_degree is not None:
            params["max_degree"] = args.max_degree
        return params
    if name == "tables":
        params = {"jobs": jobs}
        if q:
            p, _ = split_prime_power(q)
            degrees = [args.degree] if args.degree else [
                n for n in range(2, min(6, q - 2) + 1) if not (p == 2 and n == 6)]
            params["grid"] = [(q, n) for n in degrees]
        if not args.no_cache:
            params["classify"] = lambda field, n: _classification(args, settings, field, n, "normalized")
        return params
    if name == "ortho":
        params = {"jobs": jobs, "max_bound_q": max_bound_q}
        if q:
            params.update(qs=[q], full_q=q if q == 9 else None, bound_qs=[q] if q <= max_bound_q else [])
        return params
    if name == "nonexistence":
        params = {"jobs": jobs}
        if q:
            params["grid"] = [(q, args.degree or 6)]
        return params
    return {
        "samples": args.samples or int(get_setting("audits.criteria_samples", 10000, settings)),
        "seed": seed,
    }


def cmd_audit(args, settings):
    if args.name == "list":
        return list_audits(), EXIT_OK, None
    if args.name == "all":
        reports = run_all(
            jobs=_jobs(args, settings),
            seed=args.seed if args.seed is not None else get_setting("audits.seed", 0, settings),
            samples=args.samples or int(get_setting("audits.criteria_samples", 10000, settings)),
            max_exhaustive_q=int(get_setting("wilson.max_exhaustive_q", 7, settings)),
            max_bound_q=int(get_setting("orthomorphism.max_bound_q", 9, settings)),
        )
        summary = [{"name": r.name, "passed": r.passed} for r in reports]
        passed = all(r.passed for r in reports)
        return {"passed": passed, "audits": summary, "reports": reports}, \
            EXIT_OK if passed else EXIT_FALSE, "audits"
    report = audit_suite(args.name, **_audit_params(args, settings))
    if args.seed is not None and report.seed is None:
        report = report.model_copy(update={"seed": args.seed})
    return report, EXIT_OK if report.passed else EXIT_FALSE, "rows"


def cmd_cache(args, settings):
    directory = cache_dir(settings)
    if args.cache_command == "list":
        return list_entries(directory), EXIT_OK, None
    if args.cache_command == "clear":
        return {"directory": str(directory), "removed": clear_cache(directory)}, EXIT_OK, None
    field = _field(args, settings)
    result = load_result(field, args.degree, args.mode, directory,
                         int(get_setting("cache.revalidate_members", 10, settings)))
    if result is None:
        raise UsageError([f"no cached {args.mode} classification for {field} degree {args.degree}"])
    return _classification_payload(result), EXIT_OK, "polynomials"


COMMANDS = {
    "field": cmd_field,
    "test": cmd_test,
    "family": cmd_family,
    "classify": cmd_classify,
    "table": cmd_table,
    "ortho": cmd_ortho,
    "audit": cmd_audit,
    "cache": cmd_cache,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for debugging output (stderr)")
    common.add_argument("--format", choices=FORMATS, default="json", help="Output format (default: json)")
    common.add_argument("--jobs", type=int, default=None,
                        help="Worker processes for searches (default: one per CPU; 1 runs in-process)")
    common.add_argument("--seed", type=int, default=None, help="Seed for audits that sample randomly")
    common.add_argument("--no-cache", action="store_true", help="Neither read nor write the result cache")
    common.add_argument("--out", type=Path, default=None, help="Write output to this file instead of stdout")
    return common


def _add_q(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--q", type=int, required=required, help="Field order p^r")
    parser.add_argument("--modulus", type=parse_codes, default=None,
                        help="Monic irreducible modulus over F_p, ascending coefficients")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="permpoly",
        description="Exact tests, families and exhaustive classification of permutation polynomials over finite fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_field = sub.add_parser("field", parents=[common], help="Describe F_q")
    _add_q(p_field)

    p_test = sub.add_parser("test", parents=[common], help="Run the permutation criteria on one polynomial")
    _add_q(p_test)
    p_test.add_argument("--poly", type=parse_codes, required=True, help="Ascending coefficient codes, e.g. 0,2,0,1")
    p_test.add_argument("--criteria", type=lambda s: s.split(","), default=None,
                        help=f"'all' (default) or a comma-separated subset of {','.join(CRITERION_NAMES)}")
    p_test.add_argument("--no-extension-check", action="store_true",
                        help="Skip the resultant's check at a point of F_q^2")
    p_test.add_argument("--stats", action="store_true", help="Also report value-set statistics and Wan's bound")

    p_family = sub.add_parser("family", parents=[common], help="Build one member of a known PP family")
    p_family.add_argument("name", nargs="?", choices=sorted(FAMILY_BUILDERS), help="Family (or use --name)")
    p_family.add_argument("--name", dest="name_option", choices=sorted(FAMILY_BUILDERS))
    _add_q(p_family)
    for key, (kind, text) in FAMILY_OPTIONS.items():
        p_family.add_argument(f"--{key}", dest=f"family_{key}", type=kind, default=None, help=text)
    p_family.add_argument("--param", type=parse_param, action="append",
                          help="Family parameter key=value (lists comma-separated), repeatable")

    p_classify = sub.add_parser("classify", parents=[common], help="Exhaustively classify degree-n PPs")
    _add_q(p_classify)
    p_classify.add_argument("--degree", type=int, required=True)
    p_classify.add_argument("--mode", choices=MODES, default="normalized")
    p_classify.add_argument("--prefilter", choices=PREFILTERS, default="none")

    p_table = sub.add_parser("table", help="Catalogued table rows")
    table_sub = p_table.add_subparsers(dest="table_command", required=True)
    t_list = table_sub.add_parser("list", parents=[common], help="List rows")
    t_list.add_argument("--prefix", default=None, help="Only rows whose id starts with this")
    t_expand = table_sub.add_parser("expand", parents=[common], help="Expand one row into explicit polynomials")
    t_expand.add_argument("row", help="Row id, e.g. deg6-normalised:5")
    _add_q(t_expand, required=False)
    t_verify = table_sub.add_parser("verify", parents=[common], help="Compare classification with the catalogue")
    _add_q(t_verify)
    t_verify.add_argument("--degree", type=int, required=True)

    p_ortho = sub.add_parser("ortho", help="Orthomorphisms")
    ortho_sub = p_ortho.add_subparsers(dest="ortho_command", required=True)
    o_test = ortho_sub.add_parser("test", parents=[common], help="Orthomorphism status of one polynomial")
    _add_q(o_test)
    o_test.add_argument("--poly", type=parse_codes, required=True)
    o_classify = ortho_sub.add_parser("classify", parents=[common], help="Classify degree-n orthomorphisms")
    _add_q(o_classify)
    o_classify.add_argument("--degree", type=int, required=True)
    o_classify.add_argument("--full", action="store_true", help="Any constant term and x^(n-1), x^(n-2) terms")
    o_bound = ortho_sub.add_parser("bound", parents=[common], help="Degree bound over all q! permutations")
    _add_q(o_bound)

    p_audit = sub.add_parser("audit", parents=[common], help="Run a named audit")
    p_audit.add_argument("name", choices=["list", "all"] + list(AUDITS))
    p_audit.add_argument("--q", type=int, default=None, help="Restrict the audit to one field order")
    p_audit.add_argument("--degree", type=int, default=None)
    p_audit.add_argument("--max-degree", type=int, default=None)
    p_audit.add_argument("--samples", type=int, default=None, help="Random polynomials per field")

    p_cache = sub.add_parser("cache", help="Result cache maintenance")
    cache_sub = p_cache.add_subparsers(dest="cache_command", required=True)
    cache_sub.add_parser("list", parents=[common], help="List cached classifications")
    cache_sub.add_parser("clear", parents=[common], help="Delete cached classifications")
    c_show = cache_sub.add_parser("show", parents=[common], help="Print one cached classification")
    _add_q(c_show)
    c_show.add_argument("--degree", type=int, required=True)
    c_show.add_argument("--mode", choices=MODES, default="normalized")

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")


def run_command(argv: Sequence[str], settings: Optional[dict] = None) -> int:
    """
    Parse argv, run the command, write its output and return the exit code.

    Args:
        argv: Arguments without the program name
        settings: Preloaded settings (read from data/defaults.yaml when None)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_ERROR

    _configure_logging(args.verbose)
    settings = settings if settings is not None else load_settings()
    try:
        payload, code, rows_key = COMMANDS[args.command](args, settings)
    except UsageError as exc:
        for message in exc.messages:
            print(f"error: {message}", file=sys.stderr)
        return EXIT_ERROR
    except (PermPolyError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    _emit(render(payload, args.format, rows_key), args.out)
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
