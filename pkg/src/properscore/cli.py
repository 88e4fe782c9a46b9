"""Command line batch scoring and estimation.

Commands::

    properscore score parametric INPUT.csv --family cnorm --score crps
    properscore score sample OBS.csv DRAWS.csv [--weights W.csv] --method edf|kde
    properscore score mv CASES.json [--obs OBS.csv] --score es|vs [--p 0.5] [--weights W.csv]
    properscore estimate DATA.csv --family norm --score crps
    properscore simulate convergence|estimation --seed 1

Exit codes: 0 success, 2 malformed input or invalid option combination,
3 parameter-domain error, 4 estimation did not converge.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .errors import DimensionError, DomainError, ScoringError, SpecificationError, UnavailableScoreError
from .estimation import EstimationProblem, minimize_score
from .experiments import DEFAULT_M_GRID, convergence_study, estimation_study
from .families import FamilySpec, crps_closed, get_family, logs_closed, score_available
from .multivariate import es_sample, vs_sample
from .sample_scores import SampleForecast, crps_sample_edf, crps_sample_kde, logs_sample

log = logging.getLogger("properscore")

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_NONCONVERGED = 0, 2, 3, 4


class InputError(Exception):
    """Malformed input file or invalid option combination (exit code 2)."""


class CaseError(Exception):
    """A parameter-domain failure in one case (exit code 3)."""


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def _read_text(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, newline="", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def read_csv_table(path):
    """Return ``(header, rows)`` of a CSV file with a mandatory header row."""
    rows = list(csv.reader(io.StringIO(_read_text(path))))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise InputError(f"{path}: empty file, a header row is required")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise InputError(f"{path}: duplicate column names in header")
    body = rows[1:]
    if not body:
        raise InputError(f"{path}: no data rows")
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise InputError(f"{path}: line {i} has {len(r)} fields, header has {len(header)}")
    return header, body


def _parse_float(path, line, col, text):
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{path}: line {line}, column {col!r}: not a number: {text!r}") from None


def _parse_vector(path, line, col, text):
    return tuple(_parse_float(path, line, col, t) for t in text.split(";"))


def read_columns(path, vector_columns=()):
    """Read a CSV into named columns; a column filled only in its first row is recycled."""
    header, body = read_csv_table(path)
    n = len(body)
    cols = {}
    for j, name in enumerate(header):
        cells = [r[j].strip() for r in body]
        filled = [c != "" for c in cells]
        parse = _parse_vector if name in vector_columns else _parse_float
        if all(filled):
            cols[name] = [parse(path, i + 2, name, c) for i, c in enumerate(cells)]
        elif filled[0] and not any(filled[1:]):
            cols[name] = [parse(path, 2, name, cells[0])] * n
        else:
            missing = next(i for i, f in enumerate(filled) if not f) + 2
            raise InputError(f"{path}: line {missing}, column {name!r}: empty cell")
    return cols, n


def read_matrix(path):
    header, body = read_csv_table(path)
    return np.array([[_parse_float(path, i + 2, header[j], c.strip()) for j, c in enumerate(r)]
                     for i, r in enumerate(body)])


def _read_obs(path, column):
    cols, n = read_columns(path)
    if column not in cols:
        raise InputError(f"{path}: missing observation column {column!r}")
    return np.array(cols[column], dtype=float)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(value, digits=17):
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if not math.isfinite(value):
        return "null"
    return format(value, f".{digits}g")


def dump_json(obj, digits=17):
    """Serialize with a fixed number of significant digits for every float."""
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {dump_json(v, digits)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dump_json(v, digits) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _fmt(obj, digits)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def write_results(results, score_name, args):
    """Write per-case rows followed by the aggregate mean of the finite values."""
    finite = [v for _, v, _ in results if v is not None and math.isfinite(v)]
    mean = math.fsum(finite) / len(finite) if finite else math.nan
    if args.format == "json":
        doc = {"score": score_name,
               "results": [{"case_id": cid, "value": v, **({"error": e} if e else {})}
                           for cid, v, e in results],
               "aggregate": {"n_cases": len(finite), "mean": mean}}
        _emit(dump_json(doc) + "\n", args.out)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case_id", "score", "value"])
    for cid, v, _ in results:
        w.writerow([cid, score_name, "" if v is None else _fmt(v, args.digits)])
    w.writerow(["mean", score_name, _fmt(mean, args.digits) if finite else ""])
    _emit(buf.getvalue(), args.out)


def _run_cases(items, fn, skip_errors):
    """Apply ``fn`` to each ``(case_id, payload)``; collect ``(case_id, value, error)``."""
    out = []
    for cid, payload in items:
        try:
            v = float(fn(payload))
            if not math.isfinite(v):
                raise DomainError(f"score is not finite ({v})")
        except (SpecificationError, UnavailableScoreError, DimensionError) as exc:
            raise InputError(f"case {cid}: {exc}") from None
        except (DomainError, ScoringError) as exc:
            if not skip_errors:
                raise CaseError(f"case {cid}: {exc}") from None
            log.warning("skipping case %s: %s", cid, exc)
            out.append((cid, None, str(exc)))
            continue
        out.append((cid, v, None))
    return out


def _case_ids(n):
    return [str(i + 1) for i in range(n)]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _parse_assignments(items, what):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"{what} must look like name=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"{what} {key!r}: not a number: {value!r}") from None
    return out


def cmd_score_parametric(args):
    try:
        fam = get_family(args.family)
    except SpecificationError as exc:
        raise InputError(str(exc)) from None
    if args.score not in ("crps", "logs") or not score_available(fam.name, args.score):
        raise InputError(f"score {args.score!r} is not available for family {fam.name!r}")
    vector = ("m", "s", "w") if fam.name == "mixnorm" else ()
    cols, n = read_columns(args.input, vector)
    if args.y not in cols:
        raise InputError(f"{args.input}: missing observation column {args.y!r}")
    constants = _parse_assignments(args.param, "--param")
    names = [c for c in cols if c != args.y]
    allowed = set(fam.params) | set(fam.aliases)
    unknown = [c for c in names + list(constants) if c not in allowed]
    if unknown:
        raise InputError(f"{args.input}: unknown parameter column(s) {unknown} for family "
                         f"{fam.name!r}; expected names from {sorted(allowed)}")
    try:
        FamilySpec(fam.name, {**{k: cols[k][0] for k in names}, **constants})
    except SpecificationError as exc:
        raise InputError(f"{args.input}: {exc}") from None
    score = crps_closed if args.score == "crps" else logs_closed
    items = []
    for i in range(n):
        p = {k: cols[k][i] for k in names}
        p.update(constants)
        items.append((str(i + 1), (cols[args.y][i], p)))
    return _run_cases(items, lambda c: score(fam.name, c[0], **c[1]), args.skip_errors), args.score


def cmd_score_sample(args):
    if args.score == "logs":
        if args.method not in (None, "kde"):
            raise InputError("the log score of a sample is only available with --method kde")
        method = "kde"
    elif args.score == "crps":
        method = args.method or "edf"
    else:
        raise InputError(f"score {args.score!r} is not available for samples")
    if args.bw is not None and method != "kde":
        raise InputError("--bw only applies to --method kde")
    y = _read_obs(args.obs, args.y)
    X = read_matrix(args.draws)
    if X.shape[0] != y.size:
        raise InputError(f"{args.draws}: {X.shape[0]} rows of draws for {y.size} observations")
    W = None
    if args.weights:
        W = read_matrix(args.weights)
        if W.shape != X.shape:
            raise InputError(f"{args.weights}: weights have shape {W.shape}, draws {X.shape}")

    def one(i):
        fc = SampleForecast(X[i], None if W is None else W[i])
        if args.score == "logs":
            return logs_sample(y[i], fc, args.bw)
        if method == "kde":
            return crps_sample_kde(y[i], fc, args.bw)
        return crps_sample_edf(y[i], fc)

    items = list(zip(_case_ids(y.size), range(y.size)))
    return _run_cases(items, one, args.skip_errors), args.score


def _read_cases(path):
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    cases = doc.get("cases") if isinstance(doc, dict) else None
    if not isinstance(cases, list) or not cases:
        raise InputError(f"{path}: expected an object with a non-empty 'cases' list")
    out = []
    for i, c in enumerate(cases, start=1):
        if not isinstance(c, dict) or "dat" not in c:
            raise InputError(f"{path}: case {i} lacks a 'dat' matrix")
        try:
            dat = np.array(c["dat"], dtype=float)
            y = None if c.get("y") is None else np.array(c["y"], dtype=float).reshape(-1)
        except (TypeError, ValueError):
            raise InputError(f"{path}: case {i}: entries must be numbers") from None
        if dat.ndim != 2:
            raise InputError(f"{path}: case {i}: 'dat' must be a d x m matrix (list of d rows)")
        out.append((str(c.get("id", i)), y, dat))
    return out


def cmd_score_mv(args):
    if args.score not in ("es", "vs"):
        raise InputError(f"score {args.score!r} is not a multivariate score; use es or vs")
    if args.method is not None:
        raise InputError("--method does not apply to multivariate scores")
    cases = _read_cases(args.cases)
    if args.obs:
        Y = read_matrix(args.obs)
        if Y.shape[0] != len(cases):
            raise InputError(f"{args.obs}: {Y.shape[0]} observation rows for {len(cases)} cases")
        cases = [(cid, Y[i], dat) for i, (cid, _, dat) in enumerate(cases)]
    d = cases[0][2].shape[0]
    for cid, y, dat in cases:
        if y is None:
            raise InputError(f"case {cid}: no observation given")
        if dat.shape[0] != d or y.size != d:
            raise InputError(f"case {cid}: dimension mismatch (d={d}, observation {y.size}, "
                             f"draws {dat.shape[0]} x {dat.shape[1]})")
    W = None
    if args.weights:
        if args.score != "vs":
            raise InputError("--weights for multivariate scores is only used by vs")
        W = read_matrix(args.weights)
        if W.shape != (d, d):
            raise InputError(f"{args.weights}: weight matrix must be {d} x {d}, got {W.shape}")
    p = 0.5 if args.p is None else args.p
    if args.p is not None and args.score != "vs":
        raise InputError("--p only applies to the variogram score")

    def one(case):
        _, y, dat = case
        if args.score == "es":
            return es_sample(y, dat)
        return vs_sample(y, dat, W, p)

    return _run_cases([(c[0], c) for c in cases], one, args.skip_errors), args.score


def cmd_estimate(args):
    cols, _ = read_columns(args.data)
    if args.y not in cols:
        raise InputError(f"{args.data}: missing data column {args.y!r}")
    init = _parse_assignments(args.init, "--init") or None
    fixed = _parse_assignments(args.fixed, "--fixed")
    free = tuple(s.strip() for s in args.free.split(",")) if args.free else None
    try:
        problem = EstimationProblem(args.family, cols[args.y], args.score, init, fixed, free)
    except (SpecificationError, UnavailableScoreError, DimensionError) as exc:
        raise InputError(str(exc)) from None
    except DomainError as exc:
        raise CaseError(str(exc)) from None
    try:
        res = minimize_score(problem, maxiter=args.maxiter)
    except DomainError as exc:
        raise CaseError(str(exc)) from None
    doc = {"family": problem.family, "score": problem.score, "n": int(problem.data.size),
           **res.to_dict(), "fixed": dict(problem.fixed)}
    _emit(dump_json(doc) + "\n", args.out)
    if not res.converged:
        log.error("estimation did not converge: %s (gradient norm %g)", res.message, res.grad_norm)
        if not args.allow_nonconverged:
            return EXIT_NONCONVERGED
    return EXIT_OK


def _write_rows(header, rows, args):
    if args.format == "json":
        _emit(dump_json({"columns": header, "rows": rows}) + "\n", args.out)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v, args.digits) for v in r])
    _emit(buf.getvalue(), args.out)


def cmd_simulate(args):
    if args.seed is None:
        raise InputError("--seed is required for simulations")
    if args.study == "convergence":
        grid = tuple(int(m) for m in args.m_grid.split(",")) if args.m_grid else DEFAULT_M_GRID
        res = convergence_study(args.seed, args.score, args.replications or 500, grid)
        rows = [[int(m), lo, med, hi, res["target"]]
                for m, lo, med, hi in zip(res["m"], res["lower"], res["median"], res["upper"])]
        _write_rows(["m", "lower", "median", "upper", "target"], rows, args)
    else:
        res = estimation_study(args.seed, args.replications or 200, args.n)
        rows = [[r + 1, res["crps_mean"][r], res["crps_sd"][r], res["ml_mean"][r],
                 res["ml_sd"][r], bool(res["converged"][r])]
                for r in range(res["crps_mean"].size)]
        _write_rows(["replication", "crps_mean", "crps_sd", "ml_mean", "ml_sd", "converged"],
                    rows, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--digits", type=int, default=17, help="significant digits in CSV output")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("-q", "--quiet", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="properscore", description="Proper scoring rules for "
                                     "probabilistic forecasts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score forecast cases")
    kinds = score.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("parametric", help="closed-form scores of parametric forecasts")
    p.add_argument("input", help="CSV with an observation column and parameter columns")
    p.add_argument("--family", required=True)
    p.add_argument("--score", default="crps", choices=("crps", "logs"))
    p.add_argument("--method", choices=("closed",), default="closed")
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="parameter held constant over all rows")
    p.add_argument("--y", default="y", help="observation column name")
    p.add_argument("--skip-errors", action="store_true")
    p.set_defaults(func=cmd_score_parametric)
    _common(p)

    p = kinds.add_parser("sample", help="scores of forecasts given as samples")
    p.add_argument("obs", help="CSV with an observation column")
    p.add_argument("draws", help="CSV matrix, one row of draws per observation")
    p.add_argument("--weights", help="CSV matrix of draw weights, same shape as draws")
    p.add_argument("--score", default="crps", choices=("crps", "logs"))
    p.add_argument("--method", choices=("edf", "kde"), default=None)
    p.add_argument("--bw", type=float, default=None, help="kernel bandwidth")
    p.add_argument("--y", default="y", help="observation column name")
    p.add_argument("--skip-errors", action="store_true")
    p.set_defaults(func=cmd_score_sample)
    _common(p)

    p = kinds.add_parser("mv", help="energy and variogram scores of multivariate samples")
    p.add_argument("cases", help='JSON file {"cases": [{"y": [...], "dat": [[...], ...]}]}')
    p.add_argument("--obs", help="CSV of observation vectors, one row per case")
    p.add_argument("--score", default="es", choices=("es", "vs"))
    p.add_argument("--method", default=None, help=argparse.SUPPRESS)
    p.add_argument("--p", type=float, default=None, help="variogram order (default 0.5)")
    p.add_argument("--weights", help="CSV d x d matrix of variogram pair weights")
    p.add_argument("--skip-errors", action="store_true")
    p.set_defaults(func=cmd_score_mv)
    _common(p)

    p = sub.add_parser("estimate", help="minimum score estimation")
    p.add_argument("data", help="CSV with a column of training observations")
    p.add_argument("--family", required=True)
    p.add_argument("--score", default="crps", choices=("crps", "logs"))
    p.add_argument("--y", default="y", help="data column name")
    p.add_argument("--init", action="append", metavar="NAME=VALUE")
    p.add_argument("--fixed", action="append", metavar="NAME=VALUE")
    p.add_argument("--free", help="comma separated names of fitted parameters")
    p.add_argument("--maxiter", type=int, default=500)
    p.add_argument("--allow-nonconverged", action="store_true")
    p.set_defaults(func=cmd_estimate)
    _common(p)

    p = sub.add_parser("simulate", help="seeded simulation studies with plot-ready output")
    p.add_argument("study", choices=("convergence", "estimation"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--score", default="crps", choices=("crps", "logs"))
    p.add_argument("--replications", type=int, default=None)
    p.add_argument("--m-grid", default=None, help="comma separated sample sizes")
    p.add_argument("--n", type=int, default=500, help="training sample size")
    p.set_defaults(func=cmd_simulate)
    _common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    level = logging.ERROR if args.quiet else (logging.DEBUG if args.verbose > 1 else
                                              logging.INFO if args.verbose else logging.WARNING)
    logging.basicConfig(level=level, format="properscore: %(levelname)s: %(message)s",
                        stream=sys.stderr, force=True)
    try:
        result = args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except CaseError as exc:
        log.error("%s", exc)
        return EXIT_DOMAIN
    if isinstance(result, int):
        return result
    results, name = result
    write_results(results, name, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
