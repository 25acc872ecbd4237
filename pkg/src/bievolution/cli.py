"""Command-line entry point: ``bievolution <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import math
import os
import sys
import tempfile

import numpy as np

from . import config as cfgmod
from .constants import MUCH_LESS
from .errors import (
    BievolutionError,
    DomainError,
    EnumerationCapExceeded,
    TableCapExceeded,
)
from .features import (
    peak_curvature,
    feature_report,
    log_peak_bound,
    peak_widths,
    quadratic_model_deviation,
    subsidiary_position,
)
from .interference import (
    PathCount,
    interference_qrecursion,
    interference_sum_oracle,
    log_interference,
    log_scaling_function,
)
from .logcomplex import log_binomial
from .regime import (
    RegimeInputs,
    first_subsidiary_lambda,
    required_f_for_duration,
    subsidiary_vs_width_ratio,
    tau_scaling_check,
    upper_bound_total_time,
    validity_window,
)
from .toy import (
    bievolution_error,
    check_enumeration_cap,
    check_nonzero_eigenvalue_condition,
    commutator_spectrum,
    path_components,
)
from .verify import run_suites

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

FIGURE_N = 8000
FIGURE_NS = (1, 10, 50)
FIG6_N_LIST = (250, 500, 1000, 2000, 4000)
FIG6_n = 10
FIG4_HALF_WINDOW = 0.00025
OUTPUTS = ("scaled", "log", "raw", "Y", "rescaled")


def fmt(x) -> str:
    """Format a number with 12 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def write_csv(path, header, rows):
    """Write rows to ``path`` (or stdout for None / '-'); files appear atomically."""
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# ---- eval ------------------------------------------------------------------

def cmd_eval(args) -> int:
    pc = PathCount(args.N, args.n)
    if args.method == "product":
        log_mag, phase = log_interference(pc, args.z)
        log_mag, phase = float(log_mag), float(phase)
        mag = math.exp(log_mag) if log_mag < 709 else math.inf
        print(f"ln|I| = {fmt(log_mag)}")
        print(f"phase = {fmt(phase)}")
        print(f"|I| = {fmt(mag)}")
        return EXIT_OK
    if args.method == "sum":
        value = interference_sum_oracle(pc, args.z)
    else:
        value = interference_qrecursion(pc, args.z)
    print(f"I = {fmt(value.real)} {'+' if value.imag >= 0 else '-'} {fmt(abs(value.imag))}j")
    print(f"|I| = {fmt(abs(value))}")
    return EXIT_OK


# ---- scan ------------------------------------------------------------------

def scan_columns(N: int, n: int, z: np.ndarray, output: str):
    """Values of one scan column; the second item flags the tail branch of F (or None)."""
    pc = PathCount(N, n)
    if output == "rescaled":
        z = z / (N + 1)
    log_mag, _ = log_interference(pc, z)
    log_c = log_binomial(N, n)
    if output == "raw":
        return log_mag, None
    if output == "log":
        return (log_mag / log_c if log_c > 0 else np.zeros_like(log_mag)), None
    if output == "scaled":
        return np.exp(log_mag - log_c), None
    tail = z > 2 * math.pi / (N + 1)
    return np.exp(log_mag - log_scaling_function(pc, z)), tail


def _figure_preset(args):
    fig = args.figure
    if fig in (1, 2, 3, 5):
        args.N_list = [FIGURE_N]
        args.n_list = list(FIGURE_NS) if fig != 5 else [FIG6_n]
        args.z_min, args.z_max = 0.0, 0.02
        args.output = {1: "scaled", 2: "log", 3: "Y", 5: "Y"}[fig]
    elif fig == 6:
        args.N_list = list(FIG6_N_LIST)
        args.n_list = [FIG6_n]
        args.z_min, args.z_max = 0.0, 40.0
        args.output = "rescaled"


def cmd_scan(args) -> int:
    if args.config:
        cfg = cfgmod.load_config(args.config)
        if "scan" in cfg.sections:
            get = cfg.get
            args.N_list = [get("scan", "N", cfgmod.parse_int, default=args.N_list[0])]
            args.n_list = get("scan", "n", cfgmod.parse_int_list, default=args.n_list)
            args.z_min = get("scan", "z_min", cfgmod.parse_float, default=args.z_min)
            args.z_max = get("scan", "z_max", cfgmod.parse_float, default=args.z_max)
            args.points = get("scan", "points", cfgmod.parse_int, default=args.points)
            args.output = get("scan", "output", str, default=args.output)
    if args.figure is not None:
        _figure_preset(args)
    if args.output not in OUTPUTS:
        raise cfgmod.ConfigError(f"output must be one of {', '.join(OUTPUTS)}")
    if args.points < 2:
        raise DomainError(f"points must be >= 2, got {args.points}")
    if not (0.0 <= args.z_min < args.z_max) or not math.isfinite(args.z_max):
        raise DomainError(f"need 0 <= z-min < z-max, got [{args.z_min}, {args.z_max}]")
    z = np.linspace(args.z_min, args.z_max, args.points)
    header, columns = ["z"], []
    for N in args.N_list:
        for n in args.n_list:
            values, tail = scan_columns(N, n, z, args.output)
            label = f"N{N}_n{n}" if len(args.N_list) > 1 else f"n{n}"
            header.append(f"{args.output}_{label}")
            columns.append(values)
            if tail is not None:
                header.append(f"tail_{label}")
                columns.append(tail.astype(int))
    if args.figure == 5:
        pc = PathCount(FIGURE_N, FIG6_n)
        width = args.width if args.width is not None else subsidiary_position(pc, 1) / 10.0
        header.append("gaussian")
        columns.append(np.exp(-0.5 * (z / width) ** 2))
    rows = []
    for i in range(len(z)):
        row = [z[i]]
        for col, name in zip(columns, header[1:]):
            row.append(str(int(col[i])) if name.startswith("tail_") else col[i])
        rows.append(row)
    write_csv(args.out, header, rows)
    return EXIT_OK


# ---- features --------------------------------------------------------------

def fig4_rows(pc: PathCount, half_window: float = FIG4_HALF_WINDOW, points: int = 401):
    """Numeric |I|/C and |Y| next to their quadratic models around z = 0 and z = a."""
    a = subsidiary_position(pc, 1)
    curv = peak_curvature(pc)
    eps = np.linspace(-half_window, half_window, points)
    log_prin, _ = log_interference(pc, np.abs(eps))
    prin = np.exp(log_prin - log_binomial(pc.N, pc.n))
    log_sub, _ = log_interference(pc, a + eps)
    sub = np.exp(log_sub - log_peak_bound(pc.n, a + eps))
    rows = []
    for i, e in enumerate(eps):
        rows.append([e, prin[i], 1 - e * e * curv / 24, a + e, sub[i], 1 - e * e * curv / 8])
    header = ["eps", "principal_numeric", "principal_model", "z_sub",
              "subsidiary_numeric", "subsidiary_model"]
    return header, rows


def cmd_features(args) -> int:
    pc = PathCount(args.N, args.n)
    report = feature_report(pc, args.z_max, args.m_max, args.ratio_threshold)
    if args.fig4:
        header, rows = fig4_rows(pc)
        write_csv(args.out, header, rows)
        out = sys.stderr if args.out in (None, "-") else sys.stdout
        widths = peak_widths(pc)
        checks = (("principal", widths.eps_prin, "predicted"),
                  ("subsidiary", widths.eps_sub, "predicted"),
                  ("subsidiary (located peak)", widths.eps_sub, "located"))
        for label, root, center in checks:
            kind = label.split()[0]
            dev, z0 = quadratic_model_deviation(pc, kind, window=FIG4_HALF_WINDOW, center=center)
            reach = min(root / 2, FIG4_HALF_WINDOW)
            print(f"{label}: center {fmt(z0)}, |eps| <= {fmt(reach)}, "
                  f"max relative deviation {dev:.4f} ({'ok' if dev <= 0.05 else 'exceeds 5%'})",
                  file=out)
        return EXIT_OK
    print(f"N = {pc.N}, n = {pc.n}")
    for label, points in (("zeros", report.zeros), ("unit_modulus_A", report.unity_points_A),
                          ("unit_modulus_B", report.unity_points_B)):
        shown = points if args.list is None or args.list <= 0 else points[:args.list]
        more = f" ... ({len(points)} total)" if len(shown) < len(points) else ""
        print(f"{label}: " + " ".join(fmt(z) for z in shown) + more)
    print("subsidiary maxima (m, z, ln bound, bound_valid):")
    for s in report.subsidiary:
        print(f"  {s.m}, {fmt(s.z)}, {fmt(s.bound_log_mag)}, {str(s.bound_valid).lower()}")
    if report.widths is not None:
        w = report.widths
        print(f"eps_prin = {fmt(w.eps_prin)} (bound {fmt(w.bound_prin)})")
        print(f"eps_sub = {fmt(w.eps_sub)} (bound {fmt(w.bound_sub)})")
        print(f"within_bounds = {str(w.within_bounds).lower()}")
    return EXIT_OK


# ---- simulate --------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg = cfgmod.load_config(args.config)
    u = cfgmod.universe_from_config(cfg)
    N_max = args.N if args.N is not None else cfg.get("universe", "N", cfgmod.parse_int, default=10)
    band = args.band if args.band is not None else cfg.get("universe", "band", cfgmod.parse_int,
                                                           default=1)
    if N_max < 1:
        raise DomainError(f"N must be >= 1, got {N_max}")
    if args.enumerate:
        check_enumeration_cap(N_max - N_max // 2, N_max // 2, args.cap)
    spectrum = commutator_spectrum(u)
    info = sys.stderr if args.out in (None, "-") else sys.stdout
    print("commutator eigenvalues: " + " ".join(fmt(w) for w in spectrum.eigenvalues), file=info)
    print(f"nonzero_eigenvalue_condition = {str(check_nonzero_eigenvalue_condition(u)).lower()}",
          file=info)
    header, rows = [], []
    if args.report in ("fidelity", "both"):
        header = ["N", "fidelity_deficit", "boundary_mass_fraction", "norm_ratio"]
        for N in range(1, N_max + 1):
            err = bievolution_error(u, N, band, enumerate_paths=args.enumerate, cap=args.cap)
            rows.append([str(N), err.fidelity_deficit, err.boundary_mass_fraction, err.norm_ratio])
    if args.report == "components":
        header = ["N", "n", "component_norm"]
        comps = path_components(u, N_max)
        rows = [[str(N_max), str(n), np.linalg.norm(c)] for n, c in enumerate(comps)]
    write_csv(args.out, header, rows)
    if args.report == "both":
        comps = path_components(u, N_max)
        print(f"component norms at N = {N_max}: "
              + " ".join(fmt(np.linalg.norm(c)) for c in comps), file=info)
    return EXIT_OK


# ---- regime ----------------------------------------------------------------

def _regime_inputs(args):
    if args.c is not None:
        return RegimeInputs.scaled(args.f, args.c)
    return RegimeInputs.fixed(args.f, args.tau)


def cmd_regime(args) -> int:
    if args.config:
        cfg = cfgmod.load_config(args.config)
        if "regime" in cfg.sections:
            get = cfg.get
            args.f = get("regime", "f", cfgmod.parse_float, default=args.f)
            args.tau = get("regime", "tau", cfgmod.parse_float, default=args.tau)
            if get("regime", "tau_model", str, default="fixed") == "scaled":
                args.c = get("regime", "c", cfgmod.parse_float)
            args.strict = args.strict or get("regime", "strict", cfgmod.parse_bool, default=False)
            if args.duration is None and cfg.has("regime", "duration"):
                args.duration = get("regime", "duration", cfgmod.parse_float)
    if args.duration is not None:
        f = required_f_for_duration(args.duration, args.tau)
        print(f"required f for N*tau = {fmt(args.duration)} s: {fmt(f)}")
        if args.f is None:
            return EXIT_OK
    if args.f is None:
        args.f = 1.0
    inputs = _regime_inputs(args)
    print(f"f = {fmt(inputs.f)}, lambda_SD = {fmt(inputs.lambda_sd)} s^-2")
    if inputs.tau_model == "scaled":
        ok, margin = tau_scaling_check(inputs, args.ratio_threshold)
        print(f"tau = c/sqrt(N+1), c = {fmt(inputs.c)}")
        print(f"c^2 lambda_SD / 3pi = {fmt(margin)} ({'satisfied' if ok else 'NOT satisfied'})")
        print(f"first subsidiary maximum at lambda = {fmt(first_subsidiary_lambda(inputs))} s^-2")
        print(f"subsidiary/width ratio = {fmt(subsidiary_vs_width_ratio(inputs, args.N or 0))}")
        return EXIT_OK
    window = validity_window(inputs, args.strict, args.ratio_threshold)
    print(f"tau = {fmt(inputs.tau)} s")
    print(f"upper bound on N*tau = {fmt(upper_bound_total_time(inputs))} s")
    if args.N is not None:
        print(f"subsidiary/width ratio at N = {args.N}: "
              f"{fmt(subsidiary_vs_width_ratio(inputs, args.N))}")
    if args.strict:
        print(f"stringent lower bound = {fmt(window.lower_bound_s)} s")
        print("CONFLICT" if window.conflict else "no conflict")
    else:
        print(f"window: {fmt(window.lower_bound_s)} s < N*tau << {fmt(window.upper_bound_s)} s")
    return EXIT_OK


# ---- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    results = run_suites(args.level, args.suite)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name:<18} {r.seconds:7.2f}s  {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bievolution",
        description="Interference function, toy-universe simulation and regime arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate I_{N-n,n}(z) once")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--method", choices=("sum", "product", "recurrence"), default="product")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="tabulate a transform of I over a z grid as CSV")
    p.add_argument("--figure", type=int, choices=(1, 2, 3, 5, 6))
    p.add_argument("--N", dest="N_list", type=_int_list, default=[FIGURE_N],
                   help="total steps (comma list allowed)")
    p.add_argument("--n", dest="n_list", type=_int_list, default=list(FIGURE_NS),
                   help="forward steps (comma list)")
    p.add_argument("--z-min", type=float, default=0.0)
    p.add_argument("--z-max", type=float, default=0.02)
    p.add_argument("--points", type=int, default=4000)
    p.add_argument("--output", choices=OUTPUTS, default="scaled")
    p.add_argument("--width", type=float, help="Gaussian width in z for --figure 5")
    p.add_argument("--config", help="read [scan] defaults from a config file")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("features", help="zeros, unit-modulus points, peaks and widths")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z-max", type=float)
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--ratio-threshold", type=float, default=MUCH_LESS)
    p.add_argument("--list", type=int, default=10,
                   help="landmarks printed per kind (0 prints all)")
    p.add_argument("--fig4", action="store_true", help="emit quadratic-model comparison CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("simulate", help="run a toy universe from a config file")
    p.add_argument("config")
    p.add_argument("--N", type=int, help="largest step count (default from config)")
    p.add_argument("--report", choices=("fidelity", "components", "both"), default="fidelity")
    p.add_argument("--band", type=int)
    p.add_argument("--enumerate", action="store_true",
                   help="build components by enumerating every ordering")
    p.add_argument("--cap", type=int, default=10**5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("regime", help="validity window in seconds")
    p.add_argument("--f", type=float)
    p.add_argument("--tau", type=float, default=5e-44)
    p.add_argument("--c", type=float, help="use tau = c/sqrt(N+1)")
    p.add_argument("--N", type=int)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--duration", type=float, help="invert: f needed for this total time")
    p.add_argument("--ratio-threshold", type=float, default=MUCH_LESS)
    p.add_argument("--config")
    p.set_defaults(func=cmd_regime)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("level", nargs="?", choices=("quick", "full"), default="quick")
    p.add_argument("--suite", action="append", help="run only the named suite(s)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationCapExceeded, TableCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (BievolutionError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
