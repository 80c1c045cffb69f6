"""Command-line front end: sweeps, reports, figure data, certificates.

Every subcommand computes through the library modules and emits either
CSV (sweeps/tables), JSON (reports), or a minimal static SVG line chart.
Output is deterministic for a fixed configuration: JSON keys are sorted,
numbers are printed at a digit count tied to the working precision, and
line endings are always "\n".

Exit codes: 0 success; 2 bad arguments; 3 computation budget exceeded
(series truncation or quadrature refinement); 4 internal consistency
failure (exact-arithmetic contradictions).

Presets bundle the recipes behind the shipped figures and tables:

    fig1          sweep of the (1, 2) entropy-power gap across p
    thresholds    step-condition thresholds for a spread of p
    certifyA      linear-threshold positivity certificate
    certifyAprime sharper linear-threshold certificate
    certifyB      quadratic-threshold certificate
    certifyC      small-skew threshold-7 certificate
    knessl        lattice-correction decay for the symmetric Bernoulli sum
    tulino        smoothed-entropy increments vs the two log bounds
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mpf

from . import asymptotics, discrimination, dist_core, epi_engine, moments_bounds
from .errors import (
    ConsistencyError,
    QuadratureError,
    SeriesTruncationError,
)
from .polycert import CERT_SUBSTITUTIONS, certify
from .precision import (
    DEFAULT_PRECISION,
    MIN_PRECISION,
    check_precision,
    working_precision,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_BUDGET = 3
EXIT_INCONSISTENT = 4


def _fmt(x: mpf, precision: int) -> str:
    """Decimal rendering of an mpf with precision-tagged digit count."""
    return mpmath.nstr(x, precision, strip_zeros=True)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _svg_text(points: List[Tuple[float, float]], x_label: str, y_label: str) -> str:
    """Minimal static SVG polyline; the CSV is the source of truth."""
    width, height, pad = 800.0, 500.0, 60.0
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x: float) -> float:
        return pad + (x - x_lo) * (width - 2 * pad) / (x_hi - x_lo)

    def sy(y: float) -> float:
        return height - pad - (y - y_lo) * (height - 2 * pad) / (y_hi - y_lo)

    polyline = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]
    if y_lo < 0 < y_hi:
        zero_y = sy(0.0)
        parts.append(
            f'<line x1="{pad:.2f}" y1="{zero_y:.2f}" x2="{width - pad:.2f}" '
            f'y2="{zero_y:.2f}" stroke="#999" stroke-dasharray="4 4"/>'
        )
    parts.extend(
        [
            f'<line x1="{pad:.2f}" y1="{height - pad:.2f}" x2="{width - pad:.2f}" '
            f'y2="{height - pad:.2f}" stroke="black"/>',
            f'<line x1="{pad:.2f}" y1="{pad:.2f}" x2="{pad:.2f}" '
            f'y2="{height - pad:.2f}" stroke="black"/>',
            f'<text x="{width / 2:.2f}" y="{height - 15:.2f}" '
            f'text-anchor="middle" font-size="14">{x_label}</text>',
            f'<text x="18" y="{height / 2:.2f}" text-anchor="middle" '
            f'font-size="14" transform="rotate(-90 18 {height / 2:.2f})">{y_label}</text>',
            f'<text x="{pad:.2f}" y="{height - pad + 20:.2f}" '
            f'text-anchor="middle" font-size="12">{x_lo:.4g}</text>',
            f'<text x="{width - pad:.2f}" y="{height - pad + 20:.2f}" '
            f'text-anchor="middle" font-size="12">{x_hi:.4g}</text>',
            f'<text x="{pad - 8:.2f}" y="{height - pad:.2f}" '
            f'text-anchor="end" font-size="12">{y_lo:.4g}</text>',
            f'<text x="{pad - 8:.2f}" y="{pad:.2f}" '
            f'text-anchor="end" font-size="12">{y_hi:.4g}</text>',
            f'<polyline points="{polyline}" fill="none" stroke="#1f6feb" '
            f'stroke-width="1.5"/>',
            "</svg>",
        ]
    )
    return "\n".join(parts) + "\n"


def _p_grid(p_min: str, p_max: str, steps: int, precision: int) -> List[mpf]:
    from .precision import as_mpf, working_precision

    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    lo = as_mpf(p_min, precision)
    hi = as_mpf(p_max, precision)
    if not (0 < lo < 1 and 0 < hi < 1):
        raise ValueError("the p grid must lie strictly inside (0, 1)")
    if lo > hi:
        raise ValueError(f"p-min must not exceed p-max, got {p_min} > {p_max}")
    if steps == 1:
        return [lo]
    with working_precision(precision):
        step = (hi - lo) / (steps - 1)
        return [lo + i * step for i in range(steps)]


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_gap(args: argparse.Namespace) -> int:
    report = epi_engine.epi_gap(args.m, args.n, args.p, args.precision)
    payload = {
        "m": report.m,
        "n": report.n,
        "p": _fmt(report.p, args.precision),
        "gap": _fmt(report.gap, args.precision),
        "holds": report.holds,
        "precision": report.precision,
    }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    precision = args.precision
    if args.p is not None:
        grid = _p_grid(args.p, args.p, 1, precision)
    else:
        grid = _p_grid(args.p_min, args.p_max, args.steps, precision)
    rows: List[Tuple[mpf, mpf]] = []
    for p in grid:
        report = epi_engine.epi_gap(args.m, args.n, p, precision)
        rows.append((p, report.gap))
    if args.format == "svg":
        text = _svg_text(
            [(float(p), float(g)) for p, g in rows], "p", "entropy power gap"
        )
    else:
        text = _csv_text(
            ["p", "gap"],
            [[_fmt(p, precision), _fmt(g, precision)] for p, g in rows],
        )
    _emit(text, args.out)
    return EXIT_OK


def _cmd_threshold(args: argparse.Namespace) -> int:
    report = epi_engine.empirical_threshold(args.p, args.cap, args.precision)
    payload = {
        "p": _fmt(report.p, args.precision),
        "t": _fmt(report.t, args.precision),
        "empirical_n0": report.empirical_n0,
        "formula_a": report.formula_a,
        "formula_b": report.formula_b,
        "cap": report.cap,
        "precision": report.precision,
    }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_grid(args: argparse.Namespace) -> int:
    cells = epi_engine.epi_grid_check(args.m, args.n, args.p, args.precision)
    worst = min(cells.values(), key=lambda rep: rep.gap)
    payload = {
        "m_max": args.m,
        "n_max": args.n,
        "p": args.p,
        "all_hold": all(rep.holds for rep in cells.values()),
        "worst_cell": {"m": worst.m, "n": worst.n},
        "worst_gap": _fmt(worst.gap, args.precision),
        "cells": [
            {
                "m": rep.m,
                "n": rep.n,
                "gap": _fmt(rep.gap, args.precision),
                "holds": rep.holds,
            }
            for (m, n), rep in sorted(cells.items())
        ],
        "precision": args.precision,
    }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_bound(args: argparse.Namespace) -> int:
    precision = args.precision
    with working_precision(precision):
        pmf = dist_core.binomial_pmf(args.n, args.p, precision)
        exact = dist_core.entropy(pmf)
        cumulative = moments_bounds.cumulative_gamma_bound(
            args.n, args.p, args.l, precision
        )
        # Taylor depth l feeds harmonic orders up to w = 2l (a single
        # partition block of size k = 2l+1 contributes excess k - 1).
        harmonic = moments_bounds.harmonic_lower_bound(
            args.n, args.p, 2 * args.l, precision
        )
        payload = {
            "p": args.p,
            "n": args.n,
            "l": args.l,
            "entropy": _fmt(exact, precision),
            "cumulative_bound": _fmt(cumulative, precision),
            "cumulative_holds": bool(cumulative <= exact),
            "harmonic_bound": _fmt(harmonic, precision),
            "harmonic_holds": bool(harmonic <= exact),
            "precision": precision,
        }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_discrimination(args: argparse.Namespace) -> int:
    precision = args.precision
    with working_precision(precision):
        before = dist_core.binomial_pmf(args.n, args.p, precision)
        after = dist_core.shift(before, 1)
        weight = args.p
        direct = discrimination.cap_discrimination(after, before, weight)
        series = discrimination.cap_via_series(after, before, weight, tol=args.tol)
        step = discrimination.binomial_step_c(args.n, args.p, precision)
        payload = {
            "n": args.n,
            "p": args.p,
            "direct": _fmt(direct, precision),
            "series_partial": _fmt(series.partial_sum, precision),
            "series_terms": series.terms_used,
            "series_tail_bound": _fmt(series.tail_bound, precision),
            "series_vs_direct": _fmt(abs(series.partial_sum - direct), precision),
            "entropy_step": _fmt(step, precision),
            "step_vs_direct": _fmt(abs(step - direct), precision),
            "precision": precision,
        }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_certify(args: argparse.Namespace) -> int:
    report = certify(args.sub)
    _emit(_json_text(report.to_json_dict()), args.out)
    return EXIT_OK


def _cmd_knessl(args: argparse.Namespace) -> int:
    precision = args.precision
    if args.n < 8:
        raise ValueError("the decay scan needs --n >= 8")
    family = sorted({max(1, args.n >> k) for k in range(4)})
    with working_precision(precision):
        base = dist_core.binomial_pmf(1, args.p, precision)
        profile = asymptotics.knessl_profile(base, family, precision)
        fit = asymptotics.leading_constant_fit(base, family, precision)
        kappa3 = profile.kappa.kappa(3)
        kappa4 = profile.kappa.kappa(4)
        sigma2 = profile.sigma2
        if abs(kappa3) > 0:
            predicted = kappa3**2 / (12 * sigma2**3)
            predicted_exponent = 1
        else:
            predicted = kappa4**2 / (48 * sigma2**4)
            predicted_exponent = 2
        payload = {
            "p": args.p,
            "sigma2": _fmt(sigma2, precision),
            "kappa3": _fmt(kappa3, precision),
            "kappa4": _fmt(kappa4, precision),
            "g": {
                str(n): _fmt(profile.g_values[n], precision) for n in family
            },
            "negativity_onset": profile.negativity_onset(),
            "fit_constant": fit.constant,
            "fit_exponent": fit.exponent,
            "fit_monotone": fit.monotone,
            "predicted_constant": _fmt(predicted, precision),
            "predicted_exponent": predicted_exponent,
            "precision": precision,
        }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_smooth(args: argparse.Namespace) -> int:
    precision = args.precision
    with working_precision(precision):
        pmf = dist_core.binomial_pmf(args.n, args.p, precision)
        result = asymptotics.gaussian_smoothed_entropy(
            pmf, args.sigma, args.tol, precision, n=args.n
        )
        floor = mpmath.ln(2 * mpmath.pi * mpmath.e * result.sigma**2) / 2
        payload = {
            "n": args.n,
            "p": args.p,
            "sigma": _fmt(result.sigma, precision),
            "h": _fmt(result.h_value, precision),
            "quadrature_error": _fmt(result.quadrature_error, precision),
            "gaussian_floor": _fmt(floor, precision),
            "excess_over_floor": _fmt(result.h_value - floor, precision),
            "precision": precision,
        }
    _emit(_json_text(payload), args.out)
    return EXIT_OK


def _cmd_tulino(args: argparse.Namespace) -> int:
    precision = args.precision
    if args.n_min < 2 or args.n_max < args.n_min:
        raise ValueError("need 2 <= n-min <= n-max")
    rows = asymptotics.tulino_verdu_compare(
        args.p,
        args.sigma,
        range(args.n_min, args.n_max + 1),
        tol=args.tol,
        precision=precision,
    )
    header = ["n", "increment", "half_log", "full_log", "meets_half", "meets_full"]
    body = [
        [
            str(r.n),
            _fmt(r.increment, precision),
            _fmt(r.half_log, precision),
            _fmt(r.full_log, precision),
            str(r.meets_half).lower(),
            str(r.meets_full).lower(),
        ]
        for r in rows
    ]
    _emit(_csv_text(header, body), args.out)
    return EXIT_OK


PRESETS: Dict[str, List[str]] = {
    "fig1": [
        "sweep", "--m", "1", "--n", "2",
        "--p-min", "0.01", "--p-max", "0.99", "--steps", "197",
    ],
    "thresholds": ["threshold", "--p", "0.5", "--cap", "2000"],
    "certifyA": ["certify", "--sub", "A"],
    "certifyAprime": ["certify", "--sub", "Aprime"],
    "certifyB": ["certify", "--sub", "B"],
    "certifyC": ["certify", "--sub", "C"],
    "knessl": ["knessl", "--p", "0.5", "--n", "4096"],
    "tulino": [
        "tulino", "--p", "0.5", "--sigma", "1e-3",
        "--n-min", "8", "--n-max", "64", "--precision", "30",
    ],
}


def _cmd_preset(args: argparse.Namespace) -> int:
    argv = list(PRESETS[args.name])
    if args.out is not None:
        argv.extend(["--out", args.out])
    if args.format is not None:
        argv.extend(["--format", args.format])
    return main(argv)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--precision", type=int, default=DEFAULT_PRECISION,
        help=f"working decimal digits (min {MIN_PRECISION}, default "
        f"{DEFAULT_PRECISION})",
    )
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discrete-epi",
        description="Verification toolkit for the entropy power inequality "
        "on integer-valued random variables.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gap = subs.add_parser("gap", help="entropy power gap for one (m, n, p)")
    gap.add_argument("--m", type=int, required=True)
    gap.add_argument("--n", type=int, required=True)
    gap.add_argument("--p", required=True)
    _add_common(gap)
    gap.set_defaults(handler=_cmd_gap)

    sweep = subs.add_parser("sweep", help="gap as a function of p (CSV or SVG)")
    sweep.add_argument("--m", type=int, required=True)
    sweep.add_argument("--n", type=int, required=True)
    sweep.add_argument("--p", default=None, help="single-point sweep")
    sweep.add_argument("--p-min", default="0.01")
    sweep.add_argument("--p-max", default="0.99")
    sweep.add_argument("--steps", type=int, default=197)
    sweep.add_argument("--format", choices=["csv", "svg"], default="csv")
    _add_common(sweep)
    sweep.set_defaults(handler=_cmd_sweep)

    threshold = subs.add_parser(
        "threshold", help="empirical and closed-form step-condition thresholds"
    )
    threshold.add_argument("--p", required=True)
    threshold.add_argument("--cap", type=int, default=2000)
    _add_common(threshold)
    threshold.set_defaults(handler=_cmd_threshold)

    grid = subs.add_parser("grid", help="gap over all 1<=m<=M, 1<=n<=N")
    grid.add_argument("--m", type=int, required=True, help="largest m")
    grid.add_argument("--n", type=int, required=True, help="largest n")
    grid.add_argument("--p", required=True)
    _add_common(grid)
    grid.set_defaults(handler=_cmd_grid)

    bound = subs.add_parser(
        "bound", help="entropy lower bounds vs the exact binomial entropy"
    )
    bound.add_argument("--p", required=True)
    bound.add_argument("--n", type=int, required=True)
    bound.add_argument(
        "--l", type=int, default=1,
        help="Taylor truncation depth; the telescoped bound is valid for "
        "every depth, while the harmonic form is an asymptotic approximant "
        "that overshoots outside its validity region (holds flags report "
        "each bound honestly)",
    )
    _add_common(bound)
    bound.set_defaults(handler=_cmd_bound)

    disc = subs.add_parser(
        "discrimination",
        help="mixing-step discrimination: direct vs series evaluation",
    )
    disc.add_argument("--n", type=int, required=True)
    disc.add_argument("--p", required=True)
    disc.add_argument(
        "--tol", default="1e-4",
        help="series tail tolerance; the binomial pair shares ratio-one "
        "endpoint atoms, so the tail bound decays only like 1/terms and "
        "deep tolerances exceed the term budget",
    )
    _add_common(disc)
    disc.set_defaults(handler=_cmd_discrimination)

    cert = subs.add_parser(
        "certify", help="exact positivity certificate for a threshold substitution"
    )
    cert.add_argument("--sub", required=True, choices=sorted(CERT_SUBSTITUTIONS))
    _add_common(cert)
    cert.set_defaults(handler=_cmd_certify)

    knessl = subs.add_parser(
        "knessl", help="lattice correction decay for Bernoulli sums"
    )
    knessl.add_argument("--p", required=True)
    knessl.add_argument("--n", type=int, required=True, help="largest fold count")
    _add_common(knessl)
    knessl.set_defaults(handler=_cmd_knessl)

    smooth = subs.add_parser(
        "smooth", help="differential entropy of a Gaussian-smoothed binomial"
    )
    smooth.add_argument("--p", required=True)
    smooth.add_argument("--n", type=int, required=True)
    smooth.add_argument("--sigma", required=True)
    smooth.add_argument("--tol", default="1e-9", help="quadrature tolerance")
    _add_common(smooth)
    smooth.set_defaults(handler=_cmd_smooth)

    tulino = subs.add_parser(
        "tulino", help="smoothed-entropy increments vs half-log and full-log"
    )
    tulino.add_argument("--p", required=True)
    tulino.add_argument("--sigma", required=True, help="per-summand noise std")
    tulino.add_argument("--n-min", type=int, default=8)
    tulino.add_argument("--n-max", type=int, default=64)
    tulino.add_argument("--tol", default="1e-9", help="quadrature tolerance")
    _add_common(tulino)
    tulino.set_defaults(handler=_cmd_tulino)

    preset = subs.add_parser("preset", help="run a canned experiment recipe")
    preset.add_argument("name", choices=sorted(PRESETS))
    preset.add_argument("--out", default=None)
    preset.add_argument("--format", choices=["csv", "svg"], default=None)
    preset.set_defaults(handler=_cmd_preset, precision=DEFAULT_PRECISION)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_ARGS if exc.code not in (0, None) else EXIT_OK
    try:
        check_precision(args.precision)
        return args.handler(args)
    except SeriesTruncationError as exc:
        print(f"computation budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except QuadratureError as exc:
        print(f"computation budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS


if __name__ == "__main__":
    sys.exit(main())
