"""Command-line front end.

Usage:
    ptspectrum eigs --region 0:32:-25:25 --grid 120
    ptspectrum table1
    ptspectrum wavefn --energy 1.258091,0 --range -6:6 --samples 1201 --out psi0.csv
    ptspectrum verify --energy 4.991315,0.780486
    ptspectrum shoot --region 0:6:-1:2 --a 2 --cutoff 6
    ptspectrum scan-a --a-range 2:3:5 --region 0:10:-4:4

Exit status is 0 on success, 1 when a check fails or a computation errors,
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from typing import Sequence

import numpy as np
from scipy.integrate import simpson

from . import __version__
from .errors import CompletenessWarning, SpectrumError
from .oracle import ShootingConfig, scan_exponent, shoot_eigenvalues
from .quantization import relative_residual
from .rootfinder import (
    DEFAULT_REGION,
    REALITY_TOL,
    Eigenvalue,
    SearchRegion,
    count_zeros,
    find_eigenvalues,
    newton_refine,
)
from .wavefunction import (
    Side,
    coefficients,
    normalization_cutoff,
    ode_residual,
    sample_wave,
)

__all__ = ["TABLE1", "TABLE1_TOL", "main", "verify_checks"]

# ten lowest-modulus eigenvalues as printed in the original table (upper half plane)
TABLE1 = (
    1.258091 + 0j,
    4.991315 + 0.780486j,
    8.618144 + 3.363257j,
    11.85539 + 5.952472j,
    14.97138 + 8.594195j,
    18.02114 + 11.26933j,
    21.02922 + 13.96756j,
    24.00868 + 16.68275j,
    26.96728 + 19.41094j,
    29.91003 + 22.14940j,
)
TABLE1_TOL = 5e-6

SHOOT_REGION = SearchRegion(0.0, 10.0, -4.0, 4.0)
# options whose values may legitimately start with '-'
_VALUE_OPTIONS = ("--region", "--range", "--energy", "--a-range")


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _json(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17 significant digits for floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = _fmt(obj)
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_json(str(k))}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + _json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _eig_record(e: Eigenvalue) -> dict:
    return {
        "re": float(e.value.real),
        "im": float(e.value.imag),
        "residual": float(e.residual),
        "is_real": bool(e.is_real),
    }


def _eig_csv(eigs: Sequence[Eigenvalue]) -> str:
    rows = ["re,im,residual,is_real"]
    for e in eigs:
        rows.append(
            f"{_fmt(e.value.real)},{_fmt(e.value.imag)},{_fmt(e.residual)},{str(e.is_real).lower()}"
        )
    return "\n".join(rows)


# argument types -------------------------------------------------------------


def _floats(text: str, sep: str, n: int) -> list[float]:
    parts = text.split(sep)
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"expected {n} values separated by '{sep}', got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric value in {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return values


def region_type(text: str) -> SearchRegion:
    values = _floats(text, ":", 4)
    try:
        return SearchRegion(*values)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def complex_type(text: str) -> complex:
    re, im = _floats(text, ",", 2)
    return complex(re, im)


def range_type(text: str) -> tuple[float, float]:
    lo, hi = _floats(text, ":", 2)
    if not hi > lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def a_range_type(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected FROM:TO:STEPS")
    lo, hi = _floats(":".join(parts[:2]), ":", 2)
    try:
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"STEPS must be an integer, got {parts[2]!r}") from None
    if steps < 2 or not hi > lo or lo < 2:
        raise argparse.ArgumentTypeError("need 2 <= FROM < TO and STEPS >= 2")
    return lo, hi, steps


def _positive_int(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return value

    return parse


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError("must be a positive number")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptspectrum",
        description="Spectrum and eigenfunctions of -d2/dx2 + V, V = ix^2 (x<=0), -ix^2 (x>=0).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, formats=("json", "csv"), default="json"):
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("eigs", help="eigenvalues in a rectangle of the complex E plane")
    p.add_argument("--region", type=region_type, default=DEFAULT_REGION)
    p.add_argument("--grid", type=_positive_int(2), default=120)
    add_output(p)

    p = sub.add_parser("table1", help="regression against the published ten eigenvalues")
    p.add_argument("--region", type=region_type, default=DEFAULT_REGION)
    p.add_argument("--grid", type=_positive_int(2), default=120)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("wavefn", help="sample a normalized eigenfunction")
    p.add_argument("--energy", type=complex_type, required=True)
    p.add_argument("--range", type=range_type, default=(-6.0, 6.0), dest="x_range")
    p.add_argument("--samples", type=_positive_int(2), default=1201)
    p.add_argument("--no-refine", action="store_true", help="use --energy as given")
    add_output(p, default="csv")

    p = sub.add_parser("verify", help="symmetry, residual and normalization checks")
    p.add_argument("--energy", type=complex_type, required=True)
    p.add_argument("--no-refine", action="store_true", help="use --energy as given")
    p.add_argument("--out", metavar="PATH")

    for name, help_text in (("shoot", "shooting-method eigenvalues"), ("scan-a", "scan the exponent a")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--region", type=region_type, default=SHOOT_REGION)
        p.add_argument("--grid", type=_positive_int(2), default=20)
        p.add_argument("--cutoff", type=_positive_float, default=6.0)
        p.add_argument("--rtol", type=_positive_float, default=1e-10)
        if name == "shoot":
            p.add_argument("--a", type=float, default=2.0, dest="exponent")
            add_output(p)
        else:
            p.add_argument("--a-range", type=a_range_type, default=(2.0, 3.0, 5))
            p.add_argument("--out", metavar="PATH")
    return parser


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    """Glue ``--range -6:6`` into ``--range=-6:6`` so argparse accepts it."""
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in _VALUE_OPTIONS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def _emit(text: str, path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _refined(energy: complex, no_refine: bool) -> complex:
    if no_refine:
        return energy
    return newton_refine(energy).value


def verify_checks(E: complex) -> list[tuple[str, float, float]]:
    """(name, measured value, tolerance) for every check run by ``verify``."""
    E = complex(E)
    checks = [("spectral residual", relative_residual(E), 1e-10)]

    grid = sample_wave(E, -6.0, 6.0, 1201)
    if abs(E.imag) < REALITY_TOL:
        sym = max(abs(s.psi - m.psi.conjugate()) for s, m in zip(grid, reversed(grid)))
        checks.append(("psi(-x) = conj psi(x)", sym, 1e-9))
    else:
        partner = sample_wave(E.conjugate(), -6.0, 6.0, 1201)
        sym = max(abs(s.psi - m.psi.conjugate()) for s, m in zip(grid, reversed(partner)))
        checks.append(("psi_E(-x) = conj psi_E*(x)", sym, 1e-9))

    origin = grid[len(grid) // 2]
    checks.append(("Im psi(0)", abs(origin.psi.imag), 1e-12))
    checks.append(("psi(0) > 0", 0.0 if origin.psi.real > 0 else 1.0, 0.0))

    b2_gap = abs(coefficients(E, Side.LEFT).b2 - coefficients(E, Side.RIGHT).b2)
    checks.append(("b2 left/right", b2_gap, 1e-9))

    fd = sample_wave(E, -4.0, 4.0, 2000)
    checks.append(("ODE residual on [-4, 4]", ode_residual(E, fd), 1e-6))

    # 8 for the low states; higher ones spread further out
    x_cut = normalization_cutoff(E)
    dense = sample_wave(E, -x_cut, x_cut, 2000 * round(x_cut) + 1)
    xs = np.array([s.x for s in dense])
    mass = simpson([s.abs2 for s in dense], x=xs)
    checks.append((f"norm on [-{x_cut:g}, {x_cut:g}]", abs(mass - 1.0), 1e-8))
    peak = max(s.abs2 for s in dense)
    edge = max(dense[0].abs2, dense[-1].abs2) / peak
    checks.append((f"|psi({x_cut:g})|^2 / max", edge, 1e-8))

    return checks


def _cmd_eigs(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CompletenessWarning)
        eigs = find_eigenvalues(args.region, args.grid)
    total = count_zeros(args.region)
    if args.format == "csv":
        _emit(_eig_csv(eigs), args.out)
    else:
        _emit(_json([_eig_record(e) for e in eigs]), args.out)
    print(f"count_zeros: {total}", file=sys.stderr)
    incomplete = [w for w in caught if issubclass(w.category, CompletenessWarning)]
    for w in incomplete:
        print(f"warning: {w.message}", file=sys.stderr)
    return 1 if incomplete else 0


def _cmd_table1(args) -> int:
    eigs = find_eigenvalues(args.region, args.grid)
    upper = [e.value for e in eigs if e.value.imag >= 0]
    lines = [
        f"{'table re':>12} {'table im':>12} {'computed re':>16} {'computed im':>16} "
        f"{'|d re|':>10} {'|d im|':>10}  status"
    ]
    ok = True
    for ref in TABLE1:
        if upper:
            best = min(upper, key=lambda v: abs(v - ref))
            d_re, d_im = abs(best.real - ref.real), abs(best.imag - ref.imag)
        else:
            best, d_re, d_im = complex("nan+nanj"), math.inf, math.inf
        good = d_re <= TABLE1_TOL and d_im <= TABLE1_TOL
        ok &= good
        lines.append(
            f"{ref.real:12.7g} {ref.imag:12.7g} {best.real:16.9g} {best.imag:16.9g} "
            f"{d_re:10.2e} {d_im:10.2e}  {'ok' if good else 'FAIL'}"
        )
    lines.append(f"eigenvalues found: {len(eigs)}, real: {sum(e.is_real for e in eigs)}")
    _emit("\n".join(lines), args.out)
    return 0 if ok else 1


def _cmd_wavefn(args) -> int:
    E = _refined(args.energy, args.no_refine)
    lo, hi = args.x_range
    samples = sample_wave(E, lo, hi, args.samples)
    print(f"energy: {_fmt(E.real)},{_fmt(E.imag)}", file=sys.stderr)
    if args.format == "csv":
        rows = ["x,re_psi,im_psi,abs2_psi"]
        rows += [
            f"{_fmt(s.x)},{_fmt(s.psi.real)},{_fmt(s.psi.imag)},{_fmt(s.abs2)}" for s in samples
        ]
        _emit("\n".join(rows), args.out)
    else:
        records = [
            {"x": s.x, "re_psi": s.psi.real, "im_psi": s.psi.imag, "abs2_psi": s.abs2}
            for s in samples
        ]
        _emit(_json(records), args.out)
    return 0


def _cmd_verify(args) -> int:
    E = _refined(args.energy, args.no_refine)
    lines = [f"energy {E.real:.9g} {E.imag:+.9g}i"]
    ok = True
    for name, value, tol in verify_checks(E):
        good = value <= tol
        ok &= good
        lines.append(f"{'PASS' if good else 'FAIL'}  {name:<28} {value:10.3e}  (tol {tol:.0e})")
    _emit("\n".join(lines), args.out)
    return 0 if ok else 1


def _shooting_config(args, exponent: float) -> ShootingConfig:
    return ShootingConfig(exponent_a=exponent, cutoff_L=args.cutoff, rtol=args.rtol)


def _cmd_shoot(args) -> int:
    eigs = shoot_eigenvalues(args.region, _shooting_config(args, args.exponent), args.grid)
    if args.format == "csv":
        _emit(_eig_csv(eigs), args.out)
    else:
        _emit(_json([_eig_record(e) for e in eigs]), args.out)
    return 0


def _cmd_scan(args) -> int:
    lo, hi, steps = args.a_range
    points = scan_exponent(lo, hi, steps, args.region, _shooting_config(args, lo), args.grid)
    records = [
        {
            "a": p.exponent_a,
            "eigenvalues": [_eig_record(e) for e in p.eigenvalues],
            "error": p.error,
        }
        for p in points
    ]
    _emit(_json(records), args.out)
    return 1 if any(p.error for p in points) else 0


_COMMANDS = {
    "eigs": _cmd_eigs,
    "table1": _cmd_table1,
    "wavefn": _cmd_wavefn,
    "verify": _cmd_verify,
    "shoot": _cmd_shoot,
    "scan-a": _cmd_scan,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_normalize_argv(argv))
    try:
        return _COMMANDS[args.command](args)
    except (SpectrumError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
