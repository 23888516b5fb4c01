"""Command-line front end.

Commands:
  resonances  enumerate a surface spec's model-end resonances to a CSV/JSON census
  count       counting-function table (r, N(r)) with a growth-law fit
  kernel      evaluate a model kernel at one coordinate pair
  modes       tabulate a mode function along an r-grid
  verify      run the cross-oracle verification suite

Exit codes: 0 success, 1 verification failure, 2 malformed spec/arguments,
3 numerical failure (truncation, quadrature, pole or overflow).
All numeric output is formatted with 17 significant digits and fixed sort
order, so identical configurations produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import model_kernels as mk
from . import resonances as rz
from . import verify as vf
from .errors import (
    DomainError,
    NonConvergenceError,
    OverflowBudgetError,
    PoleError,
    QuadratureError,
    RadiusExceededError,
    ResonanceLabError,
    TruncationError,
)
from .geometry import CylCoord, cyl_to_plane

_NUMERICAL_ERRORS = (
    PoleError,
    TruncationError,
    QuadratureError,
    NonConvergenceError,
    OverflowBudgetError,
    RadiusExceededError,
)

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"(?:(?P<im>[+-]\d*(?:\.\d*)?(?:[eE][+-]?\d+)?)i)?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse 're', 're+imi' or 're-imi' (decimal) into a complex number."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse complex number {text!r}; expected 're+imi'")
    re_part = float(m.group("re"))
    im_text = m.group("im")
    if im_text is None:
        return complex(re_part, 0.0)
    if im_text in ("+", "-"):
        im_text += "1"
    return complex(re_part, float(im_text))


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_spec(path: str) -> rz.SurfaceSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read spec {path}: {exc}") from exc
    return rz.SurfaceSpec.from_json_dict(data)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _select_end(spec: rz.SurfaceSpec, end: str, index: int):
    pools = {"cylinder": spec.cylinders, "funnel": spec.funnels, "cusp": spec.cusps}
    pool = pools[end]
    if not (0 <= index < len(pool)):
        raise DomainError(f"spec has {len(pool)} {end} end(s); index {index} invalid")
    if end == "cusp":
        return None, pool[index]
    ell, t = pool[index]
    return ell, t


def _cmd_resonances(args) -> int:
    spec = _load_spec(args.spec)
    rs = rz.surface_resonances(spec, args.radius)
    rows = [(p.location.real, p.location.imag, p.mult) for p in rs]
    if args.output == "csv":
        lines = ["re,im,mult"]
        lines += [f"{_fmt(re_)},{_fmt(im_)},{m}" for re_, im_, m in rows]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        doc = {
            "spec": spec.to_json_dict(),
            "radius": args.radius,
            "total_multiplicity": rs.total_multiplicity(),
            "resonances": [
                {"re": re_, "im": im_, "mult": m} for re_, im_, m in rows
            ],
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_count(args) -> int:
    spec = _load_spec(args.spec)
    table = rz.census(spec, args.r_max, args.samples)
    fit_rows = [row for row in table if row[0] >= args.fit_min]
    try:
        coeff, spread = rz.growth_fit(fit_rows)
        fit = {"coefficient": coeff, "rel_spread": spread}
    except ResonanceLabError:
        fit = None
    if args.output == "csv":
        lines = ["r,N"]
        lines += [f"{_fmt(r)},{n}" for r, n in table]
        _emit("\n".join(lines) + "\n", args.out)
        if fit:
            sys.stderr.write(
                f"growth_fit coefficient={_fmt(fit['coefficient'])} "
                f"rel_spread={_fmt(fit['rel_spread'])}\n"
            )
    else:
        doc = {
            "spec": spec.to_json_dict(),
            "table": [{"r": r, "N": n} for r, n in table],
            "growth_fit": fit,
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _kernel_values(args, spec):
    end = args.end
    s = parse_complex(args.s)
    r1, phi1, r2, phi2 = args.coords
    c1, c2 = CylCoord(r1, phi1), CylCoord(r2, phi2)
    cfg = mk.ImagesConfig(max_images=args.max_images, tail_tol=args.tail_tol)
    ell, t = _select_end(spec, end, args.index)
    results = {}
    if end == "cylinder":
        if args.method in ("images", "both"):
            results["images"] = mk.cyl_kernel_images(
                s, ell, t, cyl_to_plane(c1, ell), cyl_to_plane(c2, ell), cfg
            )
        if args.method in ("fourier", "both"):
            results["fourier"] = mk.cyl_kernel_fourier(s, ell, t, c1, c2, args.k_max)
    elif end == "funnel":
        if args.method in ("images", "both"):
            results["images"] = mk.funnel_kernel(s, ell, t, c1, c2, cfg)
        if args.method in ("fourier", "both"):
            results["fourier"] = mk.funnel_kernel_fourier(s, ell, t, c1, c2, args.k_max)
    else:
        if args.method in ("images", "both"):
            results["images"] = mk.cusp_kernel_images(s, t, c1, c2, cfg)
        if args.method in ("fourier", "both"):
            results["fourier"] = mk.cusp_kernel(s, t, c1, c2, args.k_max)
    return t, results


def _cmd_kernel(args) -> int:
    spec = _load_spec(args.spec)
    t, results = _kernel_values(args, spec)
    if args.output == "csv":
        lines = ["method,theta,mult,re,im"]
        for method in sorted(results):
            vals = results[method]
            for cls, v in zip(t.angles, vals):
                lines.append(
                    f"{method},{_fmt(cls.theta)},{cls.mult},{_fmt(v.real)},{_fmt(v.imag)}"
                )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        doc = {
            "end": args.end,
            "s": args.s,
            "classes": [
                {"theta": cls.theta, "mult": cls.mult} for cls in t.angles
            ],
            "values": {
                method: [{"re": v.real, "im": v.imag} for v in vals]
                for method, vals in results.items()
            },
        }
        if len(results) == 2:
            a, b = results["images"], results["fourier"]
            doc["max_rel_diff"] = float(
                np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))
            )
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_modes(args) -> int:
    spec = _load_spec(args.spec)
    ell, t = _select_end(spec, args.end, args.index)
    s = parse_complex(args.s)
    n = args.n
    rs = [args.r_min + (args.r_max - args.r_min) * i / (n - 1) for i in range(n)]
    lines = ["r,re,im"]
    for r in rs:
        if args.end == "cylinder":
            v = mk.cyl_mode(s, args.kappa, r, args.r2, ell)
        elif args.end == "funnel":
            v = mk.funnel_mode(s, args.kappa, r, args.r2, ell)
        else:
            v = mk.cusp_mode(s, args.kappa, math.exp(r), math.exp(args.r2))
        lines.append(f"{_fmt(r)},{_fmt(v.real)},{_fmt(v.imag)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    results = vf.run_all(parallel=not args.serial)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        sys.stdout.write(f"{status} {r.name}: {r.detail}\n")
    sys.stdout.write("verification " + ("passed" if all_ok else "FAILED") + "\n")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="resonance-lab",
        description="Twisted resolvent kernels and resonance lattices on hyperbolic model ends",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, spec=True):
        if spec:
            sp.add_argument("--spec", required=True, help="surface spec JSON file")
        sp.add_argument("--output", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("resonances", help="enumerate model-end resonances")
    add_common(sp)
    sp.add_argument("--radius", type=float, required=True)
    sp.set_defaults(func=_cmd_resonances)

    sp = sub.add_parser("count", help="counting-function table and growth fit")
    add_common(sp)
    sp.add_argument("--r-max", type=float, required=True)
    sp.add_argument("--samples", type=int, default=8)
    sp.add_argument("--fit-min", type=float, default=0.0)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("kernel", help="evaluate a model kernel at a point pair")
    add_common(sp)
    sp.add_argument("--end", choices=("cylinder", "funnel", "cusp"), required=True)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--method", choices=("images", "fourier", "both"), default="both")
    sp.add_argument("--s", required=True, help="spectral parameter, 're+imi'")
    sp.add_argument(
        "--coords", type=float, nargs=4, metavar=("R1", "PHI1", "R2", "PHI2"),
        required=True,
    )
    sp.add_argument("--tail-tol", type=float, default=1e-10)
    sp.add_argument("--max-images", type=int, default=40_000)
    sp.add_argument("--k-max", type=int, default=None)
    sp.set_defaults(func=_cmd_kernel)

    sp = sub.add_parser("modes", help="tabulate a mode function along r")
    add_common(sp)
    sp.add_argument("--end", choices=("cylinder", "funnel", "cusp"), required=True)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--s", required=True)
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--r2", type=float, required=True)
    sp.add_argument("--r-min", type=float, required=True)
    sp.add_argument("--r-max", type=float, required=True)
    sp.add_argument("--n", type=int, default=64)
    sp.set_defaults(func=_cmd_modes)

    sp = sub.add_parser("verify", help="run the cross-oracle verification suite")
    sp.add_argument("--serial", action="store_true", help="disable thread pool")
    sp.set_defaults(func=_cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3
    except (DomainError, ResonanceLabError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
