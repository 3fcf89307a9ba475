"""Batch front end: reproducible analyses with machine-readable reports.

Exit codes: 0 success (a NO verdict is still a successful analysis),
2 spec validation error, 3 numeric certification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import random
import sys
from pathlib import Path

from . import __version__
from .core import LogComplex, SequenceSpec, Side, SpecError
from .criterion import decide_cis, shift_enumeration
from .products import (
    TruncationError,
    TruncationPolicy,
    coarse_estimate_ratio,
    fine_estimate_ratio,
    product_value,
)
from .core import ZERO, dist_to_sequence
from .schema import ValidationError, spec_from_json
from .spaces import (
    QuadratureParams,
    SampleSeq,
    SpaceParams,
    interpolate,
    norm_fp,
    restriction,
)
from .toperator import (
    assemble_section,
    decay_fit,
    gamma_phase_choice,
    predicted_log_entry,
    section_norms,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


class ReportWriter:
    """Append-only report directory; refuses to overwrite without --force."""

    def __init__(self, out_dir: Path, force: bool):
        self.out_dir = out_dir
        self.force = force
        out_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        if p.exists() and not self.force:
            raise FileExistsError(
                f"{p} already exists; pass --force to overwrite")
        return p

    def write_json(self, name: str, payload: dict) -> Path:
        p = self.path(name)
        p.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return p


def _provenance(spec_path: Path, args) -> dict:
    return {
        "tool_version": __version__,
        "spec_sha256": hashlib.sha256(spec_path.read_bytes()).hexdigest(),
        "rel_tol": args.rel_tol,
        "seed": args.seed,
    }


def _load_spec(path: Path) -> tuple[SequenceSpec, dict]:
    raw = json.loads(path.read_text())
    payload = raw["spec"] if isinstance(raw, dict) and "spec" in raw else raw
    return spec_from_json(payload), raw


def cmd_analyze(args, writer: ReportWriter) -> int:
    spec, _ = _load_spec(args.spec)
    verdict = decide_cis(spec)
    report = {"verdict": verdict.to_json(), "provenance": _provenance(args.spec, args)}
    path = writer.write_json("verdict.json", report)
    print(f"decision: {verdict.decision.value}  ({path})")
    return EXIT_OK


def _sample_points(spec: SequenceSpec, rng: random.Random, count: int):
    lo, hi = (0.5, 12.0)
    if spec.side is Side.TWO_SIDED:
        lo = -12.0
    pts = []
    while len(pts) < count:
        z = LogComplex.from_polar(rng.uniform(lo, hi),
                                  rng.uniform(-math.pi, math.pi))
        d = dist_to_sequence(spec, z)
        if d.log_dist > math.log(1e-4):
            pts.append(z)
    return pts


def cmd_product(args, writer: ReportWriter) -> int:
    spec, _ = _load_spec(args.spec)
    pol = TruncationPolicy(rel_tol=args.rel_tol)
    rng = random.Random(args.seed)
    rows = []
    for z in _sample_points(spec, rng, args.samples):
        g = product_value(spec, z, pol)
        d = dist_to_sequence(spec, z)
        rows.append([
            z.logmod, z.phase,
            -math.inf if g is ZERO else g.logmod,
            0.0 if g is ZERO else g.phase,
            coarse_estimate_ratio(spec, z, pol),
            fine_estimate_ratio(spec, z, pol),
            d.index,
        ])
    path = writer.path("product.csv")
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["logmod_z", "phase_z", "log_abs_g", "phase_g",
                    "coarse_ratio", "fine_ratio", "nearest_index"])
        w.writerows(rows)
    writer.write_json("product.json", {
        "samples": len(rows),
        "csv": path.name,
        "provenance": _provenance(args.spec, args),
    })
    print(f"wrote {len(rows)} product samples to {path}")
    return EXIT_OK


def cmd_interpolate(args, writer: ReportWriter) -> int:
    spec, raw = _load_spec(args.spec)
    if not isinstance(raw, dict) or "data" not in raw:
        raise ValidationError("/data", "missing field")
    support = {}
    for i, item in enumerate(raw["data"]):
        try:
            support[int(item["k"])] = complex(float(item["re"]),
                                              float(item.get("im", 0.0)))
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f"/data/{i}", "expected {k, re, im}") from None
    pol = TruncationPolicy(rel_tol=args.rel_tol)
    verdict = decide_cis(spec)
    warned = verdict.decision.value != "yes"
    work_spec = spec
    if spec.side is Side.TWO_SIDED and verdict.shift_m:
        work_spec = shift_enumeration(spec, verdict.shift_m)
    data = SampleSeq(support, work_spec.space)
    f = interpolate(work_spec, data, pol)

    ks = sorted(support)
    window = range(min(ks) - 5, max(ks) + 6)
    if work_spec.side is Side.ONE_SIDED:
        window = range(max(0, window.start), window.stop)
    rec = restriction(work_spec, f, window)
    residuals = [{"k": k, "abs": abs(rec.support[k] - support.get(k, 0j))}
                 for k in window]

    samples_path = writer.path("interpolant.csv")
    rng = random.Random(args.seed)
    with samples_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["logmod_z", "phase_z", "log_abs_f", "phase_f"])
        for z in _sample_points(work_spec, rng, args.samples):
            v = f(z)
            if v is ZERO:
                w.writerow([z.logmod, z.phase, -math.inf, 0.0])
            else:
                w.writerow([z.logmod, z.phase, v.logmod, v.phase])

    writer.write_json("interpolate.json", {
        "residuals": residuals,
        "norm_fp": norm_fp(work_spec.space, f),
        "samples": samples_path.name,
        "verdict": verdict.to_json(),
        "warned_not_cis": warned,
        "provenance": _provenance(args.spec, args),
    })
    worst = max(r["abs"] for r in residuals)
    print(f"interpolated {len(support)} samples; worst window residual {worst:.3e}")
    return EXIT_OK


def cmd_tmatrix(args, writer: ReportWriter) -> int:
    spec, _ = _load_spec(args.spec)
    pol = TruncationPolicy(rel_tol=args.rel_tol)
    verdict = decide_cis(spec)
    work_spec = spec
    if spec.side is Side.TWO_SIDED and verdict.shift_m:
        work_spec = shift_enumeration(spec, verdict.shift_m)
    n = args.size
    rows = range(0, n) if work_spec.side is Side.ONE_SIDED else range(-n // 2, n - n // 2)
    phases = gamma_phase_choice(work_spec)
    section = assemble_section(work_spec, phases, rows, rows, pol)

    path = writer.path("tmatrix.csv")
    max_entry = -math.inf
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "k", "log_abs", "phase", "predicted_log"])
        for (m, k), v in sorted(section.entries.items()):
            w.writerow([m, k, v.logmod, v.phase,
                        predicted_log_entry(work_spec, m, k)])
            max_entry = max(max_entry, v.logmod)

    slope_upper, slope_lower, offset = decay_fit(section)
    norms = section_norms(section)
    decaying = slope_upper < 0 and slope_lower < 0
    writer.write_json("tmatrix.json", {
        "slopes": {"upper": slope_upper, "lower": slope_lower, "offset": offset},
        "norms": {"p1": norms.p1, "p2": norms.p2, "pinf": norms.pinf},
        "max_entry_log": max_entry,
        "verdict_cross_check": {
            "decision": verdict.decision.value,
            "section_decays": decaying,
            "consistent": (verdict.decision.value == "yes") == decaying,
        },
        "provenance": _provenance(args.spec, args),
    })
    print(f"section {n}x{n}: slopes ({slope_upper:+.4f}, {slope_lower:+.4f}), "
          f"p2 norm {norms.p2:.4g}")
    return EXIT_OK


def _erf_tail_integral(a: float) -> float:
    """int_0^inf e^{-a t^2 + 2t} dt = e^{1/a} (1/2) sqrt(pi/a) (1 + erf(1/sqrt(a)))."""
    return math.exp(1.0 / a) * 0.5 * math.sqrt(math.pi / a) * (1.0 + math.erf(1.0 / math.sqrt(a)))


def cmd_normcheck(args, writer: ReportWriter) -> int:
    checks = []
    for p, alpha in ((2.0, 1.0), (2.0, 0.5), (4.0, 1.0)):
        space = SpaceParams(alpha, p, Side.ONE_SIDED)
        f = lambda z: LogComplex(0.0, 0.0)  # noqa: E731
        computed = norm_fp(space, f, QuadratureParams())
        a = p * alpha
        oracle = (math.pi + 2.0 * math.pi * _erf_tail_integral(a)) ** (1.0 / p)
        rel = abs(computed - oracle) / oracle
        checks.append({"p": p, "alpha": alpha, "computed": computed,
                       "oracle": oracle, "rel_error": rel})
        print(f"p={p} alpha={alpha}: quadrature {computed:.10g} "
              f"oracle {oracle:.10g} rel {rel:.3e}")
    worst = max(c["rel_error"] for c in checks)
    writer.write_json("normcheck.json", {
        "checks": checks,
        "worst_rel_error": worst,
        "provenance": {"tool_version": __version__, "rel_tol": args.rel_tol,
                       "seed": args.seed},
    })
    return EXIT_OK if worst <= 1e-6 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smallfock",
        description="Complete-interpolating-sequence analysis for small Fock spaces")
    parser.add_argument("command",
                        choices=["analyze", "product", "interpolate", "tmatrix",
                                 "normcheck"])
    parser.add_argument("--spec", type=Path, help="sequence spec JSON file")
    parser.add_argument("--out", type=Path, default=Path("reports"),
                        help="output directory (default: ./reports)")
    parser.add_argument("--rel-tol", type=float, default=1e-12,
                        dest="rel_tol", help="product truncation tolerance")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sampling studies")
    parser.add_argument("--force", action="store_true",
                        help="allow overwriting existing report files")
    parser.add_argument("--samples", type=int, default=100,
                        help="sample count for grid-based commands")
    parser.add_argument("--size", type=int, default=64,
                        help="section size for the tmatrix command")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "product": cmd_product,
        "interpolate": cmd_interpolate,
        "tmatrix": cmd_tmatrix,
        "normcheck": cmd_normcheck,
    }
    if args.command != "normcheck" and args.spec is None:
        print(json.dumps({"error": "missing required --spec"}), file=sys.stderr)
        return EXIT_VALIDATION
    writer = ReportWriter(args.out, args.force)
    try:
        return handlers[args.command](args, writer)
    except (ValidationError, SpecError, json.JSONDecodeError, KeyError,
            FileNotFoundError, FileExistsError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION
    except TruncationError as exc:
        print(json.dumps({"error": str(exc),
                          "achieved_bound": exc.achieved_bound}), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
