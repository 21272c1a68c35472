"""Command-line front end.

Pattern files are either plain text, one crease per line as
``<degrees> <M|V|?>`` (``#`` starts a comment), or JSON of the form
``{"creases": [{"angle_mdeg": 0, "mv": "M"}, ...]}`` where ``angle_deg``
(decimal degrees) may replace ``angle_mdeg``.

Exit codes: 0 success, 1 invalid input, 2 not foldable, 3 solver failure,
4 selftest failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .core import (
    MV,
    CreasePattern,
    MVAssignment,
    as_mdeg,
    degrees_to_mdeg,
    normalize_pattern,
    sector_angles,
)
from .errors import (
    DegreeLimitExceeded,
    NotFoldable,
    ParseError,
    RigidFoldError,
)
from .foldability import (
    brute_force_foldable,
    has_birds_foot,
    is_rigidly_foldable_assigned,
    is_rigidly_foldable_unassigned,
    is_unspecified_cross,
    pop_capability,
)
from .forcing import (
    DEFAULT_MAX_N,
    forcing_census,
    instance_rng,
    minimal_forcing_set,
    random_pattern,
)

EXIT_OK, EXIT_INPUT, EXIT_NOT_FOLDABLE, EXIT_SOLVER, EXIT_SELFTEST = 0, 1, 2, 3, 4


def _label(token: str, line=None):
    t = token.strip().upper()
    if t == "?":
        return None
    if t in ("M", "V"):
        return MV(t)
    raise ParseError(f"unknown label {token!r}", line)


def parse_pattern_text(text: str) -> tuple:
    stripped = text.strip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    raw = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.replace(",", " ").split()
        if len(parts) != 2:
            raise ParseError(f"expected '<degrees> <M|V|?>', got {line.strip()!r}", lineno)
        try:
            angle = degrees_to_mdeg(parts[0])
        except RigidFoldError as exc:
            raise ParseError(str(exc), lineno) from None
        raw.append((angle, _label(parts[1], lineno)))
    if not raw:
        raise ParseError("no creases found")
    return normalize_pattern(raw)


def _parse_json(text: str) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    creases = doc.get("creases") if isinstance(doc, dict) else None
    if not isinstance(creases, list) or not creases:
        raise ParseError("JSON pattern needs a nonempty 'creases' list")
    raw = []
    for k, rec in enumerate(creases):
        if not isinstance(rec, dict):
            raise ParseError(f"crease {k} is not an object")
        try:
            if "angle_mdeg" in rec:
                angle = as_mdeg(rec["angle_mdeg"])
            elif "angle_deg" in rec:
                angle = degrees_to_mdeg(rec["angle_deg"])
            else:
                raise ParseError(f"crease {k} has no angle_mdeg or angle_deg")
        except ParseError:
            raise
        except RigidFoldError as exc:
            raise ParseError(f"crease {k}: {exc}") from None
        raw.append((angle, _label(str(rec.get("mv", "?")))))
    return normalize_pattern(raw)


def parse_pattern_file(source) -> tuple:
    """Parse a pattern from a path, or from the text itself."""
    if isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source and os.path.isfile(source)):
        source = Path(source).read_text(encoding="utf-8")
    return parse_pattern_text(source)


def pattern_to_dict(pattern: CreasePattern, mu=None) -> dict:
    labels = [x.value for x in mu] if mu is not None else ["?"] * pattern.degree
    return {"creases": [{"angle_mdeg": c, "mv": m} for c, m in zip(pattern.creases, labels)]}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def analyze(pattern: CreasePattern, mu=None) -> tuple:
    """Report dict and exit code for one pattern."""
    report = {
        "degree": pattern.degree,
        "creases_mdeg": list(pattern.creases),
        "sectors_mdeg": list(sector_angles(pattern)),
    }
    if mu is None:
        ok, witness_mu = is_rigidly_foldable_unassigned(pattern)
        if ok:
            verdict = "rigidly foldable"
        elif is_unspecified_cross(pattern):
            verdict = "unspecified cross: not foldable"
        elif pattern.degree < 4:
            verdict = "fewer than four creases: not foldable"
        else:
            verdict = "sector of a half turn or more: not foldable"
        report.update(
            assigned=False,
            foldable=ok,
            verdict=verdict,
            witness_assignment=str(witness_mu) if witness_mu is not None else None,
        )
        return report, EXIT_OK if ok else EXIT_NOT_FOLDABLE
    witness = has_birds_foot(pattern, mu)
    pop = pop_capability(pattern, mu)
    ok = witness is not None
    report.update(
        assigned=True,
        assignment=str(mu),
        foldable=ok,
        verdict="rigidly foldable" if ok else "not rigidly foldable",
        witness=witness.to_dict() if witness else None,
        pop={"can_pop_up": pop.can_pop_up, "can_pop_down": pop.can_pop_down},
    )
    return report, EXIT_OK if ok else EXIT_NOT_FOLDABLE


def _analyze_text(r: dict) -> str:
    lines = [f"degree: {r['degree']}", "sectors (deg): " + " ".join(f"{s / 1000:g}" for s in r["sectors_mdeg"])]
    if r["assigned"]:
        lines.append(f"assignment: {r['assignment']}")
    lines.append(f"verdict: {r['verdict']}")
    if r.get("witness"):
        w = r["witness"]
        legs = ",".join(map(str, w["legs"]))
        lines.append(f"witness: {w['parity']} {w['kind'].lower()} legs [{legs}] + opposite {w['opposite']}")
    if r.get("pop"):
        lines.append(f"pop up: {r['pop']['can_pop_up']}  pop down: {r['pop']['can_pop_down']}")
    if not r["assigned"] and r.get("witness_assignment"):
        lines.append(f"witness assignment: {r['witness_assignment']}")
    return "\n".join(lines)


def trajectory_csv(traj) -> str:
    """``step,t,rho_1..rho_n,residual`` with 17 significant digits."""
    n = traj.states[0].degree
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "t"] + [f"rho_{i + 1}" for i in range(n)] + ["residual"])
    for k, (t, s) in enumerate(zip(traj.times, traj.states)):
        w.writerow([k, format(t, ".17g")] + [format(float(x), ".17g") for x in s.fold_angles] + [format(s.residual, ".17g")])
    return buf.getvalue()


def _load(args):
    return parse_pattern_file(Path(args.file))


def cmd_analyze(args) -> int:
    pattern, mu = _load(args)
    report, code = analyze(pattern, mu)
    print(dumps(report) if args.json else _analyze_text(report))
    return code


def cmd_forcing(args) -> int:
    pattern, mu = _load(args)
    if mu is None:
        raise ParseError("forcing needs a fully assigned pattern")
    try:
        report = minimal_forcing_set(pattern, mu, max_n=args.max_n)
    except NotFoldable as exc:
        print(f"not rigidly foldable: {exc}", file=sys.stderr)
        return EXIT_NOT_FOLDABLE
    if args.json:
        print(dumps(report.to_dict()))
    else:
        lo, hi = report.bounds
        print(f"degree: {report.n}")
        print(f"assignment: {report.assignment}")
        print(f"foldable assignments: {report.foldable_count}")
        print(f"minimal forcing set: {list(report.minimal_set)}")
        print(f"size: {report.size}  bounds: [{lo}, {hi}]")
    return EXIT_OK


def cmd_fold(args) -> int:
    from .kinematics import folding_trajectory

    pattern, mu = _load(args)
    if mu is None:
        ok, mu = is_rigidly_foldable_unassigned(pattern)
        if not ok:
            print("not rigidly foldable under any assignment", file=sys.stderr)
            return EXIT_NOT_FOLDABLE
    if not is_rigidly_foldable_assigned(pattern, mu):
        print(f"not rigidly foldable: {mu}", file=sys.stderr)
        return EXIT_NOT_FOLDABLE
    try:
        traj = folding_trajectory(pattern, mu, steps=args.steps, target_depth=args.depth, parity=args.parity)
    except NotFoldable as exc:
        print(f"not rigidly foldable: {exc}", file=sys.stderr)
        return EXIT_NOT_FOLDABLE
    except RigidFoldError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    text = trajectory_csv(traj)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_census(args) -> int:
    result = forcing_census(args.n, args.samples, args.seed, max_n=args.max_n)
    if args.json:
        print(dumps(result.to_dict()))
        return EXIT_OK
    lo, hi = result.to_dict()["bounds"]
    print(f"degree {result.n}, {result.samples} geometries, seed {result.seed}")
    print(f"foldable (pattern, assignment) pairs: {result.pairs}")
    print(f"bounds: [{lo}, {hi}]  violations: {result.violations}")
    print("size\tcount")
    for size, count in result.table():
        print(f"{size}\t{count}")
    return EXIT_OK


def _grid_pattern(n, rng, step_mdeg=15_000):
    slots = 360_000 // step_mdeg
    return CreasePattern(tuple(int(x) * step_mdeg for x in np.sort(rng.choice(slots, size=n, replace=False))))


def selftest(n_max: int = 8, samples: int = 50, seed: int = 0) -> dict:
    """Oracle-equivalence, unassigned-consistency and bound suites; name -> (passed, detail)."""
    results = {}
    checked = mismatches = 0
    uns_checked = uns_bad = 0
    for n in range(4, n_max + 1):
        for k in range(samples):
            rng = instance_rng(seed, n * 100_003 + k)
            # grid geometries make antipodal pairs, and so crosses, common
            pattern = _grid_pattern(n, rng) if k % 2 else random_pattern(n, rng)
            any_foldable = False
            for mask in range(1 << n):
                mu = MVAssignment.from_mask(mask, n)
                fast = is_rigidly_foldable_assigned(pattern, mu)
                any_foldable |= fast
                checked += 1
                mismatches += fast != brute_force_foldable(pattern, mu)
            ok, wmu = is_rigidly_foldable_unassigned(pattern)
            uns_checked += 1
            uns_bad += ok != any_foldable or (ok and not is_rigidly_foldable_assigned(pattern, wmu))
    results["oracle_equivalence"] = (mismatches == 0, f"{checked} cases, {mismatches} mismatches")
    results["unassigned_consistency"] = (uns_bad == 0, f"{uns_checked} patterns, {uns_bad} disagreements")
    total = violations = 0
    for n in range(4, n_max + 1):
        census = forcing_census(n, max(1, samples // 5), seed)
        total += census.pairs
        violations += census.violations
    results["forcing_bounds"] = (violations == 0, f"{total} pairs, {violations} violations")
    return results


def cmd_selftest(args) -> int:
    results = selftest(args.n_max, args.samples, args.seed)
    for name, (ok, detail) in results.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for ok, _ in results.values()) else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigidfold", description="Rigid foldability of single-vertex crease patterns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="foldability verdict, witness, sectors and pop capability")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("forcing", help="minimal forcing set of an assigned pattern")
    p.add_argument("file")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_forcing)

    p = sub.add_parser("fold", help="flat-to-folded trajectory as CSV")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--depth", type=float, default=0.5)
    p.add_argument("--parity", choices=["M", "V"], default=None, help="drive the fold from a tripod/cross of this parity")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("census", help="distribution of minimal forcing set sizes")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("selftest", help="run the oracle and bound suites")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DegreeLimitExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
