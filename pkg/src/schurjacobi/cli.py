"""Command line entry point: ``schurjacobi <subcommand> [flags]``.

Every subcommand runs a group of exact checks and prints one line per check,
or a single JSON document with ``--json``.  Exit status is 0 when every check
passes, 1 on any failure and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import complexes as cx
from . import dgla as dg
from . import projective as pj
from . import quotient as qe
from .linalg import Matrix, rational_str
from .symmetric_group import DEFAULT_BOUND, GroupAlgebraElement, Permutation, partitions, young_symmetrizer


class InputError(Exception):
    pass


@dataclass
class CheckReport:
    id: str
    params: dict
    ok: bool
    witnesses: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"id": self.id, "params": self.params, "status": "PASS" if self.ok else "FAIL",
                "witnesses": self.witnesses}


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _timed(fn: Callable[[], CheckReport]) -> CheckReport:
    t = time.perf_counter()
    rep = fn()
    rep.seconds = time.perf_counter() - t
    rep.witnesses = _jsonable(rep.witnesses)
    return rep


# subcommands ------------------------------------------------------------------

def run_check_signs(args) -> list[CheckReport]:
    out = []

    def ground_truth():
        s = young_symmetrizer((2, 1))
        expected = GroupAlgebraElement(3, {
            Permutation.identity(3): 1,
            Permutation.from_cycles(3, "(12)"): 1,
            Permutation.from_cycles(3, "(13)"): -1,
            Permutation.from_cycles(3, "(132)"): -1,
        })
        return CheckReport("young_symmetrizer_2_1", {}, s == expected, {"computed": repr(s)})

    out.append(_timed(ground_truth))
    n = min(args.n, args.max_partition)
    rng = random.Random(args.seed)
    samples = [cx.random_complex(rng) for _ in range(args.count)]

    def suite():
        bad = []
        checked = 0
        for idx, a in enumerate(samples):
            for m in range(1, n + 1):
                for l in partitions(m):
                    nnz = cx.symmetrizer_defect(l, a, args.max_partition)
                    checked += 1
                    if nnz:
                        bad.append({"complex": idx, "partition": list(l), "nonzero_entries": nnz})
        return CheckReport("symmetrizer_commutes_with_d", {"n": n, "seed": args.seed, "count": args.count},
                           not bad, {"identities_checked": checked, "failures": bad[:5]})

    out.append(_timed(suite))
    return out


def run_check_schur(args) -> list[CheckReport]:
    n = min(args.n, args.max_partition)
    rng = random.Random(args.seed)
    out = []

    def suite():
        bad = []
        checked = 0
        for idx in range(args.count):
            a = cx.random_complex(rng)
            k = rng.randint(-2, 1)
            b = a.direct_sum(cx.contractible(k))
            for m in range(1, n + 1):
                for l in partitions(m):
                    da = _nonzero(cx.cohomology_dims(cx.schur_complex(l, a, args.max_partition)))
                    db = _nonzero(cx.cohomology_dims(cx.schur_complex(l, b, args.max_partition)))
                    checked += 1
                    if da != db:
                        bad.append({"pair": idx, "partition": list(l), "A": da, "A+C": db})
        return CheckReport("schur_quasi_isomorphism_invariance", {"n": n, "seed": args.seed, "count": args.count},
                           not bad, {"comparisons": checked, "failures": bad[:5]})

    out.append(_timed(suite))
    return out


def _nonzero(d: dict) -> dict:
    return {k: v for k, v in sorted(d.items()) if v}


def shipped_dglas() -> dict[str, dg.DGLA]:
    out = {
        "lie2": dg.DGLA.from_bilinear(cx.Complex({0: 2}), {(0, 1): {0: 1}, (1, 0): {0: -1}}),
        "sl2": dg.DGLA.from_bilinear(cx.Complex({0: 3}), SL2_TABLE),
        "abelian_line": dg.DGLA.abelian(cx.Complex({0: 1})),
        "contractible": dg.DGLA.abelian(cx.contractible(0)),
    }
    for name in ("scaling1", "scaling2", "torus"):
        out[name] = qe.instance_dgla(qe.builtin_instance(name))
    return out


SL2_TABLE = {(0, 1): {2: 1}, (1, 0): {2: -1}, (2, 0): {0: 2}, (0, 2): {0: -2}, (2, 1): {1: -2}, (1, 2): {1: 2}}
# same as SL2_TABLE with the h-brackets negated on one side only: not a Lie algebra
BROKEN_TABLE = {(0, 1): {2: 1}, (1, 0): {2: -1}, (2, 0): {0: 2}, (0, 2): {0: -2}, (2, 1): {1: 2}, (1, 2): {1: -2}}


def run_check_jacobi(args) -> list[CheckReport]:
    out = []
    dglas = shipped_dglas()
    if args.instance:
        dglas = {"input": _load_dgla(args.instance)}

    def validity():
        ok_lie = True
        try:
            dg.DGLA.from_bilinear(cx.Complex({0: 2}), {(0, 1): {0: 1}, (1, 0): {0: -1}})
        except dg.DGLAError:
            ok_lie = False
        rejected = False
        try:
            dg.DGLA.from_bilinear(cx.Complex({0: 3}), BROKEN_TABLE)
        except dg.DGLAError:
            rejected = True
        return CheckReport("dgla_validity", {}, ok_lie and rejected,
                           {"lie_algebra_accepted": ok_lie, "jacobi_violation_rejected": rejected})

    if not args.instance:
        out.append(_timed(validity))
    for name, g in sorted(dglas.items()):
        def squares(name=name, g=g):
            dims = {}
            for r in range(1, args.r + 1):
                j = dg.jacobi(r, g)  # Complex construction verifies d o d = 0
                dims[r] = _nonzero(j.cohomology_dims())
            ce_ok = all(m.is_zero() for i in range(3, args.r + 1)
                        for m in (dg.ce_map(i - 1, g) @ dg.ce_map(i, g)).components.values())
            return CheckReport("jacobi_d_squared_zero", {"dgla": name, "r": args.r}, ce_ok,
                               {"cohomology": dims, "ce_composites_zero": ce_ok})

        out.append(_timed(squares))

        def coassoc(name=name, g=g):
            r = min(args.r, 3)
            ok = _coassociative(dg.jacobi(r, g))
            return CheckReport("coassociativity", {"dgla": name, "r": r}, ok, {})

        out.append(_timed(coassoc))
    return out


def _coassociative(j: dg.JacobiComplex) -> bool:
    h = dg.H0(j)
    d = h.dim
    if not d:
        return True
    delta = dg.comultiplication(j.r, j, h)
    # (Delta (x) id) Delta and (id (x) Delta) Delta on the reduced coalgebra
    left = [[Fraction(0)] * d ** 3 for _ in range(d)]
    right = [[Fraction(0)] * d ** 3 for _ in range(d)]
    for z in range(d):
        for a in range(d):
            for b in range(d):
                c = delta[a * d + b, z]
                if not c:
                    continue
                for x in range(d):
                    for y in range(d):
                        left[z][(x * d + y) * d + b] += c * delta[x * d + y, a]
                        right[z][(a * d + x) * d + y] += c * delta[x * d + y, b]
    return left == right


def _load_dgla(path: str) -> dg.DGLA:
    try:
        with open(path) as fh:
            return dg.DGLA.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _instance(args, default: str) -> qe.ActionInstance:
    try:
        return qe.load_instance(args.instance or default)
    except (qe.InstanceError, ValueError, KeyError, TypeError) as exc:
        raise InputError(str(exc)) from None


def run_quotient_compare(args) -> list[CheckReport]:
    inst = _instance(args, "scaling1")

    def one():
        rep = qe.compare(inst, args.r)
        w = {"kernel_graded_dims": rep.kernel_graded_dims, "jacobi_graded_dims": rep.jacobi_graded_dims,
             "checks": rep.checks}
        if rep.certificate:
            w["certificate"] = rep.certificate
        return CheckReport("quotient_compare", {"instance": args.instance or "scaling1", "r": args.r},
                           rep.passed, w)

    return [_timed(one)]


def run_module_compare(args) -> list[CheckReport]:
    if args.instance:
        inst = _instance(args, "scaling1_w1")
        label = args.instance
    else:
        k = args.k if args.k is not None else 1
        inst = qe.scaling_instance(args.n if args.n else 1, weight=k)
        label = f"scaling{args.n or 1}_weight{k}"

    def one():
        rep = qe.module_compare(inst, args.r)
        w = {"kernel_graded_dims": rep.kernel_graded_dims, "jacobi_graded_dims": rep.jacobi_graded_dims,
             "checks": rep.checks}
        if rep.certificate:
            w["certificate"] = rep.certificate
        return CheckReport("module_compare", {"instance": label, "r": args.r}, rep.passed, w)

    return [_timed(one)]


def run_projective_verify(args) -> list[CheckReport]:
    n, r = args.n, args.r
    out = []

    def euler():
        e = pj.euler_dgla(n)
        fiber_ok = e.fiber_map.column(0) == tuple(Fraction(int(i == 0)) for i in range(n + 1))
        ident = e.h0_map.column(0) == tuple(Fraction(int(a == b)) for a in range(n + 1) for b in range(n + 1))
        inst = e.matches_instance()
        return CheckReport("euler_dgla", {"n": n}, fiber_ok and ident and inst,
                           {"fiber_is_x0": fiber_ok, "h0_is_identity": ident, "matches_scaling_instance": inst})

    out.append(_timed(euler))

    def res():
        rep = pj.resolution(n, r)
        return CheckReport("resolution", {"n": n, "r": r}, rep.passed,
                           {c.name: {"ok": c.ok, "detail": c.detail} for c in rep.checks})

    out.append(_timed(res))

    def sections():
        got = pj.global_sections_diff(n, r)
        exp = math.comb(n + r, n) ** 2
        w = {"h0_diff": got, "expected": exp}
        ok = got == exp
        if n == 1:
            w["weyl_oracle"] = pj.weyl_oracle_p1(r) if r <= 4 else None
            ok = ok and (r > 4 or w["weyl_oracle"] == got)
        return CheckReport("global_sections_diff", {"n": n, "r": r}, ok, w)

    out.append(_timed(sections))
    for k in range(args.kmin, args.kmax + 1):
        def disp(k=k):
            d = pj.jacobi_display(n, r, k)
            return CheckReport("jacobi_display", {"n": n, "r": r, "k": k}, d.passed,
                               {"scalars": d.scalars, "expected": d.expected})

        out.append(_timed(disp))
    return out


def run_endo(args) -> list[CheckReport]:
    def one():
        v = pj.global_endomorphisms(args.n, args.r)
        w = {"dimension": v}
        if args.n >= 2:
            ok = v == 1
            w["expected"] = 1
        else:
            ok = v > 1 if args.r >= 2 else v == 1
            w["method"] = "weight-graded Cech"
        return CheckReport("global_endomorphisms", {"n": args.n, "r": args.r}, ok, w)

    return [_timed(one)]


def run_twist_table(args) -> list[CheckReport]:
    out = []
    for k in range(args.kmin, args.kmax + 1):
        def one(k=k):
            t = pj.diff_twist(args.n, args.r, k)
            return CheckReport("diff_twist", {"n": args.n, "r": args.r, "k": k}, t.passed, {
                "scalars": t.scalars,
                "summands": [[s.label(), s.rank] for s in t.summands],
                "expected": [[s.label(), s.rank] for s in t.expected],
            })

        out.append(_timed(one))
    return out


def run_sections_table(args) -> list[CheckReport]:
    out = []
    for r in range(0, args.r + 1):
        def one(r=r):
            got = pj.global_sections_diff(args.n, r)
            exp = math.comb(args.n + r, args.n) ** 2
            w = {"h0_diff": got, "expected": exp}
            ok = got == exp
            if args.n == 1 and r <= 4:
                w["weyl_oracle"] = pj.weyl_oracle_p1(r)
                ok = ok and w["weyl_oracle"] == got
            return CheckReport("sections", {"n": args.n, "r": r}, ok, w)

        out.append(_timed(one))
    return out


COMMANDS = {
    "check-signs": (run_check_signs, "Young symmetrizer ground truth and Sigma(l) d = d Sigma(l)"),
    "check-schur": (run_check_schur, "Schur functors under A -> A + contractible"),
    "check-jacobi": (run_check_jacobi, "DGLA validation, d^2 = 0 and coassociativity"),
    "quotient-compare": (run_quotient_compare, "invariant kernel versus h0(J^r(L))* + Q"),
    "module-compare": (run_module_compare, "module version of quotient-compare"),
    "projective-verify": (run_projective_verify, "resolution, sections and display scalars on P^n"),
    "endo": (run_endo, "global endomorphisms of Diff^r/O"),
    "twist-table": (run_twist_table, "Diff^r(O(k),O(k)) decompositions"),
    "sections-table": (run_sections_table, "dim H0(Diff^r) for r = 0..R"),
}

DEFAULTS = {
    "check-signs": {"n": 4, "count": 50},
    "check-schur": {"n": 3, "count": 20},
    "check-jacobi": {"r": 4},
    "quotient-compare": {"r": 3},
    "module-compare": {"r": 2},
    "projective-verify": {"n": 2, "r": 2, "kmin": -2, "kmax": 4},
    "endo": {"n": 2, "r": 2},
    "twist-table": {"n": 2, "r": 3, "kmin": -2, "kmax": 5},
    "sections-table": {"n": 1, "r": 3},
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurjacobi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("--n", type=int)
        s.add_argument("--r", type=int)
        s.add_argument("--k", type=int)
        s.add_argument("--kmin", type=int)
        s.add_argument("--kmax", type=int)
        s.add_argument("--instance")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--count", type=int)
        s.add_argument("--json", action="store_true")
        s.add_argument("--max-partition", type=int, default=DEFAULT_BOUND)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, val in DEFAULTS[args.command].items():
        if getattr(args, key) is None:
            setattr(args, key, val)
    if args.k is not None and args.command == "twist-table":
        args.kmin = args.kmax = args.k
    if args.seed < 0 or args.seed >= 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.n is not None and args.n < 1:
        parser.error("--n must be positive")
    if args.r is not None and args.r < 0:
        parser.error("--r must be non-negative")
    if args.count is not None and args.count < 1:
        parser.error("--count must be positive")
    if args.kmin is not None and args.kmax is not None and args.kmin > args.kmax:
        parser.error("--kmin exceeds --kmax")
    run = COMMANDS[args.command][0]
    try:
        reports = run(args)
    except (InputError, ValueError) as exc:
        # library preconditions (r >= 1 and the like) surface as ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports.sort(key=lambda c: (c.id, json.dumps(c.params, sort_keys=True)))
    if args.json:
        doc = {"checks": [c.to_json() for c in reports]}
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for c in reports:
            status = "PASS" if c.ok else "FAIL"
            params = " ".join(f"{k}={v}" for k, v in sorted(c.params.items()))
            print(f"{status}  {c.id:<36} {params:<28} {json.dumps(c.witnesses, sort_keys=True)}  "
                  f"({c.seconds:.2f}s)")
    return 0 if all(c.ok for c in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
