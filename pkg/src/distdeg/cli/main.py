"""Command-line entry point: ``distdeg COMMAND FILE [flags]``."""

from __future__ import annotations

import argparse
import sys

from ..diffext import DifferenceEngine, Options, validate
from ..diffext.report import exact_str
from ..errors import BudgetExhausted, DistDegError, InputError, PropertyFailure, SplitDetected
from ..lattice import scale_report
from ..suite import difference_suite, lattice_suite, parse_blocks
from .instance import DIFFERENCE, LATTICE, lattice_objects, parse_text
from .report import dumps, envelope, error_document

COMMANDS = ("validate", "degrees", "invariants", "tidy", "scale", "suite")
EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class KindMismatch(InputError):
    pass


def build_parser():
    ap = argparse.ArgumentParser(prog="distdeg", description="Exact degree invariants of difference fields and scales of p-adic automorphisms.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="instance file")
    ap.add_argument("--max-depth", type=int, dest="max_depth")
    ap.add_argument("--window", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--lmax", type=int)
    ap.add_argument("--kmax", type=int)
    ap.add_argument("--cap", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--block", help="comma-separated generator names (default: the whole tuple)")
    return ap


def _settings(args, inst):
    o = dict(inst.options)
    for k in ("max_depth", "window", "seed", "lmax", "kmax", "cap", "trials"):
        v = getattr(args, k)
        if v is not None:
            o[k] = v
    opt = Options()
    for k in ("max_depth", "window", "seed", "cap", "trials", "distant_length"):
        if k in o:
            setattr(opt, k, o[k])
    o.setdefault("lmax", 4)
    o.setdefault("kmax", 24)
    return opt, o


def _budgets(opt, o):
    return {
        "max_depth": opt.max_depth,
        "window": opt.window,
        "cap": opt.cap,
        "trials": opt.trials,
        "distant_length": opt.distant_length,
        "lmax": o["lmax"],
        "kmax": o["kmax"],
    }


def _block(args, P):
    if not args.block:
        return None
    blocks = parse_blocks(args.block.replace(";", ","), P.names)
    return tuple(n for b in blocks for n in b)


def _named(out, P):
    if "block" in out:
        out["block"] = [P.names[int(i)] for i in out["block"]]
    return out


def run_difference(command, P, opt, o, block):
    if command == "validate":
        rep, _ = validate(P, opt.seed, opt.trials, opt.cap)
        return rep.to_dict(), rep.passed
    e = DifferenceEngine(P, opt)
    if command == "degrees":
        L = e.limit_degree(block)
        out = L.to_dict()
        try:
            ild, idd, method = e.inverse_limit_degree(block)
            out.update(ild=str(ild), ild_method=method)
        except InputError as exc:
            out.update(ild=None, ild_method=f"unavailable: {exc}")
        return _named(out, P), True
    if command == "invariants":
        prof = e.invariants(block)
        return _named(prof.to_dict(), P), True
    if command == "tidy":
        tidy = e.tidy_generator(block)
        rep, steps = e.verify_tidy(tidy, o["lmax"])
        out = tidy.to_dict()
        out["verification"] = rep.to_dict()
        out["c_step_degrees"] = exact_str(steps)
        return _named(out, P), rep.passed
    if command == "suite":
        blocks = parse_blocks(o.get("blocks", ""), P.names)
        rep = difference_suite(P, opt, o["lmax"], blocks, bool(o.get("power_check", 1)))
        return rep.to_dict(), rep.passed
    raise KindMismatch(f"command {command!r} needs a lattice instance")


def run_lattice(command, prob, opt, o):
    alpha, U, V, W = lattice_objects(prob)
    if command == "validate":
        out = {"prime": str(prob.prime), "dim": prob.dim, "det": str(alpha.det()), "U_rank": U.rank}
        if not U.full_rank:
            from ..errors import RankDeficient

            raise RankDeficient("U must have full rank")
        return out, True
    if command == "scale":
        rep = scale_report(alpha, U, o["kmax"])
        out = rep.to_dict()
        return out, all(rep.checks.values()) and rep.tidy_certified
    if command == "suite":
        rep = lattice_suite(alpha, U, V, W, o["kmax"])
        return rep.to_dict(), rep.passed
    raise KindMismatch(f"command {command!r} needs a difference instance")


def run(command, source: bytes, args):
    """Returns (document, exit code)."""
    inst = parse_text(source.decode("utf-8"))
    opt, o = _settings(args, inst)
    if inst.kind == DIFFERENCE:
        result, passed = run_difference(command, inst.presentation, opt, o, _block(args, inst.presentation))
    elif inst.kind == LATTICE:
        result, passed = run_lattice(command, inst.lattice, opt, o)
    else:  # pragma: no cover
        raise KindMismatch(inst.kind)
    doc = envelope(command, source, opt.seed, _budgets(opt, o), result, passed)
    return doc, EXIT_OK if passed else EXIT_PROPERTY


def main(argv=None):
    args = build_parser().parse_args(argv)
    source = None
    try:
        with open(args.file, "rb") as fh:
            source = fh.read()
        doc, code = run(args.command, source, args)
    except OSError as exc:
        sys.stderr.write(f"distdeg: cannot read {args.file}: {exc.strerror}\n")
        return EXIT_INPUT
    except (InputError, SplitDetected) as exc:
        code = EXIT_INPUT
        doc = error_document(args.command, source, exc, code)
        sys.stderr.write(f"distdeg: {type(exc).__name__}: {exc}\n")
    except BudgetExhausted as exc:
        code = EXIT_BUDGET
        doc = error_document(args.command, source, exc, code)
        sys.stderr.write(f"distdeg: {type(exc).__name__}: {exc}\n")
    except (PropertyFailure, DistDegError) as exc:
        code = EXIT_PROPERTY
        doc = error_document(args.command, source, exc, code)
        sys.stderr.write(f"distdeg: {type(exc).__name__}: {exc}\n")
    sys.stdout.write(dumps(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
