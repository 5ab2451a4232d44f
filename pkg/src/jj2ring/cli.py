"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 capacity exceeded,
3 bad arguments or config, 4 numerical-validity failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import coupled, entanglement, export, observables, spectrum, verify
from .basis import MAX_SITES
from .errors import CapacityError, NumericalValidityError
from .hamiltonian import RingCouplings, build_dense, export_matrix

EXIT_OK, EXIT_VERIFY, EXIT_CAPACITY, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3, 4
OUTPUT_DIR_ENV = "JJ2RING_OUTPUT_DIR"


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _sign(text: str) -> int:
    table = {"+": 1, "+1": 1, "1": 1, "pos": 1, "-": -1, "-1": -1, "neg": -1}
    if text not in table:
        raise argparse.ArgumentTypeError(f"J sign must be + or -, got {text!r}")
    return table[text]


def _common(p: argparse.ArgumentParser, fmt_default: str = "csv") -> None:
    p.add_argument("--n", type=int, default=4, help="number of ring sites (even, >= 4)")
    p.add_argument("--out", help="output file (default: stdout, or $%s/<command>.<format>)" % OUTPUT_DIR_ENV)
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--max-sites", type=int, default=MAX_SITES, help="size cap for the dense solver")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")


def _point_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--j", type=float, help="nearest-neighbor coupling J")
    p.add_argument("--j2", type=float, help="next-nearest coupling J2 >= 0")
    p.add_argument("--alpha", type=float, help="J2/J; J takes the sign of alpha")
    p.add_argument("--j-sign", type=_sign, default=None, help="sign of J (needed at alpha = 0)")
    p.add_argument("--j-abs", type=float, default=1.0, help="|J| when --alpha is used")


def build_parser() -> tuple[_Parser, dict]:
    parser = _Parser(prog="jj2ring", description="Exact diagonalization of the J-J2 Heisenberg ring.")
    parser.add_argument("--replot", metavar="JSON", help="re-render a JSON output file as CSV and exit")
    parser.add_argument("--out", dest="replot_out", help="output file for --replot")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    p = sub.add_parser("spectrum", help="full spectrum at one coupling point")
    _common(p)
    _point_args(p)
    p.add_argument("--dump-matrix", metavar="PATH", help="also write the dense Hamiltonian as text")
    subs["spectrum"] = p

    p = sub.add_parser("sweep", help="spectrum along an alpha grid")
    _common(p)
    p.add_argument("--alpha", type=float, nargs=2, metavar=("FROM", "TO"), required=True)
    p.add_argument("--steps", type=int, default=251)
    p.add_argument("--j-sign", type=_sign, default=None)
    p.add_argument("--j-abs", type=float, default=1.0)
    p.add_argument("--levels", type=int, default=None, help="emit E_0..E_k with k = LEVELS-1 (default all)")
    subs["sweep"] = p

    for name, what in (("correlations", "spin-spin correlations S(r)"), ("entropy", "entanglement entropies")):
        p = sub.add_parser(name, help=what)
        _common(p)
        p.add_argument("--alpha", type=float, nargs="+", metavar="A", help="one alpha, or FROM TO with --steps")
        p.add_argument("--steps", type=int, default=2)
        p.add_argument("--j-sign", type=_sign, default=None)
        p.add_argument("--j-abs", type=float, default=1.0)
        p.add_argument("--label", action="append", help="four-site coupled label, e.g. 0,0,1,1 (repeatable)")
        subs[name] = p

    p = sub.add_parser("crossings", help="locate ground-state level crossings")
    _common(p)
    p.add_argument("--j-sign", type=_sign, required=True)
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--j-abs", type=float, default=1.0)
    subs["crossings"] = p

    p = sub.add_parser("verify", help="run the analytic-vs-brute-force suite")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--config")
    subs["verify"] = p

    p = sub.add_parser("table", help="coupled-state table of the four-site ring (JSON)")
    p.add_argument("--out")
    p.add_argument("--config")
    subs["table"] = p
    return parser, subs


# --- config file -----------------------------------------------------------

def read_config(path: str) -> dict[str, str]:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _apply_config(sub: argparse.ArgumentParser, cfg: dict[str, str], path: str) -> None:
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        if key not in actions or key in ("help", "config"):
            raise ParseError(f"{path}: unknown key {key!r}")
        act = actions[key]
        conv = act.type or str
        try:
            if act.nargs in (2, "+"):
                parsed = [conv(v) for v in value.replace(",", " ").split()]
            elif isinstance(act, argparse._AppendAction):
                parsed = [v.strip() for v in value.split(";")]
            else:
                parsed = conv(value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ParseError(f"{path}: bad value for {key!r}: {exc}") from None
        defaults[key] = parsed
    sub.set_defaults(**defaults)
    # config may satisfy options that are required on the command line
    for key in defaults:
        actions[key].required = False


def _prescan(argv: Sequence[str], commands) -> tuple[Optional[str], Optional[str]]:
    command = next((a for a in argv if a in commands), None)
    path = None
    for k, a in enumerate(argv):
        if a == "--config" and k + 1 < len(argv):
            path = argv[k + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    return command, path


def parse(argv: Sequence[str]) -> argparse.Namespace:
    parser, subs = build_parser()
    command, path = _prescan(argv, subs)
    if command and path:
        try:
            cfg = read_config(path)
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}") from None
        _apply_config(subs[command], cfg, path)
    args = parser.parse_args(argv)
    if not args.command and not args.replot:
        raise ParseError("jj2ring: a command is required (try --help)")
    return args


# --- helpers ---------------------------------------------------------------

def couplings_from(args) -> RingCouplings:
    direct = args.j is not None or args.j2 is not None
    if direct and args.alpha is not None:
        raise ParseError("give either --j/--j2 or --alpha, not both")
    if direct:
        if args.j is None or args.j2 is None:
            raise ParseError("--j and --j2 must be given together")
        if args.j2 < 0:
            raise ParseError(f"--j2 must be >= 0 (got {args.j2}); J2 >= 0 keeps the couplings competing")
        if args.j_sign is not None and args.j * args.j_sign < 0:
            raise ParseError("--j-sign contradicts the sign of --j")
        return RingCouplings(args.n, args.j, args.j2)
    if args.alpha is None:
        raise ParseError("a coupling point needs --j/--j2 or --alpha")
    return _from_alpha(args.n, args.alpha, args.j_sign, args.j_abs)


def _from_alpha(n, alpha, j_sign, j_abs) -> RingCouplings:
    if not math.isfinite(alpha):
        raise ParseError("alpha must be finite")
    if j_sign is not None and alpha * j_sign < 0:
        raise ParseError(
            f"alpha={alpha} has the opposite sign to J ({j_sign:+d}); with J2 >= 0, sign(alpha) = sign(J)"
        )
    return RingCouplings.from_alpha(n, alpha, j_sign, j_abs)


def _alpha_grid(args) -> list[float]:
    vals = args.alpha
    if len(vals) == 1:
        return [vals[0]]
    if len(vals) != 2:
        raise ParseError("--alpha takes one value or FROM TO")
    if args.steps < 2 or vals[0] >= vals[1]:
        raise ParseError("alpha range needs FROM < TO and --steps >= 2")
    return [float(a) for a in np.linspace(vals[0], vals[1], args.steps)]


def _check_range(args, lo, hi) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ParseError(f"invalid alpha range [{lo}, {hi}]")
    if args.j_sign is not None:
        for a in (lo, hi):
            if a * args.j_sign < 0:
                raise ParseError(
                    f"alpha={a} has the opposite sign to J ({args.j_sign:+d}); with J2 >= 0, sign(alpha) = sign(J)"
                )


def _closed_form_labels(n: int, energy: float, c: RingCouplings, tol: float) -> str:
    if n != 4:
        return ""
    names = []
    for lab in coupled.all_labels():
        if abs(coupled.energy_closed_form(lab, c.J, c.J2) - energy) <= tol and lab.multiplet not in names:
            names.append(lab.multiplet)
    return "+".join(sorted(names))


def _fmt_label(lab) -> str:
    return str(coupled.CoupledLabel(*lab))


# --- commands --------------------------------------------------------------

def cmd_spectrum(args) -> dict:
    c = couplings_from(args)
    g = spectrum.analyze_point(c, max_sites=args.max_sites)
    tol = spectrum.default_tol(g.matrix_norm)
    energies = np.sort(np.concatenate(list(g.sector_spectra.values())))
    rows = []
    for e, mult in spectrum.degeneracy_groups(energies, tol):
        rows.append([e, mult, _closed_form_labels(c.n_sites, e, c, tol)])
    if args.dump_matrix:
        with open(args.dump_matrix, "w") as fh:
            export_matrix(build_dense(c, max_sites=args.max_sites), fh)
    params = {"n_sites": c.n_sites, "J": c.J, "J2": c.J2}
    return export.document(
        "spectrum", params, ["energy", "multiplicity", "label"], rows,
        ground_energy=g.energy, degeneracy=g.degeneracy, ground_label=g.name,
        sectors={str(k): v for k, v in sorted(g.sector_spectra.items())},
    )


def cmd_sweep(args) -> dict:
    lo, hi = args.alpha
    _check_range(args, lo, hi)
    if args.steps < 2:
        raise ParseError("--steps must be >= 2")
    rows = spectrum.sweep(
        args.n, args.j_sign, lo, hi, args.steps, J_abs=args.j_abs, threads=args.threads, max_sites=args.max_sites
    )
    k = len(rows[0].energies) if args.levels is None else min(args.levels, len(rows[0].energies))
    columns = ["alpha", "J", "J2", "ground_energy", "degeneracy", "label"] + [f"E_{i}" for i in range(k)]
    table = [[r.alpha, r.J, r.J2, r.ground_energy, r.degeneracy, r.label, *r.energies[:k]] for r in rows]
    params = {"n_sites": args.n, "alpha": [lo, hi], "steps": args.steps, "j_sign": args.j_sign, "j_abs": args.j_abs}
    return export.document("sweep", params, columns, table, points=[r.to_dict() for r in rows])


def _label_list(args) -> list:
    if args.label:
        if args.n != 4:
            raise ParseError("--label only applies to the four-site ring")
        try:
            return [coupled.parse_label(t) for t in args.label]
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return coupled.all_labels()


def _ground_states(args, alpha):
    """Per-state vectors of the ground manifold: ``[(state_name, vector)]``."""
    c = _from_alpha(args.n, alpha, args.j_sign, args.j_abs)
    g = spectrum.analyze_point(c, max_sites=args.max_sites)
    if c.n_sites == 4:
        return g, [(str(lab), coupled.coupled_to_product(lab)) for lab in g.labels]
    full = g.full_vectors()
    return g, [(f"M0#{k}", full[:, k]) for k in range(full.shape[1])]


def cmd_correlations(args) -> dict:
    rows, extra = [], []
    if args.alpha is None:
        for lab in _label_list(args):
            v = coupled.coupled_to_product(lab)
            for r in range(3):
                rows.append([str(lab), r, observables.corr_bruteforce(v, r)])
        params = {"n_sites": 4, "labels": [str(l) for l in _label_list(args)]}
    else:
        for alpha in _alpha_grid(args):
            g, states = _ground_states(args, alpha)
            profiles = {name: observables.correlation_profile(v) for name, v in states}
            avg = {r: float(np.mean([p[r] for p in profiles.values()])) for r in next(iter(profiles.values()))}
            for r, val in avg.items():
                rows.append([alpha, r, val])
            extra.append({"alpha": alpha, "ground": g.name, "per_state": profiles, "average": avg})
        params = {"n_sites": args.n, "alpha": args.alpha, "steps": args.steps, "j_sign": args.j_sign}
    return export.document("correlations", params, ["label_or_alpha", "r", "S_of_r"], rows, points=extra)


def cmd_entropy(args) -> dict:
    rows = []
    if args.alpha is None:
        for lab in _label_list(args):
            for name, s in entanglement.entropy_profile(lab).items():
                rows.append([str(lab), str(lab), name, s])
        params = {"n_sites": 4}
    else:
        parts = entanglement.ring_partitions(args.n)
        for alpha in _alpha_grid(args):
            _, states = _ground_states(args, alpha)
            for state_name, v in states:
                for name, keep in parts.items():
                    s = entanglement.von_neumann_entropy(entanglement.reduced_from_state(v, keep))
                    rows.append([alpha, state_name, name, s])
        params = {
            "n_sites": args.n, "alpha": args.alpha, "steps": args.steps, "j_sign": args.j_sign,
            "partitions": {k: list(v) for k, v in parts.items()},
        }
    return export.document("entropy", params, ["label_or_alpha", "state", "partition", "entropy"], rows)


def cmd_crossings(args) -> dict:
    lo, hi = args.range
    _check_range(args, lo, hi)
    if args.tol <= 0:
        raise ParseError("--tol must be positive")
    reports = spectrum.find_crossings(
        args.n, args.j_sign, lo, hi, args.tol, J_abs=args.j_abs, threads=args.threads, max_sites=args.max_sites
    )
    columns = ["alpha_star", "alpha_lo", "alpha_hi", "left", "right", "degeneracy", "ground_energy"]
    rows = [[r.alpha_star, *r.interval, r.left, r.right, r.degeneracy, r.ground_energy] for r in reports]
    params = {"n_sites": args.n, "j_sign": args.j_sign, "range": [lo, hi], "tol": args.tol}
    return export.document("crossings", params, columns, rows)


def cmd_verify(args, out) -> int:
    try:
        RingCouplings(args.n, 1.0, 0.0)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    checks, notes = verify.run_checks(args.n, args.samples, args.seed)
    for chk in checks:
        out.write(chk.line() + "\n")
        if chk.name.startswith("printed"):
            out.writelines(line + "\n" for line in notes)
    failed = [c for c in checks if not c.passed]
    out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    return EXIT_VERIFY if failed else EXIT_OK


def _output_path(args) -> Optional[str]:
    if getattr(args, "out", None):
        return args.out
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base:
        return str(Path(base) / f"{args.command}.{getattr(args, 'format', 'json')}")
    return None


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "correlations": cmd_correlations,
    "entropy": cmd_entropy,
    "crossings": cmd_crossings,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
        if args.replot:
            with open(args.replot) as fh:
                doc = export.load(fh)
            _emit(export.render(doc, "csv"), args.replot_out)
            return EXIT_OK
        if args.command == "verify":
            return cmd_verify(args, sys.stdout)
        if args.command == "table":
            _emit(export.dumps({"command": "table", "states": coupled.coupled_table()}), args.out)
            return EXIT_OK
        doc = COMMANDS[args.command](args)
        _emit(export.render(doc, args.format), _output_path(args))
        return EXIT_OK
    except CapacityError as exc:
        print(f"jj2ring: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NumericalValidityError as exc:
        print(f"jj2ring: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParseError, ValueError, OSError) as exc:
        print(f"jj2ring: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
