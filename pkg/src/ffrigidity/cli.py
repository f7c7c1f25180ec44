"""Command-line entry point: ``python -m ffrigidity <subcommand> ...``.

Tables come out as CSV and structured results as JSON.  Both carry a
``schema_version``.  Settings come from flags or from one JSON config
file (``--config``); a flag given on the command line wins over the file.

Exit status: 0 success, 1 a computation failed or a check did not pass,
2 invalid configuration.  Errors are written to stderr as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .certificate import SCHEMA_VERSION
from .cfrac import cf_expand, convergents, fibonacci_alpha, norm_exponents
from .construction import (
    C0Geometric,
    C0IndexSet,
    ConstructionState,
    FinitelySupported,
    cell_mass_check,
    construct_wm_measure,
    geometric_sequence,
    indexset_sequence,
    monomial_sequence,
    reverify,
)
from .dualgroup import (
    GroupElt,
    c0_sample_indexset,
    example_sequence_geometric,
    example_sequence_indexset,
    poly_pair,
    random_c0_geometric,
)
from .ffield import Poly, check_prime
from .folner import FiniteSubset, box, box_tile_shifts, invariance_defect, self_tiling_cover, tile_density_check
from .pisot import (
    GOLDEN,
    PLASTIC,
    MonicIntPoly,
    pv_floor_powers,
    pv_norm_exponents,
    pv_root,
    real_pv_table,
    required_precision,
)
from .recurrence import CubeInstance, FiniteModel, cube_lemma_check, delta_recurrence_bruteforce

__all__ = ["main", "build_parser", "ConfigError"]


class ConfigError(ValueError):
    """Invalid or unknown configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# (flag, dest, type, default, help) per subcommand; defaults applied after the config file
_COMMON = [
    ("--output", "output", str, None, "write the result here instead of stdout"),
    ("--seed", "seed", int, 0, "seed for every random choice"),
    ("--threads", "threads", int, 1, "worker count (the computations here run single-threaded)"),
]

_OPTIONS = {
    "cfrac": [
        ("--alpha", "alpha", str, "fibonacci", "'fibonacci' or a rational 'num / den' in t"),
        ("--p", "p", int, 2, "field characteristic"),
        ("--n", "n", int, 8, "last partial quotient index"),
        ("--precision", "precision", int, 64, "series precision for 'fibonacci'"),
    ],
    "pisot": [
        ("--poly", "poly", str, "1; t", "coefficients 'c_0; ...; c_{d-1}' of x^d - sum c_i x^i"),
        ("--p", "p", int, 2, "field characteristic"),
        ("--n", "n", int, 10, "largest power"),
        ("--real", "real", str, None, "'golden' or 'plastic' for the real table instead"),
    ],
    "rigidity": [
        ("--example", "example", str, "monomial", "'monomial' (a_n = t^n), 'geometric' or 'indexset'"),
        ("--p", "p", int, 2, "field characteristic"),
        ("--depth", "depth", int, 3, "construction depth"),
        ("--horizon", "horizon", int, 100, "last sequence index certified"),
        ("--schedule", "schedule", str, "1,1", "agreement depth start,step"),
        ("--modulus", "modulus", int, 3, "index set is n = 0 mod this (for 'indexset')"),
        ("--reverify", "reverify", bool, False, "recompute every row independently"),
        ("--check", "check", str, None, "re-verify a saved certificate file and exit"),
    ],
    "pairing": [
        ("--family", "family", str, "geometric", "'geometric' or 'indexset'"),
        ("--p", "p", int, 2, "field characteristic"),
        ("--n", "n", int, 20, "largest sequence index"),
        ("--samples", "samples", int, 50, "random C_0 samples"),
        ("--modulus", "modulus", int, 3, "index set is n = 0 mod this (for 'indexset')"),
    ],
    "folner": [
        ("--p", "p", int, 2, "field characteristic"),
        ("--N", "N", int, 2, "tile depth"),
        ("--M", "M", int, 5, "window depth"),
    ],
    "recurrence": [
        ("--moduli", "moduli", str, "2,2,2", "comma-separated cyclic orders"),
        ("--R", "R", str, "1,0,0;0,1,0;0,0,1", "elements of R, ';'-separated"),
        ("--delta", "delta", str, "1/2", "density threshold"),
    ],
    "cubes": [
        ("--k", "k", str, "2", "comma-separated root-of-unity orders"),
        ("--d", "d", int, 2, "dimension"),
        ("--delta", "delta", str, "3/4", "density threshold"),
        ("--eps", "eps", float, 0.5, "distance threshold"),
        ("--mode", "mode", str, "exhaustive", "'exhaustive' or 'sampled'"),
        ("--count", "count", int, 100, "samples in sampled mode"),
    ],
}


def build_parser():
    parser = _Parser(prog="ffrigidity", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="JSON file of settings")
    sub = parser.add_subparsers(dest="subcommand")
    for name, opts in _OPTIONS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of settings")
        for flag, dest, typ, _, hlp in _COMMON + opts:
            if typ is bool:
                sp.add_argument(flag, dest=dest, action="store_true", default=argparse.SUPPRESS, help=hlp)
            else:
                sp.add_argument(flag, dest=dest, type=typ, default=argparse.SUPPRESS, help=hlp)
    return parser


def _settings(argv):
    args = vars(build_parser().parse_args(argv))
    config = {}
    path = args.pop("config", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(config, dict):
            raise ConfigError("config must be a JSON object")
    cmd = args.pop("subcommand") or config.pop("subcommand", None)
    config.pop("subcommand", None)
    if cmd not in _OPTIONS:
        raise ConfigError(f"unknown or missing subcommand {cmd!r}")
    opts = _COMMON + _OPTIONS[cmd]
    known = {dest: (typ, default) for _, dest, typ, default, _ in opts}
    unknown = sorted(set(config) - set(known))
    if unknown:
        raise ConfigError(f"unknown config keys for {cmd}: {unknown}")
    merged = {dest: default for dest, (_, default) in known.items()}
    for key, value in config.items():
        typ = known[key][0]
        try:
            merged[key] = value if value is None else typ(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key {key}: {exc}") from exc
    merged.update(args)
    return cmd, merged


def _validate_prime(p):
    try:
        check_prime(p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj):
    return json.dumps(dict(obj, schema_version=SCHEMA_VERSION), sort_keys=True, indent=2) + "\n"


# subcommands return (text, ok)


def _run_cfrac(o):
    p = o["p"]
    _validate_prime(p)
    if o["alpha"] == "fibonacci":
        alpha = fibonacci_alpha(p, max(o["precision"], 2 * o["n"] + 4))
    else:
        try:
            num, den = o["alpha"].split("/")
            alpha = (Poly.parse(f"{num.strip()} mod {p}"), Poly.parse(f"{den.strip()} mod {p}"))
        except ValueError as exc:
            raise ConfigError(f"bad --alpha {o['alpha']!r}: {exc}") from exc
    cf = cf_expand(alpha, o["n"])
    conv = convergents(cf)
    exps = norm_exponents(alpha, conv)
    rows = [(n, _poly(a), _poly(q), q.degree, "zero" if e is None else e)
            for n, (a, (_, q), e) in enumerate(zip(cf.quotients, conv, exps))]
    return _csv(["n", "a_n", "q_n", "deg_q_n", "norm_exponent"], rows), True


def _poly(a):
    return str(a).rsplit(" mod ", 1)[0]


def _run_pisot(o):
    if o["real"]:
        spec = {"golden": GOLDEN, "plastic": PLASTIC}.get(o["real"])
        if spec is None:
            raise ConfigError(f"unknown real PV number {o['real']!r}")
        table = real_pv_table(spec, o["n"])
        rows = [(r.n, r.nearest, f"{r.norm:.15e}", f"{r.norm_times_alpha:.15e}", f"{r.envelope:.15e}")
                for r in table.rows]
        return _csv(["n", "nearest", "norm", "norm_times_alpha", "envelope"], rows), True
    _validate_prime(o["p"])
    try:
        f = MonicIntPoly.parse(o["poly"], o["p"])
    except ValueError as exc:
        raise ConfigError(f"bad --poly {o['poly']!r}: {exc}") from exc
    e = pv_root(f, required_precision(f, o["n"]))
    floors = pv_floor_powers(e, o["n"])
    exps = pv_norm_exponents(e, o["n"])
    rows = [(n, _poly(fl), "zero" if x is None else x) for n, (fl, x) in enumerate(zip(floors, exps), start=1)]
    return _csv(["n", "floor_alpha_n", "norm_exponent"], rows), True


def _rigidity_setup(example, p, horizon, modulus):
    if example == "monomial":
        return FinitelySupported(p, horizon + 1), monomial_sequence(p)
    if example == "geometric":
        return C0Geometric(p, max(horizon, 1)), geometric_sequence(p)
    if example == "indexset":
        if modulus < 1:
            raise ConfigError("--modulus must be positive")
        I = _Multiples(modulus)
        return C0IndexSet(I, p, modulus * horizon + 1), indexset_sequence(I, p, f"multiples of {modulus}")
    raise ConfigError(f"unknown example {example!r}")


class _Multiples:
    def __init__(self, m):
        self.m = m

    def __call__(self, n):
        return n % self.m == 0


def _run_rigidity(o):
    if o["check"]:
        return _check_saved(o["check"])
    p = o["p"]
    _validate_prime(p)
    try:
        schedule = tuple(int(v) for v in o["schedule"].split(","))
        if len(schedule) != 2:
            raise ValueError("need start,step")
    except ValueError as exc:
        raise ConfigError(f"bad --schedule: {exc}") from exc
    if o["depth"] < 0 or o["horizon"] < 1:
        raise ConfigError("depth must be >= 0 and horizon >= 1")
    family, seq = _rigidity_setup(o["example"], p, o["horizon"], o["modulus"])
    sigma, state, cert = construct_wm_measure(family, seq, o["depth"], o["horizon"], schedule)
    masses = cell_mass_check(state, sigma)
    cert.meta.update({"example": o["example"], "p": p, "modulus": o["modulus"],
                      "state": state.to_json(), "cell_mass_pass": masses.passed})
    ok = cert.passed and masses.passed
    if o["reverify"]:
        agrees, mismatches, _ = reverify(state, seq, cert)
        cert.meta["reverified"] = agrees
        cert.meta["reverify_mismatches"] = mismatches[:10]
        ok = ok and agrees
    return cert.to_jsonl(), ok


def _check_saved(path):
    from .certificate import Certificate, Row

    try:
        with open(path, encoding="utf-8") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        header, rows = lines[0], lines[1:]
        state = ConstructionState.from_json(header["state"])
        _, seq = _rigidity_setup(header["example"], header["p"], state.horizon, header.get("modulus", 3))
    except (OSError, KeyError, IndexError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load certificate {path}: {exc}") from exc

    def value(v):
        if isinstance(v, str) and "/" in v:
            return Fraction(v)
        return v

    saved = Certificate([Row(r["ineq"], r["params"], value(r["left"]), value(r["bound"]), r["pass"])
                         for r in rows])
    agrees, mismatches, _ = reverify(state, seq, saved)
    return _json({"certificate": path, "rows": len(saved), "agrees": agrees,
                  "mismatches": mismatches[:10], "pass": agrees and saved.passed}), agrees and saved.passed


def _run_pairing(o):
    p, n_max = o["p"], o["n"]
    _validate_prime(p)
    rng = np.random.default_rng(o["seed"])
    failures, checked = [], 0
    for s in range(o["samples"]):
        if o["family"] == "geometric":
            x = random_c0_geometric(rng, p, n_max + 1)
            seqs = [(n, example_sequence_geometric(n, p)) for n in range(1, n_max + 1)]
        elif o["family"] == "indexset":
            I = _Multiples(o["modulus"])
            members = [i for i in range(o["modulus"] * n_max + 1) if I(i)][:n_max]
            x = c0_sample_indexset(I, max(members) + 1, p, rng=rng)
            seqs = [(n, example_sequence_indexset([i], [1], p, I)) for n, i in enumerate(members, start=1)]
        else:
            raise ConfigError(f"unknown family {o['family']!r}")
        for n, a in seqs:
            checked += 1
            z = poly_pair(x, a)
            if not z.is_one():
                failures.append({"sample": s, "n": n, "value": [z.r, z.m]})
    ok = not failures
    return _json({"family": o["family"], "p": p, "n_max": n_max, "samples": o["samples"],
                  "pairings": checked, "failures": failures[:10], "pass": ok}), ok


def _run_folner(o):
    p, N, M = o["p"], o["N"], o["M"]
    _validate_prime(p)
    if not 0 <= N <= M:
        raise ConfigError("need 0 <= N <= M")
    rows, ok = [], True
    for n in range(N, M + 1):
        shifts = box_tile_shifts(N, n, (p,))
        rep = tile_density_check(N, n, (p,), seed=o["seed"])
        g = GroupElt.basis(N + 1, (p,))
        inside = GroupElt.basis(max(N, 1), (p,)) if N else GroupElt.zero((p,))
        F = box(N, (p,))
        d_out = invariance_defect(FiniteSubset([g]), F)
        d_in = invariance_defect(FiniteSubset([inside], (p,)), F)
        _, leftover = self_tiling_cover(N, n, (p,))
        ok = ok and rep.passed and d_in == 0 and leftover == 0
        rows.append((N, n, len(shifts), str(rep.density), str(rep.expected), rep.max_tile_hits,
                     str(d_in), str(d_out), str(leftover), rep.passed))
    header = ["N", "M", "shifts", "density", "expected", "max_tile_hits",
              "defect_inside", "defect_next_coord", "leftover", "pass"]
    return _csv(header, rows), ok


def _run_recurrence(o):
    try:
        moduli = [int(v) for v in o["moduli"].split(",")]
        R = [tuple(int(v) for v in part.split(",")) for part in o["R"].split(";") if part.strip()]
        model = FiniteModel(moduli, R, Fraction(o["delta"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    v = delta_recurrence_bruteforce(model)
    return _json({"moduli": moduli, "R": [list(r) for r in sorted(model.R)], "delta": str(model.delta),
                  "pass": v.passed, "counterexample": v.counterexample and [list(g) for g in v.counterexample],
                  "explored": v.explored, "label": v.label}), True


def _run_cubes(o):
    try:
        inst = CubeInstance([int(v) for v in o["k"].split(",")], o["d"], Fraction(o["delta"]), o["eps"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if o["mode"] not in ("exhaustive", "sampled"):
        raise ConfigError(f"unknown mode {o['mode']!r}")
    v = cube_lemma_check(inst, o["mode"], count=o["count"], seed=o["seed"])
    return _json({"k": list(inst.k_list), "d": inst.d, "delta": str(inst.delta), "eps": inst.eps,
                  "mode": v.mode, "pass": v.passed, "label": v.label, "checked": v.checked,
                  "worst": round(v.worst, 15), "ties": v.ties, "counterexample": v.counterexample,
                  "lemma_applies": v.lemma_applies, "mcdiarmid_N": v.bound_N}), v.passed


_RUNNERS = {
    "cfrac": _run_cfrac,
    "pisot": _run_pisot,
    "rigidity": _run_rigidity,
    "pairing": _run_pairing,
    "folner": _run_folner,
    "recurrence": _run_recurrence,
    "cubes": _run_cubes,
}


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"schema_version": SCHEMA_VERSION,
                                 "error": {"kind": kind, "message": message}}, sort_keys=True) + "\n")
    return code


def main(argv=None):
    try:
        cmd, opts = _settings(sys.argv[1:] if argv is None else argv)
        if opts["threads"] < 1:
            raise ConfigError("--threads must be at least 1")
        text, ok = _RUNNERS[cmd](opts)
    except ConfigError as exc:
        return _fail("config", str(exc), 2)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    if opts["output"]:
        with open(opts["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
