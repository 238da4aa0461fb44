"""Batch front-end: declarative model files in, machine-readable reports out.

Model files are strict TOML: a [model] section (alphabet, transition rows
as 0/1 strings), an optional [potential] section (range, value per
admissible word, optional decay alpha), and an optional [corruption]
section used by negative-path fixtures to perturb the stochastic matrix
after the measure is built (the sandwich constants keep their clean
values, so a corrupted measure produces visible violations).

Reports are JSON (default) or CSV, written to --out or stdout, and are
byte-identical for identical configs.  Exit codes: 0 all checks pass,
2 invalid input, 3 check violation, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .errors import (
    NoConvergence,
    NotMixing,
    ParseError,
    SftgibbsError,
)
from .gibbs import (
    GibbsMeasureModel,
    build_gibbs_measure,
    cylinder_measure,
    entropy,
    mean_potential,
    power_iteration,
    recheck_gibbs_bounds,
    sample_trajectory,
    verify_gibbs_bounds,
)
from .mixing import birkhoff_average, decay_slope, max_gap_decay, second_eigenvalue_modulus
from .permutations import (
    WindowConfiguration,
    make_swap_involution,
    permutation_from_json,
    permutation_to_json,
)
from .potentials import FiniteRangePotential, finite_range_potential, zero_potential
from .quasi_invariance import (
    cocycle_bound,
    cocycle_limit,
    permutation_cocycle,
    verify_cocycle_identity,
    verify_quasi_invariance,
)
from .sft import Cylinder, SftModel, check_mixing, pair_threshold, separation_threshold, validate_sft

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VIOLATION = 3
EXIT_NOCONVERGENCE = 4

_MODEL_KEYS = {"alphabet", "transition"}
_POTENTIAL_KEYS = {"range", "values", "alpha"}
_CORRUPTION_KEYS = {"transition_epsilon"}


@dataclass
class ModelFile:
    model: SftModel
    potential: Optional[FiniteRangePotential]
    alpha: float
    corruption: Optional[float]


def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"not valid TOML: {exc}")


def _reject_unknown(table: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r} in {where}")


def _parse_word(key: str, model: SftModel, r: int) -> tuple[int, ...]:
    if " " in key:
        names = key.split()
    elif all(len(name) == 1 for name in model.symbol_names):
        names = list(key)
    else:
        raise ParseError(
            f"word {key!r}: multi-character symbol names must be space-separated"
        )
    if len(names) != r:
        raise ParseError(f"word {key!r} has length {len(names)}, expected {r}")
    try:
        return tuple(model.index_of(name) for name in names)
    except SftgibbsError as exc:
        raise ParseError(f"word {key!r}: {exc}")


def _parse_potential_table(section: dict, model: SftModel) -> tuple[FiniteRangePotential, float]:
    _reject_unknown(section, _POTENTIAL_KEYS, "[potential]")
    if "range" not in section or "values" not in section:
        raise ParseError("[potential] needs 'range' and 'values'")
    r = section["range"]
    if not isinstance(r, int) or r < 1:
        raise ParseError("potential range must be a positive integer")
    alpha = section.get("alpha", 0.5)
    if not isinstance(alpha, (int, float)) or not (0 < alpha < 1):
        raise ParseError("potential alpha must lie in (0, 1)")
    values = section["values"]
    if not isinstance(values, dict):
        raise ParseError("potential values must be a table of word = value")
    table = {}
    for key, val in values.items():
        if not isinstance(val, (int, float)):
            raise ParseError(f"potential value for {key!r} must be a number")
        table[_parse_word(key, model, r)] = float(val)
    try:
        phi = finite_range_potential(model, r, table)
    except SftgibbsError as exc:
        raise ParseError(str(exc))
    return phi, float(alpha)


def parse_model_file(path: str) -> ModelFile:
    """Strict parse: unknown keys rejected, value tables must be complete."""
    data = _load_toml(path)
    _reject_unknown(data, {"model", "potential", "corruption"}, "model file")
    if "model" not in data:
        raise ParseError("missing [model] section")
    section = data["model"]
    _reject_unknown(section, _MODEL_KEYS, "[model]")
    if "alphabet" not in section or "transition" not in section:
        raise ParseError("[model] needs 'alphabet' and 'transition'")
    names = section["alphabet"]
    if (
        not isinstance(names, list)
        or not names
        or not all(isinstance(s, str) and s for s in names)
    ):
        raise ParseError("alphabet must be a nonempty list of nonempty strings")
    if len(set(names)) != len(names):
        raise ParseError("alphabet names must be distinct")
    n = len(names)
    rows = section["transition"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"transition must list {n} rows")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, str) or len(row) != n:
            raise ParseError(f"transition row {i} must be a string of {n} flags")
        if any(ch not in "01" for ch in row):
            raise ParseError(f"transition row {i}: entries must be 0/1")
        matrix.append([int(ch) for ch in row])
    try:
        model = validate_sft(n, matrix, tuple(names))
    except SftgibbsError as exc:
        raise ParseError(str(exc))

    potential = None
    alpha = 0.5
    if "potential" in data:
        potential, alpha = _parse_potential_table(data["potential"], model)

    corruption = None
    if "corruption" in data:
        section = data["corruption"]
        _reject_unknown(section, _CORRUPTION_KEYS, "[corruption]")
        eps = section.get("transition_epsilon")
        if not isinstance(eps, (int, float)) or not (0 < eps < 1):
            raise ParseError("corruption transition_epsilon must lie in (0, 1)")
        corruption = float(eps)

    return ModelFile(model=model, potential=potential, alpha=alpha, corruption=corruption)


def parse_potential_file(path: str, model: SftModel) -> tuple[FiniteRangePotential, float]:
    """A standalone file holding just a [potential] section."""
    data = _load_toml(path)
    _reject_unknown(data, {"potential"}, "potential file")
    if "potential" not in data:
        raise ParseError("missing [potential] section")
    return _parse_potential_table(data["potential"], model)


def _corrupt_measure(gm: GibbsMeasureModel, epsilon: float) -> GibbsMeasureModel:
    """Deterministically perturb the stochastic matrix, keeping clean constants.

    Entries are scaled by (1 +/- epsilon) in a parity pattern and rows are
    renormalized; the stationary vector is recomputed so the corrupted
    measure is still a genuine stationary Markov measure, just not the one
    the potential's constants describe.
    """
    P = np.array(gm.stochastic)
    n = P.shape[0]
    for i in range(n):
        for j in range(n):
            if P[i, j] > 0:
                P[i, j] *= 1 + epsilon if (i + j) % 2 == 0 else 1 - epsilon
    P /= P.sum(axis=1, keepdims=True)
    _, pi = power_iteration(P.T)
    return dataclasses.replace(gm, stochastic=P, stationary=pi)


def _load_measure(parsed: ModelFile, phi: FiniteRangePotential, m_max: int) -> GibbsMeasureModel:
    gm = build_gibbs_measure(parsed.model, phi, m_max=m_max)
    if parsed.corruption is not None:
        gm = _corrupt_measure(gm, parsed.corruption)
    return gm


def _resolve_potential(args, parsed: ModelFile) -> tuple[FiniteRangePotential, float]:
    if getattr(args, "potential", None):
        return parse_potential_file(args.potential, parsed.model)
    if parsed.potential is not None:
        return parsed.potential, parsed.alpha
    return zero_potential(parsed.model, 1), 0.5


def _parse_constraints(items, model: SftModel) -> Cylinder:
    constraints = {}
    for item in items or []:
        if "=" not in item:
            raise ParseError(f"constraint {item!r} must look like POS=SYM or POS=SYM+SYM")
        pos_text, _, syms_text = item.partition("=")
        try:
            pos = int(pos_text)
        except ValueError:
            raise ParseError(f"constraint position {pos_text!r} is not an integer")
        names = [s for s in syms_text.split("+") if s]
        if not names:
            raise ParseError(f"constraint {item!r} names no symbols")
        try:
            symbols = {model.index_of(name) for name in names}
        except SftgibbsError as exc:
            raise ParseError(f"constraint {item!r}: {exc}")
        if pos in constraints:
            raise ParseError(f"position {pos} constrained twice")
        constraints[pos] = symbols
    return Cylinder(constraints)


def _parse_permutation(args):
    if getattr(args, "swap_P", None) is not None or getattr(args, "swap_k", None) is not None:
        if args.swap_P is None or args.swap_k is None:
            raise ParseError("--swap-P and --swap-k must be given together")
        return make_swap_involution(args.swap_P, args.swap_k)
    if getattr(args, "perm", None):
        try:
            return permutation_from_json(json.loads(args.perm))
        except (json.JSONDecodeError, TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"bad permutation JSON: {exc}")
    raise ParseError("a permutation is required (--swap-P/--swap-k or --perm)")


def _parse_window(args, model: SftModel) -> WindowConfiguration:
    if not getattr(args, "window", None):
        raise ParseError("--window is required")
    names = args.window.split(",")
    try:
        symbols = tuple(model.index_of(name.strip()) for name in names)
    except SftgibbsError as exc:
        raise ParseError(f"bad window: {exc}")
    return WindowConfiguration(args.offset, symbols)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _word_text(word, model: SftModel) -> str:
    names = [model.name_of(s) for s in word]
    if all(len(nm) == 1 for nm in names):
        return "".join(names)
    return " ".join(names)


# --------------------------------------------------------------------------
# subcommand implementations: each returns (result dict, constants dict|None,
# pass flag, csv rows|None)


def _cmd_check_mixing(args, parsed, phi, alpha):
    report = check_mixing(parsed.model)
    result = {"is_mixing": report.is_mixing, "M": report.exponent}
    return result, None, report.is_mixing, None


def _cmd_constants(args, parsed, phi, alpha):
    k0 = pair_threshold(parsed.model)
    k = args.k if args.k is not None else k0
    p0 = separation_threshold(parsed.model, k)
    result = {"pair_threshold": k0, "k": k, "separation_threshold": p0}
    return result, None, True, None


def _cmd_gibbs_build(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    h = entropy(gm)
    identity_gap = abs(h - (gm.pressure - mean_potential(gm)))
    result = {
        "pressure": gm.pressure,
        "eigenvalue": gm.eigenvalue,
        "pressure_convention": "log of the dominant transfer eigenvalue",
        "stationary": gm.stationary,
        "stochastic": gm.stochastic,
        "entropy": h,
        "entropy_identity_gap": identity_gap,
        "c1": gm.gibbs_constants[0],
        "c2": gm.gibbs_constants[1],
        "m_max": args.m_max,
        "recoded": gm.is_recoded,
        "base_alphabet_size": gm.base.alphabet_size,
        "corrupted": parsed.corruption is not None,
    }
    constants = {"c1": gm.gibbs_constants[0], "c2": gm.gibbs_constants[1]}
    return result, constants, identity_gap <= 1e-9, None


def _cmd_cylinder(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    cyl = _parse_constraints(args.constrain, parsed.model)
    res = cylinder_measure(gm, cyl)
    result = {
        "constraints": {
            str(p): sorted(parsed.model.name_of(s) for s in syms)
            for p, syms in cyl.constraints.items()
        },
        "measure": res.value,
        "exact": res.exact,
    }
    return result, None, True, None


def _cmd_verify_gibbs_bounds(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    bounds = verify_gibbs_bounds(gm, args.m_max)
    recheck = recheck_gibbs_bounds(
        gm, count=args.random_words, max_len=args.max_len, seed=args.seed
    )
    ok = bounds.c1_hat > 0 and recheck.violations == 0
    result = {
        "c1": bounds.c1_hat,
        "c2": bounds.c2_hat,
        "lowest_word": _word_text(bounds.lowest_word, parsed.model),
        "highest_word": _word_text(bounds.highest_word, parsed.model),
        "m_max": bounds.m_max,
        "random_words": recheck.count,
        "random_max_len": recheck.max_len,
        "random_violations": recheck.violations,
        "random_worst_low": recheck.worst_low,
        "random_worst_high": recheck.worst_high,
    }
    constants = {"c1": bounds.c1_hat, "c2": bounds.c2_hat}
    return result, constants, ok, None


def _cmd_cocycle(args, parsed, phi, alpha):
    tau = _parse_permutation(args)
    window = _parse_window(args, parsed.model)
    M = tau.support_radius
    r = phi.range
    n_top = args.N if args.N is not None else M + r + 3
    bound = cocycle_bound(parsed.model, phi, tau, alpha)
    rows = []
    ok = True
    for N in range(max(1, min(M, n_top)), n_top + 1):
        ev = permutation_cocycle(parsed.model, phi, tau, window, N)
        rows.append(
            {
                "N": ev.N,
                "value": ev.value,
                "h_part": ev.h_part,
                "f_part": ev.f_part,
                "stabilized": ev.stabilized,
            }
        )
        if N >= M and abs(ev.value) > bound + 1e-12:
            ok = False
    limit = cocycle_limit(parsed.model, phi, tau, window)
    stabilized_vals = [row["value"] for row in rows if row["stabilized"]]
    if any(abs(v - limit) > 1e-12 for v in stabilized_vals):
        ok = False
    result = {
        "permutation": permutation_to_json(tau),
        "support_radius": M,
        "limit": limit,
        "bound": bound,
        "alpha": alpha,
        "evaluations": rows,
    }
    csv_rows = _csv_text(
        [["N", "value", "h_part", "f_part", "stabilized"]]
        + [
            [row["N"], repr(row["value"]), repr(row["h_part"]), repr(row["f_part"]), int(row["stabilized"])]
            for row in rows
        ]
    )
    return result, {"cocycle_bound": bound}, ok, csv_rows


def _cmd_verify_quasi_invariance(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    sigma = _parse_permutation(args)
    report = verify_quasi_invariance(
        gm, sigma, args.N, alpha=alpha, subset_checks=args.subset_checks, subset_seed=args.seed
    )
    summary = report.summary()
    violations = report.violations
    violating_rows = [
        {
            "word": _word_text(tuple(int(s) for s in report.words[i]), parsed.model),
            "mu": float(report.mu[i]),
            "mu_preimage": float(report.mu_preimage[i]),
            "ratio": float(report.ratio[i]),
        }
        for i in violations[:100]
    ]
    result = dict(summary)
    result["violations"] = len(violations)
    result["permutation"] = permutation_to_json(sigma)
    result["violating_cylinders"] = violating_rows
    result["violating_cylinders_truncated"] = len(violations) > 100
    constants = {
        "c1": report.c1,
        "c2": report.c2,
        "cocycle_bound": report.cocycle_bound,
        "alpha_bound": report.alpha_bound,
        "beta_bound": report.beta_bound,
    }
    return result, constants, report.passed, report.to_csv()


def _cmd_verify_cocycle_identity(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    sigma = _parse_permutation(args)
    report = verify_cocycle_identity(gm, sigma, args.N, slack=args.slack)
    result = dict(report.summary())
    result["permutation"] = permutation_to_json(sigma)
    c1, c2 = gm.gibbs_constants
    constants = {"c1": c1, "c2": c2, "tolerance": report.tolerance}
    return result, constants, report.passed, None


def _cmd_mixing_decay(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    rows = max_gap_decay(gm, range(0, args.n_max + 1))
    rho = rows[0].rho if rows else 0.0
    slope = decay_slope(rows)
    monotone = all(
        rows[i + 1].gap <= rows[i].gap + 1e-12 for i in range(len(rows) - 1)
    )
    bounded = all(
        row.gap <= row.rate_bound + 1e-12 for row in rows if row.n >= 1 and row.gap > 1e-13
    )
    tail_ok = rows[-1].gap < 1e-9 if args.n_max >= 60 else True
    # gate the rate law on gaps well above the float-noise floor; fast-mixing
    # chains reach 1e-13 with values that are pure cancellation noise
    gate_slope = decay_slope(rows, floor=1e-10)
    slope_ok = True
    if rho > 0 and gate_slope is not None:
        slope_ok = gate_slope <= math.log(rho) + 1e-6
    ok = monotone and bounded and tail_ok and slope_ok
    result = {
        "rho": rho,
        "slope": slope,
        "gate_slope": gate_slope,
        "log_rho": math.log(rho) if rho > 0 else None,
        "monotone": monotone,
        "bounded": bounded,
        "tail_below_1e-9": tail_ok,
        "slope_ok": slope_ok,
        "rows": [{"n": r.n, "gap": r.gap, "bound": r.rate_bound} for r in rows],
    }
    csv_rows = _csv_text(
        [["n", "gap", "bound"]] + [[r.n, repr(r.gap), repr(r.rate_bound)] for r in rows]
    )
    return result, {"rho": rho}, ok, csv_rows


def _cmd_sample(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    window = sample_trajectory(gm, args.length, args.seed)
    freq = {}
    for s in window.symbols:
        name = parsed.model.name_of(s)
        freq[name] = freq.get(name, 0) + 1
    stationary = None
    if not gm.is_recoded:
        stationary = {
            parsed.model.name_of(i): float(p) for i, p in enumerate(gm.stationary)
        }
    result = {
        "length": args.length,
        "trajectory": _word_text(window.symbols, parsed.model),
        "frequencies": {name: count / args.length for name, count in sorted(freq.items())},
        "stationary": stationary,
    }
    return result, None, True, None


def _cmd_birkhoff(args, parsed, phi, alpha):
    gm = _load_measure(parsed, phi, args.m_max)
    cyl = _parse_constraints(args.constrain, parsed.model)
    avg = birkhoff_average(gm, cyl, args.Q, args.seed)
    exact = cylinder_measure(gm, cyl).value
    rho = second_eigenvalue_modulus(gm.stochastic, gm.stationary)
    se = math.sqrt(max(exact * (1 - exact), 0.0) / args.Q)
    inflation = math.sqrt((1 + rho) / (1 - rho)) if rho < 1 else float("inf")
    envelope = 5 * se * inflation
    ok = abs(avg - exact) <= envelope if exact > 0 else avg == 0.0
    result = {
        "average": avg,
        "exact": exact,
        "abs_error": abs(avg - exact),
        "envelope": envelope,
        "Q": args.Q,
    }
    return result, None, ok, None


_COMMANDS = {
    "check-mixing": _cmd_check_mixing,
    "constants": _cmd_constants,
    "gibbs-build": _cmd_gibbs_build,
    "cylinder": _cmd_cylinder,
    "verify-gibbs-bounds": _cmd_verify_gibbs_bounds,
    "cocycle": _cmd_cocycle,
    "verify-quasi-invariance": _cmd_verify_quasi_invariance,
    "verify-cocycle-identity": _cmd_verify_cocycle_identity,
    "mixing-decay": _cmd_mixing_decay,
    "sample": _cmd_sample,
    "birkhoff": _cmd_birkhoff,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftgibbs",
        description="Gibbs measures on subshifts of finite type: construction and quasi-invariance checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="model file (TOML)")
        p.add_argument("--potential", help="standalone potential file", default=None)
        p.add_argument("--out", help="write the report here instead of stdout", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--alpha", type=float, default=None, help="decay rate for envelopes")
        p.add_argument("--m-max", dest="m_max", type=int, default=10)
        return p

    add("check-mixing", "decide topological mixing and report the exponent")

    p = add("constants", "pair co-occurrence and swap separation thresholds")
    p.add_argument("--k", type=int, default=None)

    add("gibbs-build", "build the measure; report eigendata and swept constants")

    p = add("cylinder", "measure of a cylinder")
    p.add_argument("--constrain", action="append", metavar="POS=SYMS")

    p = add("verify-gibbs-bounds", "sweep normalized ratios; re-test on random words")
    p.add_argument("--random-words", dest="random_words", type=int, default=1000)
    p.add_argument("--max-len", dest="max_len", type=int, default=20)

    p = add("cocycle", "cocycle partial sums, limit, and uniform bound on a window")
    p.add_argument("--swap-P", dest="swap_P", type=int, default=None)
    p.add_argument("--swap-k", dest="swap_k", type=int, default=None)
    p.add_argument("--perm", default=None, help="permutation JSON")
    p.add_argument("--window", default=None, help="comma-separated symbols")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--N", type=int, default=None)

    for name, help_text in (
        ("verify-quasi-invariance", "sandwich check over all word cylinders on [-N, N]"),
        ("verify-cocycle-identity", "log-ratio vs cocycle limit over all word cylinders"),
    ):
        p = add(name, help_text)
        p.add_argument("--swap-P", dest="swap_P", type=int, default=None)
        p.add_argument("--swap-k", dest="swap_k", type=int, default=None)
        p.add_argument("--perm", default=None, help="permutation JSON")
        p.add_argument("--N", type=int, required=True)
        if name == "verify-quasi-invariance":
            p.add_argument("--subset-checks", dest="subset_checks", type=int, default=32)
        else:
            p.add_argument("--slack", type=float, default=1e-9)

    p = add("mixing-decay", "past/future factorization gaps vs the spectral rate")
    p.add_argument("--n-max", dest="n_max", type=int, default=60)

    p = add("sample", "seeded trajectory sample")
    p.add_argument("--length", type=int, required=True)

    p = add("birkhoff", "occurrence frequency of a pattern along a sample")
    p.add_argument("--constrain", action="append", metavar="POS=SYMS")
    p.add_argument("--Q", type=int, required=True)

    return parser


def _config_echo(args) -> dict:
    # --out names the delivery location, not the computation; leaving it out
    # keeps reports byte-identical wherever they are written
    skip = {"command", "out"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip
    }


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def run_pipeline(args) -> int:
    """Execute one subcommand; always writes a report."""
    report = {
        "schema": 1,
        "tool": {"name": "sftgibbs", "version": __version__},
        "command": args.command,
        "config": _jsonable(_config_echo(args)),
    }
    try:
        parsed = parse_model_file(args.model)
        phi, file_alpha = _resolve_potential(args, parsed)
        alpha = args.alpha if args.alpha is not None else file_alpha
        result, constants, ok, csv_text = _COMMANDS[args.command](args, parsed, phi, alpha)
    except (ParseError, SftgibbsError) as exc:
        if isinstance(exc, NoConvergence):
            code = EXIT_NOCONVERGENCE
        elif isinstance(exc, NotMixing):
            code = EXIT_VIOLATION
        else:
            code = EXIT_INVALID
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["pass"] = False
        _emit(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n", args.out)
        return code

    report["constants"] = _jsonable(constants)
    report["result"] = _jsonable(result)
    report["pass"] = bool(ok)
    if args.format == "csv" and csv_text is not None:
        _emit(csv_text, args.out)
    else:
        _emit(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return run_pipeline(args)


if __name__ == "__main__":
    sys.exit(main())
