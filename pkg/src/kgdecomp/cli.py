"""``kgdecomp`` command-line front end.

stdout carries one JSON document per run (an array in config list mode);
failures print ``{"error": ..., "detail": ...}`` on stderr.

Exit codes: 0 success, 2 invalid arguments or config, 3 solver or IO error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from typing import Optional

import numpy as np

from . import coulombic, hulthen, perturb, verify
from .errors import KGError
from .grid import RadialGrid, default_grid
from .oracle import default_box, kleingordon_fd
from .potentials import HulthenPair, PowerSeriesPair
from .riccati import combine, rescale

COMMANDS = ("hulthen", "coulombic", "perturb", "oracle", "verify")

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4

DEFAULTS = {
    "m": 1.0, "alpha": None,
    "s0": 0.0, "s1": 0.0, "s2": 0.0, "v0": 0.0, "v1": 0.0, "v2": 0.0,
    "n": 0, "order": perturb.MAX_ORDER, "lambda": 1.0,
    "rmin": None, "rmax": None, "h": None, "states": 1,
    "format": "csv", "out": None, "raw": False, "quick": False,
    "derive_linear": False, "check": False,
}

_FLOATS = ("m", "alpha", "s0", "s1", "s2", "v0", "v1", "v2", "lambda", "rmin", "rmax", "h")
_INTS = ("n", "order", "states")
_BOOLS = ("raw", "quick", "derive_linear", "check")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kgdecomp", argument_default=argparse.SUPPRESS,
                description="Klein-Gordon bound states by chi/phi decomposition.")
    p.add_argument("command", choices=COMMANDS)
    for name in _FLOATS:
        p.add_argument(f"--{name}", type=float, dest=name)
    for name in _INTS:
        p.add_argument(f"--{name}", type=int, dest=name)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="write r,chi,phi,psi samples to this path")
    p.add_argument("--raw", action="store_true", help="also emit pre-rescale chi_raw, phi_raw")
    p.add_argument("--quick", action="store_true", help="verify: fewer draws, coarser grids")
    p.add_argument("--derive-linear", action="store_true", dest="derive_linear",
                   help="recompute s1, v1 from the closed-form constraint at each iterate")
    p.add_argument("--check", action="store_true",
                   help="cross-check against the finite-difference Klein-Gordon oracle")
    p.add_argument("--config", help="JSON object, or list of objects, keyed by flag names")
    return p


def _normalize_entry(entry) -> dict:
    if not isinstance(entry, dict):
        raise UsageError("config entries must be JSON objects")
    out = {}
    for key, value in entry.items():
        k = key.lstrip("-").replace("-", "_")
        if k not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        out[k] = value
    return out


def _load_config(path: str) -> tuple[list[dict], bool]:
    """Entries and whether the file held a list (list mode prints a JSON array)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from exc
    entries = data if isinstance(data, list) else [data]
    if not entries:
        raise UsageError("config list is empty")
    return [_normalize_entry(e) for e in entries], isinstance(data, list)


def _coerce(opts: dict) -> dict:
    for k in _FLOATS:
        if opts[k] is None:
            continue
        if isinstance(opts[k], bool) or not isinstance(opts[k], (int, float)):
            raise UsageError(f"{k} must be a number")
        opts[k] = float(opts[k])
        if not math.isfinite(opts[k]):
            raise UsageError(f"{k} must be finite")
    for k in _INTS:
        if isinstance(opts[k], bool) or not isinstance(opts[k], int):
            raise UsageError(f"{k} must be an integer")
    for k in _BOOLS:
        if not isinstance(opts[k], bool):
            raise UsageError(f"{k} must be true or false")
    if opts["format"] not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    if not opts["m"] > 0:
        raise UsageError("m must be positive")
    if opts["n"] < 0 or opts["states"] < 1:
        raise UsageError("n must be >= 0 and states >= 1")
    if not 1 <= opts["order"] <= perturb.MAX_ORDER:
        raise UsageError(f"order must be in 1..{perturb.MAX_ORDER}")
    return opts


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to null."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def _inputs(opts: dict, keys) -> dict:
    return {k: opts[k] for k in keys if opts[k] is not None}


def _user_grid(opts: dict) -> Optional[RadialGrid]:
    if opts["rmin"] is None and opts["rmax"] is None and opts["h"] is None:
        return None
    h = opts["h"] if opts["h"] is not None else 1e-3
    rmin = opts["rmin"] if opts["rmin"] is not None else h
    rmax = opts["rmax"] if opts["rmax"] is not None else 40.0
    try:
        return RadialGrid.from_spacing(rmin, rmax, h)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pair(opts: dict) -> PowerSeriesPair:
    return PowerSeriesPair(*(opts[k] for k in ("s0", "s1", "s2", "v0", "v1", "v2")))


def emit_wavefunction(r, chi_raw, phi_raw, path: str, fmt: str = "csv",
                      raw: bool = False) -> list[str]:
    """Write r, chi, phi, psi (each rescaled to max-abs 1) and return any warnings.

    psi is recomputed from the raw columns, so with ``raw`` a reader can check
    it bit for bit.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        chi = rescale(chi_raw)[0]
        phi = rescale(phi_raw)[0]
        psi = combine(chi_raw, phi_raw)
    cols = {"r": r, "chi": chi, "phi": phi, "psi": psi}
    if raw:
        cols.update(chi_raw=np.asarray(chi_raw, dtype=float), phi_raw=np.asarray(phi_raw, dtype=float))
    names = list(cols)
    with open(path, "w", newline="") as fh:
        if fmt == "csv":
            fh.write(",".join(names) + "\n")
            for row in zip(*cols.values()):
                fh.write(",".join(format(float(v), ".16e") for v in row) + "\n")
        else:
            records = [dict(zip(names, map(float, row))) for row in zip(*cols.values())]
            json.dump(_clean(records), fh, indent=1)
            fh.write("\n")
    return sorted({str(w.message) for w in caught})


def _kg_oracle_block(spec, m, E_est, grid=None, states=1) -> dict:
    if grid is None:
        grid = RadialGrid.origin_anchored(default_box(m, E_est), 1e-3)
    res = kleingordon_fd(spec, m, grid, k=states, E0=E_est)
    out = {"E": [float(e) for e in res.eigenvalues], "iterations": res.iterations,
           "converged": res.converged, "r_max": grid.r_max, "h": grid.h}
    if E_est is not None:
        out["gap"] = abs(float(res.eigenvalues[0]) - E_est)
    return out


def cmd_hulthen(opts: dict) -> dict:
    if opts["alpha"] is None:
        raise UsageError("hulthen needs --alpha")
    try:
        pair = HulthenPair(opts["s0"], opts["v0"], opts["alpha"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    m = opts["m"]
    sol = hulthen.solve_ground(m, pair)
    warns = list(sol.warnings)
    results = {
        "E": sol.E, "eps": sol.eps, "deps": sol.deps, "delta": sol.delta,
        "chi_decay": sol.chi_decay, "phi_decay": sol.phi_decay, "binding": sol.binding,
        "residual_nr": sol.residual_nr, "residual_rel": sol.residual_rel,
        "psi_sign": sol.psi_sign, "roots": sol.roots,
    }
    doc = {"command": "hulthen",
           "inputs": _inputs(opts, ("m", "alpha", "s0", "v0")), "results": results}
    if opts["out"]:
        grid = _user_grid(opts) or default_grid()
        r = grid.nodes
        warns += emit_wavefunction(r, sol.chi(r), sol.phi(r), opts["out"], opts["format"], opts["raw"])
    if opts["check"]:
        if m != 0.5:
            warns.append("oracle solves the Klein-Gordon equation itself; it agrees with the "
                         "closed form only at 2m = 1")
        doc["oracle"] = _kg_oracle_block(pair, m, sol.E)
    results["warnings"] = warns
    return doc


def cmd_coulombic(opts: dict) -> dict:
    m, p = opts["m"], _pair(opts)
    sol = coulombic.solve_selfconsistent(opts["n"], m, p, derive_linear=opts["derive_linear"])
    warns = list(sol.warnings)
    q = sol.pair
    sym = coulombic._symmetry(q)
    if sym is None:
        deps = None
        warns.append("S^2 - V^2 is not zero: run `kgdecomp perturb` for the relativistic correction")
    else:
        deps = 0.0
    results = {
        "E": sol.E, "eps": sol.eps, "deps": deps,
        "a": sol.a, "b": sol.b, "c": sol.c, "s1": q.s1, "v1": q.v1,
        "constraint_residual": sol.constraint_residual, "residual_nr": sol.residual_nr,
        "iterations": sol.iterations, "method": sol.method,
    }
    doc = {"command": "coulombic",
           "inputs": _inputs(opts, ("m", "s0", "s1", "s2", "v0", "v1", "v2", "n", "derive_linear")),
           "results": results}
    if opts["out"]:
        grid = _user_grid(opts) or default_grid()
        r = grid.nodes
        lg = sol.chi_log()(r)
        warns += emit_wavefunction(r, np.exp(lg - lg.max()), np.ones_like(r),
                                   opts["out"], opts["format"], opts["raw"])
    if opts["check"]:
        doc["oracle"] = _kg_oracle_block(q, m, sol.E, RadialGrid.origin_anchored(
            opts["rmax"] or 40.0, opts["h"] or 1e-3))
    results["warnings"] = warns
    return doc


def cmd_perturb(opts: dict) -> dict:
    m, K, lam = opts["m"], opts["order"], opts["lambda"]
    base = coulombic.solve_selfconsistent(0, m, _pair(opts), derive_linear=opts["derive_linear"])
    q = base.pair
    grid = _user_grid(opts) or default_grid()
    ser = perturb.run_series(base.chi_log(), base.W, q, K, m, grid, lam=lam)
    deps = ser.deps()
    total = m * m + base.eps + deps
    results = {
        "E": base.E, "eps": base.eps, "deps": deps,
        "E_corrected": math.sqrt(total) if total > 0 else None,
        "s1": q.s1, "v1": q.v1,
        "lambda": lam, "order": K,
        "orders": [{"k": o.k, "deps": o.deps, "residual": o.residual,
                    "solvability": o.solvability} for o in ser.orders],
        "residual_nr": base.residual_nr,
    }
    warns = list(base.warnings) + list(ser.warnings)
    if total <= 0:
        warns.append("m^2 + eps + deps <= 0: corrected energy is not real")
    doc = {"command": "perturb",
           "inputs": _inputs(opts, ("m", "s0", "s1", "s2", "v0", "v1", "v2", "order", "lambda",
                                    "derive_linear")),
           "results": results}
    if opts["out"]:
        g = ser.grid
        phi, _ = perturb.corrected_wavefunction(ser, m)
        warns += emit_wavefunction(g.nodes, ser.chi, phi, opts["out"], opts["format"], opts["raw"])
    results["warnings"] = warns
    return doc


def cmd_oracle(opts: dict) -> dict:
    m = opts["m"]
    E_est = None
    warns = []
    if opts["alpha"] is not None:
        try:
            spec = HulthenPair(opts["s0"], opts["v0"], opts["alpha"])
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        try:
            E_est = hulthen.solve_ground(m, spec, verify=False).E
        except KGError as exc:
            warns.append(f"no closed-form estimate ({exc.name}); box r_max = 40")
        keys = ("m", "alpha", "s0", "v0", "states", "rmin", "rmax", "h")
    else:
        spec = _pair(opts)
        keys = ("m", "s0", "s1", "s2", "v0", "v1", "v2", "states", "rmin", "rmax", "h")
    h = opts["h"] if opts["h"] is not None else 1e-3
    rmax = opts["rmax"] if opts["rmax"] is not None else default_box(m, E_est)
    try:
        if opts["rmin"] is None:
            grid = RadialGrid.origin_anchored(rmax, h)
        else:
            grid = RadialGrid.from_spacing(opts["rmin"], rmax, h)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = kleingordon_fd(spec, m, grid, k=opts["states"], E0=E_est)
    E = [float(e) for e in res.eigenvalues]
    results = {"E": E[0], "eps": E[0] ** 2 - m * m, "energies": E,
               "iterations": res.iterations, "converged": res.converged,
               "r_max": grid.r_max, "h": grid.h, "warnings": warns}
    return {"command": "oracle", "inputs": _inputs(opts, keys), "results": results}


HANDLERS = {"hulthen": cmd_hulthen, "coulombic": cmd_coulombic,
            "perturb": cmd_perturb, "oracle": cmd_oracle}


def _fail(code: int, error: str, detail: str) -> int:
    sys.stderr.write(json.dumps({"error": error, "detail": detail}) + "\n")
    return code


def run(argv=None) -> int:
    try:
        ns = vars(build_parser().parse_args(argv))
        command = ns.pop("command")
        config = ns.pop("config", None)
        entries, list_mode = _load_config(config) if config else ([{}], False)
        runs = [_coerce({**DEFAULTS, **entry, **ns}) for entry in entries]
    except UsageError as exc:
        return _fail(EXIT_USAGE, "InvalidArguments", str(exc))

    if command == "verify":
        checks = verify.run_all(quick=runs[0]["quick"])
        sys.stdout.write(verify.format_table(checks) + "\n")
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY

    docs = []
    try:
        for opts in runs:
            docs.append(_clean(HANDLERS[command](opts)))
    except KGError as exc:
        return _fail(EXIT_SOLVER, exc.name, str(exc))
    except (UsageError, ValueError) as exc:
        return _fail(EXIT_USAGE, "InvalidArguments", str(exc))
    except OSError as exc:
        return _fail(EXIT_SOLVER, "IOError", str(exc))
    out = docs if list_mode else docs[0]
    sys.stdout.write(json.dumps(out, indent=2, allow_nan=False) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())
