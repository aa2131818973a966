"""Command-line front end emitting reproducible scan/optimization datasets.

Every command writes a deterministic CSV or JSON dataset: floats are
serialized with shortest round-trip precision, diverging points carry
boolean flag columns instead of inf/NaN text, metadata holds the package
version and the resolved configuration but no timestamps, and files are
written to a temporary path and atomically renamed.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(unresolved optimum), 4 oracle-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, moments, optimizer, oracle, sensitivity
from .moments import SpinEnsemble

PUBLIC_COMMANDS = "{scan,optimum,exponent,fig1,fig2,fig3,oracle-check}"

ORACLE_TOLERANCE = 1e-10
ORACLE_PARTICLES = tuple(range(1, 13)) + (20,)
ORACLE_THETAS = (0.3, math.pi / 4, math.pi / 2, 2.5)
ORACLE_PHIS = (0.0, 0.05, -0.05, 0.3, -0.3)
ORACLE_GAMMAS = (0.0, 0.5, 5.0)

FIG3_DEFAULT_GAMMAS = (0.0, 1000.0)


class ConfigError(Exception):
    """Invalid or inconsistent run configuration."""


class NumericalFailure(Exception):
    """The requested optimum could not be resolved."""


# ---------------------------------------------------------------------------
# configuration plumbing


def _load_config_file(path):
    """Flat key=value file; '#' starts a comment, blank lines ignored."""
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(args, defaults, converters):
    """Merge flag > config-file > default for every known option."""
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key, default in defaults.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            conv = converters.get(key, str)
            try:
                resolved[key] = conv(file_values[key])
            except ValueError as exc:
                raise ConfigError(f"config key {key}={file_values[key]!r}: {exc}") from exc
        else:
            resolved[key] = default
    unknown = set(file_values) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return resolved


def _ensemble(n):
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"N must be a positive integer, got {n}")
    return SpinEnsemble(n)


def _check_theta(theta):
    if not 0.0 < theta < math.pi:
        raise ConfigError(f"theta must lie strictly inside (0, pi), got {theta}")
    return theta


def _check_gamma(gamma):
    if gamma < 0.0:
        raise ConfigError(f"gamma must be nonnegative, got {gamma}")
    return gamma


# ---------------------------------------------------------------------------
# dataset rendering


def _clean(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    value = float(value)
    return value if math.isfinite(value) else None


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(meta, columns, rows):
    lines = [f"# twistsense {meta['version']}", f"# command={meta['command']}"]
    for key in sorted(meta["params"]):
        lines.append(f"# {key}={_csv_cell(meta['params'][key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_csv_cell(row[col]) for col in columns))
    return "\n".join(lines) + "\n"


def _render_json(meta, columns, rows):
    payload = {
        "meta": {
            "version": meta["version"],
            "command": meta["command"],
            "params": {k: meta["params"][k] for k in sorted(meta["params"])},
        },
        "columns": list(columns),
        "rows": rows,
    }
    # non-finite values must have been mapped to None upstream
    return json.dumps(payload, indent=1, sort_keys=False, allow_nan=False) + "\n"


def _emit(command, params, columns, rows, fmt, out_path):
    rows = [{col: _clean(row[col]) for col in columns} for row in rows]
    # the destination path is delivery detail, not dataset configuration;
    # keeping it out makes identical runs byte-identical wherever they land
    meta = {"version": __version__, "command": command,
            "params": {k: _clean(v) for k, v in params.items() if k != "out"}}
    if fmt == "csv":
        text = _render_csv(meta, columns, rows)
    elif fmt == "json":
        text = _render_json(meta, columns, rows)
    else:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    if out_path:
        directory = os.path.dirname(os.path.abspath(out_path))
        handle = tempfile.NamedTemporaryFile("w", dir=directory, delete=False,
                                             encoding="utf-8")
        try:
            with handle:
                handle.write(text)
            os.replace(handle.name, out_path)
        except BaseException:
            os.unlink(handle.name)
            raise
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# scan family


def _fig_units(ens, phi):
    return phi * math.sqrt(2.0) * ens.J / math.pi


def _axis_values(ens, theta, gamma, phis, axis, mode, slope, eq9):
    if mode == "exact":
        return sensitivity.exact_values(ens.J, theta, gamma, phis, axis,
                                        slope_mode=slope)
    if mode == "short-time":
        fn = sensitivity.short_time_x_values if axis == "x" else sensitivity.short_time_y_values
        return fn(ens.J, theta, gamma, phis)
    if mode == "envelope":
        return sensitivity.envelope_values(ens.J, theta, gamma, phis, axis,
                                           eq9_mode=eq9)
    raise ConfigError(f"mode must be exact, short-time or envelope, got {mode!r}")


def _scan_rows(ens, theta, gamma, phis, axis, mode, slope, eq9):
    none_col = [None] * len(phis)
    false_col = [False] * len(phis)
    dpx, div_x = (none_col, false_col)
    dpy, div_y = (none_col, false_col)
    if axis in ("x", "both"):
        values, divergent = _axis_values(ens, theta, gamma, phis, "x", mode, slope, eq9)
        dpx, div_x = values.tolist(), divergent.tolist()
    if axis in ("y", "both"):
        values, divergent = _axis_values(ens, theta, gamma, phis, "y", mode, slope, eq9)
        dpy, div_y = values.tolist(), divergent.tolist()
    rows = []
    for i, phi in enumerate(phis):
        rows.append({
            "phi": float(phi),
            "phi_fig_units": _fig_units(ens, float(phi)),
            "dpx": dpx[i], "dpy": dpy[i],
            "divergent_x": div_x[i], "divergent_y": div_y[i],
        })
    return rows


SCAN_COLUMNS = ("phi", "phi_fig_units", "dpx", "dpy", "divergent_x", "divergent_y")


def _cmd_scan(args):
    defaults = {"N": 2000, "theta": math.pi / 4, "gamma": 0.0, "phi_min": 0.0,
                "phi_max": None, "points": 1200, "axis": "both", "mode": "exact",
                "slope": "exact", "eq9": "corrected", "format": "csv", "out": None}
    conv = {"N": int, "theta": float, "gamma": float, "phi_min": float,
            "phi_max": float, "points": int}
    cfg = _resolve(args, defaults, conv)
    ens = _ensemble(cfg["N"])
    theta = _check_theta(cfg["theta"])
    gamma = _check_gamma(cfg["gamma"])
    if cfg["phi_max"] is None:
        cfg["phi_max"] = 3.0 * math.pi / (math.sqrt(2.0) * ens.J)
    if cfg["points"] < 2:
        raise ConfigError(f"points must be >= 2, got {cfg['points']}")
    if not cfg["phi_max"] > cfg["phi_min"]:
        raise ConfigError("phi window is empty")
    if cfg["mode"] != "exact" and theta == math.pi / 2:
        raise ConfigError("short-time and envelope modes are undefined at theta = pi/2")
    phis = np.linspace(cfg["phi_min"], cfg["phi_max"], cfg["points"])
    rows = _scan_rows(ens, theta, gamma, phis, cfg["axis"], cfg["mode"],
                      cfg["slope"], cfg["eq9"])
    _emit("scan", cfg, SCAN_COLUMNS, rows, cfg["format"], cfg["out"])
    return 0


OPTIMUM_COLUMNS = ("N", "theta", "gamma", "axis", "phi_min", "delta_phi_min",
                   "branch", "xi", "fringe_index")


def _cmd_optimum(args):
    defaults = {"N": 2000, "theta": math.pi / 4, "gamma": 0.0, "axis": "x",
                "phi_min": None, "phi_max": None, "points": 400,
                "slope": "exact", "format": "csv", "out": None}
    conv = {"N": int, "theta": float, "gamma": float, "phi_min": float,
            "phi_max": float, "points": int}
    cfg = _resolve(args, defaults, conv)
    ens = _ensemble(cfg["N"])
    theta = _check_theta(cfg["theta"])
    gamma = _check_gamma(cfg["gamma"])
    window = None
    if (cfg["phi_min"] is None) != (cfg["phi_max"] is None):
        raise ConfigError("phi-min and phi-max must be given together")
    if cfg["phi_min"] is not None:
        window = (cfg["phi_min"], cfg["phi_max"])
        if not window[1] > window[0]:
            raise ConfigError("phi window is empty")
    report = optimizer.find_optimum(ens, theta, gamma, axis=cfg["axis"],
                                    search_window=window, slope_mode=cfg["slope"],
                                    points_per_fringe=cfg["points"])
    row = {"N": ens.particles, "theta": theta, "gamma": gamma, "axis": cfg["axis"],
           "phi_min": report.phi_min, "delta_phi_min": report.delta_phi_min,
           "branch": report.branch, "xi": report.xi,
           "fringe_index": report.fringe_index}
    _emit("optimum", cfg, OPTIMUM_COLUMNS, [row], cfg["format"], cfg["out"])
    if report.phi_min is None:
        raise NumericalFailure("every scanned point was divergent")
    return 0


EXPONENT_COLUMNS = ("N", "theta", "gamma", "axis", "phi_min", "delta_phi_min",
                    "branch", "xi_measured", "xi_predicted")


def _cmd_exponent(args):
    defaults = {"N": 2000, "theta": math.pi / 4, "gamma": 0.0, "axis": "x",
                "points": 400, "slope": "exact", "format": "csv", "out": None}
    conv = {"N": int, "theta": float, "gamma": float, "points": int}
    cfg = _resolve(args, defaults, conv)
    ens = _ensemble(cfg["N"])
    theta = _check_theta(cfg["theta"])
    gamma = _check_gamma(cfg["gamma"])
    report = optimizer.find_optimum(ens, theta, gamma, axis=cfg["axis"],
                                    slope_mode=cfg["slope"],
                                    points_per_fringe=cfg["points"])
    row = {"N": ens.particles, "theta": theta, "gamma": gamma, "axis": cfg["axis"],
           "phi_min": report.phi_min, "delta_phi_min": report.delta_phi_min,
           "branch": report.branch, "xi_measured": report.xi,
           "xi_predicted": optimizer.predicted_exponent(ens, theta, gamma)}
    _emit("exponent", cfg, EXPONENT_COLUMNS, [row], cfg["format"], cfg["out"])
    if report.phi_min is None:
        raise NumericalFailure("every scanned point was divergent")
    return 0


# ---------------------------------------------------------------------------
# figure replication


FIG1_COLUMNS = ("panel", "axis", "theta", "gamma", "phi", "phi_fig_units",
                "dp_exact", "divergent_exact", "dp_short_time",
                "divergent_short_time", "dp_envelope", "divergent_envelope")


def _cmd_fig1(args):
    defaults = {"N": 2000, "theta": None, "gamma": 0.0, "phi_max": None,
                "points": 1200, "slope": "eq4", "eq9": "corrected",
                "format": "csv", "out": None}
    conv = {"N": int, "theta": float, "gamma": float, "phi_max": float,
            "points": int}
    cfg = _resolve(args, defaults, conv)
    ens = _ensemble(cfg["N"])
    gamma = _check_gamma(cfg["gamma"])
    if cfg["points"] < 2:
        raise ConfigError(f"points must be >= 2, got {cfg['points']}")
    if gamma == 0.0:
        panels = [("a", "x", math.pi / 4), ("b", "y", math.pi / 4)]
    else:
        panels = [("c", "x", math.pi / 6), ("d", "y", math.pi / 4)]
    if cfg["theta"] is not None:
        theta = _check_theta(cfg["theta"])
        if theta == math.pi / 2:
            raise ConfigError("fig1 approximation columns are undefined at theta = pi/2")
        panels = [(panel, axis, theta) for panel, axis, _ in panels]
    phi_max = cfg["phi_max"]
    if phi_max is None:
        phi_max = 3.0 * math.pi / (math.sqrt(2.0) * ens.J)
    phis = np.linspace(0.0, phi_max, cfg["points"])
    rows = []
    for panel, axis, theta in panels:
        exact_v, exact_d = sensitivity.exact_values(ens.J, theta, gamma, phis, axis,
                                                    slope_mode=cfg["slope"])
        fn = sensitivity.short_time_x_values if axis == "x" else sensitivity.short_time_y_values
        short_v, short_d = fn(ens.J, theta, gamma, phis)
        env_v, env_d = sensitivity.envelope_values(ens.J, theta, gamma, phis, axis,
                                                   eq9_mode=cfg["eq9"])
        for i, phi in enumerate(phis):
            rows.append({
                "panel": panel, "axis": axis, "theta": theta, "gamma": gamma,
                "phi": float(phi), "phi_fig_units": _fig_units(ens, float(phi)),
                "dp_exact": float(exact_v[i]), "divergent_exact": bool(exact_d[i]),
                "dp_short_time": float(short_v[i]),
                "divergent_short_time": bool(short_d[i]),
                "dp_envelope": float(env_v[i]), "divergent_envelope": bool(env_d[i]),
            })
    _emit("fig1", cfg, FIG1_COLUMNS, rows, cfg["format"], cfg["out"])
    return 0


FIG2_COLUMNS = ("panel", "N", "theta", "gamma", "axis", "phi_min", "delta_phi_min",
                "branch", "xi", "fringe_index", "fringe_width",
                "ref_phi_089", "ref_phi_02")

FIG2_PANEL_A_PARTICLES = (200, 2000, 20000)
FIG2_PANEL_A_THETAS = (math.pi / 4, math.pi / 3)


def _cmd_fig2(args):
    defaults = {"N": 2000, "theta_points": 40, "points": 400, "slope": "eq4",
                "format": "csv", "out": None}
    conv = {"N": int, "theta_points": int, "points": int}
    cfg = _resolve(args, defaults, conv)
    ens_b = _ensemble(cfg["N"])
    if cfg["theta_points"] < 2:
        raise ConfigError(f"theta-points must be >= 2, got {cfg['theta_points']}")
    rows = []

    def optimum_row(panel, ens, theta):
        report = optimizer.find_optimum(ens, theta, 0.0, axis="x",
                                        slope_mode=cfg["slope"],
                                        points_per_fringe=cfg["points"])
        width = optimizer.fringe_width(ens, theta)
        return {"panel": panel, "N": ens.particles, "theta": theta, "gamma": 0.0,
                "axis": "x", "phi_min": report.phi_min,
                "delta_phi_min": report.delta_phi_min, "branch": report.branch,
                "xi": report.xi, "fringe_index": report.fringe_index,
                "fringe_width": width if math.isfinite(width) else None,
                "ref_phi_089": 0.89 * math.pi / (math.sqrt(2.0) * ens.J),
                "ref_phi_02": 0.2 * math.pi / ens.J}

    for n in FIG2_PANEL_A_PARTICLES:
        for theta in FIG2_PANEL_A_THETAS:
            rows.append(optimum_row("a", SpinEnsemble(n), theta))
    for theta in np.linspace(0.1, math.pi - 0.1, cfg["theta_points"]):
        rows.append(optimum_row("b", ens_b, float(theta)))
    _emit("fig2", cfg, FIG2_COLUMNS, rows, cfg["format"], cfg["out"])
    return 0


FIG3_COLUMNS = ("gamma", "theta", "xi_x_measured", "xi_y_measured",
                "xi_predicted_eq8", "xi_predicted_eq11",
                "phi_min_x", "delta_phi_min_x")


def fig3_theta_grid():
    """Multiples of pi/24 across (0, pi), skipping the equator."""
    return [k * math.pi / 24.0 for k in range(1, 24) if k != 12]


def _cmd_fig3(args):
    defaults = {"N": 200000, "theta": None, "gamma": None, "points": 400,
                "slope": "eq4", "format": "csv", "out": None}
    conv = {"N": int, "theta": float, "gamma": float, "points": int}
    cfg = _resolve(args, defaults, conv)
    ens = _ensemble(cfg["N"])
    gammas = FIG3_DEFAULT_GAMMAS if cfg["gamma"] is None else (_check_gamma(cfg["gamma"]),)
    thetas = fig3_theta_grid() if cfg["theta"] is None else [_check_theta(cfg["theta"])]
    rows = []
    for gamma in gammas:
        for theta in thetas:
            row = {"gamma": gamma, "theta": theta,
                   "xi_x_measured": None, "xi_y_measured": None,
                   "xi_predicted_eq8": optimizer.predicted_exponent(ens, theta, 0.0),
                   "xi_predicted_eq11": None,
                   "phi_min_x": None, "delta_phi_min_x": None}
            if gamma >= optimizer.GAMMA_REGIME_THRESHOLD:
                row["xi_predicted_eq11"] = optimizer.predicted_exponent(ens, theta, gamma)
            for axis in ("x", "y"):
                report = optimizer.find_optimum(ens, theta, gamma, axis=axis,
                                                slope_mode=cfg["slope"],
                                                points_per_fringe=cfg["points"])
                row[f"xi_{axis}_measured"] = report.xi
                if axis == "x":
                    row["phi_min_x"] = report.phi_min
                    row["delta_phi_min_x"] = report.delta_phi_min
            rows.append(row)
    _emit("fig3", cfg, FIG3_COLUMNS, rows, cfg["format"], cfg["out"])
    return 0


# ---------------------------------------------------------------------------
# oracle commands


ORACLE_QUANTITIES = ("J+", "J+2", "Jz", "Jz2", "var_x", "var_y")


def _oracle_errors(inject_fault=None):
    """Max relative error of every closed form against the Dicke traces."""
    worst = dict.fromkeys(ORACLE_QUANTITIES, 0.0)
    gamma_sign = -1.0 if inject_fault == "gamma-sign" else 1.0

    def rel(a, b):
        return abs(a - b) / max(1.0, abs(b))

    for n in ORACLE_PARTICLES:
        ens = SpinEnsemble(n)
        for theta in ORACLE_THETAS:
            rho0 = oracle.css_prepare(ens, theta).density_matrix()
            for phi in ORACLE_PHIS:
                for gamma in ORACLE_GAMMAS:
                    if gamma * phi < 0.0:
                        continue
                    rho = oracle.evolve(rho0, phi, gamma)
                    fit_gamma = gamma_sign * gamma
                    jp = moments.jplus_value(ens.J, theta, phi, fit_gamma)
                    jp2 = moments.jplus_squared_value(ens.J, theta, phi, fit_gamma)
                    jz, jz2 = moments.jz_moments_value(ens.J, theta)
                    try:
                        _, _, var_x, var_y = moments.transverse_values(
                            ens.J, theta, phi, fit_gamma)
                    except moments.DegenerateVarianceError:
                        # a broken moment chain counts as a failed comparison
                        var_x = var_y = math.inf
                    pairs = {
                        "J+": rel(complex(jp), oracle.expect(rho, "J+")),
                        "J+2": rel(complex(jp2), oracle.expect(rho, "J+2")),
                        "Jz": rel(jz, oracle.expect(rho, "Jz").real),
                        "Jz2": rel(jz2, oracle.expect(rho, "Jz2").real),
                    }
                    for axis, closed in (("x", var_x), ("y", var_y)):
                        mean = oracle.expect(rho, "J" + axis).real
                        second = oracle.expect(rho, "J" + axis + "2").real
                        pairs["var_" + axis] = rel(float(closed), second - mean * mean)
                    for name, err in pairs.items():
                        worst[name] = max(worst[name], err)
    return worst


def _cmd_oracle_check(args):
    defaults = {"format": "csv", "out": None, "inject_fault": None}
    cfg = _resolve(args, defaults, {})
    worst = _oracle_errors(inject_fault=cfg["inject_fault"])
    ok = all(err <= ORACLE_TOLERANCE for err in worst.values())
    for name in ORACLE_QUANTITIES:
        status = "ok" if worst[name] <= ORACLE_TOLERANCE else "FAIL"
        print(f"{name:6s} max_rel_err={worst[name]:.3e}  {status}")
    print(f"oracle-check: {'PASS' if ok else 'FAIL'} (tolerance {ORACLE_TOLERANCE})")
    if cfg["out"]:
        rows = [{"quantity": q, "max_rel_err": worst[q],
                 "ok": worst[q] <= ORACLE_TOLERANCE} for q in ORACLE_QUANTITIES]
        _emit("oracle-check", {"format": cfg["format"]},
              ("quantity", "max_rel_err", "ok"), rows, cfg["format"], cfg["out"])
    return 0 if ok else 4


def _cmd_oracle_moments(args):
    """Hidden debugging helper: dump oracle traces next to the closed forms."""
    ens = _ensemble(args.N)
    theta = _check_theta(args.theta)
    gamma = _check_gamma(args.gamma)
    rho = oracle.evolve(oracle.css_prepare(ens, theta).density_matrix(),
                        args.phi, gamma)
    jp = oracle.expect(rho, "J+")
    jp2 = oracle.expect(rho, "J+2")
    payload = {
        "oracle": {"jp_re": jp.real, "jp_im": jp.imag,
                   "jp2_re": jp2.real, "jp2_im": jp2.imag,
                   "jz": oracle.expect(rho, "Jz").real,
                   "jz2": oracle.expect(rho, "Jz2").real},
        "closed_form": {},
    }
    cf_jp = moments.jplus_value(ens.J, theta, args.phi, gamma)
    cf_jp2 = moments.jplus_squared_value(ens.J, theta, args.phi, gamma)
    jz, jz2 = moments.jz_moments_value(ens.J, theta)
    payload["closed_form"] = {"jp_re": float(cf_jp.real), "jp_im": float(cf_jp.imag),
                              "jp2_re": float(cf_jp2.real), "jp2_im": float(cf_jp2.imag),
                              "jz": jz, "jz2": jz2}
    print(json.dumps(payload, indent=1))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser, *names):
    flags = {
        "N": lambda: parser.add_argument("--N", type=int, default=None,
                                         help="particle number (J = N/2)"),
        "theta": lambda: parser.add_argument("--theta", type=float, default=None,
                                             help="preparation polar angle, radians"),
        "gamma": lambda: parser.add_argument("--gamma", type=float, default=None,
                                             help="dephasing rate over twisting rate"),
        "phi": lambda: parser.add_argument("--phi", type=float, default=0.0,
                                           help="accumulated twisting phase"),
        "phi_min": lambda: parser.add_argument("--phi-min", dest="phi_min", type=float,
                                               default=None, help="window start"),
        "phi_max": lambda: parser.add_argument("--phi-max", dest="phi_max", type=float,
                                               default=None, help="window end"),
        "points": lambda: parser.add_argument("--points", type=int, default=None,
                                              help="sample count (per fringe for optima)"),
        "theta_points": lambda: parser.add_argument("--theta-points", dest="theta_points",
                                                    type=int, default=None,
                                                    help="theta grid size"),
        "axis": lambda: parser.add_argument("--axis", choices=("x", "y", "both"),
                                            default=None, help="measured spin component"),
        "axis_xy": lambda: parser.add_argument("--axis", choices=("x", "y"),
                                               default=None, help="measured spin component"),
        "mode": lambda: parser.add_argument("--mode",
                                            choices=("exact", "short-time", "envelope"),
                                            default=None, help="evaluation mode"),
        "slope": lambda: parser.add_argument("--slope", choices=moments.SLOPE_MODES,
                                             default=None,
                                             help="signal-slope convention"),
        "eq9": lambda: parser.add_argument("--eq9", choices=sensitivity.EQ9_MODES,
                                           default=None,
                                           help="x-envelope leading coefficient"),
        "format": lambda: parser.add_argument("--format", choices=("csv", "json"),
                                              default=None, help="output format"),
        "out": lambda: parser.add_argument("--out", default=None,
                                           help="output path (stdout if omitted)"),
        "config": lambda: parser.add_argument("--config", default=None,
                                              help="flat key=value config file"),
    }
    for name in names:
        flags[name]()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twistsense",
        description="Dephased one-axis-twisting sensitivity scans and optima.")
    sub = parser.add_subparsers(dest="command", required=True, metavar=PUBLIC_COMMANDS)

    p = sub.add_parser("scan", help="sensitivity versus phase on a uniform grid")
    _add_common(p, "N", "theta", "gamma", "phi_min", "phi_max", "points", "axis",
                "mode", "slope", "eq9", "format", "out", "config")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("optimum", help="locate the best-sensitivity phase")
    _add_common(p, "N", "theta", "gamma", "phi_min", "phi_max", "points", "axis_xy",
                "slope", "format", "out", "config")
    p.set_defaults(func=_cmd_optimum)

    p = sub.add_parser("exponent", help="measured and predicted scaling exponent")
    _add_common(p, "N", "theta", "gamma", "points", "axis_xy", "slope",
                "format", "out", "config")
    p.set_defaults(func=_cmd_exponent)

    p = sub.add_parser("fig1", help="sensitivity fringe datasets (two panels)")
    _add_common(p, "N", "theta", "gamma", "phi_max", "points", "slope", "eq9",
                "format", "out", "config")
    p.set_defaults(func=_cmd_fig1)

    p = sub.add_parser("fig2", help="best phase versus J and versus theta")
    _add_common(p, "N", "theta_points", "points", "slope", "format", "out", "config")
    p.set_defaults(func=_cmd_fig2)

    p = sub.add_parser("fig3", help="scaling exponents across theta")
    _add_common(p, "N", "theta", "gamma", "points", "slope", "format", "out", "config")
    p.set_defaults(func=_cmd_fig3)

    p = sub.add_parser("oracle-check",
                       help="closed forms versus brute-force Dicke traces")
    _add_common(p, "format", "out", "config")
    p.add_argument("--inject-fault", dest="inject_fault",
                   choices=("gamma-sign",), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_oracle_check)

    # debugging helper, intentionally absent from the metavar listing
    p = sub.add_parser("oracle-moments")
    _add_common(p, "N", "theta", "gamma", "phi")
    p.set_defaults(func=_cmd_oracle_moments)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"twistsense: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"twistsense: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
