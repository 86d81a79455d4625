"""Command-line front end: temperature/energy sweeps, figure data, self-checks.

All dimensionful inputs are in units of gamma (hbar = k_B = M = 1, gamma = 1).

Exit codes: 0 ok, 1 usage error, 2 verification failure, 3 I/O error.
"""
import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from . import dos, laplace, thermo
from .model import BathSpec, SystemSpec

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("ce", "cz", "both", "dos", "entropy", "asymptotics", "verify")
ASYMPTOTICS = ("CE_high", "CE_low", "CZ_high", "CZ_low")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation after argument parsing."""

    subcommand: str
    wd_over_gamma: float = 10.0
    t_min: float = 1e-2
    t_max: float = 10.0
    e_min: Optional[float] = None
    e_max: float = 5.0
    points: int = 200
    box_ratio: float = 1.0
    format: str = "csv"
    out: Optional[str] = None
    linear: bool = False
    which: str = "CE_low"
    method: str = "auto"

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if not 2 <= self.points <= 100_000:
            raise UsageError("--points must be in [2, 100000]")
        if not (0 < self.t_min < self.t_max) or not math.isfinite(self.t_max):
            raise UsageError("need 0 < --t-min < --t-max")
        if not self.box_ratio > 0:
            raise UsageError("--box-ratio must be > 0")
        if not self.e_max > 0:
            raise UsageError("--e-max must be > 0")
        if self.e_min is not None and not 0 < self.e_min < self.e_max:
            raise UsageError("need 0 < --e-min < --e-max")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if not self.wd_over_gamma > 0:
            raise UsageError("--wd-over-gamma must be > 0 or 'ohmic'")

    @property
    def bath(self):
        return BathSpec.from_ratio(self.wd_over_gamma)

    @property
    def system(self):
        return SystemSpec.free_particle(self.box_ratio)


# --- tables ---------------------------------------------------------------

@dataclass
class Table:
    columns: list
    rows: list
    meta: dict


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return format(float(v), ".12g")


def render(table, fmt):
    """Serialize a table as CSV (``#`` metadata lines) or JSON."""
    if fmt == "json":
        meta = {k: (v if isinstance(v, (str, int)) else float(v))
                for k, v in table.meta.items()}
        rows = [{c: float(_fmt(v)) for c, v in zip(table.columns, r)}
                for r in table.rows]
        return json.dumps({"metadata": meta, "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    for k, v in table.meta.items():
        buf.write(f"# {k}: {v if isinstance(v, str) else _fmt(v)}\n")
    buf.write(",".join(table.columns) + "\n")
    for r in table.rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _meta(cfg, quantity, units):
    meta = {
        "program": f"drudeheat {__version__}",
        "quantity": quantity,
        "units": units,
        "conventions": "hbar = k_B = M = 1; energies and temperatures in units of gamma",
        "wd_over_gamma": "ohmic" if math.isinf(cfg.wd_over_gamma) else cfg.wd_over_gamma,
    }
    return meta


def _temperatures(cfg):
    if cfg.linear:
        return np.linspace(cfg.t_min, cfg.t_max, cfg.points)
    return np.geomspace(cfg.t_min, cfg.t_max, cfg.points)


def _continuum_note(cfg, meta):
    # hard-wall box of length box_ratio * L_D, L_D = (2 omega_d)**-1/2
    if cfg.bath.ohmic:
        return
    spacing = math.pi ** 2 * cfg.bath.omega_d / cfg.box_ratio ** 2
    meta["box_level_spacing_over_gamma"] = spacing
    meta["continuum_valid_for_T_over_gamma_above"] = spacing / 1e-2


def _refuse_ohmic(cfg, what):
    if cfg.bath.ohmic:
        raise UsageError(
            f"{what} is not available for 'ohmic': in the strict ohmic limit the "
            "partition function diverges logarithmically in the cutoff frequency "
            "omega_D; only the energy-route specific heat (ce) has a finite limit")


def table_ce(cfg):
    T = _temperatures(cfg)
    meta = _meta(cfg, "C_E / k_B (energy route, d<H_S>/dT)", "k_B")
    return Table(["T_over_gamma", "value_in_kB"],
                 list(zip(T, thermo.heat_ce(cfg.bath, T))), meta)


def table_cz(cfg):
    _refuse_ohmic(cfg, "C_Z")
    T = _temperatures(cfg)
    meta = _meta(cfg, "C_Z / k_B (partition-function route, dU/dT)", "k_B")
    _continuum_note(cfg, meta)
    return Table(["T_over_gamma", "value_in_kB"],
                 list(zip(T, thermo.heat_cz(cfg.bath, T))), meta)


def table_both(cfg):
    _refuse_ohmic(cfg, "C_Z")
    T = _temperatures(cfg)
    meta = _meta(cfg, "C_E / k_B and C_Z / k_B", "k_B")
    _continuum_note(cfg, meta)
    return Table(["T_over_gamma", "C_E_in_kB", "C_Z_in_kB"],
                 list(zip(T, thermo.heat_ce(cfg.bath, T), thermo.heat_cz(cfg.bath, T))),
                 meta)


def table_entropy(cfg):
    _refuse_ohmic(cfg, "the entropy")
    T = _temperatures(cfg)
    meta = _meta(cfg, "S / k_B = ln Z + U/T", "k_B")
    meta["box_ratio"] = cfg.box_ratio
    meta["note"] = "additive constant depends on the box length box_ratio * L_D"
    _continuum_note(cfg, meta)
    return Table(["T_over_gamma", "S_in_kB"],
                 list(zip(T, thermo.entropy(cfg.bath, T, cfg.system))), meta)


def table_asymptotics(cfg):
    if cfg.which not in ASYMPTOTICS:
        raise UsageError(f"--which must be one of {', '.join(ASYMPTOTICS)}")
    exact = thermo.heat_ce if cfg.which.startswith("CE") else thermo.heat_cz
    if cfg.which.startswith("CZ"):
        _refuse_ohmic(cfg, "C_Z")
    T = _temperatures(cfg)
    meta = _meta(cfg, f"truncated series {cfg.which} and the exact value", "k_B")
    return Table(["T_over_gamma", "value_in_kB", "exact_in_kB"],
                 list(zip(T, thermo.asymptotics(cfg.bath, T, cfg.which),
                          exact(cfg.bath, T))), meta)


def _energy_grid(cfg):
    e_min = cfg.e_min if cfg.e_min is not None else cfg.e_max / cfg.points
    return np.linspace(e_min, cfg.e_max, cfg.points)


def table_dos(cfg):
    _refuse_ohmic(cfg, "the density of states")
    eps = _energy_grid(cfg)
    res = dos.invert_dos(cfg.system, cfg.bath, eps, dos.InversionConfig(method=cfg.method))
    meta = _meta(cfg, "continuous density of states above the ground-state energy U0",
                 "rho in units of L/(hbar omega_D L_D); energy axis (E - U0)/(hbar omega_D)")
    meta["box_ratio"] = cfg.box_ratio
    meta["u0_over_gamma"] = res.u0
    meta["delta_weight"] = res.delta_weight
    meta["delta_position"] = "E = U0 (e_minus_u0_over_wd = 0)"
    meta["method"] = res.method
    meta["points_flagged_by_check"] = int(np.sum(res.unreliable))
    return Table(["e_minus_u0_over_wd", "rho"], list(zip(eps, res.rho_scaled)), meta)


# --- verification suite ----------------------------------------------------

def _check_oracles():
    worst = 0.0
    for r in (0.2, 1.0, 5.0, 100.0):
        bath = BathSpec.from_ratio(r)
        for t in (0.01, 1.0, 100.0):
            b = 1.0 / t
            pairs = [
                (thermo.energy_E(bath, b), thermo.energy_sum_oracle(bath, b)),
                (thermo.heat_ce(bath, t), thermo.heat_ce_sum_oracle(bath, t)),
                (thermo.internal_U(bath, b), thermo.internal_U_sum_oracle(bath, b)),
                (thermo.log_partition(SystemSpec(), bath, b),
                 thermo.log_partition_product_oracle(SystemSpec(), bath, b)),
            ]
            for a, o in pairs:
                worst = max(worst, abs(a - o) / max(abs(o), 1e-300))
    return worst, 1e-6


def _check_entropy():
    bath = BathSpec.from_ratio(5.0)
    T = np.array([0.1, 1.0, 10.0])
    rel = np.abs(thermo.heat_cz_from_entropy(bath, T) / thermo.heat_cz(bath, T) - 1)
    return float(rel.max()), 1e-6


def _check_u_from_lnz():
    bath = BathSpec.from_ratio(5.0)
    beta = np.array([0.1, 1.0, 10.0])
    rel = np.abs(thermo.internal_U_from_log_partition(bath, beta)
                 / thermo.internal_U(bath, beta) - 1)
    return float(rel.max()), 1e-6


def _check_ground_energy():
    worst = 0.0
    for r in (0.2, 4.0, 5.0):
        bath = BathSpec.from_ratio(r)
        u0 = dos.ground_energy(bath)
        worst = max(worst, abs(thermo.internal_U(bath, 1e6) - u0) / (1 + abs(u0)))
    return worst, 1e-8


def _check_analytic_pairs():
    t = np.geomspace(0.1, 10, 7)
    e1 = np.abs(laplace.talbot(lambda s: 1 / s, t) - 1)
    e2 = np.abs(laplace.talbot(lambda s: s ** -0.5, t) * np.sqrt(np.pi * t) - 1)
    return float(max(e1.max(), e2.max())), 1e-6


def _check_method_agreement():
    bath = BathSpec.from_ratio(5.0)
    res = dos.invert_dos(SystemSpec(), bath, np.linspace(0.05, 5, 40))
    big = np.abs(res.rho) > 0.01 * np.abs(res.rho).max()
    return float(np.max(np.abs(res.rho_check / res.rho - 1)[big])), 1e-4


def _check_signed_measure():
    levels = [(1.0, 1.0), (2.5, 2.0), (4.0, 3.0)]
    m = dos.single_oscillator_measure(levels, 1.0)
    beta = 0.7
    want = sum(g * math.exp(-beta * e) for e, g in levels) * 2 * math.sinh(beta / 2)
    return abs(m.laplace(beta) - want) / want, 1e-13


CHECKS = [
    ("closed forms vs Matsubara sum/product oracles", _check_oracles),
    ("C_Z vs T dS/dT", _check_entropy),
    ("U vs -d lnZ / d beta", _check_u_from_lnz),
    ("U(beta -> inf) vs U0", _check_ground_energy),
    ("Laplace inversion of analytic pairs", _check_analytic_pairs),
    ("Talbot vs Stehfest density of states", _check_method_agreement),
    ("signed-measure Laplace transform", _check_signed_measure),
]


def table_verify(cfg):
    rows = []
    for i, (name, fn) in enumerate(CHECKS):
        err, tol = fn()
        rows.append((i + 1, err, tol, err <= tol))
    meta = {"program": f"drudeheat {__version__}", "quantity": "self-consistency checks"}
    for (name, _), r in zip(CHECKS, rows):
        meta[f"check_{r[0]}"] = name
    return Table(["check", "error", "tolerance", "passed"], rows, meta)


TABLES = {
    "ce": table_ce,
    "cz": table_cz,
    "both": table_both,
    "entropy": table_entropy,
    "asymptotics": table_asymptotics,
    "dos": table_dos,
    "verify": table_verify,
}


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def run(cfg):
    """Execute ``cfg`` and return the exit status."""
    try:
        table = TABLES[cfg.subcommand](cfg)
    except (UsageError, ValueError) as exc:
        print(f"drudeheat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _write(render(table, cfg.format), cfg.out)
    except OSError as exc:
        print(f"drudeheat: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if cfg.subcommand == "verify" and not all(r[3] for r in table.rows):
        failed = [CHECKS[r[0] - 1][0] for r in table.rows if not r[3]]
        print("drudeheat: verification failed: " + "; ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# --- figure bundle ---------------------------------------------------------

FIG2_RATIOS = (0.2, 1.0, 5.0, math.inf)
FIG3_RATIOS = (0.2, 1.0, 5.0)
FIG4_RATIOS = (0.2, 1.0, 5.0)


def _label(r):
    return "ohmic" if math.isinf(r) else format(r, "g")


def figure_tables(points=200):
    """The three figure data sets as :class:`Table` objects."""
    T = np.geomspace(1e-3, 10.0, points)
    base = {"program": f"drudeheat {__version__}",
            "conventions": "hbar = k_B = M = 1; temperatures in units of gamma"}
    fig2 = Table(["T_over_gamma"] + [f"CE_wd_{_label(r)}" for r in FIG2_RATIOS],
                 list(zip(T, *[thermo.heat_ce(BathSpec.from_ratio(r), T) for r in FIG2_RATIOS])),
                 dict(base, quantity="C_E / k_B", units="k_B"))
    T3 = np.geomspace(1e-3, 2.0, points)
    fig3 = Table(["T_over_gamma"] + [f"CZ_wd_{_label(r)}" for r in FIG3_RATIOS],
                 list(zip(T3, *[thermo.heat_cz(BathSpec.from_ratio(r), T3) for r in FIG3_RATIOS])),
                 dict(base, quantity="C_Z / k_B", units="k_B"))
    eps = np.linspace(5.0 / points, 5.0, points)
    cols, meta = [], dict(base, quantity="continuous density of states",
                          units="rho in units of L/(hbar omega_D L_D); energy (E - U0)/(hbar omega_D)")
    for r in FIG4_RATIOS:
        res = dos.invert_dos(SystemSpec(), BathSpec.from_ratio(r), eps)
        cols.append(res.rho_scaled)
        meta[f"delta_weight_wd_{_label(r)}"] = res.delta_weight
    cols.append(eps ** -0.5)
    fig4 = Table(["e_minus_u0_over_wd"] + [f"rho_wd_{_label(r)}" for r in FIG4_RATIOS]
                 + ["rho_undamped"], list(zip(eps, *cols)), meta)
    return {"fig2": fig2, "fig3": fig3, "fig4": fig4}


def _svg(name, table, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array(table.rows, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for j, col in enumerate(table.columns[1:], start=1):
        ax.plot(data[:, 0], data[:, j], label=col)
    if name != "fig4":
        ax.set_xscale("log")
    else:
        ax.set_ylim(-10, 10)
    ax.axhline(0.0, color="0.6", lw=0.5)
    ax.set_xlabel(table.columns[0])
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def emit_figure_bundle(outdir, svg=False, points=200):
    """Write fig2.csv, fig3.csv, fig4.csv (and SVG plots) into ``outdir``."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    for name, table in figure_tables(points).items():
        path = os.path.join(outdir, f"{name}.csv")
        with open(path, "w", newline="\n") as fh:
            fh.write(render(table, "csv"))
        written.append(path)
        if svg:
            spath = os.path.join(outdir, f"{name}.svg")
            _svg(name, table, spath)
            written.append(spath)
    return written


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ratio(text):
    if text.lower() in ("ohmic", "inf"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'ohmic', got {text!r}")


def build_parser():
    p = _Parser(prog="drudeheat", description=(
        "Specific heats, entropy and density of states of a free quantum particle "
        "coupled to a Drude bath (hbar = k_B = M = 1, gamma = 1)."))
    p.add_argument("--version", action="version", version=f"drudeheat {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, temps=True):
        sp.add_argument("--wd-over-gamma", type=_ratio, default=10.0,
                        help="Drude cutoff omega_D/gamma, or 'ohmic' (default 10)")
        sp.add_argument("--points", type=int, default=200)
        sp.add_argument("--box-ratio", type=float, default=1.0,
                        help="box length in units of L_D = (2 omega_D)**-1/2")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        if temps:
            sp.add_argument("--t-min", type=float, default=1e-2)
            sp.add_argument("--t-max", type=float, default=10.0)
            sp.add_argument("--linear", action="store_true",
                            help="linear instead of logarithmic temperature grid")

    for name, text in [("ce", "energy-route specific heat C_E"),
                       ("cz", "partition-function-route specific heat C_Z"),
                       ("both", "C_E and C_Z side by side"),
                       ("entropy", "entropy S = ln Z + U/T")]:
        common(sub.add_parser(name, help=text))
    sp = sub.add_parser("asymptotics", help="truncated high/low temperature series")
    common(sp)
    sp.add_argument("--which", choices=ASYMPTOTICS, default="CE_low")
    sp = sub.add_parser("dos", help="density of states by inverse Laplace transform")
    common(sp, temps=False)
    sp.add_argument("--e-max", type=float, default=5.0, help="largest (E - U0)/omega_D")
    sp.add_argument("--e-min", type=float, default=None)
    sp.add_argument("--method", choices=("auto", "talbot", "hyperbolic", "stehfest"),
                    default="auto")
    sp = sub.add_parser("verify", help="run the cross-oracle consistency checks")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None)
    sp = sub.add_parser("figures", help="write fig2/fig3/fig4 CSV data")
    sp.add_argument("--outdir", default="figures")
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--svg", action="store_true", help="also render SVG plots (matplotlib)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.subcommand == "figures":
        if not 2 <= args.points <= 100_000:
            print("drudeheat: error: --points must be in [2, 100000]", file=sys.stderr)
            return EXIT_USAGE
        try:
            for path in emit_figure_bundle(args.outdir, args.svg, args.points):
                print(path)
        except OSError as exc:
            print(f"drudeheat: cannot write figures: {exc}", file=sys.stderr)
            return EXIT_IO
        except ImportError:
            print("drudeheat: --svg needs matplotlib", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK
    kw = {k: v for k, v in vars(args).items() if v is not None}
    try:
        cfg = RunConfig(**kw)
    except UsageError as exc:
        print(f"drudeheat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
