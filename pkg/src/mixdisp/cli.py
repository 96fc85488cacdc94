"""Command-line front end.

Every subcommand writes ``<name>.csv`` (header row, ``%.12e``) and
``<name>_summary.txt`` (key=value lines) into ``--out`` and echoes the summary.
A JSON object passed with ``--config`` overrides the flags.  Exit status is 0
on success, 2 for validation problems and 3 for numerical failure signals.
"""

import functools
import json
import os
import sys

import click
import numpy as np

from .errors import SignalError

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


class ConfigError(Exception):
    pass


# output helpers -------------------------------------------------------------

def write_csv(path, header, rows):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("%.12e" % x for x in row) + "\n")


def format_summary(items):
    lines = []
    for key, value in items.items():
        if isinstance(value, (bool, np.bool_)):
            value = str(bool(value)).lower()
        elif isinstance(value, (float, np.floating)):
            value = "%.12e" % value
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def emit(ctx_name, out_dir, header, rows, summary):
    os.makedirs(out_dir, exist_ok=True)
    stem = ctx_name.replace("-", "_")
    write_csv(os.path.join(out_dir, f"{stem}.csv"), header, rows)
    text = format_summary(summary)
    with open(os.path.join(out_dir, f"{stem}_summary.txt"), "w") as fh:
        fh.write(text)
    click.echo(text, nl=False)


def floats(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def make_profile(kind, dim, coefficients=""):
    from .manifold import ManifoldProfile

    if kind == "polynomial":
        return ManifoldProfile(dim, "polynomial", coefficients=floats(coefficients))
    return ManifoldProfile(dim, kind)


# config handling ---------------------------------------------------------------

def with_config(func):
    """Let ``--config file.json`` replace any of the command's options."""

    @click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                  help="JSON object whose keys override the flags.")
    @functools.wraps(func)
    def wrapper(config_path, **kwargs):
        if config_path is not None:
            kwargs.update(load_config(config_path, _option_names(kwargs)))
        return func(**kwargs)

    return wrapper


def _option_names(kwargs):
    """Map every spelling of an option (flag name or parameter name) to its parameter."""
    names = {k: k for k in kwargs}
    ctx = click.get_current_context(silent=True)
    if ctx is not None:
        for param in ctx.command.params:
            for opt in getattr(param, "opts", []):
                names[opt.lstrip("-").replace("-", "_")] = param.name
    return names


def load_config(path, known):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not text.strip():
        raise ConfigError("schema error: config is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"schema error: {exc}") from exc
    if not isinstance(data, dict) or not data:
        raise ConfigError("schema error: config must be a non-empty JSON object")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in known or known[name] == "config_path":
            raise ConfigError(f"schema error: unknown key {key!r}")
        out[known[name]] = value
    return out


# commands ---------------------------------------------------------------------

@click.group(context_settings={"help_option_names": ["--help"]})
def cli():
    """Numerical checks for fourth-order dispersive flows on hyperbolic and warped spaces."""


def out_option(f):
    return click.option("--out", default=".", show_default=True, help="Output directory.")(f)


@cli.command("transform-check")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--widths", default="0.5,1,2", show_default=True)
@click.option("--r-max", type=float, default=9.0, show_default=True)
@click.option("--n-r", type=int, default=384, show_default=True)
@click.option("--lam-max", type=float, default=24.0, show_default=True)
@click.option("--n-lam", type=int, default=384, show_default=True)
@out_option
@with_config
def transform_check(dim, widths, r_max, n_r, lam_max, n_lam, out):
    """Plancherel and round-trip errors of the radial transform for Gaussians."""
    from .htransform import HelgasonTransform

    tr = HelgasonTransform.build(dim, r_max, n_r, lam_max, n_lam)
    rows = []
    for w in floats(widths):
        f = tr.field(np.exp(-tr.radial.r ** 2 / w ** 2))
        F = tr.forward(f)
        back = tr.inverse(F)
        a, b = f.norm_sq(), F.norm_sq()
        rt = np.sqrt(tr.radial.integrate(np.abs(back.values - f.values) ** 2) / a)
        rows.append((w, a, b, abs(a - b) / a, rt))
    rows = np.array(rows)
    emit("transform-check", out, ("width", "norm_space", "norm_spectral", "plancherel_error", "roundtrip_error"),
         rows, {"N": dim, "max_plancherel_error": float(rows[:, 3].max()),
                "max_roundtrip_error": float(rows[:, 4].max()), "warnings": len(tr.warnings)})


@cli.command("kernel")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--times", default="0.5,1,2,5,10", show_default=True)
@click.option("--radii", default="0,0.5,1,2,4", show_default=True)
@out_option
@with_config
def kernel_cmd(dim, beta, eps, times, radii, out):
    """Regularized kernel values and the dispersive bound constant."""
    from .kernel_lab import bound_constant

    ts, rs = floats(times), floats(radii)
    C, rows = bound_constant(ts, [r for r in rs if r > 0] or rs, beta, eps, dim)
    emit("kernel", out, ("t", "r", "re", "im", "abs", "ratio_to_envelope"), rows,
         {"N": dim, "beta": beta, "eps": eps, "bound_constant": C})


@cli.command("kernel-fit")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--regime", type=click.Choice(["small", "large"]), default="large", show_default=True)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--n-times", type=int, default=8, show_default=True)
@click.option("--radius", type=float, default=0.0, show_default=True)
@out_option
@with_config
def kernel_fit(dim, beta, regime, eps, n_times, radius, out):
    """Fitted decay exponent of |I_eps(t, r)| in a time window."""
    from .kernel_lab import decay_fit, sample_decay

    window = (1e-2, 1e-1) if regime == "small" else (5.0, 200.0)
    ts = np.geomspace(*window, n_times)
    mags = sample_decay(ts, beta, dim, eps, radius)
    fit = decay_fit(ts, mags, f"{regime}_time", dim, beta)
    emit("kernel-fit", out, ("t", "abs"), np.column_stack([ts, mags]),
         {"N": dim, "beta": beta, "regime": regime, "slope": fit.exponent, "target": fit.target,
          "residual": fit.residual, "flags": ",".join(fit.flags) or "none"})


@cli.command("lorentz")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--q", type=float, default=3.0, show_default=True)
@click.option("--theta", type=float, default=1.0, show_default=True)
@click.option("--t-min", type=float, default=5.0, show_default=True)
@click.option("--t-max", type=float, default=100.0, show_default=True)
@click.option("--n-times", type=int, default=8, show_default=True)
@click.option("--r-max", type=float, default=40.0, show_default=True)
@click.option("--n-r", type=int, default=161, show_default=True)
@out_option
@with_config
def lorentz(dim, beta, q, theta, t_min, t_max, n_times, r_max, n_r, out):
    """Lorentz norms of the kernel profile and their decay slope."""
    from .kernel_lab import kernel_lorentz_series

    ts = np.geomspace(t_min, t_max, n_times)
    norms = kernel_lorentz_series(ts, beta, q, theta, dim=dim, r_max=r_max, n_r=n_r)
    slope = float(np.polyfit(np.log(ts), np.log(norms), 1)[0])
    emit("lorentz", out, ("t", "norm"), np.column_stack([ts, norms]),
         {"N": dim, "beta": beta, "q": q, "theta": theta, "slope": slope})


def _evolution_options(f):
    opts = [
        click.option("--N", "dim", type=int, default=3, show_default=True),
        click.option("--beta", type=float, default=1.0, show_default=True),
        click.option("--sigma", "sigma_nl", type=float, default=1.0, show_default=True),
        click.option("--lam-sign", type=click.IntRange(-1, 1), default=-1, show_default=True),
        click.option("--dt", type=float, default=1e-3, show_default=True),
        click.option("--T", "T", type=float, default=1.0, show_default=True),
        click.option("--width", type=float, default=2.0, show_default=True),
        click.option("--amplitude", type=float, default=1.0, show_default=True),
        click.option("--r-max", type=float, default=30.0, show_default=True),
        click.option("--n", type=int, default=1024, show_default=True),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _gaussian(space, amplitude, width):
    return amplitude * np.exp(-space.r ** 2 / width ** 2) + 0j


LOG_HEADER = ("t", "mass", "energy", "grad_norm", "lap_norm", "virial")


@cli.command("evolve")
@_evolution_options
@click.option("--stride", type=int, default=10, show_default=True)
@out_option
@with_config
def evolve_cmd(dim, beta, sigma_nl, lam_sign, dt, T, width, amplitude, r_max, n, stride, out):
    """Split-step evolution on hyperbolic space with conservation diagnostics."""
    from .nls_evolution import EvolutionConfig, HyperbolicSpace, evolve

    space = HyperbolicSpace(dim, r_max, n)
    traj = evolve(EvolutionConfig(space, beta, lam_sign, sigma_nl, dt, T, _gaussian(space, amplitude, width),
                                  snapshot_stride=stride))
    m, e = np.array(traj.mass), np.array(traj.energy)
    emit("evolve", out, LOG_HEADER, traj.log_rows(),
         {"status": traj.status, "mass_drift": float(np.max(np.abs(m / m[0] - 1))),
          "energy_drift": float(np.max(np.abs(e - e[0])) / max(abs(e[0]), 1e-300))})


@cli.command("strichartz")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--p", type=float, default=4.0, show_default=True)
@click.option("--q", type=float, default=4.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--widths", default="0.5,1,2", show_default=True)
@click.option("--T", "T", type=float, default=1.0, show_default=True)
@click.option("--dt", type=float, default=1e-2, show_default=True)
@click.option("--r-max", type=float, default=30.0, show_default=True)
@click.option("--n", type=int, default=512, show_default=True)
@out_option
@with_config
def strichartz_cmd(dim, p, q, beta, widths, T, dt, r_max, n, out):
    """Strichartz quotients of linear runs over a data family and two horizons."""
    from .nls_evolution import EvolutionConfig, HyperbolicSpace, evolve, strichartz_quotient

    space = HyperbolicSpace(dim, r_max, n)
    rows = []
    for w in floats(widths):
        for horizon in (T, 2 * T):
            cfg = EvolutionConfig(space, beta, 1, 1.0, dt, horizon, _gaussian(space, 1.0, w),
                                  snapshot_stride=1, nonlinearity=0.0)
            rows.append((w, horizon, strichartz_quotient(evolve(cfg), p, q)))
    rows = np.array(rows)
    short, long_ = rows[0::2, 2], rows[1::2, 2]
    emit("strichartz", out, ("width", "T", "quotient"), rows,
         {"N": dim, "p": p, "q": q, "family_spread": float(short.max() / short.min()),
          "horizon_change": float(np.max(np.abs(long_ / short - 1)))})


@cli.command("scatter")
@_evolution_options
@out_option
@with_config
def scatter_cmd(dim, beta, sigma_nl, lam_sign, dt, T, width, amplitude, r_max, n, out):
    """Cauchy increments of the pulled-back nonlinear solution."""
    from .nls_evolution import EvolutionConfig, HyperbolicSpace, evolve, scattering_cauchy

    space = HyperbolicSpace(dim, r_max, n)
    psi0 = _gaussian(space, 1.0, width)
    psi0 *= amplitude / np.sqrt(space.mass(psi0))
    traj = evolve(EvolutionConfig(space, beta, lam_sign, sigma_nl, dt, T, psi0, snapshot_stride=10))
    inc = scattering_cauchy(traj)
    emit("scatter", out, ("t", "increment"), np.column_stack([traj.times[1:], inc]),
         {"data_norm": amplitude, "cauchy_sum": float(inc.sum()),
          "relative_sum": float(inc.sum() / amplitude)})


def _ground_state(dim, sigma_nl, beta, lam, r_max, n):
    from .ground_state import minimize_quotient
    from .nls_evolution import HyperbolicSpace

    space = HyperbolicSpace(dim, r_max, n, shifted=False)
    return space, minimize_quotient(space, sigma_nl, beta, lam)


@cli.command("groundstate")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--sigma", "sigma_nl", type=float, default=1.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--lam", type=float, default=1.0, show_default=True)
@click.option("--r-max", type=float, default=20.0, show_default=True)
@click.option("--n", type=int, default=512, show_default=True)
@out_option
@with_config
def groundstate_cmd(dim, sigma_nl, beta, lam, r_max, n, out):
    """Minimizer of the quotient and its Euler-Lagrange residual."""
    space, res = _ground_state(dim, sigma_nl, beta, lam, r_max, n)
    summary = dict(line.split("=", 1) for line in res.as_text().splitlines())
    emit("groundstate", out, ("r", "Q"), np.column_stack([space.r, res.Q]), summary)


@cli.command("trap")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--sigma", "sigma_nl", type=float, default=1.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--lam", type=float, default=1.0, show_default=True)
@click.option("--scales", default="0.8,1.2", show_default=True)
@click.option("--T", "T", type=float, default=1.0, show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--r-max", type=float, default=20.0, show_default=True)
@click.option("--n", type=int, default=512, show_default=True)
@out_option
@with_config
def trap_cmd(dim, sigma_nl, beta, lam, scales, T, dt, r_max, n, out):
    """Sign of the trapping functional along runs started from scaled ground states."""
    from .nls_evolution import EvolutionConfig, classify_trapping, evolve, trapping_signs

    space, res = _ground_state(dim, sigma_nl, beta, lam, r_max, n)
    rows, summary = [], {}
    for s in floats(scales):
        psi0 = s * res.Q + 0j
        label = classify_trapping(space, psi0, res.Q, beta, lam, sigma_nl)
        traj = evolve(EvolutionConfig(space, beta, 1, sigma_nl, dt, T, psi0, snapshot_stride=10))
        signs = trapping_signs(traj, res.Q, lam, sigma_nl)
        rows += [(s, t, g) for t, g in zip(traj.times, signs)]
        summary[f"class_{s:g}"] = label
        summary[f"constant_sign_{s:g}"] = bool(np.all(signs == signs[0]))
    emit("trap", out, ("scale", "t", "sign"), rows, summary)


@cli.command("rotsym-check")
@click.option("--profile", "kind", type=click.Choice(["euclidean", "hyperbolic", "polynomial"]),
              default="hyperbolic", show_default=True)
@click.option("--coefficients", default="", help="Polynomial warp coefficients of r, r^2, ...")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--r-max", type=float, default=10.0, show_default=True)
@click.option("--n", type=int, default=200, show_default=True)
@click.option("--levels", type=int, default=3, show_default=True)
@out_option
@with_config
def rotsym_check(kind, coefficients, dim, beta, r_max, n, levels, out):
    """Factorization residual of the conjugated operator under grid halving."""
    from .rotsym_operator import factorization_residual

    profile = make_profile(kind, dim, coefficients)
    test_fn = lambda r: np.exp(-(r - 3.0) ** 2)
    rows = []
    for k in range(levels):
        m = n * 2 ** k
        rows.append((m, r_max / m, factorization_residual(profile, beta, test_fn, r_max, m)))
    rows = np.array(rows)
    ratios = rows[:-1, 2] / np.maximum(rows[1:, 2], 1e-300)
    summary = {"profile": kind, "N": dim, "potential_at_40": float(profile.potential(np.array([40.0]))[0])
               if kind != "polynomial" else float("nan"),
               "min_halving_ratio": float(ratios.min()) if ratios.size else float("nan")}
    emit("rotsym-check", out, ("n", "h", "residual"), rows, summary)


@cli.command("resolvent")
@click.option("--profile", "kind", type=click.Choice(["euclidean", "hyperbolic", "polynomial"]),
              default="euclidean", show_default=True)
@click.option("--coefficients", default="")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--r-max", type=float, default=40.0, show_default=True)
@click.option("--n", type=int, default=400, show_default=True)
@click.option("--target", type=click.Choice(["L2toL2", "L2toH2"]), default="L2toL2", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@out_option
@with_config
def resolvent_cmd(kind, coefficients, dim, beta, r_max, n, target, seed, out):
    """Weighted resolvent norms over the spectral-parameter sweep and the split identity."""
    from .rotsym_operator import DEFAULT_SWEEP, DiscreteOperator, resolvent_split_check, weighted_resolvent_norm

    op = DiscreteOperator.build(make_profile(kind, dim, coefficients), r_max, n)
    rng = np.random.default_rng(seed)
    rows = []
    for mu in DEFAULT_SWEEP:
        rhs = rng.standard_normal(op.n)
        rows.append((mu.real, mu.imag, weighted_resolvent_norm(op, beta, mu, target, seed=seed),
                     resolvent_split_check(op, beta, mu, rhs)))
    rows = np.array(rows)
    emit("resolvent", out, ("re_mu", "im_mu", "norm", "split_error"), rows,
         {"profile": kind, "target": target, "max_over_median": float(rows[:, 2].max() / np.median(rows[:, 2])),
          "max_split_error": float(rows[:, 3].max())})


@cli.command("smoothing")
@click.option("--profile", "kind", type=click.Choice(["euclidean", "hyperbolic", "polynomial"]),
              default="euclidean", show_default=True)
@click.option("--coefficients", default="")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--order", type=click.IntRange(1, 2), default=1, show_default=True)
@click.option("--T", "T", type=float, default=5.0, show_default=True)
@click.option("--dt", type=float, default=1e-2, show_default=True)
@click.option("--r-max", type=float, default=60.0, show_default=True)
@click.option("--n", type=int, default=1200, show_default=True)
@click.option("--absorb-start", type=float, default=40.0, show_default=True,
              help="Radius where the damping layer begins; a value >= r-max disables it.")
@click.option("--absorb-strength", type=float, default=10.0, show_default=True)
@out_option
@with_config
def smoothing_cmd(kind, coefficients, dim, beta, order, T, dt, r_max, n, absorb_start, absorb_strength, out):
    """Local smoothing ratio of the free conjugated flow at two horizons."""
    from .rotsym_operator import DiscreteOperator, evolve_with_source, smoothing_ratio

    op = DiscreteOperator.build(make_profile(kind, dim, coefficients), r_max, n)
    phi0 = np.exp(-op.r ** 2)
    rows = []
    for horizon in (T, 2 * T):
        times, states = evolve_with_source(op, beta, phi0, dt, horizon, absorb_start=absorb_start,
                                           absorb_strength=absorb_strength)
        rows.append((horizon, smoothing_ratio(op, times, states, order=order)))
    rows = np.array(rows)
    emit("smoothing", out, ("T", "ratio"), rows,
         {"profile": kind, "order": order, "relative_change": float(abs(rows[1, 1] / rows[0, 1] - 1))})


@cli.command("virial-check")
@click.option("--profile", "kind", type=click.Choice(["euclidean", "hyperbolic", "polynomial"]),
              default="euclidean", show_default=True)
@click.option("--coefficients", default="")
@click.option("--N", "dim", type=int, default=3, show_default=True)
@click.option("--R", "R", type=float, default=5.0, show_default=True)
@click.option("--gamma", default="auto", show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--tau0", type=float, default=1.0, show_default=True)
@click.option("--reading", type=click.Choice(["laplacian_of_derivative", "derivative_of_laplacian"]),
              default="laplacian_of_derivative", show_default=True)
@out_option
@with_config
def virial_check(kind, coefficients, dim, R, gamma, beta, tau0, reading, out):
    """Weight construction report and the coefficient table."""
    from .virial import VirialCoefficients, big_inequality_margins, build_weight
    from .virial import coefficients as coefficient_table

    g = gamma if str(gamma) == "auto" else float(gamma)
    weight = build_weight(make_profile(kind, dim, coefficients), R, g, tau0=tau0, beta=beta)
    coeffs = coefficient_table(weight, None, beta, reading)
    m = big_inequality_margins(coeffs, R, tau0)
    summary = {"profile": kind, "N": dim, "R": R, "gamma": weight.gamma,
               "star_inside": m.star_inner, "star2_inside": m.star2_inner,
               "star": m.star, "star2": m.star2, "threshold": float(m.threshold), "pass": m.passed}
    for rec in weight.report.records:
        summary[f"condition_{rec.name}"] = rec.passed
    emit("virial-check", out, VirialCoefficients.HEADER, coeffs.table(), summary)


@cli.command("blowup")
@click.option("--N", "dim", type=int, default=5, show_default=True)
@click.option("--sigma", "sigma_nl", type=float, default=1.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--lam-sign", type=click.IntRange(-1, 1), default=1, show_default=True)
@click.option("--width", type=float, default=4.0, show_default=True)
@click.option("--energy-factor", type=float, default=1.2, show_default=True,
              help="Amplitude^(2 sigma) in units of its zero-energy value; above 1 means E < 0.")
@click.option("--R", "R", type=float, default=2.5, show_default=True)
@click.option("--gamma", type=float, default=5.0, show_default=True)
@click.option("--dt", type=float, default=1e-4, show_default=True)
@click.option("--T-max", "T_max", type=float, default=10.0, show_default=True)
@click.option("--dt-min", type=float, default=1e-7, show_default=True)
@click.option("--r-max", type=float, default=30.0, show_default=True)
@click.option("--n", type=int, default=6000, show_default=True)
@out_option
@with_config
def blowup_cmd(dim, sigma_nl, beta, lam_sign, width, energy_factor, R, gamma, dt, T_max, dt_min, r_max, n, out):
    """Focusing run on flat space driven toward blow-up, with virial monitoring."""
    from .manifold import ManifoldProfile
    from .nls_evolution import ConjugatedSpace
    from .virial import blowup_drive, build_weight, negative_energy_gaussian

    profile = ManifoldProfile.euclidean(dim)
    space = ConjugatedSpace(profile, r_max, n)
    psi0 = negative_energy_gaussian(space, beta, sigma_nl, width, energy_factor)
    weight = build_weight(profile, R, gamma)
    rep = blowup_drive(space, beta, sigma_nl, psi0, weight, lam_sign, dt, T_max, dt_min=dt_min)
    summary = dict(line.split("=", 1) for line in rep.as_text().splitlines())
    emit("blowup", out, ("t", "mass", "energy", "lap_norm", "virial"), rep.log_rows(), summary)


# entry point ---------------------------------------------------------------------

def main(argv=None):
    args = sys.argv[1:] if argv is None else list(argv)
    if not args:
        click.echo(cli.get_help(click.Context(cli, info_name="mixdisp")), err=True)
        return EXIT_VALIDATION
    try:
        cli.main(args=args, prog_name="mixdisp", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return EXIT_VALIDATION
    except ConfigError as exc:
        click.echo(str(exc), err=True)
        return EXIT_VALIDATION
    except SignalError as exc:
        click.echo(f"signal={exc.signal}\n{exc}", err=True)
        return EXIT_VALIDATION if exc.is_validation else EXIT_NUMERICAL
    except click.Abort:
        return EXIT_VALIDATION
    return EXIT_OK
