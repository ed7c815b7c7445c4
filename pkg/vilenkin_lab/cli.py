"""Command-line entry point for vilenkin-lab."""

import functools
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import click

from vilenkin_lab.common import configure_logging
from vilenkin_lab.config import settings
from vilenkin_lab.core.experiments import (
    lebesgue_point_trace,
    lipschitz_rate_table,
    moricz_siddiqi_ratio,
    riemann_lebesgue_trace,
    vilenkin_lebesgue_trace,
)
from vilenkin_lab.core.function_space import StepFunction, _lp
from vilenkin_lab.core.group import GroupConfig, index_point
from vilenkin_lab.core.kernels import KernelKind, TVariant, approximate_identity_report
from vilenkin_lab.core.means import MeanFamily, evaluate_mean
from vilenkin_lab.core.transform import SpectrumTable, fvt_forward, fvt_inverse
from vilenkin_lab.core.weights import parse_weights, regularity_check
from vilenkin_lab.errors import VilenkinLabError
from vilenkin_lab.services import io_service, lab_service
from vilenkin_lab.services.fixture_service import make_fixture
from vilenkin_lab.utils.parsing import parse_p, parse_radix, parse_range

logger = logging.getLogger(__name__)

ASSERTION_FAILED = 1


def shared_options(func):
    """--radix, --resolution, --out, --format and --seed."""

    @click.option("--radix", default="2", show_default=True, help="Radix entries such as 2,3,4")
    @click.option("--resolution", type=int, default=None, help="N; defaults to the number of radix entries")
    @click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout")
    @click.option(
        "--format", "fmt",
        type=click.Choice([f.value for f in io_service.OutputFormat]),
        default="csv",
        show_default=True,
    )
    @click.option("--seed", type=int, default=None, help="Seed for random fixtures")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except VilenkinLabError as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def _config(radix: str, resolution: Optional[int]) -> GroupConfig:
    return lab_service.resolve_config(parse_radix(radix), resolution)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        io_service.write_text(text, out)
    else:
        click.echo(text, nl=False)


def _emit_records(
    records: List[Dict[str, Any]], cfg: GroupConfig, fmt: str, out: Optional[str], extra: Optional[Dict[str, Any]] = None
) -> None:
    _emit(io_service.format_records(records, cfg, fmt, extra), out)


def _fail(message: str) -> None:
    click.echo(f"assertion failed: {message}", err=True)
    sys.exit(ASSERTION_FAILED)


def _input_function(
    path: Optional[str], cfg: GroupConfig, fixture: str, seed: Optional[int]
) -> Tuple[StepFunction, str]:
    """The function from a file, or the named fixture, with its id for the output header."""
    if path is None:
        return make_fixture(fixture, cfg, seed)
    loaded = io_service.read_function(path)
    if isinstance(loaded, SpectrumTable):
        loaded = fvt_inverse(loaded)
    if loaded.cfg != cfg:
        logger.info("using the configuration stored in %s", path)
    return loaded, f"file:{path}"


@click.group()
@click.option("--log-level", default=None, help="Overrides VILENKIN_LOG_LEVEL")
def main(log_level: Optional[str]):
    """Harmonic analysis experiments on bounded Vilenkin groups."""
    configure_logging(log_level)


@main.command()
@click.option("--kind", type=click.Choice([k.value for k in KernelKind]), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--weights", default=None, help="Weight family such as cesaro:0.5")
@click.option("--variant", type=click.Choice([v.value for v in TVariant]), default=TVariant.REGULAR.value)
@click.option("--closed", is_flag=True, help="Closed form (dirichlet and fejer only)")
@shared_options
def kernel(kind, n, weights, variant, closed, radix, resolution, out, fmt, seed):
    """Dump a kernel as index,re,im."""
    cfg = _config(radix, resolution)
    k = lab_service.make_kernel(KernelKind(kind), n, cfg, weights, TVariant(variant), closed)
    _emit_records(lab_service.kernel_records(k), cfg, fmt, out, {"kernel": kind, "n": n})


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--inverse", is_flag=True, help="Input holds coefficients; write function values")
@click.option("--fixture", default="random", show_default=True)
@shared_options
def transform(input_path, inverse, fixture, radix, resolution, out, fmt, seed):
    """Fast Vilenkin transform of a step function, or its inverse."""
    cfg = _config(radix, resolution)
    if input_path is not None:
        loaded, fixture_id = io_service.read_function(input_path), f"file:{input_path}"
    else:
        loaded, fixture_id = make_fixture(fixture, cfg, seed)
        if inverse:
            loaded = fvt_forward(loaded)
    if inverse:
        if not isinstance(loaded, SpectrumTable):
            loaded = SpectrumTable(loaded.cfg, loaded.values)
        _emit(io_service.dump_function(fvt_inverse(loaded), {"fixture": fixture_id}), out)
    else:
        if isinstance(loaded, SpectrumTable):
            raise click.UsageError("input holds coefficients; pass --inverse")
        _emit(io_service.dump_function(fvt_forward(loaded), {"fixture": fixture_id}), out)


@main.command()
@click.option("--weights", default="fejer", show_default=True)
@click.option("--family", type=click.Choice([f.value for f in MeanFamily]), default=MeanFamily.NORLUND.value)
@click.option("--alpha", type=float, default=None, help="Cesàro order")
@click.option("--n", "n_range", default="1..8", show_default=True)
@click.option("--p", "p", default="2", show_default=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--fixture", default="random", show_default=True)
@shared_options
def mean(weights, family, alpha, n_range, p, input_path, fixture, radix, resolution, out, fmt, seed):
    """‖mean_n f − f‖_p for each n as n,error_p."""
    cfg = _config(radix, resolution)
    f, fixture_id = _input_function(input_path, cfg, fixture, seed)
    q = parse_weights(weights)
    p_value = parse_p(p)
    records = [
        {"n": n, "error_p": _lp(evaluate_mean(family, n, f, q=q, alpha=alpha).values - f.values, p_value)}
        for n in parse_range(n_range)
    ]
    _emit_records(records, f.cfg, fmt, out, {"family": family, "weights": q.label, "p": p, "fixture": fixture_id})


@main.command()
@click.option("--id", "identity", default="all", show_default=True)
@click.option("--weights", default=None)
@shared_options
def identity(identity, weights, radix, resolution, out, fmt, seed):
    """Exhaustive kernel identity sweep as id,params,residual,pass."""
    cfg = _config(radix, resolution)
    reports = lab_service.run_identities(identity, cfg, weights)
    _emit_records(lab_service.identity_records(reports), cfg, fmt, out)
    failed = [r for r in reports if not r.passed]
    if failed:
        _fail(f"{len(failed)} of {len(reports)} checks failed, first {failed[0].identity} {failed[0].params_label()}")


@main.group()
def experiment():
    """Numerical experiments."""


@experiment.command("norm-convergence")
@click.option("--family", type=click.Choice([f.value for f in MeanFamily]), default=MeanFamily.FEJER.value)
@click.option("--weights", default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--p", "p", default="2", show_default=True)
@click.option("--n", "n_range", default="1..8", show_default=True)
@click.option("--fixture", default="random", show_default=True)
@click.option("--expect-decreasing", is_flag=True, help="Exit 1 unless the errors strictly decrease")
@shared_options
def norm_convergence_cmd(family, weights, alpha, p, n_range, fixture, expect_decreasing, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    curve = lab_service.run_norm_convergence(cfg, MeanFamily(family), weights, alpha, p, fixture, seed, n_range)
    _emit_records(curve.records(), cfg, fmt, out, {"family": family, "p": p, "fixture": curve.fixture})
    if expect_decreasing and not curve.is_strictly_decreasing():
        _fail("error curve is not strictly decreasing")


@experiment.command("lebesgue-trace")
@click.option("--x", "x_index", type=int, default=0, show_default=True, help="Coset index of the point")
@click.option("--fixture", default="random", show_default=True)
@shared_options
def lebesgue_trace_cmd(x_index, fixture, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    f, fixture_id = make_fixture(fixture, cfg, seed)
    trace = lebesgue_point_trace(f, index_point(x_index, cfg), cfg.resolution)
    _emit_records(trace.records(), cfg, fmt, out, {"x": x_index, "fixture": fixture_id})
    scale = max(1.0, float(abs(f.values).max()))
    worst = max(abs(a - b) for a, b in zip(trace.lebesgue, trace.partial_sums))
    if worst > 1e-12 * scale:
        _fail(f"S_(M_n) f(x) differs from the interval average by {worst:.3g}")
    if abs(trace.lebesgue[-1] - trace.target) > 1e-12 * scale:
        _fail("trace does not terminate at f(x)")


@experiment.command("vilenkin-lebesgue")
@click.option("--x", "x_index", type=int, default=0, show_default=True)
@click.option("--weights", default="fejer", show_default=True)
@click.option("--fixture", default="random", show_default=True)
@shared_options
def vilenkin_lebesgue_cmd(x_index, weights, fixture, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    f, fixture_id = make_fixture(fixture, cfg, seed)
    trace = vilenkin_lebesgue_trace(f, index_point(x_index, cfg), cfg.resolution, parse_weights(weights))
    _emit_records(trace.records(), cfg, fmt, out, {"x": x_index, "weights": weights, "fixture": fixture_id})


@experiment.command("lipschitz")
@click.option("--alpha", type=float, default=0.5, show_default=True)
@click.option("--p", "p", default="2", show_default=True)
@click.option("--family", type=click.Choice([f.value for f in MeanFamily]), default=MeanFamily.FEJER.value)
@click.option("--weights", default=None)
@click.option("--tolerance", type=float, default=0.15, show_default=True, help="Allowed gap to the predicted exponent")
@click.option("--plain", is_flag=True, help="Use the plain lacunary series without the tail adjustment")
@shared_options
def lipschitz_cmd(alpha, p, family, weights, tolerance, plain, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    report = lipschitz_rate_table(
        alpha, parse_p(p), cfg, MeanFamily(family), lab_service.resolve_weights(weights), tail_adjusted=not plain
    )
    _emit_records(
        report.records(), cfg, fmt, out,
        {"alpha": alpha, "fitted": report.fitted_exponent, "predicted": report.predicted_exponent},
    )
    if report.fitted_exponent is not None and abs(report.fitted_exponent - report.predicted_exponent) > tolerance:
        _fail(f"fitted exponent {report.fitted_exponent:.4f} vs predicted {report.predicted_exponent:.4f}")


@experiment.command("moricz-siddiqi")
@click.option("--weights", default="valpha:0.5", show_default=True)
@click.option("--p", "p", default="2", show_default=True)
@click.option("--n", "n_range", default="2..16", show_default=True)
@click.option("--fixture", default="random", show_default=True)
@shared_options
def moricz_siddiqi_cmd(weights, p, n_range, fixture, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    f, fixture_id = make_fixture(fixture, cfg, seed)
    report = moricz_siddiqi_ratio(parse_weights(weights), f, parse_p(p), parse_range(n_range))
    records = [row.model_dump() for row in report.rows]
    _emit_records(records, cfg, fmt, out, {"branch": report.branch, "sup_ratio": report.sup_ratio, "fixture": fixture_id})


@experiment.command("approximate-identity")
@click.option("--kind", type=click.Choice([k.value for k in KernelKind]), default=KernelKind.NORLUND.value)
@click.option("--weights", default="beta:1", show_default=True)
@click.option("--tail-level", type=int, default=2, show_default=True, help="Mass is measured outside I_n for this n")
@click.option("--n", "n_range", default=None, help="Kernel indices; defaults to every n <= M_N with Q_n > 0")
@click.option("--min-ratio", type=float, default=None, help="Exit 1 unless the tail shrinks by this factor")
@shared_options
def approximate_identity_cmd(kind, weights, tail_level, n_range, min_ratio, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    q = parse_weights(weights)
    if n_range:
        n_values = parse_range(n_range)
    else:
        n_values = [n for n in range(1, cfg.size + 1) if q.Q(n) > 0]
    report = approximate_identity_report(KernelKind(kind), cfg, n_values, tail_level, q)
    _emit_records(
        [row.model_dump() for row in report.rows], cfg, fmt, out,
        {"sup_l1": report.sup_l1, "tail_ratio": report.tail_ratio},
    )
    if not report.tail_decreasing:
        _fail("tail mass does not decrease")
    if min_ratio is not None and report.tail_ratio < min_ratio:
        _fail(f"tail ratio {report.tail_ratio:.4g} below {min_ratio:g}")


@experiment.command("riemann-lebesgue")
@click.option("--weights", default="fejer", show_default=True)
@click.option("--x", "x_index", type=int, default=0, show_default=True)
@click.option("--fixture", default="random", show_default=True)
@shared_options
def riemann_lebesgue_cmd(weights, x_index, fixture, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    f, fixture_id = make_fixture(fixture, cfg, seed)
    rows = riemann_lebesgue_trace(parse_weights(weights), f, index_point(x_index, cfg), cfg.resolution)
    _emit_records([row.model_dump() for row in rows], cfg, fmt, out, {"x": x_index, "weights": weights, "fixture": fixture_id})
    scale = max(1.0, float(abs(f.values).max()))
    if any(row.residual > settings.identity_tolerance * scale for row in rows):
        _fail("t_(M_n) f(x) does not match S_(M_n) f(x) minus the oscillating term")


@experiment.command("regularity")
@click.option("--weights", default="fejer", show_default=True)
@click.option("--n-max", type=int, default=1000, show_default=True)
@shared_options
def regularity_cmd(weights, n_max, radix, resolution, out, fmt, seed):
    cfg = _config(radix, resolution)
    report = regularity_check(parse_weights(weights), n_max)
    _emit_records([report.model_dump(mode="json")], cfg, fmt, out)


if __name__ == "__main__":
    main()
