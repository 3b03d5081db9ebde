"""
Command-line interface for trilin.

    trilin modes       normal modes, detuning and coupling rate of a trap
    trilin run NAME    scripted experiment reproductions
    trilin tomography  invert a measured sideband signal
"""

import csv
import functools
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click
import numpy as np

from . import __version__
from .config import get_settings, load_run_config, reset_settings
from .hilbert import Truncation
from .modes import mode_report, resonance_ratio
from .observe import fit_geometric, fit_poisson, reconstruct_with_diagnostics
from .observe.signals import SidebandSignal
from .reporting import ResultWriter, RunManifest, hash_inputs
from .scenarios import ScenarioRunner
from .shared import (
    ConfigurationError,
    Mode,
    ScenarioName,
    SidebandKind,
    TomographyMethod,
    TrilinError,
    format_float,
    khz_to_rad_s,
    setup_logging,
)

logger = logging.getLogger(__name__)


def handle_errors(command: Callable) -> Callable:
    """Map TrilinError families to their exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TrilinError as e:
            logger.error(f"{e.error_code}: {e.message}")
            click.echo(f"Error: {e.message}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def _prune(overrides: Dict[str, Any]) -> Dict[str, Any]:
    pruned = {}
    for key, value in overrides.items():
        if isinstance(value, dict):
            value = _prune(value)
            if value:
                pruned[key] = value
        elif value is not None:
            pruned[key] = value
    return pruned


def _parse_truncation(text: Optional[str]) -> Optional[Dict[str, int]]:
    if text is None:
        return None
    try:
        truncation = Truncation.parse(text)
    except ValueError as e:
        raise ConfigurationError(f"Invalid --truncation '{text}': {e}", fields=["truncation"])
    return truncation.model_dump()


@click.group()
@click.option('--log-level', default=None, help='Logging level (defaults to TRILIN_LOG_LEVEL)')
@click.version_option(__version__, prog_name="trilin")
@handle_errors
def cli(log_level: Optional[str]):
    """trilin - trilinear three-mode phonon coupling simulator."""
    reset_settings()
    settings = get_settings()
    setup_logging(log_level or settings.log_level)


@cli.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='JSON/YAML run config')
@click.option('--omega-x', type=float, help='x-radial single-ion frequency in kHz')
@click.option('--omega-y', type=float, help='y-radial single-ion frequency in kHz')
@click.option('--omega-z', type=float, help='Axial single-ion frequency in kHz')
@click.option('--mass-u', type=float, help='Ion mass in atomic mass units')
@click.option('--delta', type=float, help='Detuning override in kHz')
@click.option('--resonance-ratio', 'use_ratio', is_flag=True, help='Set omega_x = omega_z / r on resonance')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), help='Write modes.csv and a manifest here')
@handle_errors
def modes(
    config_path: Optional[str],
    omega_x: Optional[float],
    omega_y: Optional[float],
    omega_z: Optional[float],
    mass_u: Optional[float],
    delta: Optional[float],
    use_ratio: bool,
    out_dir: Optional[str],
):
    """Print the coupled-mode frequencies, detuning, coupling rate and ion spacing."""
    started = time.perf_counter()
    overrides = _prune(
        {
            "trap": {
                "omega_x_khz": omega_x,
                "omega_y_khz": omega_y,
                "omega_z_khz": omega_z,
                "mass_u": mass_u,
                "delta_khz": delta,
                "use_resonance_ratio": True if use_ratio else None,
            }
        }
    )
    config = load_run_config(config_path, overrides)
    rows = mode_report(config.trap.to_trap_config(), config.trap.delta_override)

    click.echo(f"{'quantity':<10} {'SI value':>24} {'unit':<6} {'value':>24} unit")
    for row in rows:
        click.echo(
            f"{row['quantity']:<10} {format_float(row['si_value']):>24} {row['si_unit']:<6} "
            f"{format_float(row['value']):>24} {row['unit']}"
        )
    if use_ratio:
        click.echo(f"resonance_ratio {format_float(resonance_ratio())}")

    if out_dir:
        columns = ["quantity", "si_value", "si_unit", "value", "unit"]
        with ResultWriter(out_dir, get_settings().output.manifest_name) as writer:
            writer.write_rows("modes", columns, [[row[c] for c in columns] for row in rows])
            writer.write_manifest(
                RunManifest(
                    version=__version__,
                    command="modes",
                    config=config.resolved(),
                    inputs=hash_inputs([config_path]),
                    duration_s=time.perf_counter() - started,
                )
            )


@cli.command()
@click.argument('scenario', type=click.Choice([name.value for name in ScenarioName]))
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), help='JSON/YAML run config')
@click.option('--defaults', 'use_defaults', is_flag=True, help='Use built-in defaults only')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), help='Output directory')
@click.option('--truncation', help='Fock cutoffs "a,b,c"')
@click.option('--fock', multiple=True, type=int, help='Initial Fock number of mode c (jc, repeatable)')
@click.option('--coherent-nbar', type=float, help='Coherent mean phonon number of mode c (jc)')
@click.option('--seedless', is_flag=True, help='Accepted for reproducibility scripts; runs use no RNG')
@handle_errors
def run(
    scenario: str,
    config_path: Optional[str],
    use_defaults: bool,
    out_dir: Optional[str],
    truncation: Optional[str],
    fock: tuple[int, ...],
    coherent_nbar: Optional[float],
    seedless: bool,
):
    """Run a scripted experiment and write its tables as CSV."""
    started = time.perf_counter()
    if use_defaults and config_path:
        raise ConfigurationError("--defaults and --config are mutually exclusive", fields=["config"])

    name = ScenarioName(scenario)
    cutoffs = _parse_truncation(truncation)
    overrides: Dict[str, Any] = {
        "jc": {"fock": list(fock) if fock else None, "coherent_nbar": coherent_nbar},
    }
    if name is ScenarioName.PDC:
        overrides["pdc"] = {"truncation": cutoffs}
    else:
        overrides["truncation"] = cutoffs
    config = load_run_config(None if use_defaults else config_path, _prune(overrides))

    result = ScenarioRunner(config).run(name)

    settings = get_settings()
    directory = Path(out_dir or settings.output.directory)
    with ResultWriter(directory, settings.output.manifest_name) as writer:
        for table in result.tables:
            writer.write_table(table)
        writer.write_manifest(
            RunManifest(
                version=__version__,
                command="run",
                scenario=name.value,
                config=config.resolved(),
                inputs=hash_inputs([config_path]),
                leakage=result.leakage_summary,
                metrics=result.metrics,
                seedless=True,
                duration_s=time.perf_counter() - started,
            )
        )
    for key, value in result.metrics.items():
        click.echo(f"{key} {format_float(value)}")
    click.echo(f"Wrote {len(result.tables)} tables to {directory}")


def read_signal_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    """
    Read (time_s, probability) columns.

    Raises:
        ConfigurationError: If the file or its columns are unusable
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            missing = {"time_s", "probability"} - set(reader.fieldnames or [])
            if missing:
                raise ConfigurationError(
                    f"{path} lacks columns: {', '.join(sorted(missing))}", fields=sorted(missing)
                )
            rows = [(float(row["time_s"]), float(row["probability"])) for row in reader]
    except OSError as e:
        raise ConfigurationError(f"Cannot read signal file {path}: {e}")
    except ValueError as e:
        raise ConfigurationError(f"Non-numeric value in {path}: {e}")
    if not rows:
        raise ConfigurationError(f"{path} holds no samples")
    data = np.array(rows)
    return data[:, 0], data[:, 1]


@cli.command()
@click.argument('input_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--omega0', type=float, required=True, help='Sideband Rabi frequency of n = 0 in kHz')
@click.option('--n-cut', type=int, required=True, help='Highest phonon number reconstructed')
@click.option('--kind', type=click.Choice([k.value for k in SidebandKind]), default='blue')
@click.option('--method', type=click.Choice([m.value for m in TomographyMethod]), default='nnls')
@click.option('--gamma0', type=float, default=0.0, help='Envelope decay rate of n = 0 in 1/s')
@click.option('--mode', 'mode_label', type=click.Choice([m.value for m in Mode]), default='a')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), help='Output directory')
@handle_errors
def tomography(
    input_csv: str,
    omega0: float,
    n_cut: int,
    kind: str,
    method: str,
    gamma0: float,
    mode_label: str,
    out_dir: Optional[str],
):
    """Reconstruct a phonon distribution from a sideband signal CSV."""
    started = time.perf_counter()
    times, probabilities = read_signal_csv(input_csv)
    try:
        signal = SidebandSignal(
            kind=SidebandKind(kind),
            mode=Mode(mode_label),
            omega0=khz_to_rad_s(omega0),
            times=times,
            probabilities=probabilities,
            gamma0=gamma0,
        )
    except ValueError as e:
        raise ConfigurationError(f"Invalid sideband signal: {e}")
    if n_cut < 0:
        raise ConfigurationError("--n-cut must be non-negative", fields=["n_cut"])

    result = reconstruct_with_diagnostics(signal, n_cut, method)
    distribution = result.distribution
    poisson = fit_poisson(distribution)
    geometric = fit_geometric(distribution)
    diagnostics = {
        "method": result.method.value,
        "kind": result.kind.value,
        "residual_norm": result.residual_norm,
        "condition_number": result.condition_number,
        "nyquist_ok": result.nyquist_ok,
        "mean": distribution.mean,
        "total": distribution.total,
        "poisson_l1": poisson.residual_norm,
        "geometric_l1": geometric.residual_norm,
    }

    for n, p in enumerate(distribution.probabilities):
        click.echo(f"{n} {format_float(p)}")

    if out_dir:
        settings = get_settings()
        with ResultWriter(out_dir, settings.output.manifest_name) as writer:
            writer.write_rows(
                "distribution",
                ["n", "probability"],
                [[n, float(p)] for n, p in enumerate(distribution.probabilities)],
            )
            writer.write_json("diagnostics.json", diagnostics)
            writer.write_manifest(
                RunManifest(
                    version=__version__,
                    command="tomography",
                    config={
                        "omega0_khz": omega0,
                        "n_cut": n_cut,
                        "kind": kind,
                        "method": method,
                        "gamma0_per_s": gamma0,
                        "mode": mode_label,
                    },
                    inputs=hash_inputs([input_csv]),
                    metrics=diagnostics,
                    duration_s=time.perf_counter() - started,
                )
            )


def main():
    """Main CLI entry point."""
    cli()


if __name__ == "__main__":
    main()
