"""
Command-line entry point.

Every subcommand except ``check`` reads a JSON run configuration, runs one
study and writes its reports into ``--out``. Exit codes: 0 on success,
1 on a failed verdict or invariant, 2 on configuration errors.

Author: Ahmad Yateem
"""

import json
from dataclasses import dataclass
from functools import wraps
from typing import Dict, List, Optional, Sequence

import click

from cli_io.checks import run_checks
from cli_io.config import RunConfig, build_coefficient, build_profile, config_hash, load_config
from cli_io.reports import ReportWriter, emit_report, to_jsonable
from cli_io.trajectory_io import encode_trajectory
from configs.config import Config
from estimates.kernels import kernel_dispersive_constant
from experiments import (
    ForcingSpec, run_homogenization, run_nonsqueezing_probe, run_stability_check,
    run_torus_approx, run_weak_convergence,
)
from experiments.base import ExperimentReport
from propagators.integrators import evolve
from utils.decorators import handle_errors
from utils.exceptions import ConfigError, VerdictFailedError
from utils.logger import log_run, set_quiet, setup_logger

logger = setup_logger(__name__)

TRAJECTORY_FILE = 'trajectory.nlst'
CONSERVATION_FILE = 'conservation.csv'
SUMMARY_FILE = 'summary.json'
SIMULATE_MASS_TOLERANCE = 1e-6
KERNEL_STABILITY_TOLERANCE = 0.10


@dataclass
class RunContext:
    """Loaded configuration, effective seed, hash and the single output writer."""

    command: str
    config: RunConfig
    digest: str
    writer: ReportWriter

    @classmethod
    def open(cls, command: str, config_path: str, out: str, seed: Optional[int]) -> 'RunContext':
        config, raw = load_config(config_path)
        config.with_seed(seed)
        digest = config_hash(raw, config.seed)
        log_run(logger, command, digest, config.seed)
        return cls(command, config, digest, ReportWriter(out))

    def experiment(self, kind: str) -> Dict[str, object]:
        block = self.config.experiment
        if not block or block.get('kind') != kind:
            raise ConfigError(f"'{self.command}' needs an experiment block of kind '{kind}'",
                              field='experiment.kind')
        return block

    def finish(self, report: ExperimentReport, csv_name: str = None, json_name: str = None) -> int:
        emit_report(report, csv_name or self.config.outputs['csv'],
                    json_name or self.config.outputs['json'], self.digest, self.writer)
        if report.verdict == 'fail':
            failed = sorted(name for name, ok in report.flags.items() if not ok)
            raise VerdictFailedError(f"{report.kind} verdict failed: {', '.join(failed)}")
        return 0


def run_options(fn):
    """Shared ``--config/--out/--seed/--quiet`` options."""
    @click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False),
                  help='JSON run configuration')
    @click.option('--out', default='nlslab-out', show_default=True, type=click.Path(file_okay=False),
                  help='Directory receiving every output file')
    @click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=None,
                  help='Override the configuration seed')
    @click.option('--quiet', is_flag=True, help='Only log warnings and errors')
    @wraps(fn)
    def wrapper(config_path, out, seed, quiet, **kwargs):
        set_quiet(quiet)
        return fn(config_path=config_path, out=out, seed=seed, **kwargs)

    return wrapper


@click.group()
@click.version_option(Config.TOOL_VERSION, prog_name='nlslab')
def cli():
    """Numerical laboratory for the frequency-truncated quintic NLS."""


@cli.command()
@run_options
@handle_errors
def simulate(config_path, out, seed):
    """Evolve the configured model and record conservation laws."""
    run = RunContext.open('simulate', config_path, out, seed)
    config = run.config
    model = config.build_model()
    u0 = config.build_initial()
    trajectory = evolve(model, u0, config.time['T'], config.build_scheme(), config.time.get('sample_stride'))

    masses = trajectory.mass_series()
    energies = trajectory.energy_series()
    mass_scale = masses[0] if masses[0] else 1.0
    energy_scale = abs(energies[0]) if energies[0] else 1.0
    rows = [
        {'time': float(t), 'mass': float(m), 'energy': float(e),
         'mass_drift': float(abs(m - masses[0]) / mass_scale),
         'energy_drift': float(abs(e - energies[0]) / energy_scale)}
        for t, m, e in zip(trajectory.times, masses, energies)
    ]
    report = ExperimentReport(kind='simulate', sweep_key='time',
                              columns=['mass', 'energy', 'mass_drift', 'energy_drift'], rows=rows)
    max_mass_drift = max(row['mass_drift'] for row in rows)
    report.flags = {'mass_conserved': max_mass_drift <= SIMULATE_MASS_TOLERANCE}
    report.summary = {
        'max_mass_drift': max_mass_drift,
        'max_energy_drift': max(row['energy_drift'] for row in rows),
        'samples': len(trajectory),
    }
    report.provenance = {'model': model.as_dict(), 'grid': u0.grid.as_dict(), 'T': config.time['T'],
                         'scheme': trajectory.scheme_id, 'dt': trajectory.dt_used, 'seed': config.seed}
    report.finalize()

    run.writer.write_bytes(TRAJECTORY_FILE, encode_trajectory(trajectory))
    return run.finish(report, CONSERVATION_FILE, SUMMARY_FILE)


@cli.command()
@run_options
@handle_errors
def kernel(config_path, out, seed):
    """Sweep the dispersive constant over torus lengths and t_min."""
    run = RunContext.open('kernel', config_path, out, seed)
    block = run.experiment('kernel')
    t_min_list: Sequence[Optional[float]] = block.get('t_min_list') or [None]

    rows: List[Dict[str, object]] = []
    for L in block['lengths']:
        for t_min in t_min_list:
            measured = kernel_dispersive_constant(L, block['N'], block['T'], t_min,
                                                  t_samples=block.get('t_samples', 64))
            rows.append({'L': L, 't_min': measured.params['t_min'], 'constant': measured.value,
                         'argmax_t': measured.details['argmax_t'],
                         'argmax_x': measured.details['argmax_x']})

    report = ExperimentReport(kind='kernel', sweep_key='L',
                              columns=['t_min', 'constant', 'argmax_t', 'argmax_x'], rows=rows)
    changes = {}
    if len(block['lengths']) >= 2:
        for index in range(len(t_min_list)):
            per_t = [row['constant'] for row in rows[index::len(t_min_list)]]
            changes[str(rows[index]['t_min'])] = abs(per_t[-1] - per_t[-2]) / per_t[-2] if per_t[-2] else 0.0
    report.flags = {'stable': all(change < KERNEL_STABILITY_TOLERANCE for change in changes.values())}
    report.summary = {'relative_change_last_doubling': changes}
    report.provenance = {'N': block['N'], 'T': block['T'], 'seed': run.config.seed}
    return run.finish(report.finalize())


@cli.command()
@run_options
@handle_errors
def homogenize(config_path, out, seed):
    """Compare the oscillating-coefficient flow with its averaged limit."""
    run = RunContext.open('homogenize', config_path, out, seed)
    config = run.config
    block = run.experiment('homogenization')
    h = build_coefficient(config.model.get('h') or {})
    report = run_homogenization(h, block['n_list'], config.build_initial(), config.time['T'],
                                dt=config.time.get('dt'), lam=config.model.get('lam', 1.0),
                                R=block.get('R', 4.0), seed=config.seed)
    return run.finish(report)


@cli.command('torus-approx')
@run_options
@handle_errors
def torus_approx(config_path, out, seed):
    """Measure the line-to-torus discrepancy along a (K, eps) sweep."""
    run = RunContext.open('torus-approx', config_path, out, seed)
    config = run.config
    block = run.experiment('torus_approx')
    report = run_torus_approx(block.get('M', 1.0), block.get('D', 2.0), block['K_list'], block['eps_list'],
                              config.time['T'], profile=block.get('profile', 'lorentzian'),
                              width=block.get('width', 1.0), min_length=block.get('min_length', 32.0),
                              dt=config.time.get('dt'), seed=config.seed)
    return run.finish(report)


@cli.command('weak-limit')
@run_options
@handle_errors
def weak_limit(config_path, out, seed):
    """Pairing gaps of truncated flows from weakly convergent data."""
    run = RunContext.open('weak-limit', config_path, out, seed)
    config = run.config
    block = run.experiment('weak_convergence')
    grid = config.build_grid()
    functionals = [build_profile(grid, profile) for profile in block['functionals']]
    report = run_weak_convergence(config.build_initial(grid), build_profile(grid, block.get('bump')),
                                  block['x_shift_list'], block['M_list'], functionals, block['t_list'],
                                  D=block.get('D', 2.0), lam=config.model.get('lam', 1.0),
                                  dt=config.time.get('dt'), seed=config.seed)
    return run.finish(report)


@cli.command()
@run_options
@handle_errors
def nonsqueeze(config_path, out, seed):
    """Search the ball around z* for a large functional defect."""
    run = RunContext.open('nonsqueeze', config_path, out, seed)
    config = run.config
    block = run.experiment('nonsqueezing')
    grid = config.build_grid()
    re, im = block.get('alpha', [0.0, 0.0])
    report = run_nonsqueezing_probe(config.build_initial(grid), build_profile(grid, block['ell']),
                                    complex(re, im), block['r'], config.time['T'], config.build_model(),
                                    sample_count=block.get('sample_count', 64), seed=config.seed,
                                    dt=config.time.get('dt'))
    return run.finish(report)


@cli.command()
@run_options
@handle_errors
def stability(config_path, out, seed):
    """Linear response of the flow to forcing or data perturbations."""
    run = RunContext.open('stability', config_path, out, seed)
    config = run.config
    block = run.experiment('stability')
    grid = config.build_grid()
    forcing = ForcingSpec(**{key: float(value) for key, value in (block.get('forcing') or {}).items()})
    perturbation = block.get('perturbation')
    report = run_stability_check(config.build_model(), config.build_initial(grid), forcing,
                                 block['eps_list'], config.time['T'], mode=block.get('mode', 'forcing'),
                                 perturbation=build_profile(grid, perturbation) if perturbation else None,
                                 dt=config.time.get('dt'))
    return run.finish(report)


@cli.command()
@click.option('--quiet', is_flag=True, help='Only log warnings and errors')
@handle_errors
def check(quiet):
    """Run the invariant suite; one JSON line per check on stdout."""
    set_quiet(quiet)
    results = run_checks()
    for result in results:
        click.echo(json.dumps(to_jsonable(result.as_dict()), sort_keys=True))
    failed = [result.name for result in results if not result.passed]
    if failed:
        raise VerdictFailedError(f"Invariant checks failed: {', '.join(failed)}")
    return 0


def dispatch(argv: Sequence[str] = None) -> int:
    """
    Run the CLI and return its exit code instead of exiting.

    Args:
        argv: Arguments after the program name (default ``sys.argv[1:]``)

    Returns:
        0 on success, 1 on a failed verdict, 2 on configuration or usage errors
    """
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name='nlslab',
                          standalone_mode=False)
    except click.UsageError as e:
        click.echo(f"Error: {e.format_message()}", err=True)
        return 2
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return 1
    return result if isinstance(result, int) else 0


def main() -> None:
    raise SystemExit(dispatch())
