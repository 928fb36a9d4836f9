"""
Integration tests for the command-line workflows.
Runs subcommands end to end through ``dispatch`` and inspects the files
they write.

Author: Hassan Fouani
"""

import json
import os

import pytest

from cli_io.checks import CHECKS
from cli_io.cli import CONSERVATION_FILE, SUMMARY_FILE, TRAJECTORY_FILE, dispatch
from cli_io.trajectory_io import load_trajectory
from tests.conftest import EXAMPLE_CONFIGS


@pytest.fixture
def simulate_config(write_config):
    """Short quintic run on a small grid with an explicit step."""
    return write_config({
        'version': 1,
        'model': {'variant': 'quintic', 'lam': 1.0},
        'grid': {'length': 16.0, 'points': 64},
        'time': {'T': 0.0625, 'dt': 0.00390625},
        'init': {'kind': 'sech', 'amplitude': 0.5},
    }, 'simulate.json')


def run(*args):
    return dispatch([str(arg) for arg in args])


class TestUsageErrors:
    """Tests for exit code 2 on bad invocations."""

    def test_missing_config_file(self, tmp_path):
        """Test that an unreadable configuration exits with 2."""
        assert run('simulate', '--config', tmp_path / 'absent.json', '--out', tmp_path / 'out') == 2

    def test_missing_config_option(self):
        """Test that omitting --config is a usage error."""
        assert run('simulate') == 2

    def test_unknown_command(self):
        """Test that an unknown subcommand is a usage error."""
        assert run('teleport') == 2

    def test_invalid_configuration(self, write_config, tmp_path):
        """Test that a schema violation exits with 2 and writes nothing."""
        path = write_config({'grid': {'points': 100}})
        out = tmp_path / 'out'
        assert run('simulate', '--config', path, '--out', out) == 2
        assert not out.exists()

    def test_wrong_experiment_block(self, simulate_config, tmp_path):
        """Test that a subcommand needs its own experiment kind."""
        assert run('kernel', '--config', simulate_config, '--out', tmp_path / 'out') == 2

    def test_version(self, capsys):
        """Test that --version prints the tool version and succeeds."""
        assert run('--version') == 0
        assert 'nlslab' in capsys.readouterr().out


class TestSimulateWorkflow:
    """Tests for the simulate command."""

    def test_outputs(self, simulate_config, tmp_path):
        """Test that the trajectory, conservation table and summary are written."""
        out = tmp_path / 'out'
        assert run('simulate', '--config', simulate_config, '--out', out, '--quiet') == 0

        trajectory = load_trajectory(out / TRAJECTORY_FILE)
        assert trajectory.grid.points == 64
        assert trajectory.times[-1] == pytest.approx(0.0625)

        lines = (out / CONSERVATION_FILE).read_text().splitlines()
        assert lines[0] == 'time,mass,energy,mass_drift,energy_drift'
        assert len(lines) == len(trajectory) + 1

        summary = json.loads((out / SUMMARY_FILE).read_text())
        assert summary['verdict'] == 'pass'
        assert summary['flags'] == {'mass_conserved': True}
        assert summary['summary']['max_mass_drift'] < 1e-10

    def test_reruns_are_byte_identical(self, simulate_config, tmp_path):
        """Test that two runs of one configuration write identical files."""
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert run('simulate', '--config', simulate_config, '--out', first, '--quiet') == 0
        assert run('simulate', '--config', simulate_config, '--out', second, '--quiet') == 0
        for name in (TRAJECTORY_FILE, CONSERVATION_FILE, SUMMARY_FILE):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_changes_hash(self, simulate_config, tmp_path):
        """Test that --seed enters the configuration hash."""
        run('simulate', '--config', simulate_config, '--out', tmp_path / 'a', '--quiet')
        run('simulate', '--config', simulate_config, '--out', tmp_path / 'b', '--quiet', '--seed', 3)
        first = json.loads((tmp_path / 'a' / SUMMARY_FILE).read_text())
        second = json.loads((tmp_path / 'b' / SUMMARY_FILE).read_text())
        assert first['config_hash'] != second['config_hash']
        assert second['provenance']['seed'] == 3


class TestExperimentWorkflows:
    """Tests for the sweep commands on small configurations."""

    def test_homogenize_constant_coefficient(self, write_config, tmp_path):
        """Test that a constant coefficient matches its average and passes."""
        path = write_config({
            'model': {'variant': 'inhomogeneous', 'h': {'kind': 'constant', 'value': 2.0}},
            'grid': {'length': 32.0, 'points': 256},
            'time': {'T': 0.0625, 'dt': 0.00390625},
            'init': {'kind': 'sech', 'amplitude': 0.5},
            'experiment': {'kind': 'homogenization', 'n_list': [1, 2]},
            'outputs': {'csv': 'h.csv', 'json': 'h.json'},
        })
        out = tmp_path / 'out'
        assert run('homogenize', '--config', path, '--out', out, '--quiet') == 0
        document = json.loads((out / 'h.json').read_text())
        assert document['verdict'] == 'pass'
        assert document['summary']['averaged_lam'] == 2.0
        assert (out / 'h.csv').read_text().startswith('n,hypothesis,l6_difference')

    def test_kernel_sweep(self, write_config, tmp_path):
        """Test the kernel table over two torus lengths."""
        path = write_config({
            'experiment': {'kind': 'kernel', 'N': 1.0, 'T': 1.0, 'lengths': [64.0, 128.0],
                           't_samples': 8},
        })
        out = tmp_path / 'out'
        assert run('kernel', '--config', path, '--out', out, '--quiet') == 0
        lines = (out / 'report.csv').read_text().splitlines()
        assert lines[0] == 'L,t_min,constant,argmax_t,argmax_x'
        assert len(lines) == 3

    def test_linear_stability(self, write_config, tmp_path):
        """Test that the free equation responds linearly to data perturbations."""
        path = write_config({
            'model': {'variant': 'free'},
            'grid': {'length': 16.0, 'points': 64},
            'time': {'T': 0.25, 'dt': 0.0078125},
            'init': {'kind': 'gaussian'},
            'experiment': {'kind': 'stability', 'eps_list': [0.01, 0.02, 0.04], 'mode': 'data'},
        })
        out = tmp_path / 'out'
        assert run('stability', '--config', path, '--out', out, '--quiet') == 0
        summary = json.loads((out / 'summary.json').read_text())
        assert summary['summary']['slope'] == pytest.approx(1.0, abs=1e-6)

    def test_failed_verdict_exits_one(self, write_config, tmp_path):
        """Test that a sweep without a fittable slope fails its verdict."""
        path = write_config({
            'model': {'variant': 'free'},
            'grid': {'length': 16.0, 'points': 64},
            'time': {'T': 0.25, 'dt': 0.0078125},
            'init': {'kind': 'gaussian'},
            'experiment': {'kind': 'stability', 'eps_list': [0.0]},
        })
        out = tmp_path / 'out'
        assert run('stability', '--config', path, '--out', out, '--quiet') == 1
        summary = json.loads((out / 'summary.json').read_text())
        assert summary['verdict'] == 'fail'
        assert summary['flags']['linear_response'] is False


class TestCheckCommand:
    """Tests for the invariant suite command."""

    @pytest.mark.slow
    def test_all_checks_pass(self, capsys):
        """Test exit code 0 and one JSON line per check."""
        assert run('check', '--quiet') == 0
        lines = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]
        assert len(lines) == len(CHECKS)
        assert all(line['passed'] for line in lines)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(os.listdir(EXAMPLE_CONFIGS)))
def test_example_configuration_runs(name, tmp_path):
    """Test that every shipped configuration runs and writes its reports."""
    out = tmp_path / 'out'
    command = name.rsplit('.', 1)[0]
    code = run(command, '--config', os.path.join(EXAMPLE_CONFIGS, name), '--out', out, '--quiet')
    assert code in (0, 1)
    assert any(out.iterdir())
