"""Smoke tests for the python module and the CLI."""

import math
import os
import subprocess

import numpy as np
import pytest

import spinflow as sf


def test_version():
    assert sf.__version__


def test_clifford_basics():
    e1 = sf.Multivector(c1=1.0)
    sq = e1 * e1
    assert sq.c0 == 1.0
    e12 = sf.Multivector(c1=1.0) * sf.Multivector(c2=1.0)
    assert e12.c12 == 1.0
    assert e12.reverse().c12 == -1.0

    p = sf.EvenSpinor(s=1.0, b12=1.0)
    assert p.amplitude() == pytest.approx(math.sqrt(2.0), abs=1e-14)
    rho, rotor = sf.polar_decompose(p)
    assert rho == pytest.approx(math.sqrt(2.0), abs=1e-14)
    assert rotor.amplitude() == pytest.approx(1.0, abs=1e-14)

    a = sf.clifford_action([1.0, 0.0, 0.0], sf.EvenSpinor(s=1.0))
    assert a.b23 == 1.0


def test_exact_solution_values():
    assert sf.exact_u(0, 0, 0) == 1.0
    assert sf.exact_u(0, 0, 0.5) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert sf.exact_u(1, 1, 0) == pytest.approx(math.exp(-2.0), abs=1e-15)


def test_field_numpy_roundtrip():
    arr = np.random.default_rng(7).normal(size=(16, 24, 4))
    f = sf.Field.from_numpy(arr, [2.0, 1.5])
    assert f.dim == 2
    assert f.n == [24, 16]
    back = f.to_numpy()
    np.testing.assert_array_equal(arr, back)


def test_operators_on_fields():
    psi = sf.initial_data("constant", [16, 16], [1.0, 1.0], amp=2.0)
    rho = sf.conformal_factor(psi)
    assert np.allclose(rho.to_numpy(), 2.0)
    d = sf.dirac_flat(psi)
    assert np.all(d.to_numpy() == 0.0)
    assert sf.energy(psi) == 0.0


def test_flow_run_and_determinism():
    cfg = "\n".join(
        [
            "init = random_smooth",
            "n = 32",
            "L = 2.0",
            "t_end = 2e-3",
            "seed = 11",
        ]
    )
    sf.set_max_threads(1)
    r1 = sf.flow_run(cfg)
    sf.set_max_threads(8)
    r2 = sf.flow_run(cfg)
    assert r1["status"] == "completed"
    assert r1["steps"] == r2["steps"]
    np.testing.assert_array_equal(r1["rows"]["energy"], r2["rows"]["energy"])
    np.testing.assert_array_equal(r1["psi"].to_numpy(), r2["psi"].to_numpy())


def test_toy_run_mass():
    r = sf.toy_run("n = 32\nL = 6\nt_end = 0.02\n")
    assert r["status"] == "completed"
    assert np.all(np.abs(r["rows"]["mass"] - math.pi) <= 1e-6)


def test_snapshot_roundtrip(tmp_path):
    psi = sf.initial_data("gaussian_bump", [16, 16], [2.0, 2.0])
    path = str(tmp_path / "f.sghf")
    sf.write_snapshot(psi, path)
    back = sf.read_snapshot(path)
    np.testing.assert_array_equal(psi.to_numpy(), back.to_numpy())


def test_config_errors():
    with pytest.raises(sf.ConfigError):
        sf.flow_run("alpa = 2\n")
    with pytest.raises(sf.ConfigError):
        sf.flow_run("rho_floor = 0\n")


def test_verify_group():
    failures, report = sf.verify("group:clifford")
    assert failures == 0
    assert "structure_table" in report


# ------------------------------------------------------------------ CLI ----

CLI = os.environ.get("SPINFLOW_CLI")
needs_cli = pytest.mark.skipif(CLI is None, reason="SPINFLOW_CLI not set")


@needs_cli
def test_cli_toy_and_exit_codes(tmp_path):
    out = tmp_path / "toy"
    res = subprocess.run(
        [CLI, "toy2d", "n=32", "L=6", "t_end=0.01", f"outdir={out}"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, res.stderr
    assert (out / "diagnostics.csv").exists()
    assert "status = completed" in (out / "manifest.txt").read_text()

    bad = subprocess.run([CLI, "flow", "alpa=2"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert "alpa" in bad.stderr


@needs_cli
def test_cli_thread_env_determinism(tmp_path):
    args = [
        "flow",
        "init=random_smooth",
        "n=48",
        "L=2.0",
        "t_end=1e-3",
        "seed=5",
    ]
    outputs = []
    for threads in ("1", "8"):
        out = tmp_path / f"t{threads}"
        env = dict(os.environ, SPINFLOW_THREADS=threads)
        res = subprocess.run(
            [CLI, *args, f"outdir={out}"], capture_output=True, text=True, env=env
        )
        assert res.returncode == 0, res.stderr
        outputs.append((out / "diagnostics.csv").read_bytes())
    assert outputs[0] == outputs[1]


@needs_cli
def test_cli_symbol(tmp_path):
    out = tmp_path / "sym"
    res = subprocess.run(
        [CLI, "symbol", "n=64", "L=1.0", f"outdir={out}"], capture_output=True, text=True
    )
    assert res.returncode == 0, res.stderr
    lines = (out / "symbol.csv").read_text().strip().splitlines()
    assert lines[0] == "mode,k,kh,lambda_h,ratio,deviation"
    assert len(lines) == 4
