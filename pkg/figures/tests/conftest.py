"""Shared fixtures: real simulator outputs generated through the console script."""

import json
import subprocess

import pytest

STRONG_SYSTEM = {
    "n_cavities": 10,
    "eta": 1.0,
    "kappa": 0.0,
    "zeta_a": 1.0,
    "alpha": 6.48,
    "zeta_b": 10.0,
    "kappa_0": 0.0,
}
LOSSY_SYSTEM = {
    "n_cavities": 5,
    "eta": 1.0,
    "kappa": 0.1,
    "zeta_a": 0.1,
    "alpha": 0.8,
    "zeta_b": 1.1,
    "kappa_0": 0.05,
}

RUNS = {
    "pair_map": {"label": "strong", "system": STRONG_SYSTEM, "task": "pair-map"},
    "sweep": {
        "label": "bandwidth",
        "system": {**STRONG_SYSTEM, "alpha": 0.648, "zeta_b": 1.0},
        "task": "sweep",
        "options": {
            "axis": "zeta_b",
            "values": [0.1, 0.3, 1.0, 3.0, 10.0, 30.0],
            "ties": [{"target": "alpha", "source": "zeta_b", "ratio": 0.648}],
        },
    },
    "spectrum": {
        "label": "lossy",
        "unit": "GHz",
        "system": LOSSY_SYSTEM,
        "task": "spectrum",
        "options": {"n_points": 201},
    },
}

FILES = {
    "pair_map": "strong_pair_map.csv",
    "sweep": "bandwidth_sweep.csv",
    "spectrum": "lossy_spectrum.csv",
}


@pytest.fixture(scope="session")
def simulator_outputs(tmp_path_factory):
    """CSV files produced by one simulate run per studied regime."""
    out_dir = tmp_path_factory.mktemp("sim")
    for name, config in RUNS.items():
        config_path = out_dir / f"{name}.json"
        config_path.write_text(json.dumps(config))
        result = subprocess.run(
            ["simulate", str(config_path), "--out", str(out_dir)],
            capture_output=True,
            text=True,
            timeout=300,
        )
        assert result.returncode == 0, result.stdout + result.stderr
    paths = {name: out_dir / file_name for name, file_name in FILES.items()}
    for path in paths.values():
        assert path.is_file(), f"simulate did not write {path}"
    return paths
