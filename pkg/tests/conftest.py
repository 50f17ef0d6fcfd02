import dataclasses
import os

import pytest

from corrspread.scenario import load_config, run_scenario

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def bundled_config(name, out_dir):
    cfg = load_config(os.path.join(CONFIG_DIR, f"{name}.cfg"))
    outputs = dataclasses.replace(cfg.outputs, directory=str(out_dir))
    return dataclasses.replace(cfg, outputs=outputs)


@pytest.fixture(scope="session")
def fig1_result(tmp_path_factory):
    cfg = bundled_config("fig1_prod", tmp_path_factory.mktemp("fig1"))
    return run_scenario(cfg)


@pytest.fixture(scope="session")
def fig3_result(tmp_path_factory):
    cfg = bundled_config("fig3_bell_pm5", tmp_path_factory.mktemp("fig3"))
    return run_scenario(cfg)


@pytest.fixture(scope="session")
def fig4_result(tmp_path_factory):
    cfg = bundled_config("fig4_critical_quench", tmp_path_factory.mktemp("fig4"))
    return run_scenario(cfg)


def grid_by_label(result, label):
    for grid in result.grids:
        if grid.label == label:
            return grid
    raise AssertionError(f"no grid labelled {label!r}")
