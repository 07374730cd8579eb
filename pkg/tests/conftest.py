import os

import pytest

from mlg import harness

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def config_path(name):
    return os.path.join(CONFIG_DIR, name)


@pytest.fixture(scope="session")
def sl2_n2_model():
    return harness.build_model(harness.bundled_datum("sl2"),
                               harness.q_form_for("sl2", 2), 2, 5,
                               name="sl2_q5_n2")


@pytest.fixture(scope="session")
def torus_sl2_n2_model():
    return harness.build_model(harness.bundled_datum("torus_sl2"),
                               harness.q_form_for("torus_sl2", 2), 2, 5,
                               name="torus_sl2_q5_n2")
