import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


@pytest.fixture(scope="session")
def pack_dir(tmp_path_factory):
    from holomed.projection.sheets import generate_pack

    directory = tmp_path_factory.mktemp("shared-pack")
    generate_pack(directory, cell_size=32)
    return directory


@pytest.fixture
def server_config(tmp_path, pack_dir):
    from holomed.server.config import ServerConfig

    def make(**overrides):
        defaults = dict(
            host="127.0.0.1",
            port=0,
            store_dir=tmp_path / "store",
            pack_dir=pack_dir,
            fps=25,
        )
        defaults.update(overrides)
        return ServerConfig(**defaults)

    return make
