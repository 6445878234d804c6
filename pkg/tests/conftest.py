from __future__ import annotations

import pytest

from qsd import Strategy


@pytest.fixture
def gaussian() -> Strategy:
    return Strategy.pure(0, 1.0, 0.0)


@pytest.fixture(autouse=True)
def _isolated_out_dir(tmp_path, monkeypatch):
    # keep CLI runs from leaking into the working tree
    monkeypatch.setenv("QSD_OUT_DIR", str(tmp_path / "runs"))
