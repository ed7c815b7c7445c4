import pytest
from pydantic import ValidationError

from vilenkin_lab.config import Settings


def test_defaults():
    s = Settings(_env_file=None)
    assert s.character_table_cap == 4096
    assert s.identity_tolerance == 1e-9
    assert s.log_level == "INFO"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("VILENKIN_EXHAUSTIVE_CAP", "128")
    monkeypatch.setenv("VILENKIN_LOG_LEVEL", "debug")
    s = Settings(_env_file=None)
    assert s.exhaustive_cap == 128
    assert s.log_level == "DEBUG"


def test_caps_must_be_positive(monkeypatch):
    monkeypatch.setenv("VILENKIN_DIRECT_CONVOLUTION_CAP", "0")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)
