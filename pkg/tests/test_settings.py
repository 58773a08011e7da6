import pytest
from pydantic import ValidationError

from gasket.settings import Settings, get_settings, set_option, settings_context

settings = get_settings()


def test_settings_context_preserves_global_setting():
    """
    Test that using the settings_context() context manager
    does not permanently change a global setting.
    """
    num_samples = settings.NUM_SAMPLES

    with settings_context(num_samples=5):
        assert settings.NUM_SAMPLES == 5

    assert settings.NUM_SAMPLES == num_samples, f"{settings=}"


def test_settings_context_restores_after_errors():
    oracle_cap = settings.ORACLE_MAX_LEVEL
    with pytest.raises(RuntimeError):
        with settings_context(oracle_max_level=2):
            raise RuntimeError("boom")
    assert settings.ORACLE_MAX_LEVEL == oracle_cap


def test_unknown_setting():
    with pytest.raises(ValueError, match="not a valid setting"):
        set_option("display_mode", "plain")


@pytest.mark.parametrize(
    "key, value",
    [
        ("NUM_SAMPLES", -1),
        ("DEFAULT_TOLERANCE", 0),
        ("ORACLE_MAX_LEVEL", 13),
    ],
)
def test_invalid_values_are_rejected(key: str, value):
    before = getattr(settings, key)
    with pytest.raises(ValidationError):
        set_option(key, value)
    assert getattr(settings, key) == before


def test_environment_prefix(monkeypatch):
    monkeypatch.setenv("GASKET_NUM_SAMPLES", "7")
    monkeypatch.setenv("GASKET_SVG_FILL", "#000000")
    fresh = Settings()
    assert fresh.NUM_SAMPLES == 7
    assert fresh.SVG_FILL == "#000000"
