# testing/test_config.py
import pytest

import config
from services import battery_service, elementary_service, group_service, units_service, words_service


def test_services_read_settings_from_config():
    assert battery_service.BATTERY_ORDERS is config.BATTERY_ORDERS
    assert battery_service.BATTERY_GROUPS is config.BATTERY_GROUPS
    assert words_service.WORD_LENGTH == config.WORD_LENGTH
    assert words_service.CORPUS_SIZE == config.CORPUS_SIZE
    assert elementary_service.SAMPLES == config.SAMPLES
    assert group_service.MAX_GROUP_ORDER == config.MAX_GROUP_ORDER
    assert units_service.IDENTIFY_MAX_ORDER == config.IDENTIFY_MAX_ORDER


def test_battery_orders_cover_the_quadratic_range():
    for d in range(1, 11):
        assert f"Zsqrt:{d}" in config.BATTERY_ORDERS


def test_validate_config_accepts_defaults():
    config.validate_config()


@pytest.mark.parametrize("name", ["SAMPLES", "WORD_LENGTH", "CORPUS_SIZE"])
def test_validate_config_rejects_non_positive(monkeypatch, name):
    monkeypatch.setattr(config, name, 0)
    with pytest.raises(RuntimeError):
        config.validate_config()


def test_validate_config_rejects_unknown_log_level(monkeypatch):
    monkeypatch.setattr(config, "LOG_LEVEL", "CHATTY")
    with pytest.raises(RuntimeError):
        config.validate_config()
