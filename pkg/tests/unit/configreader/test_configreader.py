"""Test the configreader module."""
from __future__ import annotations

from pathlib import Path

import pytest

from renyirange.config.configreader import ConfigReader
from renyirange.const import DEFAULT_CONFIG
from renyirange.errors import InputError
from tests.const import TEST_CONF_PATH_BROKEN, TEST_CONF_PATH_ERROR, TEST_CONF_PATH_PARTIAL


class TestConfigReader:
    """Test the configreader module."""

    def test_full_config(self, configreader: ConfigReader) -> None:
        """Test that every value of the full configuration is read."""
        config = configreader.config
        assert config["general"] == {"base": "2", "log_level": "DEBUG"}
        assert config["verify"] == {
            "seed": 11,
            "tolerance": 1e-10,
            "envelope_slack": 1e-2,
            "bin_width": 0.02,
            "batch_size": 1000,
        }
        assert config["export"] == {"samples_per_segment": 50, "resolution": 5}
        assert configreader.get("verify", "seed") == 11

    def test_partial_config(self) -> None:
        """Test that missing keys and sections come from the defaults."""
        config = ConfigReader(TEST_CONF_PATH_PARTIAL).config
        assert config["verify"]["seed"] == 3
        assert config["verify"]["bin_width"] == DEFAULT_CONFIG["verify"]["bin_width"]
        assert config["general"] == DEFAULT_CONFIG["general"]
        assert config["export"] == DEFAULT_CONFIG["export"]

    def test_no_config_file(self) -> None:
        """Test that the reader without a file holds the defaults."""
        config = ConfigReader().config
        assert config == {k: dict(v) for k, v in DEFAULT_CONFIG.items()}

    def test_defaults_not_shared(self) -> None:
        """Test that changing one configuration leaves the defaults alone."""
        ConfigReader().config["verify"]["seed"] = 99
        assert DEFAULT_CONFIG["verify"]["seed"] == 7

    def test_invalid_values(self) -> None:
        """Test the configreader with values outside the schema."""
        with pytest.raises(InputError, match="Invalid configuration at"):
            ConfigReader(TEST_CONF_PATH_ERROR)

    def test_broken_yaml(self) -> None:
        """Test the configreader with a file that is not valid YAML."""
        with pytest.raises(InputError, match="Error parsing configuration file"):
            ConfigReader(TEST_CONF_PATH_BROKEN)

    def test_wrong_config_file(self) -> None:
        """Test the configreader with a file that does not exist."""
        with pytest.raises(InputError, match="not found"):
            ConfigReader(Path("wrongfile.yaml"))

    def test_lowercase_log_level(self, tmp_path: Path) -> None:
        """Test that log levels are case insensitive and bases may be numbers."""
        path = tmp_path / "config.yaml"
        path.write_text("general:\n  base: 10\n  log_level: warning\n", encoding="utf-8")
        assert ConfigReader(path).config["general"] == {"base": "10", "log_level": "WARNING"}
