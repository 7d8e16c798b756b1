"""Test run configuration."""

# pylint: disable=missing-docstring
import json
import os
import re
import tempfile

from chainmock import mocker

from stattest import Config, SchemaError, Settings
from stattest._config import CONFIG_ENV_VAR, resolve

from .utils import assert_raises


class ConfigTestCase:
    def test_defaults(self) -> None:
        settings = Settings()
        assert (settings.rank_tol, settings.qp_tol, settings.feas_tol) == (1e-9, 1e-9, 1e-8)
        assert settings.margin_tol == 1e-7
        assert settings.max_anft_switches == 16
        assert settings.max_certificate_clauses == 12
        assert settings.seed == 0
        assert settings.output == "text"

    def test_settings_validation(self) -> None:
        with assert_raises(ValueError, "Tolerance 'qp_tol' must be positive, got -1.0."):
            Settings(qp_tol=-1.0)
        with assert_raises(ValueError, "Guard 'max_ties' must be a positive integer, got 0."):
            Settings(max_ties=0)
        with assert_raises(ValueError, "Guard 'max_sat_vars' must be a positive integer, got 2.5."):
            Settings(max_sat_vars=2.5)  # type: ignore[arg-type]
        with assert_raises(ValueError, "Output format must be one of text, json, got 'xml'."):
            Settings(output="xml")

    def test_from_dict(self) -> None:
        settings = Settings.from_dict({"rank_tol": 1e-6, "output": "json"})
        assert settings.rank_tol == 1e-6
        assert settings.output == "json"
        with assert_raises(SchemaError, "Unknown configuration keys: colour, verbose."):
            Settings.from_dict({"verbose": True, "colour": "red", "seed": 3})

    def test_from_file(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "config.json")
            with open(path, "w", encoding="utf-8") as file:
                json.dump({"max_ties": 5}, file)
            assert Settings.from_file(path).max_ties == 5
            with open(path, "w", encoding="utf-8") as file:
                json.dump([1, 2], file)
            with assert_raises(SchemaError, re.compile("must contain a JSON object")):
                Settings.from_file(path)
            with open(path, "w", encoding="utf-8") as file:
                file.write("max_ties = 5")
            with assert_raises(SchemaError, re.compile("is not valid JSON")):
                Settings.from_file(path)

    def test_override_restores_previous_settings(self) -> None:
        Config.set(Settings(seed=4))
        with Config.override(seed=9, qp_tol=1e-6) as settings:
            assert settings.seed == 9
            assert Config.get().qp_tol == 1e-6
            with Config.override(seed=10):
                assert Config.get().seed == 10
                assert Config.get().qp_tol == 1e-6
            assert Config.get().seed == 9
        assert Config.get().seed == 4
        assert Config.get().qp_tol == 1e-9

    def test_override_rejects_invalid_values(self) -> None:
        with assert_raises(ValueError, "Tolerance 'rank_tol' must be positive, got 0."):
            with Config.override(rank_tol=0):
                pass
        assert Config.get().rank_tol == 1e-9

    def test_reset_reloads_defaults(self) -> None:
        Config.set(Settings(max_ties=2))
        assert Config.get().max_ties == 2
        Config.reset()
        assert Config.get().max_ties == 20

    def test_environment_variable(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "stattest.json")
            with open(path, "w", encoding="utf-8") as file:
                json.dump({"seed": 77, "margin_tol": 1e-5}, file)
            mocker(os.environ).mock("get").return_value(path).called_once_with(CONFIG_ENV_VAR)
            Config.reset()
            assert Config.get().seed == 77
            assert Config.get().margin_tol == 1e-5
        # the loaded settings stay active after the file is gone
        assert Config.get().seed == 77

    def test_empty_environment_variable_uses_defaults(self) -> None:
        mocker(os.environ).mock("get").return_value("").called_once_with(CONFIG_ENV_VAR)
        assert Config.load() == Settings()

    def test_resolve(self) -> None:
        assert resolve(0.5, "qp_tol") == 0.5
        with Config.override(qp_tol=1e-4):
            assert resolve(None, "qp_tol") == 1e-4
        assert resolve(None, "feas_tol") == 1e-8

    def test_replace(self) -> None:
        settings = Settings()
        changed = settings.replace(max_ties=3)
        assert changed.max_ties == 3
        assert settings.max_ties == 20
