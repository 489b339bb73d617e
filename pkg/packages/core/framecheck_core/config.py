"""
Run configuration: a JSON file mirroring ValidationParams field names, with
nested `contact` and `fidelity` objects, plus KEY=VALUE overrides.
"""

import json
import logging

from pathlib import Path
from typing import Any, NamedTuple, TypeVar

from framecheck_core.contact_graph import ContactParams
from framecheck_core.errors import ConfigError
from framecheck_core.fidelity.params import FidelityParams
from framecheck_core.validators.params import ValidationParams


Record = TypeVar("Record", ValidationParams, ContactParams, FidelityParams)

_NESTED = ("contact", "fidelity")


class RunConfig(NamedTuple):
    validation: ValidationParams = ValidationParams()
    fidelity: FidelityParams = FidelityParams()


def _tupled(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_tupled(v) for v in value)
    return value


def _coerce(field: str, value: Any, default: Any) -> Any:
    value = _tupled(value)
    if isinstance(default, bool) or isinstance(default, str):
        if type(value) is not type(default):
            raise ConfigError(f"{field} must be a {type(default).__name__}")
        return value
    if isinstance(default, int | float):
        if isinstance(value, bool) or not isinstance(value, int | float):
            raise ConfigError(f"{field} must be a number, got {value!r}")
        return float(value) if isinstance(default, float) else value
    if isinstance(default, tuple) and not isinstance(value, tuple):
        raise ConfigError(f"{field} must be a list")
    return value


def _update(record: Record, values: dict[str, Any], prefix: str = "") -> Record:
    defaults = record._asdict()
    changes = {}
    for key, value in values.items():
        if key not in defaults or key in _NESTED:
            raise ConfigError(f"unknown configuration key '{prefix}{key}'")
        changes[key] = _coerce(prefix + key, value, defaults[key])
    return record._replace(**changes)


def config_from_dict(raw: dict[str, Any], base: RunConfig | None = None) -> RunConfig:
    base = base or RunConfig()
    raw = dict(raw)
    contact = raw.pop("contact", {})
    fidelity = raw.pop("fidelity", {})
    if not isinstance(contact, dict) or not isinstance(fidelity, dict):
        raise ConfigError("'contact' and 'fidelity' must be objects")
    validation = _update(base.validation, raw)
    validation = validation._replace(
        contact=_update(validation.contact, contact, "contact.")
    )
    return RunConfig(validation, _update(base.fidelity, fidelity, "fidelity."))


def load_config(path: Path, base: RunConfig | None = None) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config '{path}': {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config '{path}' is not valid JSON: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config '{path}' must hold an object")
    logging.info(f"Loaded configuration from {path}")
    return config_from_dict(raw, base)


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(config: RunConfig, overrides: list[str]) -> RunConfig:
    """
    Applies `KEY=VALUE` pairs in order; `contact.X` and `fidelity.X` reach
    the nested records.
    """
    for item in overrides:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override '{item}' is not KEY=VALUE")
        head, dot, tail = key.partition(".")
        value = _parse_value(text)
        if dot and head in _NESTED:
            config = config_from_dict({head: {tail: value}}, config)
        elif dot:
            raise ConfigError(f"unknown configuration key '{key}'")
        else:
            config = config_from_dict({key: value}, config)
    return config
