"""INI config files mirroring the CLI flags.

Layout: a ``[common]`` section for shared keys (seed, out, format, threads,
tol, timing) plus one section per subcommand.  Keys use the experiment config
field names; command-line flags override file values, which override
defaults.
"""

from __future__ import annotations

import configparser
import dataclasses


def load_config(path) -> dict[str, dict[str, str]]:
    """Read an INI file into a {section: {key: raw value}} mapping."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ValueError(f"malformed config file {path}: {exc}") from exc
    return {name: dict(parser.items(name)) for name in parser.sections()}


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in _BOOL_TRUE:
        return True
    if low in _BOOL_FALSE:
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _split(raw: str) -> list[str]:
    return [s for s in raw.replace(",", " ").split() if s]


def _coerce(raw: str, annotation) -> object:
    """Coerce a raw string to a dataclass field's (string) annotation."""
    ann = annotation if isinstance(annotation, str) else str(annotation)
    if ann.startswith("tuple[int"):
        return tuple(int(s) for s in _split(raw))
    if ann.startswith("tuple[float"):
        return tuple(float(s) for s in _split(raw))
    if ann.startswith("bool"):
        return parse_bool(raw)
    if ann.startswith("int"):
        return int(raw)
    if ann.startswith("float"):
        return float(raw)
    if ann.startswith("str"):
        return raw
    raise ValueError(f"cannot parse config value {raw!r} for field type {ann}")


def apply_section(cfg, mapping: dict[str, str] | None):
    """Copy of a config dataclass with the mapped fields replaced."""
    if not mapping:
        return cfg
    fields = {f.name: f for f in dataclasses.fields(cfg)}
    updates = {}
    for key, raw in mapping.items():
        name = key.replace("-", "_")
        if name not in fields:
            raise ValueError(f"unknown config key {key!r} for {type(cfg).__name__}")
        updates[name] = _coerce(raw, fields[name].type)
    return dataclasses.replace(cfg, **updates)
