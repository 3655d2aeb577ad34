"""Registry configuration: a small TOML file with strict validation.

Everything has a sensible default so the tools run without any file;
a config only narrows or redirects behavior (license policy, size caps,
report index location, edit-link repository).
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from .errors import ConfigError
from .metadata import DEFAULT_LICENSE_ALLOW_LIST, DEFAULT_MIN_ELEMENT_COUNT
from .packaging import DEFAULT_CAP_LADDER
from .rdf import Iri
from .vocab import DEFAULT_NAMESPACE

DEFAULT_CONFIG_FILENAME = "benchcat.toml"
DEFAULT_SOURCE_REPO_BASE = "https://github.com/benchcat/registry"


@dataclass(frozen=True)
class RegistryConfig:
    vocabulary_namespace: Iri = Iri(DEFAULT_NAMESPACE)
    license_allow_list: tuple[Iri, ...] = DEFAULT_LICENSE_ALLOW_LIST
    min_element_count: int = DEFAULT_MIN_ELEMENT_COUNT
    cap_ladder: tuple[int, ...] = DEFAULT_CAP_LADDER
    report_index_url: Optional[Iri] = None
    source_repo_base: Iri = Iri(DEFAULT_SOURCE_REPO_BASE)

    def __post_init__(self) -> None:
        if self.min_element_count < 0:
            raise ConfigError("min_element_count must be non-negative")
        for cap in self.cap_ladder:
            if cap <= 0:
                raise ConfigError("cap_ladder entries must be positive")
        if any(a >= b for a, b in zip(self.cap_ladder, self.cap_ladder[1:])):
            raise ConfigError("cap_ladder must be strictly increasing")


def _as_iri(value, key: str) -> Iri:
    if not isinstance(value, str):
        raise ConfigError(f"{key} must be a string IRI")
    try:
        return Iri(value)
    except Exception as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _as_int(value, key: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{key} must be an integer")
    return value


def parse_config(data: "dict[str, object]") -> RegistryConfig:
    known = {f.name for f in fields(RegistryConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs: dict[str, object] = {}
    if "vocabulary_namespace" in data:
        kwargs["vocabulary_namespace"] = _as_iri(data["vocabulary_namespace"], "vocabulary_namespace")
    if "license_allow_list" in data:
        raw = data["license_allow_list"]
        if not isinstance(raw, list):
            raise ConfigError("license_allow_list must be a list of IRIs")
        kwargs["license_allow_list"] = tuple(
            _as_iri(item, "license_allow_list") for item in raw
        )
    if "min_element_count" in data:
        kwargs["min_element_count"] = _as_int(data["min_element_count"], "min_element_count")
    if "cap_ladder" in data:
        raw = data["cap_ladder"]
        if not isinstance(raw, list):
            raise ConfigError("cap_ladder must be a list of integers")
        kwargs["cap_ladder"] = tuple(_as_int(item, "cap_ladder") for item in raw)
    if "report_index_url" in data:
        kwargs["report_index_url"] = _as_iri(data["report_index_url"], "report_index_url")
    if "source_repo_base" in data:
        kwargs["source_repo_base"] = _as_iri(data["source_repo_base"], "source_repo_base")
    return RegistryConfig(**kwargs)


def load_config(path: "str | Path | None" = None) -> RegistryConfig:
    """Read TOML config; a missing default file just means defaults."""
    if path is None:
        candidate = Path(DEFAULT_CONFIG_FILENAME)
        if not candidate.is_file():
            return RegistryConfig()
        path = candidate
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)
