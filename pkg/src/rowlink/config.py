"""Pipeline configuration: thresholds and weights, stored as a flat key=value file."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .kg import DEFAULT_EXCLUDED_TYPES, DEFAULT_TEXT_WEIGHT


class ConfigError(Exception):
    """Raised for unreadable, unknown, or out-of-range configuration values."""


@dataclass
class PipelineConfig:
    surface_threshold: float = 0.8
    value_match_threshold: float = 0.9
    max_candidates_per_query: int = 3
    text_weight: float = DEFAULT_TEXT_WEIGHT
    excluded_type_iris: tuple[str, ...] = tuple(sorted(DEFAULT_EXCLUDED_TYPES))
    entity_iri_prefix: str = ""
    signal_weights: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0)
    softmax_temperature: float = 1.0
    renormalize_lookup: bool = True

    def validate(self) -> "PipelineConfig":
        if not 0.0 <= self.surface_threshold <= 1.0:
            raise ConfigError("surface_threshold must be in [0, 1]")
        if not 0.0 <= self.value_match_threshold <= 1.0:
            raise ConfigError("value_match_threshold must be in [0, 1]")
        if self.max_candidates_per_query < 1:
            raise ConfigError("max_candidates_per_query must be >= 1")
        if len(self.signal_weights) != 5:
            raise ConfigError("signal_weights must have exactly 5 entries")
        if sum(self.signal_weights) <= 0.0:
            raise ConfigError("signal_weights must sum to a positive value")
        if self.softmax_temperature <= 0.0:
            raise ConfigError("softmax_temperature must be positive")
        return self

    def save(self, path: str | Path) -> None:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                rendered = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            elif isinstance(value, float):
                rendered = repr(value)
            else:
                rendered = str(value)
            lines.append(f"{f.name} = {rendered}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        """Parse a flat key=value file; '#' starts a comment, unknown keys are errors."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = {f.name: f for f in fields(cls)}
        values: dict[str, object] = {}
        for lineno, raw_line in enumerate(text.splitlines(), start=1):
            line = _strip_comment(raw_line).strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw_value = line.partition("=")
            key = key.strip()
            raw_value = raw_value.strip()
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, raw_value, path, lineno)
        return cls(**values).validate()


def _strip_comment(line: str) -> str:
    # '#' only starts a comment at line start or after whitespace, so IRIs
    # containing fragments survive
    if line.lstrip().startswith("#"):
        return ""
    for i, ch in enumerate(line):
        if ch == "#" and i > 0 and line[i - 1] in " \t":
            return line[:i]
    return line


def _coerce(key: str, raw: str, path: str | Path, lineno: int) -> object:
    try:
        if key in ("surface_threshold", "value_match_threshold", "text_weight", "softmax_temperature"):
            return float(raw)
        if key == "max_candidates_per_query":
            return int(raw)
        if key == "signal_weights":
            return tuple(float(v.strip()) for v in raw.split(",") if v.strip())
        if key == "excluded_type_iris":
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        if key == "renormalize_lookup":
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from exc
