"""File formats: CSV data files and flat ``key = value`` cell configs.

CSV files are UTF-8 with a header row and '.' as decimal separator:

* counts:  ``year,count``
* losses:  ``index,severity``
* experts: ``expert_id,opinion``
* industry samples (for prior fitting): ``id,value``

A config file holds one ``key = value`` pair per line; ``#`` starts a comment.
Relative paths inside a config resolve against the config's directory.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .experts import NO_EXPERTS, ExpertPanel
from .frequency import FrequencyCellState
from .gig import GammaParams, GigParams
from .lognormal import LognormalCellState, NormalParams, xi_from_opinions_stdev
from .pareto import ParetoCellState
from .calibration import xi_from_opinions_moments

__all__ = [
    "DataFormatError",
    "ConfigError",
    "read_counts",
    "read_losses",
    "read_experts",
    "read_samples",
    "read_key_values",
    "CellConfig",
    "load_cell_config",
    "FREQUENCY",
    "LOGNORMAL",
    "PARETO",
]

FREQUENCY = "frequency-poisson"
LOGNORMAL = "severity-lognormal"
PARETO = "severity-pareto"
_KINDS = (FREQUENCY, LOGNORMAL, PARETO)

COUNTS_HEADER = ("year", "count")
LOSSES_HEADER = ("index", "severity")
EXPERTS_HEADER = ("expert_id", "opinion")
SAMPLES_HEADER = ("id", "value")


class DataFormatError(ValueError):
    pass


class ConfigError(ValueError):
    pass


def _read_csv(path, header: tuple[str, str], parse) -> list:
    path = Path(path)
    out = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None:
            raise DataFormatError(f"{path}: empty file, expected header {','.join(header)}")
        if tuple(c.strip().lower() for c in first) != header:
            raise DataFormatError(
                f"{path}:1: expected header {','.join(header)}, got {','.join(first)}"
            )
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DataFormatError(f"{path}:{line}: expected 2 fields, got {len(row)}")
            try:
                out.append(parse(row[1].strip()))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{line}: {exc}") from None
    return out


def _count(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(f"count must be >= 0, got {value}")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"value must be finite and > 0, got {text}")
    return value


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"value must be finite, got {text}")
    return value


def read_counts(path) -> list[int]:
    return _read_csv(path, COUNTS_HEADER, _count)


def read_losses(path) -> list[float]:
    return _read_csv(path, LOSSES_HEADER, _positive)


def read_experts(path) -> list[float]:
    return _read_csv(path, EXPERTS_HEADER, _finite)


def read_samples(path) -> list[float]:
    return _read_csv(path, SAMPLES_HEADER, _positive)


def read_key_values(path) -> dict[str, str]:
    path = Path(path)
    out: dict[str, str] = {}
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if key in out:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = value
    return out


_REQUIRED = {
    FREQUENCY: ("volume",),
    LOGNORMAL: ("obs_sigma",),
    PARETO: ("threshold",),
}
_PRIOR_KEYS = {
    "gamma": ("alpha0", "beta0"),
    "gig": ("nu0", "omega0", "phi0"),
    "normal": ("mu0", "sigma0"),
}
_ALLOWED_PRIORS = {
    FREQUENCY: ("gamma", "gig"),
    PARETO: ("gamma", "gig"),
    LOGNORMAL: ("normal",),
}


@dataclass
class CellConfig:
    """One model's settings; fields are present iff the model kind needs them."""

    kind: str
    prior: GammaParams | GigParams | NormalParams
    volume: float | None = None
    threshold: float | None = None
    obs_sigma: float | None = None
    xi: float | str | None = None
    data: Path | None = None
    experts: Path | None = None
    source: Path | None = field(default=None, repr=False)

    def panel(self, opinions) -> ExpertPanel:
        opinions = list(opinions)
        if not opinions:
            return NO_EXPERTS
        if self.xi is None:
            raise ConfigError(f"{self.source}: expert opinions given but no 'xi'")
        if self.xi == "from-opinions":
            if self.kind == LOGNORMAL:
                xi = xi_from_opinions_stdev(opinions)
            else:
                xi = xi_from_opinions_moments(opinions)
        else:
            xi = float(self.xi)
        return ExpertPanel(tuple(opinions), xi)

    def load_data(self) -> list:
        if self.data is None:
            return []
        return read_counts(self.data) if self.kind == FREQUENCY else read_losses(self.data)

    def load_experts(self) -> list[float]:
        return [] if self.experts is None else read_experts(self.experts)

    def build_state(self, data=None, opinions=None):
        """Model state from explicit data / opinions (or the files named in the config)."""
        data = self.load_data() if data is None else list(data)
        opinions = self.load_experts() if opinions is None else list(opinions)
        panel = self.panel(opinions)
        if self.kind == FREQUENCY:
            return FrequencyCellState.create(self.prior, self.volume, data, panel)
        if self.kind == PARETO:
            return ParetoCellState.create(self.prior, self.threshold, data, panel)
        return LognormalCellState.from_severities(self.prior, self.obs_sigma, data, panel)


def _float(cfg: dict, key: str, path) -> float:
    try:
        return float(cfg[key])
    except KeyError:
        raise ConfigError(f"{path}: missing key {key!r}") from None
    except ValueError:
        raise ConfigError(f"{path}: {key} = {cfg[key]!r} is not a number") from None


def config_from_mapping(cfg: dict[str, str], path=None) -> CellConfig:
    base = Path(path).parent if path is not None else Path(".")
    kind = cfg.get("kind")
    if kind not in _KINDS:
        raise ConfigError(f"{path}: 'kind' must be one of {', '.join(_KINDS)}, got {kind!r}")
    prior_kind = cfg.get("prior", "normal" if kind == LOGNORMAL else "gamma")
    if prior_kind not in _ALLOWED_PRIORS[kind]:
        raise ConfigError(f"{path}: prior {prior_kind!r} not allowed for {kind}")
    values = [_float(cfg, k, path) for k in _PRIOR_KEYS[prior_kind]]
    try:
        prior = {"gamma": GammaParams, "gig": GigParams, "normal": NormalParams}[prior_kind](*values)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    allowed = {"kind", "prior", "xi", "data", "experts", *_PRIOR_KEYS[prior_kind], *_REQUIRED[kind]}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"{path}: keys not used by {kind}/{prior_kind}: {', '.join(unknown)}")

    out = CellConfig(kind=kind, prior=prior, source=Path(path) if path else None)
    for key in _REQUIRED[kind]:
        value = _float(cfg, key, path)
        if not (math.isfinite(value) and value > 0.0):
            raise ConfigError(f"{path}: {key} must be > 0")
        setattr(out, key, value)
    if "xi" in cfg:
        xi = cfg["xi"]
        if xi != "from-opinions":
            xi = _float(cfg, "xi", path)
            if not xi > 0.0:
                raise ConfigError(f"{path}: xi must be > 0 or 'from-opinions'")
        out.xi = xi
    for key in ("data", "experts"):
        if cfg.get(key):
            setattr(out, key, base / cfg[key])
    return out


def load_cell_config(path) -> CellConfig:
    return config_from_mapping(read_key_values(path), path)
