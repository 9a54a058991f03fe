"""Run configuration: defaults, key=value files and command-line overrides."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import catalog
from .errors import ConfigError

SUITES = ("algebra", "nk-identities", "curve", "variation", "index", "cone")
SUITE_CHOICES = SUITES + ("all",)

# tolerance tiers; every check names the tier it is judged against
DEFAULT_TOLERANCES = {
    "algebra": 1e-12,
    "coassociative": 1e-10,
    "identity": 1e-7,
    "structure": 1e-5,
    "symmetry": 1e-7,
    "ricci": 1e-5,
    "mean_curvature": 1e-6,
    "hopf": 1e-6,
    "orthogonality": 1e-8,
    "umbilicity": 1e-6,
    "rigidity": 1e-6,
    "master": 1e-3,
    "shape_ricci": 1e-5,
    "weitzenbock": 1e-4,
    "boundary_term": 1e-4,
    "kernel": 1e-3,
    "kernel_singular": 1e-5,
    "cone": 1e-5,
    "agreement": 1e-7,
    "contraction": 1e-8,
    "associative": 1e-7,
}


def _power_of_two(n: int) -> bool:
    return n >= 16 and n & (n - 1) == 0


@dataclass
class RunConfig:
    suite: str = "all"
    catalog_ids: tuple = ()
    seed: int = 0
    nodes: int = 64
    index_nodes: int = 32
    index_degree: int = 2
    samples: int = 100
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: str = "nklab-report"
    parallel: bool = False

    def validate(self) -> "RunConfig":
        if self.suite not in SUITE_CHOICES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITE_CHOICES)}")
        for cid in self.catalog_ids:
            catalog.get(cid)
        for name in ("nodes", "index_nodes"):
            if not _power_of_two(getattr(self, name)):
                raise ConfigError(f"{name} must be a power of two >= 16, got {getattr(self, name)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.index_degree < 0 or self.samples < 1:
            raise ConfigError("index_degree must be >= 0 and samples >= 1")
        for k, v in self.tolerances.items():
            if k not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance tier {k!r}")
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive")
        return self

    @property
    def suites(self) -> tuple:
        return SUITES if self.suite == "all" else (self.suite,)

    def tol(self, tier: str) -> float:
        return self.tolerances[tier]

    def selected(self, default: tuple) -> tuple:
        """Catalog ids a suite should visit: the user's selection, else ``default``."""
        return tuple(self.catalog_ids) if self.catalog_ids else default

    def to_dict(self) -> dict:
        d = asdict(self)
        d["catalog_ids"] = list(self.catalog_ids)
        d.pop("output_path")
        d.pop("parallel")
        return d


def parse_assignment(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def apply(cfg: RunConfig, key: str, value: str) -> RunConfig:
    """Return ``cfg`` with one key=value setting applied."""
    try:
        if key.startswith("tol."):
            tols = dict(cfg.tolerances)
            tols[key[4:]] = float(value)
            return replace(cfg, tolerances=tols)
        if key in ("seed", "nodes", "index_nodes", "index_degree", "samples"):
            return replace(cfg, **{key: int(value)})
        if key == "catalog":
            return replace(cfg, catalog_ids=tuple(x for x in value.split(",") if x))
        if key == "suite":
            return replace(cfg, suite=value)
        if key == "out":
            return replace(cfg, output_path=value)
        if key == "parallel":
            return replace(cfg, parallel=value.lower() in ("1", "true", "yes"))
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    raise ConfigError(f"unknown config key {key!r}")


def load_file(path, cfg: RunConfig | None = None) -> RunConfig:
    """Read a flat key=value file; blank lines and ``#`` comments are skipped."""
    cfg = cfg or RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            cfg = apply(cfg, *parse_assignment(line))
    return cfg
