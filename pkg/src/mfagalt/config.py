"""Run configuration (YAML)."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .context import CATEGORICAL, VariableSpec
from .corpus import TokenizerConfig
from .errors import ConfigError
from .numcore import DEFAULT_REL_TOL


@dataclass(frozen=True)
class SampleEntry:
    name: str
    responses: Path
    scores: Path
    stopwords: Path | None = None
    min_count: int = 1
    language: str = ""


@dataclass(frozen=True)
class RunConfig:
    samples: tuple
    variables: tuple
    supplementary: tuple = ()
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    dims: int | None = None
    rel_tol: float = DEFAULT_REL_TOL
    n_perm: int = 999
    seed: int = 0
    output: Path = Path("output")

    @property
    def mode(self) -> str:
        return "ca-galt" if len(self.samples) == 1 else "mfa-galt"


def _spec(d: dict, where: str) -> VariableSpec:
    if not isinstance(d, dict) or "name" not in d:
        raise ConfigError(f"{where}: each variable needs a 'name'")
    unknown = set(d) - {"name", "kind", "categories", "standardize", "invert_scale"}
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        return VariableSpec(
            name=str(d["name"]),
            kind=d.get("kind", "quantitative"),
            categories=tuple(d.get("categories", ())),
            standardize=bool(d.get("standardize", False)),
            invert_scale=None if d.get("invert_scale") is None else float(d["invert_scale"]),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _path(base: Path, value, what: str) -> Path:
    if value is None:
        raise ConfigError(f"missing path for {what}")
    p = Path(value)
    p = p if p.is_absolute() else base / p
    if not p.is_file():
        raise ConfigError(f"{what}: file not found: {p}")
    return p


def load_config(path: str | Path, **overrides) -> RunConfig:
    """Parse a YAML config. Relative paths resolve against the config's folder.

    ``overrides`` (dims, seed, output) take precedence over the file.
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, UnicodeDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    base = path.parent

    samples = []
    for i, s in enumerate(raw.get("samples") or []):
        where = f"samples[{i}]"
        if not isinstance(s, dict) or "name" not in s:
            raise ConfigError(f"{where}: needs a 'name'")
        min_count = s.get("min_count", 1)
        if not isinstance(min_count, int) or min_count < 1:
            raise ConfigError(f"{where}: min_count must be an integer >= 1")
        samples.append(
            SampleEntry(
                name=str(s["name"]),
                responses=_path(base, s.get("responses"), f"{where}.responses"),
                scores=_path(base, s.get("scores"), f"{where}.scores"),
                stopwords=None if s.get("stopwords") is None else _path(base, s["stopwords"], f"{where}.stopwords"),
                min_count=min_count,
                language=str(s.get("language", "")),
            )
        )
    if not samples:
        raise ConfigError("at least one sample is required")
    if len({s.name for s in samples}) != len(samples):
        raise ConfigError("sample names must be unique")

    variables = tuple(_spec(v, f"variables[{i}]") for i, v in enumerate(raw.get("variables") or []))
    if not variables:
        raise ConfigError("at least one active variable is required")
    supplementary = tuple(_spec(v, f"supplementary[{i}]") for i, v in enumerate(raw.get("supplementary") or []))
    for v in supplementary:
        if v.kind != CATEGORICAL:
            raise ConfigError(f"supplementary variable {v.name!r}: only categorical supplementaries are supported")
    names = [v.name for v in variables + supplementary]
    if len(set(names)) != len(names):
        raise ConfigError("variable names must be unique")

    tok = raw.get("tokenizer") or {}
    try:
        tokenizer = TokenizerConfig(
            lowercase=bool(tok.get("lowercase", True)),
            strip_punctuation=bool(tok.get("strip_punctuation", True)),
            min_token_chars=int(tok.get("min_token_chars", 1)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"tokenizer: {exc}") from None

    vals = {k: raw.get(k) for k in ("dims", "rel_tol", "n_perm", "seed", "output")}
    vals.update({k: v for k, v in overrides.items() if v is not None})
    try:
        dims = None if vals["dims"] is None else int(vals["dims"])
        rel_tol = DEFAULT_REL_TOL if vals["rel_tol"] is None else float(vals["rel_tol"])
        n_perm = 999 if vals["n_perm"] is None else int(vals["n_perm"])
        seed = 0 if vals["seed"] is None else int(vals["seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric setting: {exc}") from None
    if dims is not None and dims < 1:
        raise ConfigError("dims must be >= 1")
    if n_perm < 99:
        raise ConfigError("n_perm must be >= 99")
    out = Path(vals["output"] or "output")
    if not out.is_absolute() and overrides.get("output") is None:
        out = base / out
    return RunConfig(
        samples=tuple(samples),
        variables=variables,
        supplementary=supplementary,
        tokenizer=tokenizer,
        dims=dims,
        rel_tol=rel_tol,
        n_perm=n_perm,
        seed=seed,
        output=out,
    )
