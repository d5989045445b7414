#infrastructure/config/toml_config.py
from __future__ import annotations
from dataclasses import fields
from pathlib import Path
import sys
from typing import Any, Dict, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from domain.errors import InvalidParameter
from domain.models.chain_config import ChainConfig
from domain.models.model_params import PARAMS_BY_MODEL, ModelParams, params_from_mapping
from domain.models.study import StudyConfig


def read_toml(path: Path) -> Dict[str, Any]:
    with Path(path).open("rb") as fh:
        return tomllib.load(fh)


def model_sections(doc: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
    return {name: doc[name] for name in PARAMS_BY_MODEL if name in doc}


def load_model_params(path: Path, model: Optional[str] = None) -> Tuple[str, ModelParams]:
    """
    Parameters from a `[poisson]`, `[lgcp]`, `[strauss]` or `[dpp]` section.

    With several model sections, `model` picks one; keys must match field names exactly.
    """
    sections = model_sections(read_toml(path))
    if model is not None:
        name = "strauss" if model == "strauss-cond" else model
        if name not in sections:
            raise InvalidParameter(f"{path} has no [{name}] section")
        return name, params_from_mapping(name, sections[name])
    if len(sections) != 1:
        raise InvalidParameter(f"{path} must contain exactly one model section, found {sorted(sections)}")
    name, values = next(iter(sections.items()))
    return name, params_from_mapping(name, values)


def _kwargs_for(cls, table: Dict[str, Any], section: str) -> Dict[str, Any]:
    allowed = {f.name for f in fields(cls)}
    unknown = set(table) - allowed
    if unknown:
        raise InvalidParameter(f"[{section}] has unknown keys {sorted(unknown)}")
    return dict(table)


def chain_config_from(doc: Dict[str, Any]) -> ChainConfig:
    return ChainConfig(**_kwargs_for(ChainConfig, doc.get("chain", {}), "chain"))


def load_study_config(path: Path, out_dir: Optional[Path] = None) -> Tuple[StudyConfig, ChainConfig]:
    """`[study]` table plus exactly one model section holding the true parameters."""
    doc = read_toml(path)
    sections = model_sections(doc)
    if len(sections) != 1:
        raise InvalidParameter(f"{path} must contain exactly one model section, found {sorted(sections)}")
    name, values = next(iter(sections.items()))
    study = dict(doc.get("study", {}))
    study.pop("true_params", None)
    kwargs = _kwargs_for(StudyConfig, study, "study")
    for key in ("conditional", "statistics", "param_sources"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    if "out_dir" in kwargs:
        kwargs["out_dir"] = Path(kwargs["out_dir"])
    if out_dir is not None:
        kwargs["out_dir"] = Path(out_dir)
    cfg = StudyConfig(true_params=params_from_mapping(name, values), **kwargs)
    return cfg, chain_config_from(doc)
