"""Model loading and registry management."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError

from flopdt.errors import ConfigurationError
from flopdt.lattice.model import FlopModel, ModelSummary

logger = logging.getLogger(__name__)

MODEL_SUFFIXES = (".yaml", ".yml", ".conf", ".cfg", ".txt")

CONIFOLD = {
    "name": "conifold",
    "description": "Local conifold: one (-1,-1) curve C, no classes from Y",
    "rank_n1": 1,
    "exceptional_coords": [0],
    "effective_generators": [[1]],
    "euler_char": 2,
    "h_pairing": [1],
    "y_pairing": [0],
    "nc_rank": 1,
    "l_pairing": [1],
    "fiber_cycles": [[1]],
    "n_min_quadratic": 2,
}


def _parse_scalar(raw: str) -> Any:
    text = raw.strip()
    if not text:
        return ""
    try:
        return int(text)
    except ValueError:
        return text


def _parse_vector(raw: str) -> List[Any]:
    parts = [part.strip() for part in raw.split(",") if part.strip()]
    try:
        return [int(part) for part in parts]
    except ValueError:
        return parts


def parse_key_value(text: str) -> Dict[str, Any]:
    """
    Parse the plain-text ``key = value`` format.

    Vectors are comma-separated integers, lists of vectors are separated by
    ``;`` and tables use ``key: value`` entries separated by ``;``. Lines
    starting with ``#`` are comments.
    """
    data: Dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(
                f"Line {number}: expected 'key = value'", {"line": line}
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if ":" in value and key in ("n_min", "n_min_table"):
            table: Dict[str, int] = {}
            for entry in value.split(";"):
                if not entry.strip():
                    continue
                beta, _, bound = entry.partition(":")
                table[",".join(str(c) for c in _parse_vector(beta))] = int(bound)
            data[key] = table
        elif ";" in value:
            data[key] = [_parse_vector(chunk) for chunk in value.split(";") if chunk.strip()]
        elif "," in value:
            data[key] = _parse_vector(value)
        else:
            data[key] = _parse_scalar(value)
    return _normalise_vector_fields(data)


def _normalise_vector_fields(data: Dict[str, Any]) -> Dict[str, Any]:
    # a single-entry vector is read as a scalar by the plain-text format
    for key in (
        "exceptional_coords",
        "h_pairing",
        "H_pairing",
        "y_pairing",
        "Y_pairing",
        "l_pairing",
        "L_pairing",
    ):
        if isinstance(data.get(key), int):
            data[key] = [data[key]]
    for key in ("effective_generators", "fiber_cycles"):
        value = data.get(key)
        if isinstance(value, int):
            data[key] = [[value]]
        elif isinstance(value, list) and value and isinstance(value[0], int):
            data[key] = [value] if key == "fiber_cycles" else [[c] for c in value]
    return data


def read_config_file(path: str | Path) -> Dict[str, Any]:
    """Read a YAML or key=value document into a plain dict."""
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"Cannot read {config_path}: {exc}") from exc
    if config_path.suffix in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"YAML parse error in {config_path}: {exc}") from exc
        return data or {}
    return parse_key_value(text)


def load_model_file(path: str | Path) -> FlopModel:
    data = read_config_file(path)
    if not data:
        raise ConfigurationError(f"Empty model file: {path}")
    data.setdefault("name", Path(path).stem)
    try:
        return FlopModel.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(
            f"Invalid model in {path}", {"validation": exc.errors(include_url=False)}
        ) from exc


class ModelRegistry:
    """Registry for managing loaded geometric models."""

    def __init__(self) -> None:
        self._models: Dict[str, FlopModel] = {}
        self._loaded = False
        self.register(FlopModel.model_validate(CONIFOLD))

    def register(self, model: FlopModel) -> None:
        self._models[model.name] = model

    def load_from_directory(self, models_dir: str | Path) -> None:
        """
        Load all model files from the specified directory.

        Args:
            models_dir: Path to directory containing model files

        Raises:
            ConfigurationError: If a model file fails to parse or validate
        """
        models_path = Path(models_dir)
        if not models_path.exists():
            logger.warning(f"Models directory not found: {models_dir}")
            return

        if not models_path.is_dir():
            logger.error(f"Models path is not a directory: {models_dir}")
            return

        loaded_models = []
        for model_file in sorted(models_path.iterdir()):
            if model_file.suffix not in MODEL_SUFFIXES:
                continue
            try:
                model = load_model_file(model_file)
            except ConfigurationError as e:
                logger.error(f"Model error in {model_file}: {e}")
                raise
            self.register(model)
            loaded_models.append(model.name)
            logger.debug(f"Loaded model: {model.name} from {model_file}")

        self._loaded = True
        if loaded_models:
            logger.info(f"Models loaded: {', '.join(loaded_models)}")
        else:
            logger.info("No model files found; built-ins only")

    def get(self, name: str) -> Optional[FlopModel]:
        return self._models.get(name)

    def list_models(self) -> List[ModelSummary]:
        return [
            ModelSummary(
                name=model.name,
                rank_n1=model.rank_n1,
                euler_char=model.euler_char,
                description=model.description,
            )
            for model in self._models.values()
        ]

    def get_available_ids(self) -> List[str]:
        return sorted(self._models.keys())

    def is_loaded(self) -> bool:
        return self._loaded

    def clear(self) -> None:
        """Drop file-loaded models; the built-in conifold stays."""
        self._models.clear()
        self._loaded = False
        self.register(FlopModel.model_validate(CONIFOLD))


_registry: Optional[ModelRegistry] = None


def get_model_registry() -> ModelRegistry:
    """Get the global model registry instance."""
    global _registry
    if _registry is None:
        _registry = ModelRegistry()
    return _registry


def resolve_model(name_or_path: str) -> FlopModel:
    """Look up a registered model by name, falling back to a file path."""
    registry = get_model_registry()
    model = registry.get(name_or_path)
    if model is not None:
        return model
    path = Path(name_or_path)
    if path.is_file():
        return load_model_file(path)
    raise ConfigurationError(
        f"Unknown model: {name_or_path}",
        {"available": registry.get_available_ids()},
    )
