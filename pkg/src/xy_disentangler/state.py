"""Resolved-convention storage shared by the CLI and the tool server."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from .errors import ConventionError
from .models import ConventionChoice, ConventionResolution

logger = logging.getLogger(__name__)

DEFAULT_SIDECAR = Path("xy_disentangler_conventions.json")
SIDECAR_NAME = DEFAULT_SIDECAR.name


def sidecar_path(
    out: Optional[Union[str, Path]] = None,
    override: Optional[Union[str, Path]] = None,
) -> Path:
    """Where the convention record lives: explicit path, next to ``out``, or cwd."""
    if override is not None:
        return Path(override)
    if out is not None:
        return Path(out).parent / SIDECAR_NAME
    return DEFAULT_SIDECAR


class ConventionStore:
    """In-memory holder of the resolved convention with JSON persistence."""

    def __init__(self) -> None:
        self._resolution: Optional[ConventionResolution] = None
        self._source: Optional[str] = None

    def get(self) -> Optional[ConventionChoice]:
        return self._resolution.choice if self._resolution else None

    def get_resolution(self) -> Optional[ConventionResolution]:
        return self._resolution

    def set(self, resolution: ConventionResolution, source: str = "search") -> None:
        self._resolution = resolution
        self._source = source

    def load(self, path: Union[str, Path]) -> ConventionResolution:
        """Read a sidecar file; anything unreadable is a ConventionError."""
        path = Path(path)
        try:
            resolution = ConventionResolution.model_validate_json(path.read_text())
        except (OSError, ValueError, ValidationError) as e:
            raise ConventionError(f"cannot read convention file {path}: {e}") from e
        self.set(resolution, source=str(path))
        logger.debug("loaded conventions %s from %s", resolution.choice.label, path)
        return resolution

    def save(self, path: Union[str, Path]) -> Path:
        if self._resolution is None:
            raise ConventionError("no resolved convention to save")
        path = Path(path)
        path.write_text(self._resolution.model_dump_json(indent=2) + "\n")
        logger.info("wrote conventions to %s", path)
        return path

    def resolve(
        self,
        path: Optional[Union[str, Path]] = None,
        reresolve: bool = False,
        n: int = 4,
    ) -> ConventionResolution:
        """Return the stored record, reading or searching only when needed.

        With a ``path`` an existing file is reused and a fresh search is
        written back to it.
        """
        if self._resolution is not None and not reresolve:
            return self._resolution
        if path is not None and Path(path).exists() and not reresolve:
            return self.load(path)

        from .builder import search_conventions

        resolution = search_conventions(n)
        self.set(resolution)
        if path is not None:
            self.save(path)
        return resolution

    def get_stats(self) -> Dict[str, Any]:
        return {
            "resolved": self._resolution is not None,
            "choice": self._resolution.choice.label if self._resolution else None,
            "source": self._source,
        }

    def to_json(self) -> str:
        return json.dumps(
            {
                "resolution": (
                    self._resolution.model_dump(mode="json") if self._resolution else None
                ),
                "stats": self.get_stats(),
            },
            indent=2,
        )

    def clear_all(self) -> None:
        self._resolution = None
        self._source = None


convention_store = ConventionStore()
