"""
Channel Manager for Qubit Channel Presets

This module provides centralized access to the named channel presets and the
numerical defaults used by the solvers. Loaded YAML files are cached per name,
and user config files (JSON or YAML) are read through the same loader.
"""

import yaml
from pathlib import Path
from typing import Dict, List, Any, Union


class ChannelManager:
    """
    Singleton manager for channel presets and numerics.

    Caches loaded YAML configurations and provides access methods
    for the preset parameters and solver tolerances.
    """

    _configs: Dict[str, Dict[str, Any]] = {}
    _numerics: Dict[str, Any] = {}
    _config_dir = Path(__file__).parent / "channels"
    _numerics_path = Path(__file__).parent / "numerics.yaml"

    @classmethod
    def get_preset(cls, name: str) -> Dict[str, Any]:
        """
        Load and cache a named channel preset.

        Args:
            name: Preset name (e.g., 'svc', 'thermal')

        Returns:
            Dictionary with the raw channel config (``kind`` plus parameters)

        Raises:
            FileNotFoundError: If no preset file exists for the name
        """
        if name not in cls._configs:
            config_path = cls._config_dir / f"{name}.yaml"

            if not config_path.exists():
                available = ", ".join(cls.list_available_presets()) or "none"
                raise FileNotFoundError(
                    f"Preset '{name}' not found in {cls._config_dir} (available: {available})"
                )

            with open(config_path, 'r', encoding='utf-8') as f:
                cls._configs[name] = yaml.safe_load(f)

        # Callers get a copy so a validated config can't leak edits into the cache
        return dict(cls._configs[name])

    @classmethod
    def get_numerics(cls) -> Dict[str, Any]:
        """Get the cached numerical defaults (tolerances, grids, optimizer settings)."""
        if not cls._numerics:
            with open(cls._numerics_path, 'r', encoding='utf-8') as f:
                cls._numerics = yaml.safe_load(f)
        return cls._numerics

    @classmethod
    def get_section(cls, section: str) -> Dict[str, Any]:
        """Get one section of the numerics file, e.g. 'capacity'."""
        return cls.get_numerics()[section]

    @classmethod
    def load_file(cls, path: Union[str, Path]) -> Dict[str, Any]:
        """
        Read a user channel config. JSON is a subset of YAML, so both parse here.

        Raises:
            FileNotFoundError: If the file doesn't exist
            ValueError: If the document is not a mapping
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)

        if not isinstance(data, dict):
            raise ValueError(f"Config file {path} must contain a mapping, got {type(data).__name__}")
        return data

    @classmethod
    def clear_cache(cls) -> None:
        """Clear the configuration cache. Useful for testing."""
        cls._configs.clear()
        cls._numerics = {}

    @classmethod
    def list_available_presets(cls) -> List[str]:
        """List all available preset names based on config files."""
        if not cls._config_dir.exists():
            return []

        config_files = cls._config_dir.glob("*.yaml")
        return sorted(f.stem for f in config_files if f.is_file())


# Convenience functions
def get_preset(name: str) -> Dict[str, Any]:
    """Convenience function for getting a channel preset."""
    return ChannelManager.get_preset(name)


def get_numerics(section: str) -> Dict[str, Any]:
    """Convenience function for getting one numerics section."""
    return ChannelManager.get_section(section)
