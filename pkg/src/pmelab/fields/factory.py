"""
Factory for creating field functions by name.

Implements the Factory Pattern so run configs can name a field kind and
its parameters without importing the adapter classes.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Type

from ..core.base import BaseField, PmeParams
from ..core.exceptions import ConfigurationException


class FieldKind(str, Enum):
    """Registered field kinds"""
    BARENBLATT = "barenblatt"
    GIANT = "giant"
    FAST_BLOWUP = "fast_blowup"
    CONSTANT = "constant"
    TRAJECTORY = "trajectory"


class FieldFactory:
    """Factory for creating field functions"""

    _fields: Dict[FieldKind, Type[BaseField]] = {}

    @classmethod
    def register(cls, kind: FieldKind, field_class: Type[BaseField]):
        """Register a new field kind"""
        cls._fields[kind] = field_class

    @classmethod
    def create(cls, kind: str, pme: PmeParams, params: Optional[Dict[str, Any]] = None) -> BaseField:
        """Create a field instance from its kind and parameters"""
        try:
            kind = FieldKind(kind)
        except ValueError:
            kind = None
        if kind not in cls._fields:
            raise ConfigurationException(
                f"Field kind not registered. Available kinds: {[k.value for k in cls._fields]}",
                config_key="kind",
            )
        return cls._fields[kind].from_config(pme, params or {})

    @classmethod
    def get_available_kinds(cls) -> List[FieldKind]:
        return list(cls._fields.keys())

    @classmethod
    def is_registered(cls, kind: FieldKind) -> bool:
        return kind in cls._fields
