"""
Field functions u(r, t) consumed by the diagnostics.

Closed-form solutions, solver trajectories and fields derived from them
share the BaseField interface; FieldFactory builds them by name.
"""

from .closed_form import BarenblattField, ConstantField, FastBlowupField, GiantField
from .derived import PowerField, RescaledField, TruncatedField
from .factory import FieldFactory, FieldKind
from .trajectory import TrajectoryField, as_field

# Import registry to auto-register all field kinds
from . import registry

__all__ = [
    "BarenblattField",
    "ConstantField",
    "FastBlowupField",
    "GiantField",
    "PowerField",
    "RescaledField",
    "TruncatedField",
    "FieldFactory",
    "FieldKind",
    "TrajectoryField",
    "as_field",
]
