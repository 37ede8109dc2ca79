"""
Registry for field kinds.

Automatically registers all available field adapters with the factory.
"""

from .closed_form import BarenblattField, ConstantField, FastBlowupField, GiantField
from .factory import FieldFactory, FieldKind
from .trajectory import TrajectoryField


def register_all():
    """Register all available field kinds"""
    FieldFactory.register(FieldKind.BARENBLATT, BarenblattField)
    FieldFactory.register(FieldKind.GIANT, GiantField)
    FieldFactory.register(FieldKind.FAST_BLOWUP, FastBlowupField)
    FieldFactory.register(FieldKind.CONSTANT, ConstantField)
    FieldFactory.register(FieldKind.TRAJECTORY, TrajectoryField)


# Auto-register on import
register_all()
