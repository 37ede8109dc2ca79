"""
PME Lab
Numerical laboratory for unbounded supercaloric functions of the porous medium equation
"""

__version__ = "0.1.0"
