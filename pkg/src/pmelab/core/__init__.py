"""
Core building blocks: shared types, constants, exceptions and logging.
"""
