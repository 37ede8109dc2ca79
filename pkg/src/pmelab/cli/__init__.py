"""
Command-line surface of the lab.
"""
