"""
Test suite for the porous medium lab
"""
