"""
Exact SO(3) quantum invariants of 3-manifolds and FKB ideals of manifolds
with torus boundary
"""
import logging

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
