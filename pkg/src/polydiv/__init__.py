"""Exact computations with proper polyhedral divisors."""
from .base import BaseVariety, FinitePoint, INFINITY, RationalFunction, RayDivisor, SemilinearBaseMap
from .convex import Cone, Empty, Quasifan, TailedPolyhedron
from .exactnum import QQ, Field, Poly, QuadElement
from .lattice import LatticeMorphism, SplitSequence, smith_normal_form, smith_split
from .ppdiv import Plurifunction, PolyhedralDivisor, PPDivMorphism, compose, is_morphism, is_proper
from .algebra import graded_piece, hilbert_table
from .downgrade import DowngradeInput, downgrade
from .galois import SemilinearAction, descent_dimensions, is_galois_action, torus_form_candidates

__version__ = "0.1.0"
