"""Annular Khovanov homology, the sl2 action and its framed moduli data."""
from .diagram import AnnularDiagram, ParseError, parse_morse_word, resolve, arc_diagram, surger, components
from .algebra import Generator, Label, TriDegree, apply_saddle, gradings, parse_generator
from .sl2 import Sl2Op, apply_J, theta, verify_sl2
from .complex import CubeComplex, build_ckh, build_cone, graded_euler, verify_d_squared
from .homology import HomologyTable, homology, induced_map, smith_normal_form, verify_les
from .moduli import (check_thin_props, edge_moduli, path_moduli, square_moduli,
                     verify_closure_3d, verify_squares)

__version__ = "0.1.0"
