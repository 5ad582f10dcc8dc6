"""Symbolic fundamental-group combinatorics of shrinking wedges."""

from .summands import SummandSpec, TableGroup, WedgeConfig, load_config, parse_config
from .freeprod import FiniteWord, Letter, decompose_nt, multiply, invert, project, reduce, parse_word, format_word
from .transfinite import parse_expr, format_expr, project_expr, equal_up_to, terminal_summand
from .covers import CopyId, bonding_image, tree_translate, stabilize, build_atlas, emit_atlas_dot
from .whisker import FiberNbhd, ThetaElement, in_nbhd, in_theta_image, add_theta, load_theta

__version__ = "0.1.0"
