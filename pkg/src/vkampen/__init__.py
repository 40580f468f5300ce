"""Solvers for bounded/precise word problems over two presentation families,
minimal van Kampen diagram construction, a pseudobracket certificate
calculus, and exact homotopy areas of closed lattice and polygonal curves.
"""

from .words import (
    BaumslagSolitar,
    CyclicProducts,
    ExponentSet,
    Presentation,
    Word,
    free_reduce,
    is_trivial,
    parse_word,
    format_word,
    subword,
    INF,
)
from .dpcyclic import (
    Mu2Solver,
    bounded_wp,
    has_property_e,
    minimal_diagram_cyclic,
    mu2,
    mu2_lex,
    precise_wp,
    spelling_length,
    width,
)
from .dpbs import (
    BsSolver,
    LambdaMu,
    bounded_wp_bs,
    lambda_mu,
    minimal_diagram_bs,
    mu3,
    precise_wp_bs,
    quadratic_face_bound,
)
from .diagram import (
    Band,
    BoundaryLengthSum,
    Diagram,
    FaceCount,
    FacesWithLabel,
    TauSpec,
)
from .brackets import (
    FinalStats,
    SizeBound,
    apply_op,
    build_diagram,
    default_size_bound,
    ops_from_text,
    ops_to_text,
    search_min_faces,
    verify_sequence,
)
from .lattice import LatticePath, apply_eh, homotopy_sequence, label_path, m2, shoelace_simple, winding_area
from .polycurve import (
    PolyCurve,
    approx_area,
    approx_path,
    area_k,
    area_with_denominator,
    gen_prime_curve,
    staircase,
    t_length,
    tri_hex_area,
)

__version__ = "0.1.0"
