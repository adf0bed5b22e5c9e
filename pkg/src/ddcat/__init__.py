"""Word problem for freely generated square-cell structures.

Expressions built from square cells with two compositions are decided
equal or not by translating them to layered wire diagrams and normalizing
under exchange moves; admissible diagrams rebuild planar tilings, whose
guillotine decomposition detects pinwheel arrangements.
"""

from .diagram2 import (LayeredDiagram, Level, Sig2, TwoGenType, Wire, WireWord,
                       is_admissible, juxtapose, level_word_at, stack,
                       validate_diagram)
from .errors import (AnchorMismatch, CompositionError, DdcatError,
                     GenerationError, IllegalPosition, NotAdmissible,
                     NotRectangular, NotSwappable, OracleOverflow, ParseError,
                     RangeError, SignatureMismatch, TypeMismatch,
                     UnknownGenerator, ValidationError)
from .expr import (CellExpr, Gen, HComp, HId, VComp, VId, boundary_of,
                   leaf_count, parse_expr, print_expr, random_expr)
from .normalize import (NormalForm, SwapKind, bfs_class, decide_eq_diagrams,
                        decide_eq_exprs, normalize, swap_levels)
from .signature import (CellBoundary, DoubleSignature, HWord, VWord,
                        emit_signature, factor_at, load_signature,
                        make_signature, word_endpoints)
from .tiling import (Cell, NotBinaryComposable, PartialTiling, UNKNOWN,
                     empty_tiling, extract_expr, glue, gluing_positions,
                     is_binary_composable, reconstruct, tiling_from_doc,
                     tiling_to_doc, tilings_equivalent)
from .translate import translate_expr, translate_signature

__version__ = "0.1.0"
