"""Euler characteristic transforms of embedded simplicial complexes."""
from .align import AlignmentReport, center, ect_distance, pca_align, sect_distance
from .complex import (
    ComplexError,
    EmbeddedComplex,
    Violation,
    build_complex,
    euler_characteristic,
    validate,
)
from .directions import (
    Direction,
    DirectionBudget,
    DirectionSet,
    direction_budget,
    fibonacci_sphere,
    uniform_circle,
)
from .filtration import EulerCurve, ecc, height, sublevel
from .ingest import (
    ParseError,
    RasterImage,
    ScalarField,
    complex_from_binary_image,
    field_from_grayscale_image,
    read_off,
    read_pgm,
    read_simplex_list,
    write_pgm,
    write_simplex_list,
)
from .transforms import (
    ECTMatrix,
    SECT,
    DetectSurface,
    SmoothCurve,
    detect,
    ect,
    lect,
    sect,
    sect_curve,
    select,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "center",
    "ect_distance",
    "pca_align",
    "sect_distance",
    "ComplexError",
    "EmbeddedComplex",
    "Violation",
    "build_complex",
    "euler_characteristic",
    "validate",
    "Direction",
    "DirectionBudget",
    "DirectionSet",
    "direction_budget",
    "fibonacci_sphere",
    "uniform_circle",
    "EulerCurve",
    "ecc",
    "height",
    "sublevel",
    "ParseError",
    "RasterImage",
    "ScalarField",
    "complex_from_binary_image",
    "field_from_grayscale_image",
    "read_off",
    "read_pgm",
    "read_simplex_list",
    "write_pgm",
    "write_simplex_list",
    "ECTMatrix",
    "SECT",
    "DetectSurface",
    "SmoothCurve",
    "detect",
    "ect",
    "lect",
    "sect",
    "sect_curve",
    "select",
]
