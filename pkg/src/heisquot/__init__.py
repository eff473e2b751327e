"""Central quotients of Heisenberg groups over finite fields.

Exact arithmetic over Z_p and F_{p^e}, Brahana groups given by matrix
pencils, adjoint algebras, the family of codimension-2 quotients H/N of
H(F_{p^e}) with an isomorphism test and classification, and subgroup /
quotient profiles of small groups.
"""

__version__ = "0.1.0"

from heisquot.brahana import Pencil, descriptor, heisenberg_pencil  # noqa: E402
from heisquot.ff import FqField, find_irreducible  # noqa: E402
from heisquot.heisenberg import build, enum_codim2, quotient_pencil  # noqa: E402
from heisquot.isotest import classify_family, iso_test  # noqa: E402

__all__ = [
    "FqField",
    "Pencil",
    "__version__",
    "build",
    "classify_family",
    "descriptor",
    "enum_codim2",
    "find_irreducible",
    "heisenberg_pencil",
    "iso_test",
    "quotient_pencil",
]
