"""Exact computation of generators of rectangular W-algebras of gl_N.

Modules: ``coeff`` (the field Q(k)), ``liealg`` (gl_N, gradings, invariant
forms), ``pbw`` (enveloping and tensor algebras, column determinants),
``vertex`` (the vertex superalgebra V^k(a)), ``brst`` (the BRST derivation),
``walgebra`` (generators, Miura map, checks) and ``cli``.
"""

from .coeff import K, Scalar
from .liealg import Shape
from .walgebra import extract_generators

__version__ = "0.1.0"

__all__ = ["K", "Scalar", "Shape", "extract_generators", "__version__"]
