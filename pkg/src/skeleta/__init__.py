"""Local equivariant mirror symmetry on simplicial skeleta.

Submodules: ``simplicial`` (complexes and components), ``linalg`` (exact
sparse linear algebra), ``lincat`` and ``twisted`` (linear categories and
twisted complexes), ``koszul``, ``kmonomial`` (axiom checks), ``posetalg``
(the A-side model), ``toric`` (the B-side model), ``flow`` (numerical
Hamiltonian flow) and ``cli``.
"""
from .errors import (GenerationFailure, InputError, NotAComplex, NotAFace, NotClosed, OnSingularLocus,
                     SingularCrossing, SkeletaError)
from .simplicial import Face, SimplicialComplex

__version__ = "0.1.0"

__all__ = ["Face", "SimplicialComplex", "SkeletaError", "InputError", "NotAFace", "NotAComplex",
           "NotClosed", "GenerationFailure", "OnSingularLocus", "SingularCrossing", "__version__"]
