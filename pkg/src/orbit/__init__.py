"""Matrix inequalities up to unitary orbits.

Submodules:

* ``linalg``: Hermitian spectral tools, Löwner order, JSON codecs
* ``functions``: scalar functions with domain and convexity metadata
* ``maps``: positive linear maps and their dilations
* ``witnesses``: unitaries certifying orbit-type operator inequalities
* ``functionals``: norms, determinants and trace-level statements
* ``generators``, ``suites``, ``harness``, ``cli``: randomized checking
"""
from orbit.functions import ScalarFunction, parse_function
from orbit.linalg import TAU_ORDER, TAU_UNITARY
from orbit.witnesses import WitnessCertificate

__version__ = "0.1.0"

__all__ = ["ScalarFunction", "parse_function", "TAU_ORDER", "TAU_UNITARY", "WitnessCertificate"]
