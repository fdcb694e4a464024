"""Dynamical and arithmetic degrees of translated isogenies ``tau_Q o f`` on ``E^d``.

Submodules:

* ``polyalgebra``: exact integer polynomials, resultants, Bezout certificates.
* ``torusmodel``: rational representation on a real torus, lattices, torsion checks.
* ``heightmodel``: Mordell-Weil coordinates, canonical heights, self-maps.
* ``degrees``: certified dynamical degrees, arithmetic degree estimates and the
  end-to-end equality check.
* ``scenario`` and ``cli``: scenario files, suite runs and reports.
"""

__version__ = "0.1.0"
