"""Executable models of CGW and ECGW categories.

Subpackages and modules:

* :mod:`ecgw.extcat` -- finite sets and finite M-sets as extensive categories
* :mod:`ecgw.cgw` -- squares, complements, star-pushouts and the axiom audits
* :mod:`ecgw.chain` -- chain complexes of finite sets and their maps
* :mod:`ecgw.exactqi` -- exact complexes and quasi-isomorphisms
* :mod:`ecgw.sdot` -- staircases, faces, degeneracies and extensions
* :mod:`ecgw.k0` -- Euler characteristics and K0 relation audits
* :mod:`ecgw.cli` -- the ``ecgw`` command
"""

__version__ = "0.1.0"
