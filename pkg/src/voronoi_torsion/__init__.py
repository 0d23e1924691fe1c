"""Torsion in Voronoi-Koecher homology of congruence subgroups.

Subpackages roughly follow the data flow: field catalog and ideal
arithmetic, perfect-form enumeration and the cell complex, exact sparse
linear algebra, closed-form analytic constants, and the pipeline that ties
them together behind the command line interface.
"""

__version__ = "0.1.0"
