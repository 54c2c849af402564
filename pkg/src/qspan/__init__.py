"""qspan: exact-arithmetic groupoidification toolkit.

Finite permutation groups and G-sets, action groupoids, spans composed by
(weak) pullback, exact rational degroupoidification, presheaves on
groupoids, and machine verification of Hecke-algebra structure on flag
complexes over prime fields.
"""

__version__ = "0.1.0"
