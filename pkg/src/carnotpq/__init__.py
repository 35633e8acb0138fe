"""Exact algebra for product-quotient Carnot groups.

Modules: ``field`` and ``linalg`` (exact scalars and linear algebra over
Q(sqrt d)), ``lie`` (graded Lie algebras), ``structure`` (Heisenberg
recognition), ``product_quotient`` (presentations and their automorphisms),
``forms`` (left-invariant exterior calculus), ``pullback`` (pullback
identities), ``documents``/``catalog``/``cli`` (I/O and examples).
"""

__version__ = "0.1.0"
