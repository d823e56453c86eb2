"""Support variety computations for elementary abelian p-groups and the dg algebras around them."""

__version__ = "1.0.0"
