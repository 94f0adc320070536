"""Exact verification of the denominator-vector injectivity property for
finite-type cluster algebras, together with the tagged-arc model of the
once-punctured disc that proves the type-D cases geometrically."""

__version__ = "0.1.0"
