"""Exact-arithmetic classification of representations of the real Gelfand
order: quiver-presentation objects, lattice normal forms with certificates,
structure-constant algebra isomorphism checks, and the bridge to sl2 weight
diagrams."""

__version__ = "0.1.0"
