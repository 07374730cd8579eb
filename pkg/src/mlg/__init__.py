"""mlg: exact-arithmetic toolkit for metaplectic dual data, central
extension calculus, and desk-scale verification of the two second twists."""

__version__ = "0.1.0"
