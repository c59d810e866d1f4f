"""Exact computations with root systems, Borel sets, Weyl graphs, root-graded
groups over finite rings and the codistance bounds attached to them."""

from .rootsys import RootSystem, build_classical, system_from_label

__all__ = ["RootSystem", "build_classical", "system_from_label"]
