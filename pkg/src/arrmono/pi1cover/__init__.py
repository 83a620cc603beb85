"""Fundamental-group oracle for complexified-real arrangements."""
from .character import Character, ProductNotOne, character_from_values
from .cover import CoverMonodromy, CoverPresentation, NotSurjective, cover_monodromy, milnor_images, subgroup_presentation
from .fox import EigenspaceReport, arrangement_presentation, milnor_eigenspaces, twisted_h1, twisted_h1_values
from .presentation import GroupPresentation, PresentationError, load_presentation
from .wiring import Crossing, NotReal, WiringDiagram, randell_presentation, wiring_diagram

__all__ = [
    "Character",
    "ProductNotOne",
    "character_from_values",
    "CoverMonodromy",
    "CoverPresentation",
    "NotSurjective",
    "cover_monodromy",
    "milnor_images",
    "subgroup_presentation",
    "EigenspaceReport",
    "arrangement_presentation",
    "milnor_eigenspaces",
    "twisted_h1",
    "twisted_h1_values",
    "GroupPresentation",
    "PresentationError",
    "load_presentation",
    "Crossing",
    "NotReal",
    "WiringDiagram",
    "randell_presentation",
    "wiring_diagram",
]
