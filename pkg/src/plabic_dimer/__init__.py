"""Dimer models with boundary arising from Postnikov diagrams."""
