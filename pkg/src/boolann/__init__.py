"""Annihilators of balanced Boolean functions and their existence probability."""
