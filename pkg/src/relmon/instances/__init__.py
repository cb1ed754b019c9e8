"""Concrete relative monads: vectors over semirings, λ-terms, state and continuation."""
