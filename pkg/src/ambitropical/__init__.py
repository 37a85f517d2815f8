"""Exact computations with tropical cones, ambitropical retractions and mean-payoff games."""

__version__ = "0.1.0"
