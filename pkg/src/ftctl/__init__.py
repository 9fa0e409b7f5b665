"""Failure trace testing <-> CTL model checking.

Converters between labelled transition systems, Kripke structures, TLOTOS
failure trace tests and CTL formulas, model checkers for three satisfaction
regimes, an exact may/must testing oracle, and a cross-validation harness.
"""

__version__ = "0.1.0"
