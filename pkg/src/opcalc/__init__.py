"""opcalc: exact-arithmetic operadic homological algebra at finite truncation.

Everything is computed over an exact field (QQ or F_p) with dense Gaussian
elimination; all structures are arity-truncated and certified by exhaustive
axiom checks at construction time.
"""

__version__ = "0.1.0"
