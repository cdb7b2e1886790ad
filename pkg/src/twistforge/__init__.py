"""twistforge: a desk-scale laboratory for the division-polynomial forgery
attack and fast serial-number verification on class-group-action quantum
money, with instrumented cost accounting at small primes."""

from .fp_arith import FpContext, MultCounter, Residue

__all__ = ["FpContext", "MultCounter", "Residue"]
__version__ = "0.1.0"
