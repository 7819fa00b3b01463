"""Rational rotation number: the first obstruction is a resonance.

Run: python3 demos/rational_obstruction.py
"""

from coiso.arithmetic import Rational
from coiso.obstruction import first_obstruction
from coiso.solver import witness_rational

alpha = Rational(2, 3)
witness = witness_rational(2, 3)
result = first_obstruction(witness, alpha)

print("alpha           :", alpha)
print("bracket modes   :", sorted(result.bracket.c.terms))
print("reduced modes   :", sorted(result.reduced.representative.terms))
print("verdict         :", result.report.status)
print("resonant modes  :", result.report.resonant)
