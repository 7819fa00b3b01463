"""Liouville rotation number: the rotation solve divides by tiny divisors.

The circle function F has coefficients p_n - q_n alpha on the modes q_n, so it
decays faster than any power of n.  The solution coefficients G_{q_n} stay at
1/(2 pi) instead of decaying, and the solve is reported as divergent.

Run: python3 demos/liouville_divergence.py
"""

import math

from coiso.arithmetic import liouville_constant
from coiso.fourier import decay_fit
from coiso.obstruction import first_obstruction
from coiso.solver import solve_rotation, witness_liouville

alpha = liouville_constant(10, 3)
witness = witness_liouville(alpha, 3)
F = witness.circle_function

print("F decay verdict :", decay_fit(F, axis=0).verdict)
report = solve_rotation(F, alpha)
print("rotation solve  :", report.status)
print(f"{'n':>10} {'|F_n|':>12} {'|G_n|':>14} {'divisor':>12}")
for n, f, g, d in report.certificate:
    print(f"{n:>10} {f:12.3e} {g:14.10f} {d:12.3e}")
print("1/(2 pi)        :", 1 / (2 * math.pi))
print("first obstruction through the bracket:", first_obstruction(witness, alpha).report.status)
