"""Golden rotation number: a random closed deformation extends to order 4.

Run: python3 demos/diophantine_continuation.py [seed]
"""

import sys

import numpy as np

from coiso.arithmetic import QuadraticIrrational
from coiso.foliation import Connection
from coiso.obstruction import mc_continue, mc_series_residuals
from coiso.sampling import random_closed_one_form

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
alpha = QuadraticIrrational(-1, 5, 2)  # (sqrt 5 - 1) / 2
rng = np.random.default_rng(seed)
gamma1 = random_closed_one_form(rng, alpha)

for conn in (Connection.flat(alpha), Connection.cutoff(alpha)):
    cont = mc_continue(gamma1, alpha, conn, K=4)
    print(f"[{conn.kind}] succeeded: {cont.succeeded}")
    for i, g in enumerate(cont.solution.coefficients, start=1):
        print(f"  G_{i}: {sum(len(c.terms) for c in g.components)} modes, max-norm {g.norm():.3e}")
    print("  residual per order (recursion)   :", [f"{r:.1e}" for r in cont.residuals])
    subs = mc_series_residuals(cont.solution.coefficients, alpha, conn)
    print("  residual per order (substitution):", [f"{r:.1e}" for r in subs])
