"""Single reference values used by the solver-level tests.

All values concern one Dirichlet mode on (0, pi) with lambda = 1 (unless
stated) and come from the 40-digit series in ml_oracle.py:

  ml_1.5_1_m2          E_{1.5,1}(-2)
  kernel_1.5_4_0.5     t^(a-1) E_{a,a}(-lambda t^a) at a=1.5, lambda=4, t=0.5
  u0_1.5_2             1 / E_{1.5,1}(-2^1.5), the initial value of the
                       terminal problem with f = phi_1, G = 0, T = 2
  fwd_1.5_<t>          E_{1.5,1}(-t^1.5), the forward solution from phi_1
  dudt_1.5_2_<t>       -t^0.5 E_{1.5,1.5}(-t^1.5) / E_{1.5,1}(-2^1.5),
                       the time derivative of the terminal solution

Writes crates/core/tests/data/point_reference.csv.
"""
import os

import mpmath as mp

from ml_oracle import ml_series

mp.mp.dps = 40

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "crates", "core", "tests", "data", "point_reference.csv")

A = mp.mpf("1.5")
TIMES = ["0.25", "0.5", "1", "1.5", "2"]


def main():
    rows = [("ml_1.5_1_m2", ml_series(A, 1, 2))]
    t = mp.mpf("0.5")
    rows.append(("kernel_1.5_4_0.5", t ** (A - 1) * ml_series(A, A, 4 * t ** A)))
    den = ml_series(A, 1, mp.mpf(2) ** A)
    rows.append(("u0_1.5_2", 1 / den))
    for s in TIMES:
        t = mp.mpf(s)
        rows.append((f"fwd_1.5_{s}", ml_series(A, 1, t ** A)))
    for s in TIMES:
        t = mp.mpf(s)
        rows.append((f"dudt_1.5_2_{s}", -t ** (A - 1) * ml_series(A, A, t ** A) / den))
    with open(OUT, "w") as fh:
        fh.write("name,value\n")
        for k, v in rows:
            fh.write(f"{k},{mp.nstr(v, 25)}\n")
    for k, v in rows:
        print(k, mp.nstr(v, 20))


if __name__ == "__main__":
    main()
