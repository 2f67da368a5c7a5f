"""Terminal time at which the terminal-problem denominator first vanishes.

With alpha = 1.5 and the Dirichlet modes of (0, pi), lambda_j = j^2 for
j = 1..6, scan T downward from T0 = 2 and locate the first T at which
E_{1.5,1}(-lambda_j T^1.5) = 0 for some mode. Each zero x_k of
E_{1.5,1}(-x) gives the candidates T = (x_k / j^2)^(2/3); the answer is the
largest one below T0. At that T the guard |E| <= eps_den must trip for
that mode.

Writes crates/cli/tests/data/crossing_reference.csv.
"""
import os

import mpmath as mp

from ml_oracle import ml_series

mp.mp.dps = 40

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "crates", "cli", "tests", "data", "crossing_reference.csv")

ALPHA = mp.mpf("1.5")
MODES = 6
T0 = mp.mpf(2)


def e(x):
    return ml_series(ALPHA, 1, x)


def zeros(xmax, step=mp.mpf("0.05")):
    out = []
    x = step
    prev = e(x)
    while x < xmax:
        nxt = e(x + step)
        if prev * nxt < 0:
            out.append(mp.findroot(e, (x, x + step), solver="anderson"))
        x += step
        prev = nxt
    return out


def main():
    xmax = MODES**2 * T0**ALPHA
    best = None
    for x in zeros(xmax):
        for j in range(1, MODES + 1):
            t = (x / j**2) ** (1 / ALPHA)
            if t < T0 and (best is None or t > best[0]):
                best = (t, j, x)
    t, j, x = best
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as f:
        f.write("name,value\n")
        f.write(f"alpha,{mp.nstr(ALPHA, 17)}\n")
        f.write(f"modes,{MODES}\n")
        f.write(f"t_cross,{mp.nstr(t, 20)}\n")
        f.write(f"mode,{j}\n")
        f.write(f"zero,{mp.nstr(x, 20)}\n")
    print(f"T = {mp.nstr(t, 20)} (mode {j}, zero {mp.nstr(x, 12)})")


if __name__ == "__main__":
    main()
