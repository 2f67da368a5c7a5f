"""Golden table for the application parameter validators.

Each tuple is checked here against the interval conditions of the
Ginzburg-Landau and Burgers well-posedness results and the Sobolev
embeddings their proofs chain together, written out directly from the
statements with exact rational arithmetic. The expected column
is either "pass" or the ';'-joined list of violated condition ids in the
order the validator reports them.

Writes crates/core/tests/data/validator_golden.csv.
"""
import os
from fractions import Fraction as F

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "crates", "core", "tests", "data", "validator_golden.csv")

# kind, N, alpha, s, nu, sigma, vartheta, vartheta', b, varrho
TUPLES = [
    # admissible
    ("gl", 4, "1.5", "1", "0.6", "-0.1", "0.8", "0.9", "1.0", None),
    ("gl", 2, "1.5", "1", "0.3", "-0.1", "0.5", "0.8", "0.5", "0.25"),
    ("gl", 3, "1.5", "2", "0.6", "-0.1", "0.8", "0.95", "2.0", None),
    ("gl", 4, "1.5", "0.5", "0.7", "-0.1", "0.9", "0.95", "0.7", "0.2"),
    ("gl", 2, "1.8", "2", "0.4", "-0.1", "0.6", "0.9", "1.3", None),
    ("gl", 3, "1.5", "1", "0.5", "-0.1", "0.7", "0.9", "0.8", "0.3"),
    ("burgers", 4, "1.5", "1", "0.6", "-0.3", "0.95", "0.97", "1.3", None),
    ("burgers", 3, "1.5", "1", "0.6", "-0.1", "0.8", "0.95", "1.0", None),
    ("burgers", 4, "1.5", "1", "0.75", "-0.05", "0.9", "0.95", "1.2", None),
    ("burgers", 3, "1.5", "1", "0.7", "-0.05", "0.85", "0.98", "1.1", None),
    # inadmissible
    ("gl", 4, "1.5", "1", "0.45", "-0.25", "0.8", "0.9", "1.0", None),
    ("gl", 4, "1.5", "1", "0.6", "-0.1", "0.65", "0.9", "1.0", None),
    ("gl", 4, "1.5", "1", "0.6", "-0.1", "0.8", "0.75", "1.0", None),
    ("gl", 4, "1.5", "1", "0.6", "-0.1", "0.8", "0.9", "0.9", None),
    ("gl", 4, "1.5", "2", "0.7", "-0.1", "0.9", "0.95", "2.1", None),
    ("gl", 2, "1.5", "1", "0.3", "-0.1", "0.5", "0.8", "0.5", None),
    ("gl", 2, "1.5", "1", "0.3", "-0.1", "0.5", "0.8", "0.5", "0.3"),
    ("gl", 4, "1.5", "1", "0.6", "-0.5", "0.8", "0.9", "1.0", None),
    ("burgers", 2, "1.5", "1", "0.6", "-0.3", "0.95", "0.97", "1.3", None),
    ("burgers", 4, "1.5", "1", "0.6", "-0.25", "0.95", "0.97", "1.3", None),
]


def half_open(x, lo, hi):
    return lo <= x < hi


def open_(x, lo, hi):
    return lo < x < hi


def sobolev(sigma, gamma, p, q, n):
    """W^{sigma,p} -> W^{gamma,q}."""
    bad = []
    if not p >= 1:
        bad.append("p-range")
    if not q >= 1:
        bad.append("q-range")
    if not gamma >= 0:
        bad.append("gamma-nonneg")
    if not gamma <= sigma:
        bad.append("gamma-le-sigma")
    if not sigma - gamma >= F(n) / p - F(n) / q:
        bad.append("sobolev-gap")
    return bad


def into_lebesgue(s1, q1, n):
    """W^{s1,2} -> L^{q1}."""
    bad = []
    if not s1 >= 0:
        bad.append("sigma1-nonneg")
    below = s1 < F(n, 2)
    if not below:
        bad.append("sigma1-below-half-dim")
    if not q1 >= 1:
        bad.append("q1-ge-one")
    if below and not q1 <= 2 * F(n) / (n - 2 * s1):
        bad.append("q1-cap")
    return bad


def from_lebesgue(s2, q2, n):
    """L^{q2} -> W^{s2,2}."""
    bad = []
    if not -F(n, 2) < s2:
        bad.append("sigma2-above-minus-half-dim")
    if not s2 <= 0:
        bad.append("sigma2-nonpos")
    if not q2 >= 2 * F(n) / (n - 2 * s2):
        bad.append("q2-floor")
    return bad


def scale(x):
    """H^x -> W^{2x,2}."""
    return [] if x >= 0 else ["s-nonneg"]


def prefixed(prefix, ids):
    return [prefix + "." + i for i in ids]


def gl(n, a, s, nu, sigma, vt, vtp, b, vr):
    bad = []
    mu = nu - sigma
    top = F(n + 4, 8)
    if not (2 <= n <= 4):
        bad.append("dim-range")
    if not s > 0:
        bad.append("s-positive")
    if s < F(4, n):
        if vr is None:
            bad.append("varrho-missing")
        else:
            if not (0 < vr <= F(n) * s / 8):
                bad.append("varrho-range")
            if not half_open(nu, F(n, 4) - vr / s, F(n, 4)):
                bad.append("nu-range")
    elif not half_open(nu, F(n, 4) - 1 / (2 * s), F(n, 4)):
        bad.append("nu-range")
    mu0 = max(nu, s * (F(n, 4) - nu))
    if not open_(mu, mu0, top):
        bad.append("mu-range")
    if not open_(vt, mu, top):
        bad.append("vartheta-range")
    if not half_open(vtp, vt + F(4 - n, 8), 1):
        bad.append("vartheta-prime-range")
    if not b > -min(1 / a - (1 + s) * vt, (vt - mu) - s * vt):
        bad.append("b-lower")
    bad += prefixed("embed-lq-to-h", from_lebesgue(2 * sigma, 2 * F(n) / (n - 4 * sigma), n))
    bad += prefixed("embed-h-to-lq", into_lebesgue(2 * nu, 2 * F(n) * (1 + s) / (n - 4 * sigma), n))
    bad += prefixed("embed-scale", scale(nu))
    return bad


def burgers(n, a, nu, sigma, vt, vtp, b):
    bad = []
    mu = nu - sigma
    top = F(n + 4, 8)
    if not (3 <= n <= 4):
        bad.append("dim-range")
    if not half_open(nu, F(1, 2), F(n, 4)):
        bad.append("nu-range")
    mu2 = max(nu, F(n + 2, 4) - nu)
    if not half_open(mu, mu2, top):
        bad.append("mu-range")
    if not open_(vt, mu, top):
        bad.append("vartheta-range")
    if not half_open(vtp, vt + F(4 - n, 8), 1):
        bad.append("vartheta-prime-range")
    if not b > -min(-mu, 1 / a - 2 * vt):
        bad.append("b-lower")
    bad += prefixed("embed-lq-to-h", from_lebesgue(2 * sigma, 2 * F(n) / (n - 4 * sigma), n))
    bad += prefixed("embed-scale", scale(nu))
    bad += prefixed("embed-gradient", sobolev(2 * nu, 1, 2, 2 * F(n) / (n + 2 - 4 * nu), n))
    bad += prefixed("embed-h-to-lq", into_lebesgue(2 * nu, 2 * F(n) / (4 * mu - 2), n))
    bad += prefixed("embed-top", sobolev(2 - F(n, 4), 1, 2, 4 * F(n) / (3 * n - 4), n))
    return bad


def main():
    rows = ["kind,dim,alpha,s,nu,sigma,vartheta,vartheta_prime,b,varrho,expected"]
    for kind, n, a, s, nu, sg, vt, vtp, b, vr in TUPLES:
        q = [F(x) for x in (a, s, nu, sg, vt, vtp, b)]
        fvr = F(vr) if vr is not None else None
        if kind == "gl":
            bad = gl(n, q[0], q[1], q[2], q[3], q[4], q[5], q[6], fvr)
        else:
            bad = burgers(n, q[0], q[2], q[3], q[4], q[5], q[6])
        exp = "pass" if not bad else ";".join(bad)
        rows.append(",".join([kind, str(n), a, s, nu, sg, vt, vtp, b, vr or "", exp]))
    with open(OUT, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print("\n".join(rows))


if __name__ == "__main__":
    main()
