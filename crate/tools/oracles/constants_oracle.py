"""Reference values for the well-posedness constants.

Every constant is re-evaluated line by line at 30 digits with mpmath, from
the displayed formulas, with no shared code with the Rust implementation.
Beta functions use mpmath.beta directly.

Writes crates/core/tests/data/constants_reference.csv with columns
case,name,value. Inputs come first with an "in." prefix; undefined
entries are written as nan.
"""
import os

import mpmath as mp

mp.mp.dps = 30

OUT = os.path.join(os.path.dirname(__file__), "..", "..", "crates", "core", "tests", "data", "constants_reference.csv")

CASES = {
    # the basic example: unit bound and embedding constants
    "unit": dict(alpha="1.5", theta="0.8", nu="0", sigma="0.5", q="2", vartheta="0.35", zeta="-0.35", s="1",
                 T="2", lambda1="1", m="1", M="1", C1="1", C2="1", nu_prime="0.5", eta="1.2",
                 L1="0.02", L2="0.01", K0="0.001", fnorm="1"),
    # fitted-looking constants and a non-unit spectrum
    "fitted": dict(alpha="1.8", theta="0.7", nu="0.25", sigma="0.4", q="1.5", vartheta="0.2", zeta="-0.2", s="2",
                   T="0.7", lambda1="2.5", m="0.4", M="1.3", C1="0.8", C2="0.6", nu_prime="0.6", eta="1.1",
                   L1="0.02", L2="0.003", K0="0.0005", fnorm="0.3"),
    # Lipschitz constant beyond the admissible range and a short horizon
    "large_l1": dict(alpha="1.2", theta="0.9", nu="0.1", sigma="0.6", q="3", vartheta="0.6", zeta="-0.1", s="0.5",
                     T="1.3", lambda1="0.5", m="0.7", M="1.1", C1="1.4", C2="1.2", nu_prime="0.3", eta="1.5",
                     L1="5", L2="0.2", K0="0.01", fnorm="2"),
}

ORDER = ["M1", "M2", "M1_script", "M1_bar", "M2_bar", "M3_bar", "M2_script", "N1", "N2",
         "N1_script", "N2_script", "N2_script_bar", "N_f", "R_hat", "eta_glo", "eta_cri"]


def piecewise(a, x):
    if 0 < x <= 1:
        return min(x, a - 1)
    if 1 < x < 2:
        return min(x - 1, a - 1)
    return None


def evaluate(p):
    v = {k: mp.mpf(x) for k, x in p.items()}
    a, th, T, l1, m, M = v["alpha"], v["theta"], v["T"], v["lambda1"], v["m"], v["M"]
    q, vt, zeta, s = v["q"], v["vartheta"], v["zeta"], v["s"]
    out = {}
    out["M1"] = M ** 2 / m * T ** (a * (1 - th)) * (T ** (a * th) + l1 ** (-th))
    out["M2"] = M ** 2 / m * T ** (a * (1 - th)) / (a ** 2 * th * (1 - th)) * (T ** a + 1 / l1)
    out["M1_script"] = (mp.pi * M * l1 ** (-th) * T ** (a * (1 - th)) + mp.pi * out["M1"]) / mp.sin(mp.pi * a * (1 - th))
    out["M1_bar"] = v["C2"] * M * T ** (a + 1 / q) / (a * (a * q + 1) ** (1 / q))
    gap = 1 - a * (1 - th) * q
    out["M2_bar"] = T ** (a * (1 - th)) * (T ** (a * th + 1 / q) + l1 ** (-th)) / (gap ** (1 / q) * a * (1 - th)) if gap > 0 else None
    out["M3_bar"] = M * T ** a / a * (1 + M / m * (T ** a + 1 / l1))
    if out["M2_bar"] is not None:
        out["M2_script"] = v["L2"] * (out["M1_bar"] + out["M2_bar"] + out["M3_bar"])
    else:
        out["M2_script"] = None
    g = 1 - v["L1"] * out["M1_script"]
    out["N1"] = out["M1"] / M * v["C1"] / g if g > 0 else None
    out["N2"] = M / m * T ** (a * vt) * (T ** (a * (1 - vt)) + l1 ** (vt - 1))
    mu = v["nu"] - v["sigma"]
    zs = [vt - mu, 1 - mu]
    second = 1 - a * (1 + s) * vt - a * zeta
    if all(z > 0 for z in zs) and second > 0:
        out["N1_script"] = max(mp.beta(a * z, second) for z in zs)
        out["N2_script"] = M * out["N1_script"] * max(T ** (a * (z - s * vt - zeta)) for z in zs)
        out["N2_script_bar"] = out["N2_script"] * (1 + out["N2"] * T ** (-a * vt))
        num = 1 - out["N2_script_bar"] * v["K0"] * T ** (s * a * vt)
        out["R_hat"] = (num / ((1 + s) * out["N2_script_bar"] * v["K0"])) ** (1 / s) if num > 0 else None
    else:
        out["N1_script"] = out["N2_script"] = out["N2_script_bar"] = out["R_hat"] = None
    out["N_f"] = (s / (out["N2"] * v["fnorm"])) ** s / (2 + 2 * s) ** (1 + s)
    out["eta_glo"] = piecewise(a, a * (th + v["nu_prime"] - 1))
    out["eta_cri"] = piecewise(a, a * (v["eta"] - vt))
    return out


def main():
    rows = ["case,name,value"]
    for case, p in CASES.items():
        out = evaluate(p)
        for k, x in p.items():
            rows.append(f"{case},in.{k},{x}")
        for k in ORDER:
            x = out[k]
            rows.append(f"{case},{k},{'nan' if x is None else mp.nstr(x, 20)}")
    with open(OUT, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print("\n".join(rows))


if __name__ == "__main__":
    main()
