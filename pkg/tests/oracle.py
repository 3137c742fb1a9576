"""High-precision reference evaluation written straight from the model equations.

Shares no code with the package; used to derive and cross-check expected values.
"""

from mpmath import mp, mpf, log, sqrt

mp.dps = 50

TAU_T = mpf(50)  # us
A_P = mpf("0.02")
D_P = mpf(5)
T_G = mpf("2e-6")
T_C = mpf(10)


def t_r(n):
    L = sqrt(mpf(n))
    return (2 * TAU_T * log(L) + (3 + 2 * sqrt(2)) * sqrt(6 * L * D_P / A_P)) / 10**6


def t_cyc(n):
    return 8 * t_r(n)


def r_l(n, p):
    return mpf("0.07") * (mpf(p) / mpf("0.006")) ** (mpf("0.47") * mpf(n) ** mpf("0.27"))


def r_s(d, p):
    return mpf("0.3") * (70 * mpf(p)) ** ((mpf(d) + 1) / 2)


def idling(n):
    return 1 + 3 * t_r(n) / (mpf("0.005") * T_C)


def qldpc(n_m, T_3, p=mpf("0.001"), p_of=None):
    """Full qLDPC chain; ``p_of(n)`` overrides the gate error per patch size."""
    nm = mpf(n_m)
    na = nm / 25
    d = sqrt(nm) / 5
    pm = p_of(nm) if p_of else mpf(p)
    pa = p_of(na) if p_of else mpf(p)
    ps = p_of(d**2) if p_of else mpf(p)
    Lm, La, S = r_l(nm, pm), r_l(na, pa), r_s(d, ps)
    T_3 = mpf(T_3)
    out = {}
    out["R_0"] = 2 * d * Lm
    out["R_1"] = 2 * d * S
    out["R_2"] = 2 * (sqrt(na) * La + d * (S + La) + d * (La + nm / 25 * Lm))
    out["T_2"] = nm / 25 * (sqrt(na) * t_cyc(na) + d * t_cyc(na) + d * t_cyc(nm))
    out["R_3"] = T_3 / t_cyc(nm) * Lm
    out["R_4"] = d * S + sqrt(na) * La + d * (S + La) + d * (La + nm / 25 * Lm) + S
    out["T_4"] = nm / 25 * (6 * d * T_G + sqrt(na) * t_cyc(na) + d * t_cyc(na) + d * t_cyc(nm) + 6 * T_G)
    out["R_net"] = sum(out[k] for k in ("R_0", "R_1", "R_2", "R_3", "R_4"))
    out["T_tot"] = out["T_2"] + T_3 + out["T_4"]
    out["R_store"] = 2 * out["T_tot"] / t_cyc(nm) * Lm
    out["R_unload"] = 2 * (d * S + sqrt(na) * La + d * (La + nm / 25 * Lm) + d * (La + S))
    out["R_BM"] = 4 * d * S
    out["R_tot"] = out["R_BM"] + out["R_unload"] + out["R_store"] + 2 * out["R_net"]
    out["slope"] = 4 * Lm / t_cyc(nm)
    return out


def qldpc_trucks(n_m, T_3, r_e=2300, S=5, capacity=10**6, p=mpf("0.001")):
    o = qldpc(n_m, T_3, p)
    nm = mpf(n_m)
    r_L = nm / 25 / o["T_4"]
    return S * (mpf(r_e) / r_L) / (mpf(capacity) / nm) * (o["T_2"] + 2 * mpf(T_3) + o["T_4"]) / o["T_4"]


def surface(n_ms, T_3s, p=mpf("0.001")):
    n = mpf(n_ms)
    d = sqrt(n)
    R = r_s(d, p)
    tc = 6 * T_G
    T_3s = mpf(T_3s)
    o = {"R_ss": R, "R_1s": 2 * d * R, "T_1s": tc * d, "R_3s": T_3s / tc * R}
    o["R_nets"] = o["R_1s"] + o["R_3s"] + R
    o["T_tots"] = o["T_1s"] + T_3s + tc
    o["R_stores"] = 2 * o["T_tots"] / tc * R
    o["R_BMs"] = 4 * d * R
    o["R_tots"] = o["R_BMs"] + o["R_stores"] + 2 * o["R_nets"]
    o["slope"] = 4 * R / tc
    return o


def surface_trucks(n_ms, T_3s, r_e=2300, S=5, capacity=10**6, p=mpf("0.001")):
    o = surface(n_ms, T_3s, p)
    return S * mpf(r_e) / (mpf(capacity) / mpf(n_ms)) * (o["T_tots"] + mpf(T_3s))
