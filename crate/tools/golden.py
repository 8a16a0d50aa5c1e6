"""Reference values at 40 significant digits, evaluated straight from the
defining sums with mpmath. The printed numbers are frozen into
crates/core/tests/golden.rs.

    python tools/golden.py
"""

import json
import os

import mpmath as mp

mp.mp.dps = 40

H = mp.mpf("6.62607015e-34")
HBAR = H / (2 * mp.pi)
KB = mp.mpf("1.380649e-23")
C = mp.mpf(299792458)
MU0 = mp.mpf("1.25663706212e-6")
E = mp.mpf("1.602176634e-19")
A0 = mp.mpf("5.29177210903e-11")
CM = 2 * mp.pi * C * 100

HERE = os.path.join(os.path.dirname(__file__), "..", "fixtures")
UNITS = {"rad/s": mp.mpf(1), "cm^-1": CM, "Hz": 2 * mp.pi}
DUNITS = {"C*m": mp.mpf(1), "e*a0": E * A0}


def load_material(name):
    with open(os.path.join(HERE, name)) as fh:
        doc = json.load(fh)
    return [
        tuple(mp.mpf(repr(o[k])) * UNITS[o["unit"]] for k in ("omega_P", "omega_T", "gamma"))
        for o in doc["oscillators"]
    ]


def load_atom(name):
    with open(os.path.join(HERE, name)) as fh:
        doc = json.load(fh)
    levels = {s["label"]: mp.mpf(repr(s["energy"])) * UNITS[s["unit"]] for s in doc["states"]}
    dip = {}
    for d in doc["dipoles"]:
        v = mp.mpf(repr(d["magnitude"])) * DUNITS[d["unit"]]
        dip[(d["from"], d["to"])] = dip[(d["to"], d["from"])] = v
    return levels, dip


def eps(osc, w):
    return 1 + sum(p**2 / (t**2 - w**2 - 1j * w * g) for p, t, g in osc)


def rtilde(osc, w):
    e = eps(osc, w)
    return (e - 1) / (e + 1)


def nbar(w, T):
    return 1 / mp.expm1(HBAR * w / (KB * T))


def nonresonant(osc, levels, dip, n, z, T, terms):
    partners = [(levels[k] - levels[n], dip[(n, k)]) for k in levels if (n, k) in dip]
    s = mp.mpf(0)
    for j in range(terms):
        xi = 2 * mp.pi * j * KB * T / HBAR
        r = mp.re(rtilde(osc, 1j * xi))
        w = mp.mpf("0.5") if j == 0 else 1
        s += w * r * sum(d**2 * om / (om**2 + xi**2) for om, d in partners)
    line1 = -MU0 * C**2 * KB * T / (12 * mp.pi * HBAR * z**3) * s
    line2 = sum(
        MU0 * C**2 / (24 * mp.pi * z**3) * nbar(om, T) * d**2 * mp.re(rtilde(osc, abs(om)))
        for om, d in partners
    )
    return line1, line2


def u_eff(osc, levels, dip, up, lo, o1, o2, g1, g2, z):
    # Im G = c^2 Im r / (32 pi w^2 z^3) diag(1,1,2); isotropic dyadic |d||d|/3.
    a = C**2 * mp.im(rtilde(osc, o1)) / (32 * mp.pi * o1**2 * z**3)
    b = C**2 * mp.im(rtilde(osc, o2)) / (32 * mp.pi * o2**2 * z**3)
    diag = [1, 1, 2]
    tr1, tr2 = 4 * a, 4 * b
    s = mp.mpf(0)
    for k in levels:
        if (lo, k) in dip and (k, up) in dip and k not in (up, lo):
            w0k = levels[lo] - levels[k]
            wk1 = levels[k] - levels[up]
            x = sum(a * p * dip[(lo, k)] * dip[(k, up)] / 3 * b * p for p in diag)
            l0 = (o1 + w0k) / ((o1 + w0k) ** 2 + g1**2 / 4)
            l1 = (o1 + wk1) / ((o1 + wk1) ** 2 + g1**2 / 4)
            s += x * l0 - x * l1
    return -MU0 * o1 * o2 / 2 * mp.sqrt(g1 * g2 / (tr1 * tr2)) * s


def show(name, value):
    print(f"{name:<28} {mp.nstr(value, 20)}")


if __name__ == "__main__":
    toy_m = load_material("toy_single_oscillator.json")
    toy_levels, toy_dip = load_atom("toy_two_level.json")
    for n in ("g", "e"):
        l1, l2 = nonresonant(toy_m, toy_levels, toy_dip, n, mp.mpf("1e-6"), mp.mpf(400), 200)
        show(f"toy_nr_{n}_matsubara", l1)
        show(f"toy_nr_{n}_resonant_photon", l2)

    pm = load_material("two_mode_surface_g003.json")
    ch_levels, ch_dip = load_atom("toy_single_channel.json")
    o1, o2 = 90 * CM, 73 * CM
    g1, g2 = mp.mpf("0.03") * o1, mp.mpf("0.03") * o2
    show("single_channel_u_eff", u_eff(pm, ch_levels, ch_dip, "1", "0", o1, o2, g1, g2, mp.mpf("1e-6")))

    T = mp.mpf(500)
    show("thermal_factor_90_73_500K", mp.sqrt((nbar(o1, T) + 1) * nbar(o2, T)))
    show("nbar_73_500K", nbar(o2, T))
    show("xi_1_300K", 2 * mp.pi * KB * 300 / HBAR)

    wt, wp = mp.mpf("1.884e13"), mp.mpf("1.5e13")
    osc = [(wp, wt, wt / 50)]
    om = mp.sqrt(wt**2 + wp**2 / 2)
    show("im_trace_g_single", C**2 * mp.im(rtilde(osc, om)) / (8 * mp.pi * om**2 * mp.mpf("1e-6") ** 3))
