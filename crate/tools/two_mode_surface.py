"""Two-oscillator Drude-Lorentz surface with polariton modes at 73 and 90 cm^-1.

Each oscillator has omega_P = Omega/2 and Gamma = g*Omega; the two omega_T are
solved so that Re eps(Omega_j) = -1 for the undamped material. Frequencies are
written in cm^-1 with full double precision.

    python tools/two_mode_surface.py 0.03 fixtures/two_mode_surface_g003.json
"""

import json
import sys

import mpmath as mp

MODES = (73.0, 90.0)


def solve(g):
    mp.mp.dps = 40
    wp = [mp.mpf(o) / 2 for o in MODES]

    def eps(w, wt):
        return 1 + sum(p**2 / (t**2 - w**2) for p, t in zip(wp, wt))

    def f(t1, t2):
        return [eps(mp.mpf(o), (t1, t2)) + 1 for o in MODES]

    guess = [mp.sqrt(mp.mpf(o) ** 2 - p**2 / 2) for o, p in zip(MODES, wp)]
    wt = mp.findroot(f, guess)
    return [
        {"omega_P": float(p), "omega_T": float(t), "gamma": round(g * o, 12), "unit": "cm^-1"}
        for p, t, o in zip(wp, wt, MODES)
    ]


if __name__ == "__main__":
    g = float(sys.argv[1])
    doc = {
        "schema_version": 1,
        "name": f"two-oscillator surface, modes 73/90 cm^-1, Gamma = {g} Omega",
        "oscillators": solve(g),
    }
    with open(sys.argv[2], "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
