#!/usr/bin/env python3
"""Generate Rb Rydberg atom fixtures from quantum defects.

Level energies come from the modified Rydberg-Ritz formula
    E(n, l, j) = -R_Rb / (n - delta(n, l, j))^2,
    delta = delta0 + delta2 / (n - delta0)^2,
and radial matrix elements <n l j | r | n' l' j'> from inward Numerov
integration of the Coulomb radial equation at the quantum-defect energy
(Zimmerman et al. 1979 scheme, sqrt(r) grid, core cut at alpha_c^(1/3)).

Dipole magnitudes are fine-structure manifold sums for an S1/2 sublevel:
    |d|^2 = e^2 a0^2 R^2 (2j' + 1) / 6   for S1/2 <-> P_j'
so that sum_m d (x) d = |d|^2 / 3 * identity.

Usage: qd_dipoles.py OUT.json
"""
import json
import sys

import numpy as np

R_RB = 109736.605  # cm^-1, Rb-87 reduced-mass Rydberg constant
ALPHA_CORE = 9.0760  # a.u., Rb+ core dipole polarizability

# (l, j) -> (delta0, delta2)
DEFECTS = {
    (0, 0.5): (3.1311804, 0.1784),
    (1, 0.5): (2.6548849, 0.2900),
    (1, 1.5): (2.6416737, 0.2950),
}

L_NAME = {0: "S", 1: "P"}


def n_star(n, l, j):
    d0, d2 = DEFECTS[(l, j)]
    return n - (d0 + d2 / (n - d0) ** 2)


def energy_cm(n, l, j):
    return -R_RB / n_star(n, l, j) ** 2


def radial_wavefunction(ns, l, step=0.005):
    """Inward Numerov on x = sqrt(r) for y(x) = x^{-1/2} u(r), u = r R(r)."""
    energy = -0.5 / ns**2
    r_out = 2.0 * ns * (ns + 15.0)
    r_in = ALPHA_CORE ** (1.0 / 3.0)
    x_out = np.sqrt(r_out)
    x_in = np.sqrt(r_in)
    n_pts = int((x_out - x_in) / step) + 1
    x = x_out - step * np.arange(n_pts)
    r = x * x
    # y'' = g(x) y with
    # g(x) = 8 x^2 (V_eff - E) + (2l + 1/2)(2l + 3/2) / x^2, V = -1/r
    g = 8.0 * r * (-1.0 / r - energy) + (2 * l + 0.5) * (2 * l + 1.5) / r
    y = np.zeros(n_pts)
    y[0] = 1e-10
    y[1] = 1e-10 * (1 + step * np.sqrt(g[0]))
    h2 = step * step
    for i in range(1, n_pts - 1):
        a = 1.0 - h2 * g[i + 1] / 12.0
        b = 2.0 * (1.0 + 5.0 * h2 * g[i] / 12.0)
        c = 1.0 - h2 * g[i - 1] / 12.0
        y[i + 1] = (b * y[i] - c * y[i - 1]) / a
        # stop if diverging inside the core region after the last node
        if r[i + 1] < ns and abs(y[i + 1]) > 1e50:
            n_pts = i + 2
            break
    x = x[:n_pts]
    r = r[:n_pts]
    y = y[:n_pts]
    # truncate at the divergence minimum near origin
    # u(r) = x^{1/2} y(x); normalisation: int u^2 dr = 2 int y^2 x^2 dx
    norm = np.sqrt(2.0 * np.trapezoid((y * x)[::-1] ** 2, x[::-1]))
    return x, r, y / norm


def radial_integral(state_a, state_b, step=0.005):
    (ns_a, l_a), (ns_b, l_b) = state_a, state_b
    xa, ra, ya = radial_wavefunction(ns_a, l_a, step)
    xb, rb, yb = radial_wavefunction(ns_b, l_b, step)
    # common grid: both descending from their own x_out with the same step
    x_hi = min(xa[0], xb[0])
    x_lo = max(xa[-1], xb[-1])
    ia0 = int(round((xa[0] - x_hi) / step))
    ib0 = int(round((xb[0] - x_hi) / step))
    npts = min(len(xa) - ia0, len(xb) - ib0, int((x_hi - x_lo) / step) + 1)
    ya_c = ya[ia0 : ia0 + npts]
    yb_c = yb[ib0 : ib0 + npts]
    x_c = xa[ia0 : ia0 + npts]
    # <r> = int u_a u_b r dr = 2 int y_a y_b x^4 dx
    return 2.0 * np.trapezoid((ya_c * yb_c * x_c**4)[::-1], x_c[::-1])


def label(n, l, j):
    return f"{n}{L_NAME[l]}{int(2 * j)}/2"


def build(s_levels, p_range):
    states = []
    for n in s_levels:
        states.append((n, 0, 0.5))
    for n in p_range:
        for j in (0.5, 1.5):
            states.append((n, 1, j))
    out_states = [
        {"label": label(*s), "energy": energy_cm(*s), "unit": "cm^-1"} for s in states
    ]
    dipoles = []
    for s in [st for st in states if st[1] == 0]:
        for p in [st for st in states if st[1] == 1]:
            rad = radial_integral(
                (n_star(*s), s[1]), (n_star(*p), p[1])
            )
            mag = abs(rad) * np.sqrt((2 * p[2] + 1) / 6.0)
            dipoles.append(
                {"from": label(*s), "to": label(*p), "magnitude": mag, "unit": "e*a0"}
            )
    return {
        "schema_version": 1,
        "name": "Rb 27S1/2 / 26S1/2 with nP1/2, nP3/2 neighbours",
        "provenance": (
            "tools/qd_dipoles.py: Rydberg-Ritz energies (R_Rb = 109736.605 cm^-1) and "
            "Coulomb Numerov radial integrals at quantum-defect energies; "
            "|d| = |<r>| sqrt((2j'+1)/6) e a0 per S1/2 -> P_j' manifold"
        ),
        "states": out_states,
        "dipoles": dipoles,
    }


if __name__ == "__main__":
    doc = build([26, 27], range(26, 28))
    with open(sys.argv[1], "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
