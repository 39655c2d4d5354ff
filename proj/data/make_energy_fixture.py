#!/usr/bin/env python3
"""Generates data/energy.csv, the daily energy-price case-study fixture.

The original series (1761 working days of Spanish electricity prices in
Cents/kWh and oil prices in Euros/barrel, February 2002 - October 2008,
distributed with the R package MSwM) is not redistributable here, so the
fixture is a synthetic surrogate drawn from a two-state Markov-switching
normal model calibrated to the published summary statistics of that data:
transition probabilities 0.017/0.016 (mean dwell times between 50 and 62.5
working days), a calm state with lower price level and roughly constant
volatility, a nervous state with higher prices whose volatility rises with
the oil price, and a positive oil effect on the conditional mean in both
states.

Deterministic: rerunning this script reproduces energy.csv byte for byte.
"""

import numpy as np

T = 1761
rng = np.random.default_rng(20080217)

# Oil price (EUR/barrel): smooth multi-year path through plausible anchors
# with AR(1) wiggle around it.
anchor_t = np.array([0, 260, 520, 780, 1040, 1300, 1480, 1640, 1760])
anchor_v = np.array([24.0, 25.0, 28.0, 36.0, 48.0, 52.0, 62.0, 88.0, 58.0])
base = np.interp(np.arange(T), anchor_t, anchor_v)
ar_draws = rng.normal(0.0, 0.55, T - 1)
ar = np.zeros(T)
for t in range(1, T):
    ar[t] = 0.985 * ar[t - 1] + ar_draws[t - 1]
oil = np.clip(base + ar, 16.0, 95.0)

# Hidden regime: calm (0) and nervous (1), strongly persistent.
gamma = np.array([[0.983, 0.017], [0.016, 0.984]])
states = np.zeros(T, dtype=int)
states[0] = 0
u = rng.random(T)
for t in range(1, T):
    stay = gamma[states[t - 1], states[t - 1]]
    states[t] = states[t - 1] if u[t] < stay else 1 - states[t - 1]

# State-dependent price distribution (Cents/kWh).
mu = np.where(states == 0, 0.80 + 0.040 * oil, 2.20 + 0.062 * oil)
sigma = np.where(states == 0, np.exp(-0.60 + 0.002 * oil), np.exp(-1.40 + 0.028 * oil))
price = rng.normal(mu, sigma)
price = np.clip(price, 0.05, None)

with open("energy.csv", "w") as out:
    out.write("Price,Oil\n")
    for p, o in zip(price, oil):
        out.write(f"{p:.6f},{o:.6f}\n")

print(f"T={T}  transitions 0->1: {np.sum((states[:-1]==0)&(states[1:]==1))}, "
      f"1->0: {np.sum((states[:-1]==1)&(states[1:]==0))}, "
      f"share nervous: {states.mean():.3f}")
