#!/usr/bin/env python3
"""Reference values for the refinement-oracle test cases.

Each value is computed twice: with mpmath tanh-sinh quadrature at 30 digits,
and with a brute-force trapezoid rule on a graded mesh (10^6 points) followed
by Richardson extrapolation. The frozen constants in the C++ tests come from
the mpmath column; the second column must agree to the printed digits.
"""
import mpmath as mp
import numpy as np
from scipy.special import gamma as gamma_np

mp.mp.dps = 30


def graded_trapezoid(fn_of_u, length, points, grading):
    s = np.linspace(0.0, 1.0, points)
    u = length * s ** grading
    vals = np.empty_like(u)
    vals[0] = 0.0  # singular node dropped; its contribution vanishes as the mesh grades
    vals[1:] = fn_of_u(u[1:])
    return np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(u))


def brute(fn_of_u, length, grading=12.0):
    coarse = graded_trapezoid(fn_of_u, length, 500_001, grading)
    fine = graded_trapezoid(fn_of_u, length, 1_000_001, grading)
    return fine + (fine - coarse) / 3.0


def show(name, exact, approx):
    print(f"{name:40s} {mp.nstr(exact, 17):>24s} {approx:.15g}")


# integrate_singular: mu(t,tau)=0.5+0.2 tau, h(tau)=tau, [0,1], t=1 (u = 1 - tau)
mu = lambda tau: 0.5 + 0.2 * tau
raw = mp.quad(lambda tau: (1 - tau) ** (mu(tau) - 1) * tau, [0, 1])
raw_b = brute(lambda u: u ** (mu(1 - u) - 1) * (1 - u), 1.0)
show("singular raw mu=0.5+0.2tau h=tau", raw, raw_b)
norm = mp.quad(lambda tau: (1 - tau) ** (mu(tau) - 1) * tau / mp.gamma(mu(tau)), [0, 1])
norm_b = brute(lambda u: u ** (mu(1 - u) - 1) * (1 - u) / gamma_np(mu(1 - u)), 1.0)
show("singular normalized", norm, norm_b)

# right RL integral, f=1, alpha(t,tau)=0.4+0.1 t, t=0.5, b=1 -> kernel order 0.4+0.1 tau
al = lambda tau: 0.4 + 0.1 * tau
v = mp.quad(lambda tau: (tau - 0.5) ** (al(tau) - 1) / mp.gamma(al(tau)), [0.5, 1])
vb = brute(lambda u: u ** (al(0.5 + u) - 1) / gamma_np(al(0.5 + u)), 0.5)
show("right integral bivariate", v, vb)

# left Caputo, f=t, alpha(t,tau)=0.3+0.2 tau, a=0, t=1
al2 = lambda tau: 0.3 + 0.2 * tau
v = mp.quad(lambda tau: (1 - tau) ** (-al2(tau)) / mp.gamma(1 - al2(tau)), [0, 1])
vb = brute(lambda u: u ** (-al2(1 - u)) / gamma_np(1 - al2(1 - u)), 1.0)
show("left caputo bivariate f=t", v, vb)

# right Caputo, f=t^2, alpha=0.25, b=1, t=0.25
v = -mp.quad(lambda tau: (tau - 0.25) ** (-0.25) / mp.gamma(0.75) * 2 * tau, [0.25, 1])
closed = -2 / mp.gamma(0.75) * (mp.mpf(0.75) ** 1.75 / 1.75 + 0.25 * mp.mpf(0.75) ** 0.75 / 0.75)
show("right caputo t^2 alpha=0.25 t=0.25", v, float(closed))

# right Caputo, f=b-t, alpha=0.5, b=1, t=0 (mirror of the left closed form)
show("right caputo b-t alpha=0.5 t=0", 1 / mp.gamma(1.5), float(2 / mp.gamma(0.5)))

# left Caputo of t^2, alpha=0.5, t=1
show("left caputo t^2 alpha=0.5", 2 / mp.gamma(2.5), float(mp.quad(lambda s: (1 - s) ** -0.5 * 2 * s, [0, 1]) / mp.gamma(0.5)))

# norm ratio of f=1, alpha=0.5 on [0,1]
show("norm ratio f=1", (mp.mpf(4) / 3) / mp.sqrt(mp.pi), float(mp.quad(lambda t: 2 * mp.sqrt(t) / mp.sqrt(mp.pi), [0, 1])))

# power identity gamma=2, beta=(t+1)/4 at t=1
show("power identity g=2 beta=(t+1)/4", mp.gamma(3) / mp.gamma(3.5), 2.0 / float(mp.gamma(3.5)))
