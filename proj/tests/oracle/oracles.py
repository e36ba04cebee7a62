# Reference values frozen into the unit tests. Run with python3; needs sympy and numpy.
import math

import numpy as np
import sympy as sp

phi, th, psi = sp.symbols("phi theta psi", real=True)


def rx(a):
    return sp.Matrix([[1, 0, 0], [0, sp.cos(a), -sp.sin(a)], [0, sp.sin(a), sp.cos(a)]])


def ry(a):
    return sp.Matrix([[sp.cos(a), 0, sp.sin(a)], [0, 1, 0], [-sp.sin(a), 0, sp.cos(a)]])


def rz(a):
    return sp.Matrix([[sp.cos(a), -sp.sin(a), 0], [sp.sin(a), sp.cos(a), 0], [0, 0, 1]])


# body rates from Euler rates: w = e1 phi' + Rx^T e2 theta' + Rx^T Ry^T e3 psi'
e1, e2, e3 = sp.eye(3)[:, 0], sp.eye(3)[:, 1], sp.eye(3)[:, 2]
w_of_rates = sp.Matrix.hstack(e1, rx(phi).T * e2, rx(phi).T * ry(th).T * e3)
t_theta = sp.simplify(w_of_rates.inv())
r_zyx = rz(psi) * ry(th) * rx(phi)

vals = {phi: 0.1, th: 0.2, psi: 0.3}
j = sp.zeros(6, 6)
j[:3, :3] = r_zyx
j[3:, 3:] = t_theta
j_num = np.array(j.subs(vals).evalf(20), dtype=float)
print("euler_to_transform(0.1, 0.2, 0.3):")
for row in j_num:
    print("  " + ", ".join(f"{v:.17g}" for v in row))

mass, radius, rho, g = 5.0, 0.25, 1000.0, 9.81
added = 0.5 * rho * 4.0 / 3.0 * math.pi * radius**3
print(f"object surge accel per newton: {1.0 / (mass + added):.17g}")

tau = np.array([10.0, -5.0, mass * g])
lift = float((np.array(r_zyx.subs(vals).evalf(20), dtype=float) @ tau)[2])
print(f"tilted lift: {lift:.17g} weight {mass * g:.17g} ok {lift < mass * g}")

h = 0.1
print(f"rk4 exp step: {1 + h + h**2 / 2 + h**3 / 6 + h**4 / 24:.17g}")

a = -2.0
print(f"discretize scalar a=-2 dt=0.1: {sum((a * h)**k / math.factorial(k) for k in range(5)):.17g} exp {math.exp(a * h):.17g}")

yaw_inertia = 120.0 * 1.2
print(f"usv yaw accel for (10, -10) N at d=2.4: {10.0 * 2.4 / yaw_inertia:.17g}")

print(f"circle t=10pi: ({20 * math.cos(-math.pi / 2 + math.pi / 2):.17g}, {20 * math.sin(0.0):.17g})")
print(f"fit {{0, 2}}: mu 1 sigma {math.sqrt(2.0):.17g}")
print(f"3-4-5 radius: {math.sqrt(5.0**2 - 3.0**2):.17g}")
