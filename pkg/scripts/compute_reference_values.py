#!/usr/bin/env python3
"""Regenerate the brute-force reference values frozen into the test suite.

Everything here is computed with mpmath at 50 significant digits by direct
summation over the first 1001 levels, written independently of the library
so the two implementations can disagree.  Run from the repository root:

    python scripts/compute_reference_values.py
"""

from mpmath import mp, mpf, exp, fsum, log, sinh

mp.dps = 50
DEPTH = 1000

# exponents below exp(-BIG) contribute nothing at 50 digits
BIG = mpf(2) ** 20


def eigenenergy(n: int, omega, q):
    omega, q = mpf(omega), mpf(q)
    if q == 1:
        return omega * (n + mpf(1) / 2)
    r = log(q)
    return omega / 2 * sinh(r * (n + mpf(1) / 2)) / sinh(r / 2)


def boltzmann_state(omega, q, temperature):
    t = mpf(temperature)
    energies = [eigenenergy(n, omega, q) for n in range(DEPTH + 1)]
    weights = [exp(-e / t) if e / t < BIG else mpf(0) for e in energies]
    z = fsum(weights)
    populations = [w / z for w in weights]
    entropy = -fsum(p * log(p) for p in populations if p > 0)
    internal = fsum(p * e for p, e in zip(populations, energies))
    return energies, populations, z, entropy, internal


def cycle(omega_hot, q_hot, omega_cold, q_cold, t_hot, t_cold):
    e_hot, p_hot, _, _, _ = boltzmann_state(omega_hot, q_hot, t_hot)
    e_cold, p_cold, _, _, _ = boltzmann_state(omega_cold, q_cold, t_cold)
    heat_in = fsum(ea * (pb - pa) for ea, pb, pa in zip(e_hot, p_hot, p_cold))
    heat_out = fsum(ec * (pa - pb) for ec, pb, pa in zip(e_cold, p_hot, p_cold))
    work = fsum(
        (ea - ec) * (pb - pa)
        for ea, ec, pb, pa in zip(e_hot, e_cold, p_hot, p_cold)
    )
    return work, heat_in, heat_out


def show(label, value):
    print(f"{label} = {mp.nstr(value, 17)}")


def main():
    print("# thermal state at omega=1, q=0.5, T=0.5")
    _, pops, z, entropy, internal = boltzmann_state(1, 0.5, 0.5)
    show("ln_z", log(z))
    for n in range(6):
        show(f"p[{n}]", pops[n])
    show("entropy", entropy)
    show("internal_energy", internal)

    print("# entropies at omega=1, q=0.5")
    for t in (0.1, 0.5):
        _, _, _, s, _ = boltzmann_state(1, 0.5, t)
        show(f"entropy(T={t})", s)

    print("# cycle omega=1, q_hot=0.4, q_cold=1, t_hot=0.5, t_cold=0.1")
    work, heat_in, heat_out = cycle(1, 0.4, 1, 1, 0.5, 0.1)
    show("work", work)
    show("heat_in", heat_in)
    show("heat_out", heat_out)
    show("efficiency", work / heat_in)

    print("# work at the reported optima, t_hot=0.5, t_cold=0.1, omega=1")
    for q_hot, q_cold in ((0.379, 1), (0.369, 0.8), (0.338, 0.6)):
        w, _, _ = cycle(1, q_hot, 1, q_cold, 0.5, 0.1)
        show(f"work(q_a={q_hot}, q_c={q_cold})", w)


if __name__ == "__main__":
    main()
