"""How close do random samples come to the condition-number constant?

For each bound w the smallest constant c with |sum A_i| <= c sum |A_i| is
compared with (w+1)/(2 sqrt w). Three samplers are used: log-uniform
singular values, extreme singular values only, and pairs built to make the
modulus of the sum large relative to the sum of moduli.
"""
import argparse
import math

import numpy as np

from orbit.functionals import cond_bound_constant
from orbit.generators import haar_unitary, random_singular, trial_rng
from orbit.harness import required_constant


def extreme(rng, n, omega):
    s = rng.choice([1.0, omega], size=n)
    return random_singular(rng, n, s)


def aligned_pair(rng, n, omega):
    # A = W diag(s) and B = W' diag(s') sharing the dominant direction
    U = haar_unitary(rng, n)
    s = np.full(n, 1.0)
    s[0] = omega
    t = np.full(n, omega)
    t[0] = 1.0
    V = haar_unitary(rng, n)
    return [U @ np.diag(s) @ V, U @ np.diag(t) @ V.conj().T]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    print(f"{'omega':>7s} {'bound':>8s} {'log-uniform':>12s} {'extreme':>9s} {'aligned':>9s}")
    for omega in (1.0, 2.0, 10.0, 100.0):
        bound = cond_bound_constant(omega)
        best = {"log-uniform": 0.0, "extreme": 0.0, "aligned": 0.0}
        for k in range(args.samples):
            rng = trial_rng(args.seed, f"cond-script/{omega:g}", k)
            n = int(rng.integers(1, 5))
            m = int(rng.integers(2, 6))
            s0 = math.exp(rng.uniform(-1, 1))
            draws = {
                "log-uniform": [random_singular(rng, n, s0 * np.exp(rng.uniform(0, math.log(omega), n)))
                                for _ in range(m)],
                "extreme": [s0 * extreme(rng, n, omega) for _ in range(m)],
                "aligned": aligned_pair(rng, max(n, 2), omega),
            }
            for key, As in draws.items():
                best[key] = max(best[key], required_constant(As) / bound)
        print(f"{omega:7g} {bound:8.4f} {best['log-uniform']:12.6f} {best['extreme']:9.6f} "
              f"{best['aligned']:9.6f}")
    print("entries are sup of (needed constant) / bound; 1 means the bound is attained")


if __name__ == "__main__":
    main()
