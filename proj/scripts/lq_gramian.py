#!/usr/bin/env python3
"""Closed-form minimum action for the linear multi-mode endpoint problem.

With linear drift F(u) = (a - b) u and K orthonormal noise modes whose
frequencies are n_k = ceil(k / 2) on the box [-L, L), each spectral
coefficient is an independent scalar channel

    dX_k = -( n_k^{2 alpha} (pi / L)^{2 alpha} + (a - b) ) X_k dt + c_k v_k dt,

so steering X_k from 0 to y_k in time T costs y_k^2 / (2 W_k) with the
controllability Gramian

    W_k = c_k^2 (1 - exp(-2 mu_k T)) / (2 mu_k).

The total is the sum over modes. This script is the reference for the
`reference_action` entries in the configs; it shares no code with the C++
implementation.
"""

import argparse
import math


def mode_rate(k, alpha, half_width, slope):
    freq = (k + 1) // 2  # modes alternate cos/sin at frequency ceil(k/2)
    xi = freq * math.pi / half_width
    return xi ** (2.0 * alpha) + slope


def min_action(targets, amp, amp_decay, alpha, half_width, slope, t_final):
    total = 0.0
    for i, y in enumerate(targets):
        k = i + 1
        mu = mode_rate(k, alpha, half_width, slope)
        c = amp * k ** (-amp_decay)
        gramian = c * c * (1.0 - math.exp(-2.0 * mu * t_final)) / (2.0 * mu)
        total += y * y / (2.0 * gramian)
    return total


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--targets", default="0.8,0.5,0.3",
                    help="endpoint coefficients y_k, comma separated")
    ap.add_argument("--amp", type=float, default=0.4, help="noise amplitude")
    ap.add_argument("--amp-decay", type=float, default=0.0,
                    help="per-mode amplitude decay exponent")
    ap.add_argument("--alpha", type=float, default=0.5, help="fractional order")
    ap.add_argument("--half-width", type=float, default=math.pi, help="box half width L")
    ap.add_argument("--slope", type=float, default=1.25,
                    help="linear drift rate a - b")
    ap.add_argument("--t-final", type=float, default=1.0, help="horizon T")
    args = ap.parse_args()

    targets = [float(t) for t in args.targets.split(",") if t.strip()]
    total = 0.0
    for i, y in enumerate(targets):
        k = i + 1
        mu = mode_rate(k, args.alpha, args.half_width, args.slope)
        c = args.amp * k ** (-args.amp_decay)
        w = c * c * (1.0 - math.exp(-2.0 * mu * args.t_final)) / (2.0 * mu)
        part = y * y / (2.0 * w)
        total += part
        print(f"mode {k}: mu = {mu:.10f}  c = {c:.6f}  W = {w:.10f}  action = {part:.10f}")
    print(f"total minimum action: {total:.10f}")


if __name__ == "__main__":
    main()
