#!/usr/bin/env python3
"""Monte-Carlo reference values for the detector calibration tests.

Re-implements, independently of the C++ library, the seeded random streams
(64-bit Mersenne Twister, 53-bit uniforms, Box-Muller pairs, seed derivation)
and the CUSUM and single-trajectory BOCPD decision rules, then writes the
estimates to tests/fixtures/mc_oracle.json.

Usage: python3 tests/oracles/mc_oracle.py [--bocpd-runs N] [--out PATH] [--only cusum|bocpd ...]
"""

import argparse
import json
import math
import os
import statistics

MASK64 = (1 << 64) - 1


class MT19937_64:
    n, m = 312, 156
    matrix_a = 0xB5026F5AA96619E9
    upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.n
        self.mt[0] = seed & MASK64
        for i in range(1, self.n):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK64
        self.index = self.n

    def _twist(self):
        mt, n, m = self.mt, self.n, self.m
        for i in range(n):
            x = (mt[i] & self.upper) | (mt[(i + 1) % n] & self.lower)
            xa = x >> 1
            if x & 1:
                xa ^= self.matrix_a
            mt[i] = mt[(i + m) % n] ^ xa
        self.index = 0

    def next_u64(self):
        if self.index >= self.n:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK64


class Rng:
    def __init__(self, seed):
        self.engine = MT19937_64(seed)
        self.spare = None

    def uniform(self):
        return float(self.engine.next_u64() >> 11) * 2.0 ** -53

    def normal(self, mean=0.0, stdev=1.0):
        if self.spare is not None:
            z, self.spare = self.spare, None
            return mean + stdev * z
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        self.spare = radius * math.sin(angle)
        return mean + stdev * radius * math.cos(angle)


def mix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def fnv1a64(text):
    h = 0xCBF29CE484222325
    for c in text.encode():
        h ^= c
        h = (h * 0x100000001B3) & MASK64
    return h


def derive_seed(master, purpose, index=None):
    base = mix64(master ^ fnv1a64(purpose))
    if index is None:
        return base
    return mix64((base + mix64(index)) & MASK64)


class Cusum:
    """Adaptive two-sided CUSUM: EWMA shift estimate, log-likelihood-ratio
    increments in data units, H = 5 sigma, reset after an alarm."""

    def __init__(self, alpha=0.025, h_sigma=5.0, warmup=3):
        self.alpha, self.h_sigma, self.warmup = alpha, h_sigma, warmup
        self.values = []
        self.cp = self.cm = 0.0

    def observe(self, y):
        if len(self.values) < self.warmup:
            self.values.append(y)
            if len(self.values) == self.warmup:
                anchor = self.values[0]
                offset = 0.0
                for v in self.values:
                    offset += v - anchor
                self.target = anchor + offset / len(self.values)
                ss = 0.0
                for v in self.values:
                    ss += (v - self.target) * (v - self.target)
                self.sigma = max(math.sqrt(ss / (len(self.values) - 1)), 1e-8)
                self.h = self.h_sigma * self.sigma
                self.ewma = self.target
            return None
        dev = y - self.target
        shift = self.alpha * (self.ewma - self.target)
        gain = shift / self.sigma
        self.cp = max(0.0, self.cp + gain * (dev - shift / 2.0))
        self.cm = max(0.0, self.cm - gain * (dev + shift / 2.0))
        self.ewma += (1.0 - self.alpha) * (y - self.ewma)
        if self.cp > self.h or self.cm > self.h:
            self.cp = self.cm = 0.0
            return True
        return False


def t_logpdf(y, df, mean, scale):
    z = (y - mean) / scale
    return (math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
            - math.log(scale) - (df + 1) / 2 * math.log1p(z * z / df))


class Bocpd:
    """Single-trajectory detector: Student-t predictive of the current
    Normal-Inverse-Gamma posterior; below the threshold is an attack and the
    posterior is left as is, otherwise the conjugate update absorbs y."""

    def __init__(self, mu=0.0, kappa=0.1, alpha=1e-5, beta=1e-5, threshold=2e-4, warmup=10):
        self.mu, self.kappa, self.alpha, self.beta = mu, kappa, alpha, beta
        self.threshold, self.warmup, self.seen = threshold, warmup, 0

    def observe(self, y):
        scale = math.sqrt(self.beta * (self.kappa + 1) / (self.alpha * self.kappa))
        p = math.exp(t_logpdf(y, 2 * self.alpha, self.mu, scale))
        warmed = self.seen >= self.warmup
        self.seen += 1
        if warmed and p < self.threshold:
            return True
        k = self.kappa
        self.beta += k * (y - self.mu) ** 2 / (2 * (k + 1))
        self.mu = (k * self.mu + y) / (k + 1)
        self.kappa = k + 1
        self.alpha += 0.5
        return False


def cusum_false_alarms(streams=1000, samples=1000, master=5):
    rates = []
    alarms_total = 0
    for i in range(streams):
        rng = Rng(derive_seed(master, "cusum.noise", i))
        det = Cusum()
        alarms = 0
        counted = 0
        for _ in range(samples):
            r = det.observe(rng.normal())
            if r is None:
                continue
            counted += 1
            alarms += r
        rates.append(alarms / counted)
        alarms_total += alarms
    mean = statistics.fmean(rates)
    half = 1.959963984540054 * statistics.stdev(rates) / math.sqrt(streams)
    return {
        "streams": streams, "samples_per_stream": samples, "warmup": 3, "master_seed": master,
        "seed_purpose": "cusum.noise", "alarms": alarms_total,
        "rate": mean, "ci95_low": mean - half, "ci95_high": mean + half,
    }


def cusum_step_delay(streams=1000, before=200, after=100, shift=10.0, master=6):
    delays = []
    undetected = 0
    for i in range(streams):
        rng = Rng(derive_seed(master, "cusum.step", i))
        det = Cusum()
        delay = None
        for k in range(before + after):
            y = rng.normal() + (shift if k >= before else 0.0)
            if det.observe(y) and k >= before and delay is None:
                delay = k - before
        if delay is None:
            undetected += 1
        else:
            delays.append(delay)
    return {
        "streams": streams, "before": before, "after": after, "shift_sigma": shift, "warmup": 3,
        "master_seed": master, "seed_purpose": "cusum.step",
        "undetected": undetected, "max_delay": max(delays), "mean_delay": statistics.fmean(delays),
    }


def bocpd_calibration(runs, samples=510, master=2024):
    clean = 0
    clean_first100 = 0
    for run in range(runs):
        rng = Rng(derive_seed(master, "bocpd.calibration", run))
        det = Bocpd()
        flagged = any([det.observe(rng.normal()) for _ in range(samples)])
        if not flagged:
            clean += 1
            if run < 100:
                clean_first100 += 1
    p = clean / runs
    half = 1.959963984540054 * math.sqrt(p * (1 - p) / runs)
    return {
        "runs": runs, "samples_per_run": samples, "warmup": 10, "master_seed": master,
        "seed_purpose": "bocpd.calibration", "clean_runs": clean, "clean_fraction": p,
        "ci95_low": p - half, "ci95_high": p + half, "clean_in_first_100": clean_first100,
    }


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bocpd-runs", type=int, default=20000)
    parser.add_argument("--out", default=os.path.join(here, "..", "fixtures", "mc_oracle.json"))
    parser.add_argument("--only", nargs="*", choices=["cusum", "bocpd"],
                        help="recompute these sections and keep the rest of an existing fixture")
    args = parser.parse_args()
    only = set(args.only) if args.only else {"cusum", "bocpd"}

    result = {}
    if os.path.exists(args.out) and args.only:
        with open(args.out) as f:
            result = json.load(f)
    first = Rng(derive_seed(0, "pin"))
    result["generator_check"] = {"seed": derive_seed(0, "pin"), "first_u64": first.engine.next_u64()}
    if "cusum" in only:
        result["cusum_false_alarm"] = cusum_false_alarms()
        result["cusum_step"] = cusum_step_delay()
    if "bocpd" in only:
        result["bocpd_calibration"] = bocpd_calibration(args.bocpd_runs)
    result = {k: result[k] for k in ("generator_check", "cusum_false_alarm", "cusum_step", "bocpd_calibration")}
    with open(args.out, "w") as f:
        json.dump(result, f, indent=2)
        f.write("\n")
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
