"""Arbitrary-precision evaluation of the corrupted-bandit regret bound.

Independent of the C++ code: prints the bound for the two-arm instance used in
test_bandit.cpp, summing every term of the finite series at 50 digits.

    python3 tests/oracles/bound_oracle.py
"""
from mpmath import mp, mpf, log, sqrt

mp.dps = 50


def bound(mu, mu_hat, c, n, dampen=True):
    k = len(mu)
    delta = [abs(mpf(a) - mpf(b)) for a, b in zip(mu, mu_hat)]
    beta = [c * c * ((1 - d) ** 2 if dampen else 1) for d in delta]
    star = max(range(k), key=lambda i: mu[i])
    star_hat = max(range(k), key=lambda i: mu_hat[i])
    total = mpf(0)
    for i in range(k):
        if i == star_hat:
            continue
        gap_hat = mpf(mu_hat[star_hat]) - mpf(mu_hat[i])
        series = mpf(0)
        for t in range(k + 1, n + 1):
            series += 4 * mpf(t - 1) ** (-2 * beta[i]) + 4 * mpf(t - 1) ** (-2 * beta[star_hat])
        first = 4 * beta[i] * log(n - 1) / gap_hat ** 2
        total += (first + series) * (gap_hat + delta[i] + mpf(mu[star]) - mpf(mu_hat[star_hat]))
    return total


if __name__ == "__main__":
    c = sqrt(2)
    mu = ["0.8", "0.55"]
    mu_hat = ["0.8", "0.3"]
    print("ua_ucb", mp.nstr(bound(mu, mu_hat, c, 1000), 20))
    print("ucb   ", mp.nstr(bound(mu, mu_hat, c, 1000, dampen=False), 20))
