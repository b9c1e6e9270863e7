"""Independent reference implementations used to cross-check the library.

Everything here is computed from first principles (series summation, naive
double loops, exhaustive evaluation) without calling the code under test,
so agreement is meaningful.
"""

import math


def skellam_pmf_series(d, mu1, mu2, terms=200):
    """Direct series: sum over k of P(N1 = d + k) * P(N2 = k) for independent
    Poisson counts N1, N2."""
    total = 0.0
    for k in range(max(0, -d), max(0, -d) + terms):
        log_term = (-mu1 - mu2
                    + (d + k) * math.log(mu1) - math.lgamma(d + k + 1)
                    + k * math.log(mu2) - math.lgamma(k + 1))
        total += math.exp(log_term)
    return total


def jaccard_naive(a, b):
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    inter = sum(1 for x in a if x in b)
    return inter / (len(a) + len(b) - inter)


def partial_prf_naive(gold, pred):
    """Naive O(G*P) partial-credit scorer over (token set, element set) pairs."""
    if not gold and not pred:
        return 1.0, 1.0, 1.0  # empty vs empty is perfect agreement

    def best_credit(item, pool):
        best = 0.0
        for other in pool:
            credit = (jaccard_naive(item[1], other[1])
                      * jaccard_naive(item[0], other[0]))
            if credit > best:
                best = credit
        return best

    r = sum(best_credit(g, pred) for g in gold) / len(gold) if gold else 0.0
    p = sum(best_credit(q, gold) for q in pred) / len(pred) if pred else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f
