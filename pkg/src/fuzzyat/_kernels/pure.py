"""Pure-Python kernels. Reference implementation and fallback.

The compiled module (_fast.pyx) mirrors these functions exactly; both must
produce bit-identical results since IEEE double arithmetic is applied in the
same order.  Operation codes follow fuzzy.OP_TAGS:
0 = min, 1 = max, 2 = add, 3 = sub, 4 = mul.
"""

from itertools import product

_OPS = (
    lambda u, w: u if u < w else w,
    lambda u, w: u if u > w else w,
    lambda u, w: u + w,
    lambda u, w: u - w,
    lambda u, w: u * w,
)


def zadeh_pairs(op, xv, xd, yv, yd):
    """Max-min aggregation over all support pairs of a binary operation.

    Returns (values, degrees) sorted by value.
    """
    f = _OPS[op]
    best = {}
    for u, du in zip(xv, xd):
        for w, dw in zip(yv, yd):
            z = f(u, w) + 0.0  # normalizes -0.0
            d = du if du < dw else dw
            if d > best.get(z, 0.0):
                best[z] = d
    values = sorted(best)
    return values, [best[v] for v in values]


def oracle_accumulate(or_op, and_op, supp_values, supp_degrees, attacks):
    """Enumerate every combination of leaf support values and aggregate
    max-min degrees per resulting metric value.

    supp_values / supp_degrees hold one sequence per leaf (same order);
    attacks holds index tuples into that leaf order.  The metric of one
    combination folds ``and_op`` over each attack's members and ``or_op``
    across attacks, in the given order.

    Returns (values, degrees, combinations).
    """
    orf = _OPS[or_op]
    andf = _OPS[and_op]
    best = {}
    count = 0
    for idx in product(*(range(len(vs)) for vs in supp_values)):
        count += 1
        deg = 1.0
        for b, i in enumerate(idx):
            d = supp_degrees[b][i]
            if d < deg:
                deg = d
        metric = None
        for members in attacks:
            acc = supp_values[members[0]][idx[members[0]]]
            for m in members[1:]:
                acc = andf(acc, supp_values[m][idx[m]])
            metric = acc if metric is None else orf(metric, acc)
        metric = metric + 0.0
        if deg > best.get(metric, 0.0):
            best[metric] = deg
    values = sorted(best)
    return values, [best[v] for v in values], count
