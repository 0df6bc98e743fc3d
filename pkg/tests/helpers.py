"""Small constructors shared by the test modules."""
from nilalg.cohomology import BilinearForm
from nilalg.scalars import QQ


def vec(*xs, tag=QQ):
    return tuple(tag(x) for x in xs)


def mat(rows, tag=QQ):
    return tuple(tuple(tag(x) for x in r) for r in rows)


def delta(n, i, j, tag=QQ):
    """Delta_ij with 1-based indices."""
    return BilinearForm.delta(n, tag, i - 1, j - 1)


def form_vec(n, *terms, tag=QQ):
    """Coefficient vector of sum c * Delta_ij given as (c, i, j) triples."""
    v = [tag.zero] * (n * n)
    for c, i, j in terms:
        v[(i - 1) * n + (j - 1)] += tag(c)
    return tuple(v)
