"""Intersection lattices of fiber components and the boundary linear system.

Component indices in the public functions are 1-based, matching the
labels ``C1 .. Cl``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

Matrix = list[list[Fraction]]


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def bareiss_det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination; the empty matrix has det 1."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    if any(len(row) != n for row in a):
        raise LatticeError("determinant of a non-square matrix")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def bareiss_solve(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``m x = b`` exactly; fraction-free forward sweep, then back substitution."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    prev = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise LatticeError("singular system")
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return x


def nullspace(m: Sequence[Sequence]) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in row] for row in m]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        basis.append(v)
    return basis


def is_negative_semidefinite(m: Sequence[Sequence]) -> bool:
    """Symmetric elimination on ``-m``: a zero pivot must come with a zero row."""
    a = [[-Fraction(x) for x in row] for row in m]
    n = len(a)
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(a[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return True


def is_negative_definite(m: Sequence[Sequence]) -> bool:
    """Sylvester: the leading minors of ``-m`` are all positive."""
    n = len(m)
    neg = [[-Fraction(x) for x in row] for row in m]
    return all(bareiss_det([row[:k] for row in neg[:k]]) > 0 for k in range(1, n + 1))


def delete_index(m: Sequence[Sequence], i: int) -> list[list]:
    return [[x for j, x in enumerate(row) if j != i] for k, row in enumerate(m) if k != i]


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntersectionLattice:
    gram: tuple[tuple[int, ...], ...]
    r: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise LatticeError("gram matrix must be square and nonempty")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram matrix must be symmetric")
        r = tuple(int(x) for x in self.r)
        if len(r) != n or any(x <= 0 for x in r):
            raise LatticeError("multiplicities must be positive, one per component")
        labels = tuple(self.labels) or tuple(f"C{i + 1}" for i in range(n))
        if len(labels) != n:
            raise LatticeError("one label per component")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return len(self.r)

    def fiber_product(self) -> tuple[int, ...]:
        """``gram . r``; zero when the fiber class lies in the radical."""
        return tuple(sum(g * x for g, x in zip(row, self.r)) for row in self.gram)

    def relabel(self, perm: Sequence[int]) -> "IntersectionLattice":
        """New lattice whose component ``i`` is old component ``perm[i]`` (0-based)."""
        gram = [[self.gram[p][q] for q in perm] for p in perm]
        return IntersectionLattice(gram, [self.r[p] for p in perm], [self.labels[p] for p in perm])

    def to_json(self) -> dict:
        return {"gram": [list(row) for row in self.gram], "r": list(self.r), "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> "IntersectionLattice":
        try:
            return cls(data["gram"], data["r"], tuple(data.get("labels", ())))
        except KeyError as exc:
            raise LatticeError(f"lattice JSON is missing {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, LatticeError):
                raise
            raise LatticeError(f"malformed lattice JSON: {exc}") from None


def _from_edges(n: int, edges: Sequence[tuple[int, int]], r: Sequence[int], labels=None) -> IntersectionLattice:
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = -2
    for i, j in edges:
        gram[i][j] += 1
        gram[j][i] += 1
    return IntersectionLattice(gram, r, labels or ())


def kodaira_gram(tag: str) -> IntersectionLattice:
    """Dual graph of a reducible Kodaira fiber as an intersection lattice.

    ``I_n`` is an n-gon of (-2)-curves; ``I_n*`` is extended D_{n+4} (chain of
    multiplicity-2 curves listed first, then the four ends); ``IV*``, ``III*``,
    ``II*`` are extended E6, E7, E8.
    """
    if tag in ("I0", "I1", "II"):
        raise LatticeError(f"{tag} is irreducible; it has no intersection lattice")
    if tag == "III":
        return IntersectionLattice([[-2, 2], [2, -2]], [1, 1])
    if tag == "IV":
        return _from_edges(3, [(0, 1), (1, 2), (0, 2)], [1, 1, 1])
    if tag.startswith("I") and tag.endswith("*") and tag[1:-1].isdigit():
        n = int(tag[1:-1])
        chain = n + 1
        edges = [(i, i + 1) for i in range(n)]
        ends = range(chain, chain + 4)
        e1, e2, e3, e4 = ends
        edges += [(0, e1), (0, e2), (n, e3), (n, e4)]
        return _from_edges(chain + 4, edges, [2] * chain + [1] * 4)
    if tag.startswith("I") and tag[1:].isdigit():
        n = int(tag[1:])
        if n == 2:
            return IntersectionLattice([[-2, 2], [2, -2]], [1, 1])
        return _from_edges(n, [(i, (i + 1) % n) for i in range(n)], [1] * n)
    if tag == "IV*":
        # center, then three arms (2, 1)
        edges = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]
        return _from_edges(7, edges, [3, 2, 1, 2, 1, 2, 1])
    if tag == "III*":
        # chain 1-2-3-4-3-2-1, then the branch curve on the middle
        edges = [(i, i + 1) for i in range(6)] + [(3, 7)]
        return _from_edges(8, edges, [1, 2, 3, 4, 3, 2, 1, 2])
    if tag == "II*":
        # chain 1-2-3-4-5-6-4-2, then the branch curve on the 6
        edges = [(i, i + 1) for i in range(7)] + [(5, 8)]
        return _from_edges(9, edges, [1, 2, 3, 4, 5, 6, 4, 2, 3])
    raise LatticeError(f"unknown Kodaira symbol {tag!r}")


@dataclass(frozen=True)
class ZariskiReport:
    negative_semidefinite: bool
    radical_is_fiber: bool
    deletions_negative_definite: bool
    radical_basis: tuple[tuple[Fraction, ...], ...]
    failures: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.negative_semidefinite and self.radical_is_fiber and self.deletions_negative_definite


def verify_zariski(L: IntersectionLattice) -> ZariskiReport:
    gram = L.gram
    nsd = is_negative_semidefinite(gram)
    kernel = nullspace(gram)
    r = [Fraction(x) for x in L.r]
    radical_ok = False
    if len(kernel) == 1:
        v = kernel[0]
        pivot = next(i for i, x in enumerate(v) if x != 0)
        scale = r[pivot] / v[pivot]
        radical_ok = [x * scale for x in v] == r
    deletions_ok = all(is_negative_definite(delete_index(gram, i)) for i in range(L.size)) if L.size > 1 else False
    failures = []
    if not nsd:
        failures.append("gram is not negative semidefinite")
    if not radical_ok:
        failures.append("radical is not spanned by the multiplicity vector")
    if not deletions_ok:
        failures.append("some one-deleted principal submatrix is not negative definite")
    return ZariskiReport(nsd, radical_ok, deletions_ok, tuple(tuple(v) for v in kernel), tuple(failures))


@dataclass(frozen=True)
class BoundarySolution:
    a: tuple[Fraction, ...]
    det_A: Fraction
    det_A11: Fraction
    touched: int
    normalized: int
    certificate: bool

    @property
    def sign_pattern(self) -> dict[str, str]:
        """Signs of ``det A`` and ``det A11`` (logged; only a1 != 0 is asserted)."""
        sgn = lambda x: "negative" if x < 0 else ("positive" if x > 0 else "zero")
        return {"det_A": sgn(self.det_A), "det_A11": sgn(self.det_A11)}


def _check_index(L: IntersectionLattice, i: int, what: str) -> int:
    if not 1 <= i <= L.size:
        raise LatticeError(f"{what} index {i} out of range 1..{L.size}")
    return i - 1


def solve_boundary_system(L: IntersectionLattice, touched: int = 1, normalized: int | None = None) -> BoundarySolution:
    """Solve ``A a = (-1, 0, ..., 0)`` with ``a_normalized = 0``.

    ``A`` is the gram matrix with the normalized component removed and the
    ``-1`` sits in the row of the component hit by ``T1``.  Returns the full
    coefficient vector together with ``det A``, the cofactor determinant
    ``det A11`` and the certificate ``a_touched != a_normalized``.
    """
    if L.size < 2:
        raise LatticeError("the boundary system needs at least two components")
    normalized = L.size if normalized is None else normalized
    ti = _check_index(L, touched, "touched")
    ni = _check_index(L, normalized, "normalized")
    if ti == ni:
        raise LatticeError("touched and normalized components must differ")
    report = verify_zariski(L)
    if not report.passed:
        raise LatticeError("Zariski's lemma fails: " + "; ".join(report.failures))
    keep = [i for i in range(L.size) if i != ni]
    A = [[L.gram[i][j] for j in keep] for i in keep]
    pos = keep.index(ti)
    rhs = [Fraction(-1) if i == pos else Fraction(0) for i in range(len(keep))]
    det_A = bareiss_det(A)
    if det_A == 0:
        raise AssertionError("singular boundary system although Zariski's lemma holds")
    det_A11 = bareiss_det(delete_index(A, pos))
    sol = bareiss_solve(A, rhs)
    if sol[pos] != -det_A11 / det_A:
        raise AssertionError("Cramer's rule disagrees with elimination")
    a = [Fraction(0)] * L.size
    for idx, val in zip(keep, sol):
        a[idx] = val
    return BoundarySolution(tuple(a), det_A, det_A11, touched, normalized, a[ti] != a[ni])


def residual(L: IntersectionLattice, sol: BoundarySolution) -> tuple[Fraction, ...]:
    """``A a - (-1, 0, ..., 0)`` over the rows kept in the system; all zeros when solved."""
    ni = sol.normalized - 1
    out = []
    for i in range(L.size):
        if i == ni:
            continue
        lhs = sum(L.gram[i][j] * sol.a[j] for j in range(L.size))
        target = -1 if i == sol.touched - 1 else 0
        out.append(lhs - target)
    return tuple(out)


@dataclass(frozen=True)
class BoundaryDivisor:
    """Coefficients of the components ``C_j`` in the boundary of the cycle.

    The multiple ``N`` of the whole special fiber and the contribution of the
    remaining components of ``D_0`` are not determined and stay symbolic.
    """

    coefficients: tuple[Fraction, ...]
    labels: tuple[str, ...]
    t1: int
    t2: int
    solution: BoundarySolution
    non_torsion: bool
    symbolic_terms: tuple[str, ...] = ("N * j(E_0), N in Z undetermined", "other components of D_0")


def boundary_divisor(L: IntersectionLattice, t1: int, t2: int) -> BoundaryDivisor:
    i1 = _check_index(L, t1, "T1")
    i2 = _check_index(L, t2, "T2")
    if i1 == i2:
        raise LatticeError("T1 and T2 must meet different components")
    if L.r[i1] != 1 or L.r[i2] != 1:
        raise LatticeError("T1 and T2 must meet reduced components (multiplicity 1)")
    sol = solve_boundary_system(L, touched=t1, normalized=t2)
    return BoundaryDivisor(sol.a, L.labels, t1, t2, sol, sol.a[i1] != sol.a[i2])


def load_lattice(path: str | Path) -> IntersectionLattice:
    with open(path) as fh:
        return IntersectionLattice.from_json(json.load(fh))


def demo_lattice() -> IntersectionLattice:
    """Special fiber of one I2 component closure when it specializes into two I4 components."""
    from importlib import resources

    text = resources.files("ellfib.data").joinpath("i2_to_i4_lattice.json").read_text()
    return IntersectionLattice.from_json(json.loads(text))
