"""Cut-cell meshes in 1D.

A background mesh of N equidistant cells is modified by splitting selected
cells into pairs of cut cells of lengths ``alpha*h`` and ``(1-alpha)*h`` with
``alpha in (0, 1/2]``.  The first cell of each pair is the small one and is
the stabilization target.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError

# Cell kinds
EQUI = "equi"
CUT_SMALL = "cut_small"
CUT_LARGE = "cut_large"

# Reject alphas below this to avoid zero-width cells.
ALPHA_FLOOR = 1e-14


@dataclass(frozen=True)
class CutPair:
    """One split background cell: indices into the cell arrays."""

    k1: int          # small cut cell, length alpha*h
    k2: int          # large cut cell, length (1-alpha)*h
    alpha: float
    left_neighbor: int   # index of the cell left of k1

    @property
    def neighborhood(self):
        """Index triple (k-1, k1, k2) of the stabilized neighborhood."""
        return (self.left_neighbor, self.k1, self.k2)


@dataclass(frozen=True)
class CutCellMesh:
    """Ordered 1D mesh with optional cut-cell pairs.

    ``edges`` has length ``n_cells + 1`` and is strictly increasing.
    """

    edges: np.ndarray
    kinds: tuple
    cut_pairs: tuple
    h: float
    x_left: float
    x_right: float
    lengths: np.ndarray = field(init=False)
    centers: np.ndarray = field(init=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if np.any(np.diff(edges) <= 0.0):
            raise MeshError("mesh edges must be strictly increasing")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "lengths", np.diff(edges))
        object.__setattr__(self, "centers", 0.5 * (edges[:-1] + edges[1:]))

    @property
    def n_cells(self):
        return len(self.lengths)

    @property
    def domain_length(self):
        return self.x_right - self.x_left

    @property
    def index_equi(self):
        return tuple(j for j, k in enumerate(self.kinds) if k == EQUI)

    @property
    def index_all(self):
        return tuple(range(self.n_cells))

    def dump_csv(self, path):
        """Write a per-cell summary (index, x_left, x_right, kind, alpha)."""
        alpha_of = {}
        for pair in self.cut_pairs:
            alpha_of[pair.k1] = pair.alpha
            alpha_of[pair.k2] = pair.alpha
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cell", "x_left", "x_right", "kind", "alpha"])
            for j in range(self.n_cells):
                writer.writerow(
                    [j, repr(self.edges[j]), repr(self.edges[j + 1]),
                     self.kinds[j], repr(alpha_of.get(j, ""))]
                )


def _check_alpha(alpha):
    if not (ALPHA_FLOOR <= alpha <= 0.5):
        raise MeshError(f"cut fraction alpha={alpha} outside (0, 1/2]")


def model_mesh(n, k, alpha, domain=(0.0, 1.0)):
    """Equidistant mesh of ``n`` cells with cell ``k`` (1-based) split.

    Returns a mesh with ``n + 1`` cells and exactly one cut pair.  The split
    cell must be interior so the small cell has a left neighbor.
    """
    _check_alpha(alpha)
    if not 2 <= k <= n - 1:
        raise MeshError(f"split index k={k} must be interior (2 <= k <= {n - 1})")
    x_l, x_r = domain
    h = (x_r - x_l) / n
    background = x_l + h * np.arange(n + 1)
    x_cut = background[k - 1] + alpha * h
    edges = np.concatenate([background[:k], [x_cut], background[k:]])
    kinds = [EQUI] * (k - 1) + [CUT_SMALL, CUT_LARGE] + [EQUI] * (n - k)
    pair = CutPair(k1=k - 1, k2=k, alpha=float(alpha), left_neighbor=k - 2)
    return CutCellMesh(edges=edges, kinds=tuple(kinds), cut_pairs=(pair,),
                       h=h, x_left=x_l, x_right=x_r)


def banded_mesh(n, band, alpha=None, seed=None, domain=(0.0, 1.0),
                snap=False):
    """Split every background cell inside ``band`` into a cut pair.

    Either a constant ``alpha`` is used for every pair, or (with ``seed``)
    each pair draws ``alpha_k = 1e-2 * X_k`` with ``X_k`` uniform in (0, 1)
    from a counter-based Philox generator so meshes are reproducible.
    The band must be aligned with background cell edges unless ``snap``
    is set, in which case it is moved to the nearest edges while keeping
    its cell count ``round((b - a)/h)``.
    """
    if (alpha is None) == (seed is None):
        raise MeshError("specify exactly one of constant alpha or RNG seed")
    x_l, x_r = domain
    h = (x_r - x_l) / n
    background = x_l + h * np.arange(n + 1)
    a, b = band
    if snap:
        ia = int(np.floor((a - x_l) / h + 0.5))
        ib = ia + int(np.floor((b - a) / h + 0.5))
    else:
        ia = int(round((a - x_l) / h))
        ib = int(round((b - x_l) / h))
        tol = 1e-12 * max(1.0, abs(x_r - x_l))
        if abs(background[ia] - a) > tol or abs(background[ib] - b) > tol:
            raise MeshError(
                f"band {band} not aligned with background edges (h={h})")
    if not 0 < ia < ib < n:
        raise MeshError("band must be a nonempty interior cell range")

    n_split = ib - ia
    if alpha is not None:
        _check_alpha(alpha)
        alphas = np.full(n_split, float(alpha))
    else:
        rng = np.random.Generator(np.random.Philox(seed))
        alphas = 1e-2 * rng.random(n_split)
        while np.any(alphas < ALPHA_FLOOR):   # redraw degenerate cells
            bad = alphas < ALPHA_FLOOR
            alphas[bad] = 1e-2 * rng.random(int(bad.sum()))

    edges = list(background[: ia + 1])
    kinds = [EQUI] * ia
    pairs = []
    for i in range(n_split):
        left = background[ia + i]
        edges.append(left + alphas[i] * h)
        edges.append(background[ia + i + 1])
        k1 = len(kinds)
        kinds.extend([CUT_SMALL, CUT_LARGE])
        pairs.append(CutPair(k1=k1, k2=k1 + 1, alpha=float(alphas[i]),
                             left_neighbor=k1 - 1))
    edges.extend(background[ib + 1:])
    kinds.extend([EQUI] * (n - ib))
    return CutCellMesh(edges=np.asarray(edges), kinds=tuple(kinds),
                       cut_pairs=tuple(pairs), h=h, x_left=x_l, x_right=x_r)


def sod_mesh(n=100, band=(-0.75, 0.75), alpha=None, seed=0,
             domain=(-1.0, 1.0)):
    """Shock-tube mesh on (-1, 1): cut pairs inside ``band``.

    Fractions are random by default; passing ``alpha`` makes them constant.
    The default band is not edge-aligned for n=100, so it is snapped to the
    nearest edges (75 split cells, 175 total).
    """
    if alpha is not None:
        return banded_mesh(n, band, alpha=alpha, domain=domain, snap=True)
    return banded_mesh(n, band, seed=seed, domain=domain, snap=True)


def uniform_mesh(n, domain=(0.0, 1.0)):
    """Plain equidistant mesh without cut cells."""
    x_l, x_r = domain
    edges = x_l + (x_r - x_l) / n * np.arange(n + 1)
    return CutCellMesh(edges=edges, kinds=(EQUI,) * n, cut_pairs=(),
                       h=(x_r - x_l) / n, x_left=x_l, x_right=x_r)
