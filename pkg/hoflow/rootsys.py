"""
rootsys
=======

Exact combinatorics of the root system of type BC_r: positive roots tagged by
class, simple roots, the Weyl group of signed permutations, the lattice cone
spanned by the simple roots and the coordinate conventions every other module
relies on.

Conventions
-----------
The basis e_1..e_r is orthonormal and the long roots are ``beta_j = p * e_j``
(``p`` is the long-root norm, default 2). Short roots are ``(p/2) e_j``,
middle roots ``(p/2)(e_j +- e_i)`` for ``i < j``. The positive chamber is
``0 < x_1 < x_2 < ... < x_r`` and the simple roots are
``sigma_1 = beta_1 / 2``, ``sigma_k = (beta_k - beta_{k-1}) / 2``.

Covectors and points of the Cartan subspace are both stored as NumPy arrays in
the e-basis; the pairing is the Euclidean dot product.

Weyl group elements are signed permutation matrices. ``weyl[0]`` is the
identity and elements are addressed by their integer index everywhere.

Examples
--------
.. code-block:: python

    from hoflow.rootsys import RootSystemBC

    rs = RootSystemBC(2)
    len(rs.positive_roots)            # 6
    rs.dominant_representative([-3.0, 1.0])   # (array([1., 3.]), index)
"""
# builtins
import itertools
import logging
from typing import Iterator, NamedTuple

# dependencies
import numpy as np

# custom
from hoflow import config

ROOT_CLASSES = ("short", "middle", "long")

class LatticePoint(NamedTuple):
    '''Point nu = sum n_k sigma_k of the cone spanned by the simple roots.'''
    coords: tuple

    @property
    def height(self) -> int:
        return int(sum(self.coords))

def _compositions(total: int, parts: int) -> Iterator[tuple]:
    '''all tuples of ``parts`` nonnegative integers summing to ``total``, lexicographically'''
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest

class RootSystemBC:
    """
    Root data of BC_r in orthonormal coordinates.

    Parameters
    ----------
    rank : int
        The rank r (1 <= r <= config.MAX_RANK).
    long_norm : float, optional
        Norm p of the long roots. Default is config.DEFAULT_LONG_NORM (2.0).

    Attributes
    ----------
    positive_roots : numpy.ndarray
        Array of shape (r(r+1), r), short roots first, then middle, then long.
    root_classes : tuple[str]
        Class label of each row of ``positive_roots``.
    simple_roots : numpy.ndarray
        Array of shape (r, r), rows sigma_1..sigma_r.
    weyl : numpy.ndarray
        Array of shape (2^r r!, r, r) of signed permutation matrices.
    reflection_table : numpy.ndarray
        Integer array of shape (r(r+1), |W|); entry (a, w) is the index of r_alpha w.

    Raises
    ------
    ValueError
        If the rank is not a positive integer, exceeds MAX_RANK, or if p <= 0.
    """
    def __init__(self, rank: int, long_norm: float = config.DEFAULT_LONG_NORM):
        if not isinstance(rank, (int, np.integer)) or isinstance(rank, bool) or rank < 1:
            raise ValueError(f"Rank must be a positive integer, got {rank!r}")
        if rank > config.MAX_RANK:
            raise ValueError(f"Rank {rank} exceeds the supported maximum {config.MAX_RANK} (Weyl orbit sums grow as 2^r r!).")
        if not long_norm > 0:
            raise ValueError(f"Long root norm must be positive, got {long_norm!r}")
        self.rank = int(rank)
        self.long_norm = float(long_norm)

        self._build_roots()
        self._build_weyl_group()
        self._build_reflection_table()
        logging.debug(f"Built {self}")

    def __str__(self) -> str:
        return f"BC_{self.rank}(p={self.long_norm:g})"

    def __repr__(self) -> str:
        return f"RootSystemBC(rank={self.rank}, long_norm={self.long_norm!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystemBC) and (self.rank, self.long_norm) == (other.rank, other.long_norm)

    def __hash__(self) -> int:
        return hash((self.rank, self.long_norm))

    ############################################# SETUP #########################################
    def _build_roots(self) -> None:
        r, p = self.rank, self.long_norm
        eye = np.eye(r)
        short = [p / 2 * eye[j] for j in range(r)]
        middle = []
        for j in range(r):
            for i in range(j):
                middle.append(p / 2 * (eye[j] - eye[i]))
                middle.append(p / 2 * (eye[j] + eye[i]))
        long = [p * eye[j] for j in range(r)]

        roots = short + middle + long
        self.positive_roots = np.array(roots, dtype=float).reshape(len(roots), r)
        self.root_classes = tuple(["short"] * len(short) + ["middle"] * len(middle) + ["long"] * len(long))
        self.root_norms2 = np.einsum("ij,ij->i", self.positive_roots, self.positive_roots)

        simple = [p / 2 * eye[0]] + [p / 2 * (eye[k] - eye[k - 1]) for k in range(1, r)]
        self.simple_roots = np.array(simple, dtype=float)

        # simple coordinates of the positive roots are integers
        self.root_simple_coords = np.rint(np.array([self.simple_coords(a) for a in self.positive_roots])).astype(int)
        self.root_heights = self.root_simple_coords.sum(axis=1)

    def _build_weyl_group(self) -> None:
        r = self.rank
        mats = []
        for perm in itertools.permutations(range(r)):
            for signs in itertools.product((1, -1), repeat=r):
                mat = np.zeros((r, r), dtype=np.int8)
                for i in range(r):
                    mat[i, perm[i]] = signs[i]
                mats.append(mat)
        self._weyl_int = np.array(mats, dtype=np.int8)
        self.weyl = self._weyl_int.astype(float)
        self._weyl_index = {mat.tobytes(): idx for idx, mat in enumerate(self._weyl_int)}

    def _build_reflection_table(self) -> None:
        table = np.empty((len(self.positive_roots), self.order), dtype=int)
        for a, alpha in enumerate(self.positive_roots):
            refl = self.reflection_matrix(alpha)
            for w in range(self.order):
                table[a, w] = self.index_of(refl @ self.weyl[w])
        self.reflection_table = table
        # r_alpha as a Weyl index
        self.reflection_indices = table[:, 0].copy()

    ############################################# WEYL GROUP #########################################
    @property
    def order(self) -> int:
        '''|W| = 2^r r!'''
        return len(self._weyl_int)

    def index_of(self, matrix: np.ndarray) -> int:
        """
        Returns the index of a signed permutation matrix in ``self.weyl``.

        Raises
        ------
        KeyError
            If the matrix is not an element of W.
        """
        key = np.rint(np.asarray(matrix)).astype(np.int8).tobytes()
        if key not in self._weyl_index:
            raise KeyError(f"Matrix is not a signed permutation of rank {self.rank}:\n{matrix}")
        return self._weyl_index[key]

    def compose(self, w1: int, w2: int) -> int:
        '''index of w1 w2'''
        return self.index_of(self._weyl_int[w1].astype(int) @ self._weyl_int[w2].astype(int))

    def inverse(self, w: int) -> int:
        return self.index_of(self._weyl_int[w].T)

    def weyl_act(self, w: int, v) -> np.ndarray:
        """
        Applies the Weyl group element with index ``w`` to a (co)vector.

        Parameters
        ----------
        w : int
            Index into ``self.weyl``.
        v : array_like
            Real or complex vector of length r.

        Returns
        -------
        numpy.ndarray
            The image ``w v``; same dtype kind as ``v``.
        """
        v = self._as_vector(v)
        return self.weyl[w] @ v

    def weyl_orbit(self, v) -> np.ndarray:
        '''Array of shape (|W|, r) with row w equal to weyl_act(w, v).'''
        v = self._as_vector(v)
        return np.einsum("wij,j->wi", self.weyl, v)

    def reflection_matrix(self, alpha) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        return np.eye(self.rank) - 2.0 * np.outer(alpha, alpha) / alpha.dot(alpha)

    def dominant_representative(self, v) -> tuple[np.ndarray, int]:
        """
        Rotates a real vector into the closed positive chamber.

        The chamber is 0 <= x_1 <= ... <= x_r, so the representative is the
        sorted vector of absolute values.

        Parameters
        ----------
        v : array_like
            Real vector of length r.

        Returns
        -------
        tuple[numpy.ndarray, int]
            The dominant vector and the index of a Weyl element w with ``w v`` equal to it.

        Examples
        --------
        >>> rs = RootSystemBC(2)
        >>> rs.dominant_representative([-3.0, 1.0])[0]
        array([1., 3.])
        """
        v = np.asarray(v, dtype=float).reshape(self.rank)
        order = np.argsort(np.abs(v), kind="stable")
        mat = np.zeros((self.rank, self.rank), dtype=np.int8)
        for i, j in enumerate(order):
            mat[i, j] = -1 if v[j] < 0 else 1
        w = self._weyl_index[mat.tobytes()]
        return self.weyl[w] @ v, w

    ############################################# COORDINATES #########################################
    def _as_vector(self, v) -> np.ndarray:
        arr = np.asarray(v)
        if arr.dtype.kind not in "fc":
            arr = arr.astype(float)
        if arr.shape != (self.rank,):
            arr = arr.reshape(-1)
            if arr.shape != (self.rank,):
                raise ValueError(f"Expected a vector of length {self.rank}, got shape {np.shape(v)}")
        return arr

    def simple_coords(self, v) -> np.ndarray:
        """
        Coordinates of ``v`` in the basis of simple roots.

        With sigma_1 = (p/2) e_1 and sigma_k = (p/2)(e_k - e_{k-1}) the system is
        upper bidiagonal and is solved by back-substitution (a reversed cumulative sum).
        """
        v = self._as_vector(v)
        scaled = 2.0 * v / self.long_norm
        return np.cumsum(scaled[::-1])[::-1]

    def from_simple_coords(self, coords) -> np.ndarray:
        '''inverse of simple_coords'''
        c = np.asarray(coords)
        if c.dtype.kind not in "fc":
            c = c.astype(float)
        nxt = np.append(c[..., 1:], np.zeros(c.shape[:-1] + (1,)), axis=-1)
        return self.long_norm / 2.0 * (c - nxt)

    def pairings(self, lam) -> np.ndarray:
        '''lambda_alpha = <lambda, alpha> / <alpha, alpha> for every positive root.'''
        lam = self._as_vector(lam)
        return (self.positive_roots @ lam) / self.root_norms2

    def root_values(self, x) -> np.ndarray:
        '''alpha(x) for every positive root.'''
        return self.positive_roots @ self._as_vector(x)

    def simple_values(self, x) -> np.ndarray:
        '''sigma_k(x) for k = 1..r.'''
        return self.simple_roots @ self._as_vector(x)

    def wall_margin(self, x) -> float:
        '''min_k sigma_k(x); positive iff x lies in the open positive chamber.'''
        return float(np.min(self.simple_values(x)))

    def is_regular(self, x, margin: float = 0.0) -> bool:
        '''True if |alpha(x)| > margin for every root.'''
        return bool(np.all(np.abs(self.root_values(x)) > margin))

    def class_mask(self, root_class: str) -> np.ndarray:
        if root_class not in ROOT_CLASSES:
            raise KeyError(f"Unknown root class {root_class}. Must be one of {ROOT_CLASSES}")
        return np.array([cls == root_class for cls in self.root_classes])

    def is_root(self, v, tol: float = 1e-12) -> bool:
        '''membership of v in the full root system (positive or negative)'''
        v = self._as_vector(v)
        diffs = np.minimum(np.abs(self.positive_roots - v).max(axis=1), np.abs(self.positive_roots + v).max(axis=1))
        return bool(diffs.min() <= tol)

    ############################################# LATTICE CONE #########################################
    def enumerate_cone(self, max_height: int) -> list[LatticePoint]:
        """
        Lists the points of the cone spanned by the simple roots up to a height.

        Parameters
        ----------
        max_height : int
            Largest height sum(n_k) to include.

        Returns
        -------
        list[LatticePoint]
            Sorted by height, then lexicographically; C(max_height + r, r) points.

        Raises
        ------
        ValueError
            If ``max_height`` is negative.
        """
        if max_height < 0:
            raise ValueError(f"max_height must be nonnegative, got {max_height}")
        return [LatticePoint(c) for h in range(max_height + 1) for c in _compositions(h, self.rank)]
