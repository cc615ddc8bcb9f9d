import itertools
import math
import os
import numpy as np
import scipy.sparse

from .YoungDiagram import YoungDiagram, cycleType, youngDiagrams
from ..Errors import SizeGuardError
from ..numerics import tolerances
from ..numerics.linearAlgebra import checkDimension


# Largest number of copies handled by the permutation sums
maxCopies = 8

# Environment variable naming the on-disk projector cache
cacheVariable = "THERMOCAP_CACHE_DIR"

_projectorCache = {}


class SchurBlock:
    """
    Schur-Weyl block :math:`Q_\\lambda\\otimes P_\\lambda` of
    :math:`(\\mathbb{C}^d)^{\\otimes n}` and its projector
    :math:`\\Pi^\\lambda`.

    Attributes
    ----------
    diagram : :class:`.YoungDiagram`
    n : int
    d : int
    projector : numpy.ndarray
        Read-only :math:`\\Pi^\\lambda`, real and symmetric.
    dimQ : int
        Weyl dimension of :math:`Q_\\lambda`.
    dimP : int
        Hook-length dimension of :math:`P_\\lambda`.
    entropy : float
        :math:`\\bar H(\\lambda)`.
    """

    def __init__ ( self, theDiagram, theProjector ):
        self.diagram = theDiagram
        self.n = theDiagram.n
        self.d = theDiagram.d
        self.projector = theProjector
        self.dimQ = theDiagram.weylDimension()
        self.dimP = theDiagram.hookLengthDimension()
        self.entropy = theDiagram.normalizedEntropy()

    @property
    def dimension ( self ):
        return self.dimQ*self.dimP

    def idempotenceResidual ( self ):
        P = self.projector
        return float(np.max(np.abs(P @ P - P))) if P.size else 0.0


def _checkSize ( n, d ):
    if n > maxCopies:
        raise SizeGuardError("Schur-Weyl projectors are limited to n <= {}, got n={}.".format(maxCopies, n))
    checkDimension(d**n, "Schur-Weyl projector")


def permutationIndexMap ( thePermutation, d, theDigits=None ):
    """
    Index map of the operator :math:`U(\\pi)` that moves tensor factor
    ``k`` to position ``thePermutation[k]``: ``U[map[i], i] = 1``.
    """
    perm = list(thePermutation)
    n = len(perm)
    digits = np.indices([d]*n).reshape(n, -1) if theDigits is None else theDigits
    moved = np.empty_like(digits)
    moved[perm, :] = digits
    powers = d**np.arange(n - 1, -1, -1)
    return powers @ moved


def permutationOperator ( thePermutation, d ):
    """
    Sparse permutation operator :math:`U(\\pi)` on :math:`(\\mathbb{C}^d)^{\\otimes n}`.

    Returns
    -------
    scipy.sparse.csr_matrix
    """
    target = permutationIndexMap(thePermutation, d)
    size = len(target)
    return scipy.sparse.csr_matrix((np.ones(size), (target, np.arange(size))), shape=(size, size))


def randomPermutation ( n, rng ):
    return tuple(int(k) for k in rng.permutation(n))


def _cachePath ( theDiagram ):
    directory = os.environ.get(cacheVariable)
    if not directory:
        return None
    name = "schur_n{}_d{}_{}.npy".format(theDiagram.n, theDiagram.d, "-".join(str(p) for p in theDiagram.parts))
    return os.path.join(directory, name)


def schurProjector ( theDiagram, n=None, d=None ):
    """
    Projector onto the Schur-Weyl block of a Young diagram,
    :math:`\\Pi^\\lambda = \\frac{\\dim P_\\lambda}{n!}\\sum_\\pi\\chi^\\lambda(\\pi)U(\\pi)`.

    Characters come from the Murnaghan-Nakayama rule; the permutation
    operators are accumulated one by one into the projector as index maps.  When the
    environment variable ``THERMOCAP_CACHE_DIR`` names a directory the
    projector is stored there as a ``.npy`` file and reused.

    Parameters
    ----------
    theDiagram : :class:`.YoungDiagram` or tuple of int
    n, d : int or None
        Checked against the diagram when given; ``d`` is needed when a
        tuple is passed.

    Returns
    -------
    :class:`.SchurBlock`

    Raises
    ------
    SizeGuardError
        If ``n > 8`` or ``d**n > 4096``.
    """
    if not isinstance(theDiagram, YoungDiagram):
        theDiagram = YoungDiagram(theDiagram, d)
    if d is not None and d != theDiagram.d:
        theDiagram = YoungDiagram(theDiagram.rows, d)
    if n is not None and n != theDiagram.n:
        raise ValueError("Diagram {} has {} boxes, not {}.".format(theDiagram.parts, theDiagram.n, n))
    n, d = theDiagram.n, theDiagram.d
    _checkSize(n, d)

    key = (n, d, theDiagram.parts)
    if key in _projectorCache:
        return SchurBlock(theDiagram, _projectorCache[key])

    path = _cachePath(theDiagram)
    if path is not None and os.path.exists(path):
        P = np.load(path)
    else:
        size = d**n
        P = np.zeros((size, size))
        columns = np.arange(size)
        digits = np.indices([d]*n).reshape(n, -1)
        characters = {}
        for perm in itertools.permutations(range(n)):
            mu = cycleType(perm)
            if mu not in characters:
                characters[mu] = theDiagram.character(mu)
            if characters[mu] != 0:
                # Each U(pi) has one unit entry per column
                P[permutationIndexMap(perm, d, digits), columns] += characters[mu]
        dimP = theDiagram.hookLengthDimension()
        P *= dimP/math.factorial(n)
        P[np.abs(P) < tolerances.rankThreshold] = 0.0
        if path is not None:
            np.save(path, P)
    P.setflags(write=False)
    _projectorCache[key] = P
    return SchurBlock(theDiagram, P)


def schurBlocks ( n, d ):
    """
    Every Schur-Weyl block of :math:`(\\mathbb{C}^d)^{\\otimes n}`.
    """
    return [schurProjector(lam) for lam in youngDiagrams(n, d)]


def blockWeight ( theDiagram, rho ):
    """
    :math:`\\mathrm{tr}[\\Pi^\\lambda\\rho^{\\otimes n}]` from power sums,
    :math:`\\frac{\\dim P_\\lambda}{n!}\\sum_\\mu |C_\\mu|\\,\\chi^\\lambda(\\mu)\\prod_i \\mathrm{tr}\\,\\rho^{\\mu_i}`,
    without building the projector.
    """
    rho = np.asarray(rho)
    vals = np.clip(np.real(np.linalg.eigvalsh(0.5*(rho + rho.conj().T))), 0.0, None)
    n = theDiagram.n
    total = 0.0
    for mu in youngDiagrams(n, n):
        cycles = mu.rows
        size = math.factorial(n)
        for length in set(cycles):
            m = cycles.count(length)
            size //= length**m*math.factorial(m)
        power = np.prod([np.sum(vals**c) for c in cycles])
        total += size*theDiagram.character(cycles)*power
    return float(theDiagram.hookLengthDimension()*total/math.factorial(n))
