import itertools
import numpy as np

from .SchurBlock import blockWeight, permutationIndexMap, schurProjector
from .YoungDiagram import YoungDiagram, cycleType, youngDiagrams
from ..entropies.quantities import vonNeumann
from ..numerics.HermitianOperator import asMatrix, hermitize, sqrtPsd
from ..numerics.linearAlgebra import checkDimension, kronPower, maxEigenvalue, operatorNorm, partialTrace, permuteSystems
from ..numerics.randomInstances import randomState


def entropyEstimationSuccess ( rho, n, delta ):
    """
    Probability that the Schur-Weyl measurement on :math:`\\rho^{\\otimes n}`
    returns a diagram with :math:`|\\bar H(\\lambda) - H(\\rho)|\\leq\\delta`.
    """
    rho = hermitize(asMatrix(rho))
    d = rho.shape[0]
    target = vonNeumann(rho)
    total = 0.0
    for lam in youngDiagrams(n, d):
        if abs(lam.normalizedEntropy() - target) <= delta:
            total += blockWeight(lam, rho)
    return float(min(1.0, max(0.0, total)))


def interleavedEmbedding ( theOperatorB, n, dA, dB ):
    """
    :math:`I_{A^n}\\otimes X_{B^n}` written on the interleaved ordering
    :math:`A_1B_1A_2B_2\\cdots`.
    """
    full = np.kron(np.eye(dA**n), theOperatorB)
    dims = [dA]*n + [dB]*n
    perm = [p for k in range(n) for p in (k, n + k)]
    return permuteSystems(full, dims, perm)


def blockOverlapCheck ( lam, lamPrime, n, dA, dB ):
    """
    Measured constant of the block-overlap bound
    :math:`\\Pi^{\\lambda'}_B\\,\\mathrm{tr}_A[\\Pi^\\lambda_{AB}]\\,\\Pi^{\\lambda'}_B \\preceq c\\,e^{n(\\bar H(\\lambda)-\\bar H(\\lambda'))}\\Pi^{\\lambda'}_B`.

    Parameters
    ----------
    lam : tuple of int or :class:`.YoungDiagram`
        Diagram on the joint system :math:`AB` (``n`` boxes).
    lamPrime : tuple of int or :class:`.YoungDiagram`
        Diagram on :math:`B`.
    n, dA, dB : int

    Returns
    -------
    float
        The smallest admissible ``c``; ``0`` for an empty block.

    Raises
    ------
    AssertionError
        If :math:`I\\otimes\\Pi^{\\lambda'}_B` fails to commute with
        :math:`\\Pi^\\lambda_{AB}`.
    """
    checkDimension((dA*dB)**n, "bipartite Schur-Weyl block")
    rowsAB = lam.rows if isinstance(lam, YoungDiagram) else tuple(p for p in lam if p > 0)
    rowsB = lamPrime.rows if isinstance(lamPrime, YoungDiagram) else tuple(p for p in lamPrime if p > 0)
    if len(rowsAB) > dA*dB or len(rowsB) > dB:
        return 0.0
    blockAB = schurProjector(YoungDiagram(rowsAB, dA*dB), n)
    blockB = schurProjector(YoungDiagram(rowsB, dB), n)
    embedded = interleavedEmbedding(blockB.projector, n, dA, dB)
    commutator = operatorNorm(embedded @ blockAB.projector - blockAB.projector @ embedded)
    assert(commutator <= 1e-9), 'Schur-Weyl blocks of AB and B must commute'

    keepB = [2*k + 1 for k in range(n)]
    reduced = partialTrace(blockAB.projector, [dA, dB]*n, keepB)
    sandwich = blockB.projector @ reduced @ blockB.projector
    top = maxEigenvalue(sandwich)
    if top <= 1e-12:
        return 0.0
    return float(top*np.exp(-n*(blockAB.entropy - blockB.entropy)))


def deFinettiState ( n, d ):
    """
    De Finetti state :math:`\\zeta = \\int d\\sigma\\,\\sigma^{\\otimes n}`
    for the measure induced by Haar-random purifications on
    :math:`X\\otimes\\bar R`, and a purification of it.

    :math:`\\zeta` is the reduced normalized symmetric projector of
    :math:`(X\\bar R)^{\\otimes n}`, which equals
    :math:`\\propto\\sum_\\pi d^{c(\\pi)}U_X(\\pi)` with :math:`c(\\pi)` the
    number of cycles.

    Returns
    -------
    zeta : numpy.ndarray
        State on :math:`X^n`.
    purification : numpy.ndarray
        Ket :math:`(\\sqrt\\zeta\\otimes I)|\\Phi\\rangle` on :math:`X^n\\otimes R`.
    """
    checkDimension(d**(2*n), "de Finetti purification")
    size = d**n
    digits = np.indices([d]*n).reshape(n, -1)
    zeta = np.zeros((size, size))
    for perm in itertools.permutations(range(n)):
        zeta[permutationIndexMap(perm, d, digits), np.arange(size)] += float(d)**len(cycleType(perm))
    zeta = zeta/np.trace(zeta)
    zeta = zeta.astype(np.complex128)
    purification = (np.kron(sqrtPsd(zeta), np.eye(size)) @ np.eye(size).reshape(-1)).astype(np.complex128)
    return zeta, purification


def postSelectionCheck ( W, V, n, rng, theSamples=50 ):
    """
    Test an n-copy implementation against the i.i.d. ideal on i.i.d. and
    de Finetti inputs.

    For a permutation-invariant operator :math:`W: X^n\\to (X'E)^n`
    (interleaved output ordering) and an isometry :math:`V: X\\to X'E`,
    the overlap on a purified i.i.d. input is
    :math:`\\mathrm{Re}\\,\\mathrm{tr}[(V^{\\dagger})^{\\otimes n}W\\rho^{\\otimes n}]`.

    Parameters
    ----------
    W : array_like
    V : array_like
    n : int
    rng : numpy.random.Generator
    theSamples : int
        Number of random pure inputs :math:`|\\sigma\\rangle_{XR}`.

    Returns
    -------
    dict
        ``kappa`` (worst i.i.d. overlap deficit), ``deFinettiOverlap``,
        ``distanceBound`` (purified distance on the de Finetti
        purification) and ``diamondBound`` (the same multiplied by the
        post-selection factor :math:`(n+1)^{d^2-1}`).
    """
    V = np.asarray(V)
    d = V.shape[1]
    A = kronPower(V.conj().T, n) @ np.asarray(W)
    kappa = 0.0
    for _ in range(theSamples):
        rho = randomState(d, rng)
        overlap = np.real(np.trace(A @ kronPower(rho, n)))
        kappa = max(kappa, 1.0 - overlap)
    zeta, _ = deFinettiState(n, d)
    overlap = float(np.real(np.trace(A @ zeta)))
    distance = float(np.sqrt(max(0.0, 1.0 - min(1.0, max(0.0, overlap))**2)))
    return {"kappa": float(kappa),
            "deFinettiOverlap": overlap,
            "distanceBound": distance,
            "diamondBound": postSelectionFactor(n, d)*distance}


def postSelectionFactor ( n, d ):
    """
    Polynomial prefactor :math:`(n+1)^{d^2-1}` of the post-selection bound.
    """
    return float((n + 1)**(d*d - 1))
