import numpy as np

from .HermitianOperator import hermitize


def defaultRng ( theSeed=0 ):
    """
    ``numpy.random.Generator`` for a seed, passing generators through.
    """
    if isinstance(theSeed, np.random.Generator):
        return theSeed
    return np.random.default_rng(theSeed)


def ginibre ( rows, cols, rng ):
    return (rng.standard_normal((rows, cols)) + 1j*rng.standard_normal((rows, cols)))/np.sqrt(2.0)


def randomUnitary ( d, rng ):
    """
    Haar-random unitary from the QR decomposition of a Ginibre matrix.
    """
    q, r = np.linalg.qr(ginibre(d, d, rng))
    phases = np.diag(r)/np.abs(np.diag(r))
    return q*phases


def randomIsometry ( rows, cols, rng ):
    """
    Haar-random isometry with ``rows >= cols``.
    """
    assert(rows >= cols), 'An isometry needs at least as many rows as columns'
    return randomUnitary(rows, rng)[:, :cols]


def randomPureVector ( d, rng ):
    v = ginibre(d, 1, rng)[:, 0]
    return v/np.linalg.norm(v)


def randomPureState ( d, rng ):
    v = randomPureVector(d, rng)
    return np.outer(v, v.conj())


def randomState ( d, rng, theRank=None ):
    """
    Random density matrix (Hilbert-Schmidt measure when ``theRank`` equals
    ``d``).
    """
    rank = d if theRank is None else theRank
    G = ginibre(d, rank, rng)
    rho = G @ G.conj().T
    return hermitize(rho/np.real(np.trace(rho)))


def randomHermitian ( d, rng, theScale=1.0 ):
    return theScale*hermitize(ginibre(d, d, rng))


def randomPsd ( d, rng, theRank=None ):
    rank = d if theRank is None else theRank
    G = ginibre(d, rank, rng)
    return hermitize(G @ G.conj().T)


def randomDiagonalState ( d, rng ):
    p = rng.dirichlet(np.ones(d))
    return np.diag(p).astype(np.complex128)
