import numpy as np

from ..Errors import NotCovariantError
from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize, eigHermitian
from ..numerics.linearAlgebra import partialTrace, operatorNorm, commutatorNorm, energyMatchedUnitary, isUnitary
from ..numerics.randomInstances import randomState


class CovariantDilation:
    """
    Energy-conserving unitary dilation of a time-covariant channel.

    The unitary acts on :math:`X\\otimes E` and the channel is recovered as
    :math:`\\mathcal{E}(\\rho) = \\mathrm{tr}_E[V(\\rho\\otimes|0\\rangle\\langle 0|_E)V^\\dagger]`.

    Attributes
    ----------
    unitary : numpy.ndarray
        :math:`V` on :math:`X\\otimes E`.
    hamEnv : numpy.ndarray
        Diagonal environment Hamiltonian :math:`H_E`.
    hamSystem : numpy.ndarray
        The system Hamiltonian :math:`H_X`.
    zeroIndex : int
        Index of the zero-energy environment level :math:`|0\\rangle_E`.
    dimSystem : int
    dimEnv : int
    """

    def __init__ ( self, theUnitary, theHamSystem, theHamEnv, theZeroIndex ):
        self.unitary = np.array(theUnitary, dtype=np.complex128)
        self.hamSystem = hermitize(theHamSystem)
        self.hamEnv = hermitize(theHamEnv)
        self.dimSystem = self.hamSystem.shape[0]
        self.dimEnv = self.hamEnv.shape[0]
        self.zeroIndex = int(theZeroIndex)
        assert(self.unitary.shape == (self.dimSystem*self.dimEnv,)*2), 'Unitary must act on system times environment'
        assert(abs(self.hamEnv[self.zeroIndex, self.zeroIndex]) <= tolerances.operatorTol*max(1.0, operatorNorm(self.hamEnv))), 'The environment input level must have zero energy'

    def totalHamiltonian ( self ):
        return np.kron(self.hamSystem, np.eye(self.dimEnv)) + np.kron(np.eye(self.dimSystem), self.hamEnv)

    def energyResidual ( self ):
        """
        :math:`\\|V H V^\\dagger - H\\|_\\infty` for the total Hamiltonian.
        """
        H = self.totalHamiltonian()
        return operatorNorm(self.unitary @ H @ self.unitary.conj().T - H)

    def envZeroState ( self ):
        e = np.zeros((self.dimEnv, self.dimEnv), dtype=np.complex128)
        e[self.zeroIndex, self.zeroIndex] = 1.0
        return e

    def applyJoint ( self, rho ):
        """
        :math:`V(\\rho\\otimes|0\\rangle\\langle0|_E)V^\\dagger`.
        """
        rho = asMatrix(rho)
        return self.unitary @ np.kron(rho, self.envZeroState()) @ self.unitary.conj().T

    def apply ( self, rho ):
        return partialTrace(self.applyJoint(rho), [self.dimSystem, self.dimEnv], [0])

    def isometry ( self ):
        """
        :math:`V(I_X\\otimes|0\\rangle_E)` as a ``dX*dE x dX`` matrix.
        """
        cols = [self.zeroIndex + k*self.dimEnv for k in range(self.dimSystem)]
        return self.unitary[:, cols]


def covarianceGenerator ( H ):
    """
    :math:`G = H\\otimes I - I\\otimes H^T`, whose commutator with the Choi
    matrix is the infinitesimal covariance condition.
    """
    H = asMatrix(H)
    d = H.shape[0]
    return np.kron(H, np.eye(d)) - np.kron(np.eye(d), H.T)


def isTimeCovariant ( C, H, tol=tolerances.operatorTol ):
    """
    Test whether :math:`\\mathcal{E}(e^{-iHt}\\rho e^{iHt}) = e^{-iHt}\\mathcal{E}(\\rho)e^{iHt}`
    for all :math:`t` via :math:`[J, H\\otimes I - I\\otimes H^T] = 0`.

    Parameters
    ----------
    C : :class:`.QuantumChannel`
        Channel with equal input and output dimension.
    H : array_like
        Hamiltonian on the input (and output) system.
    tol : float
        Relative tolerance on the commutator norm.

    Returns
    -------
    bool
    """
    H = hermitize(H)
    if C.dimIn != C.dimOut or H.shape[0] != C.dimIn:
        raise ValueError("Covariance test needs a channel from a system to itself matching the Hamiltonian dimension.")
    G = covarianceGenerator(H)
    J = C.choi
    scale = max(1.0, operatorNorm(J)*operatorNorm(G))
    return commutatorNorm(J, G) <= tol*scale


def sampledCovarianceCheck ( C, H, theTimes=None ):
    """
    Finite-time cross-check of covariance: the largest deviation
    :math:`\\|(U_t\\otimes\\bar U_t)J(U_t\\otimes\\bar U_t)^\\dagger - J\\|_\\infty`
    over the sampled times.
    """
    H = hermitize(H)
    times = np.linspace(0.1, 2*np.pi, 63) if theTimes is None else theTimes
    vals, vecs = eigHermitian(H)
    J = C.choi
    worst = 0.0
    for t in times:
        U = (vecs*np.exp(-1j*vals*t)) @ vecs.conj().T
        W = np.kron(U, U.conj())
        worst = max(worst, operatorNorm(W @ J @ W.conj().T - J))
    return worst


def covariantKraus ( C, H ):
    """
    Kraus operators :math:`K_a` of ``C`` that satisfy
    :math:`[H, K_a] = \\omega_a K_a`.

    The Choi matrix commutes with :math:`G` so :math:`G` restricted to the
    support of :math:`J` commutes with the eigenvalues of :math:`J`;
    diagonalizing that restriction yields Kraus vectors which are
    eigenvectors of :math:`G`.

    Returns
    -------
    kraus : list of numpy.ndarray
    frequencies : numpy.ndarray
        The :math:`\\omega_a`.
    """
    J = C.choi
    vals, vecs = eigHermitian(J)
    keep = vals > tolerances.rankThreshold*max(1.0, vals[0])
    U = vecs[:, keep]
    lam = vals[keep]
    Gs = hermitize(U.conj().T @ covarianceGenerator(H) @ U)
    omegas, W = np.linalg.eigh(Gs)
    kvecs = (U*np.sqrt(lam)) @ W
    kraus = [kvecs[:, a].reshape(C.dimOut, C.dimIn) for a in range(kvecs.shape[1])]
    return kraus, omegas


def covariantStinespring ( C, H, tol=tolerances.operatorTol ):
    """
    Energy-conserving dilation of a time-covariant channel.

    The construction

    1. picks Kraus operators with :math:`[H_X, K_a] = \\omega_a K_a`, so that
       :math:`V' = \\sum_a K_a\\otimes|a\\rangle` satisfies
       :math:`V'H_X = (H_X + H_E)V'` with
       :math:`H_E = -\\sum_a\\omega_a|a\\rangle\\langle a|`;
    2. appends a zero-energy environment level when none of the Kraus labels
       has zero energy (``H_E`` is extended by zero there);
    3. completes :math:`V'\\langle 0|_E` to a unitary that commutes with
       :math:`H_X + H_E` by pairing orthonormal completions inside every
       energy eigenspace (see :func:`.energyMatchedUnitary`).

    Parameters
    ----------
    C : :class:`.QuantumChannel`
        Trace-preserving time-covariant channel.
    H : array_like
        System Hamiltonian :math:`H_X`.
    tol : float
        Covariance tolerance.

    Returns
    -------
    :class:`.CovariantDilation`

    Raises
    ------
    NotCovariantError
        If ``C`` is not time covariant with respect to ``H``.
    """
    H = hermitize(H)
    if not C.isTracePreserving:
        raise ValueError("Covariant dilation requires a trace-preserving channel.")
    if not isTimeCovariant(C, H, tol):
        raise NotCovariantError("Channel is not time covariant with respect to the given Hamiltonian.")

    kraus, omegas = covariantKraus(C, H)
    envEnergies = -omegas
    scale = max(1.0, operatorNorm(H))
    zeros = np.where(np.abs(envEnergies) <= 1e3*tol*scale)[0]
    if len(zeros) > 0:
        zeroIndex = int(zeros[0])
        envEnergies[zeros] = 0.0
    else:
        kraus.append(np.zeros_like(kraus[0]))
        envEnergies = np.append(envEnergies, 0.0)
        zeroIndex = len(envEnergies) - 1

    dX = C.dimIn
    dE = len(kraus)
    hamEnv = np.diag(envEnergies).astype(np.complex128)
    hTotal = np.kron(H, np.eye(dE)) + np.kron(np.eye(dX), hamEnv)

    vPrime = np.stack(kraus, axis=1).reshape(dX*dE, dX)
    hVals, hVecs = eigHermitian(H)
    domain = np.zeros((dX*dE, dX), dtype=np.complex128)
    for j in range(dX):
        e0 = np.zeros(dE)
        e0[zeroIndex] = 1.0
        domain[:, j] = np.kron(hVecs[:, j], e0)
    image = vPrime @ hVecs

    V = energyMatchedUnitary(domain, image, hTotal, tol)
    dilation = CovariantDilation(V, H, hamEnv, zeroIndex)
    assert(isUnitary(V)), 'Covariant dilation is not unitary'
    assert(dilation.energyResidual() <= tol*max(1.0, operatorNorm(hTotal))), 'Covariant dilation does not conserve energy'
    return dilation


def dilationReproduces ( dilation, C, rng, theSamples=5 ):
    """
    Largest deviation between the dilation and the channel on random
    inputs of the joint system with a reference copy.
    """
    worst = 0.0
    d = C.dimIn
    for _ in range(theSamples):
        rho = randomState(d, rng)
        worst = max(worst, operatorNorm(dilation.apply(rho) - C.apply(rho)))
    return worst
