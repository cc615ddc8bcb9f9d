import warnings
import numpy as np

from ..entropies.quantities import relativeEntropy
from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize, invSqrtSupport, supportProjector
from ..numerics.linearAlgebra import checkDimension, commutatorNorm, kronPower, maxEigenvalue, operatorNorm, partialTrace
from ..numerics.randomInstances import randomState
from ..schurweyl.EnergyPovm import EnergyPovm
from ..schurweyl.SchurBlock import permutationOperator, randomPermutation, schurProjector
from ..schurweyl.YoungDiagram import youngDiagrams
from ..schurweyl.estimation import blockOverlapCheck, interleavedEmbedding
from ..thermo.GammaSpec import gammaMatrix


class SmoothingOperator:
    """
    Universal conditional and relative typical smoothing operator
    :math:`M^{x,\\delta}` on :math:`(A\\otimes B)^{\\otimes n}`.

    For every state with
    :math:`D(\\rho_{AB}\\|\\Gamma_{AB}) - D(\\rho_B\\|\\Gamma'_B)\\geq x` the
    operator satisfies

    (i) :math:`M^\\dagger M\\preceq I`;
    (ii) :math:`\\mathrm{Re}\\,\\langle\\rho|^{\\otimes n}M|\\rho\\rangle^{\\otimes n}\\geq 1-\\mathrm{poly}(n)e^{-n\\eta}`;
    (iii) :math:`\\mathrm{tr}_{A^n}[M\\Gamma_{AB}^{\\otimes n}M^\\dagger]\\preceq\\mathrm{poly}(n)e^{-n(x-4\\delta)}\\Gamma_B'^{\\otimes n}`.

    Systems are ordered :math:`A_1B_1A_2B_2\\cdots`.

    Attributes
    ----------
    operator : numpy.ndarray
        :math:`M`, read-only.
    x, delta : float
    n, dA, dB : int
    flavor : str
        ``'projector'`` when :math:`M^2 = M` to ``1e-9`` (always the case
        when :math:`[\\Gamma_{AB}, I_A\\otimes\\Gamma'_B] = 0`), ``'smoother'``
        otherwise.
    projectorResidual : float
        :math:`\\|M^2-M\\|_\\infty`.
    components : list of tuple
        The :math:`(\\ell, \\mu, \\lambda, t)` terms kept, ``t`` the lower
        threshold on :math:`k`.
    gammaAB, gammaB : numpy.ndarray
    """

    def __init__ ( self, theOperator, x, delta, n, dA, dB, gammaAB, gammaB, theComponents ):
        M = np.array(theOperator)
        M.setflags(write=False)
        self.operator = M
        self.x = float(x)
        self.delta = float(delta)
        self.n = n
        self.dA = dA
        self.dB = dB
        self.gammaAB = gammaAB
        self.gammaB = gammaB
        self.components = list(theComponents)
        self.projectorResidual = float(operatorNorm(M @ M - M))
        self.flavor = 'projector' if self.projectorResidual <= tolerances.operatorTol else 'smoother'

    @property
    def dim ( self ):
        return self.operator.shape[0]

    def normResidual ( self ):
        """
        :math:`\\max(0, \\lambda_{max}(M^\\dagger M) - 1)`, property (i).
        """
        M = self.operator
        return float(max(0.0, maxEigenvalue(M.conj().T @ M) - 1.0))

    def permutationResidual ( self, rng, theSamples=5 ):
        """
        Largest :math:`\\|U(\\pi)MU(\\pi)^\\dagger - M\\|_\\infty` over random
        permutations of the :math:`AB` pairs.
        """
        M = self.operator
        worst = 0.0
        for _ in range(theSamples):
            U = permutationOperator(randomPermutation(self.n, rng), self.dA*self.dB).toarray()
            worst = max(worst, operatorNorm(U @ M @ U.T - M))
        return float(worst)

    def commutationResiduals ( self ):
        """
        :math:`\\|[M,\\Gamma_{AB}^{\\otimes n}]\\|_\\infty` and
        :math:`\\|[M,I\\otimes\\Gamma_B'^{\\otimes n}]\\|_\\infty`.
        """
        gAB = kronPower(self.gammaAB, self.n)
        gB = interleavedEmbedding(kronPower(self.gammaB, self.n), self.n, self.dA, self.dB)
        return commutatorNorm(self.operator, gAB), commutatorNorm(self.operator, gB)

    def iidOverlap ( self, rhoAB ):
        """
        :math:`\\mathrm{Re}\\,\\mathrm{tr}[M\\rho_{AB}^{\\otimes n}]`, equal to
        :math:`\\mathrm{Re}\\,\\langle\\rho|^{\\otimes n}M|\\rho\\rangle^{\\otimes n}`
        for any purification.
        """
        return float(np.real(np.trace(self.operator @ kronPower(hermitize(asMatrix(rhoAB)), self.n))))

    def overlap ( self, theKet, dR ):
        """
        :math:`\\mathrm{Re}\\,\\langle\\psi|M\\otimes I_{R^n}|\\psi\\rangle` for a
        ket on :math:`(A B R)^{\\otimes n}` ordered
        :math:`A_1B_1R_1A_2B_2R_2\\cdots`.
        """
        dAB = self.dA*self.dB
        psi = np.asarray(theKet).reshape([dAB, dR]*self.n)
        order = [2*k for k in range(self.n)] + [2*k + 1 for k in range(self.n)]
        psi = psi.transpose(order).reshape(dAB**self.n, dR**self.n)
        return float(np.real(np.trace(psi.conj().T @ self.operator @ psi)))

    def gammaImage ( self ):
        """
        :math:`\\mathrm{tr}_{A^n}[M\\Gamma_{AB}^{\\otimes n}M^\\dagger]` on :math:`B^n`.
        """
        M = self.operator
        image = M @ kronPower(self.gammaAB, self.n) @ M.conj().T
        return hermitize(partialTrace(image, [self.dA, self.dB]*self.n, [2*k + 1 for k in range(self.n)]))

    def sizeConstant ( self ):
        """
        Measured :math:`c(n)` of property (iii),
        :math:`\\lambda_{max}(\\Gamma'^{-1/2\\otimes n}\\,\\mathrm{tr}_{A^n}[M\\Gamma^{\\otimes n}M^\\dagger]\\,\\Gamma'^{-1/2\\otimes n})\\,e^{n(x-4\\delta)}`.
        """
        S = invSqrtSupport(kronPower(self.gammaB, self.n))
        top = maxEigenvalue(S @ self.gammaImage() @ S)
        if top <= 0.0:
            return 0.0
        return float(top*np.exp(self.n*(self.x - 4.0*self.delta)))

    def sizeConstantBound ( self ):
        """
        Upper bound on :func:`sizeConstant` from the block-overlap constants
        :math:`c_j` of the :math:`m` kept terms, :math:`c(n)\\leq m\\sum_j c_j`.

        Each term :math:`M_j = S^\\ell\\Pi^\\mu\\Pi^\\lambda R^{k\\geq t}` maps
        :math:`\\Gamma_{AB}^{\\otimes n}` below
        :math:`c_je^{-n(x-4\\delta)}\\Gamma_B'^{\\otimes n}` after the partial
        trace, and :math:`(\\sum_jM_j)\\Gamma(\\sum_jM_j)^\\dagger\\preceq m\\sum_jM_j\\Gamma M_j^\\dagger`.
        """
        constants = {}
        total = 0.0
        for _, mu, lam, _ in self.components:
            if (lam, mu) not in constants:
                constants[(lam, mu)] = blockOverlapCheck(lam, mu, self.n, self.dA, self.dB)
            total += constants[(lam, mu)]
        return float(len(self.components)*total)

    def isAdmissible ( self, rhoAB ):
        """
        :math:`D(\\rho_{AB}\\|\\Gamma_{AB}) - D(\\rho_B\\|\\Gamma'_B)\\geq x`.
        """
        rhoAB = hermitize(asMatrix(rhoAB))
        rhoB = partialTrace(rhoAB, [self.dA, self.dB], [1])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            gap = relativeEntropy(rhoAB, self.gammaAB) - relativeEntropy(rhoB, self.gammaB)
        return bool(np.isfinite(gap) and gap >= self.x)

    def sampleAdmissibleStates ( self, rng, theCount=50, maxAttempts=5000 ):
        """
        Random states :math:`\\rho_{AB}` (reduced from Haar-random pure
        :math:`\\rho_{ABR}`) that satisfy :func:`isAdmissible`, found by
        rejection.

        Returns
        -------
        list of numpy.ndarray
            At most ``theCount`` states; fewer (with a warning) when the
            rejection budget runs out.
        """
        dAB = self.dA*self.dB
        found = []
        attempts = 0
        while len(found) < theCount and attempts < maxAttempts:
            attempts += 1
            rank = int(rng.integers(1, dAB + 1))
            rho = randomState(dAB, rng, rank)
            if self.isAdmissible(rho):
                found.append(rho)
        if len(found) < theCount:
            warnings.warn("Only {} admissible states found in {} attempts.".format(len(found), maxAttempts))
        return found

    def worstIidDeficit ( self, theStates ):
        """
        :math:`\\max_\\rho(1 - \\mathrm{Re}\\,\\mathrm{tr}[M\\rho^{\\otimes n}])` over ``theStates``.
        """
        if not theStates:
            return 0.0
        return float(max(1.0 - self.iidOverlap(rho) for rho in theStates))


def _modifiedGamma ( gamma ):
    vals, vecs = np.linalg.eigh(gamma)
    threshold = tolerances.rankThreshold*max(1.0, np.max(np.abs(vals)))
    vals = np.where(vals > threshold, vals, 1.0)
    return (vecs*vals) @ vecs.conj().T


def universalSmoothingOperator ( gammaAB, gammaB, x, delta, n, dA, dB ):
    """
    Build :math:`M^{x,\\delta} = \\sum S^\\ell\\Pi^\\mu\\Pi^\\lambda R^k` over
    :math:`k-\\bar H(\\lambda)-\\ell+\\bar H(\\mu)\\geq x-4\\delta`.

    :math:`R^k` measures :math:`-\\ln\\Gamma_{AB}` and :math:`S^\\ell`
    measures :math:`-\\ln\\Gamma'_B` (per copy), :math:`\\Pi^\\lambda` and
    :math:`\\Pi^\\mu` are the Schur-Weyl blocks of :math:`(AB)^n` and
    :math:`B^n`.  Zero eigenvalues of either operator are set to one for
    the construction and the result is sandwiched between the support
    projectors of :math:`\\Gamma_B'^{\\otimes n}` and
    :math:`\\Gamma_{AB}^{\\otimes n}`.

    Parameters
    ----------
    gammaAB : :class:`.GammaSpec` or array_like
        Operator on :math:`A\\otimes B`.
    gammaB : :class:`.GammaSpec` or array_like
        Operator :math:`\\Gamma'` on :math:`B`.
    x : float
        Threshold on :math:`D(\\rho_{AB}\\|\\Gamma_{AB})-D(\\rho_B\\|\\Gamma'_B)`.
    delta : float
    n, dA, dB : int

    Returns
    -------
    :class:`SmoothingOperator`

    Raises
    ------
    SizeGuardError
        If :math:`(d_Ad_B)^n` exceeds the size guard.
    """
    D = (dA*dB)**n
    checkDimension(D, "smoothing operator")
    gAB = gammaMatrix(gammaAB, dA*dB)
    gB = gammaMatrix(gammaB, dB)

    R = EnergyPovm(_minusLog(gAB), 1.0, n)
    S = EnergyPovm(_minusLog(gB), 1.0, n)
    embedS = [interleavedEmbedding(S.projector(i), n, dA, dB) for i in range(len(S.labels))]
    blocksB = [schurProjector(mu) for mu in youngDiagrams(n, dB)]
    embedMu = [interleavedEmbedding(block.projector, n, dA, dB) for block in blocksB]
    blocksAB = [schurProjector(lam) for lam in youngDiagrams(n, dA*dB)]

    M = np.zeros((D, D), dtype=np.complex128)
    components = []
    upperSets = {}
    lowest = R.labels[0]
    for ell, Sl in zip(S.labels, embedS):
        for blockB, Pmu in zip(blocksB, embedMu):
            Q = Sl @ Pmu
            if np.max(np.abs(Q)) < tolerances.rankThreshold:
                continue
            for blockAB in blocksAB:
                t = x - 4.0*delta + blockAB.entropy + ell - blockB.entropy
                if t > R.labels[-1] + 1e-12:
                    continue
                key = max(t, lowest)
                if key not in upperSets:
                    upperSets[key] = R.atLeast(key)
                M += Q @ blockAB.projector @ upperSets[key]
                components.append((float(ell), blockB.diagram.rows, blockAB.diagram.rows, float(t)))

    M = interleavedEmbedding(supportProjector(kronPower(gB, n)), n, dA, dB) @ M @ supportProjector(kronPower(gAB, n))
    if not components or np.max(np.abs(M)) < tolerances.rankThreshold:
        warnings.warn("No (k, l, lambda, mu) term meets the threshold x - 4 delta = {:.4f}; the smoothing operator is zero.".format(x - 4.0*delta))
    return SmoothingOperator(M, x, delta, n, dA, dB, gAB, gB, components)


def _minusLog ( gamma ):
    vals, vecs = np.linalg.eigh(_modifiedGamma(gamma))
    return (vecs*(-np.log(vals))) @ vecs.conj().T


def superposedIidKet ( theKet1, theKet2, n, theWeights=(1.0, 1.0) ):
    """
    Normalized :math:`a|\\psi_1\\rangle^{\\otimes n}+b|\\psi_2\\rangle^{\\otimes n}`.
    """
    v = theWeights[0]*kronPower(np.asarray(theKet1).reshape(-1, 1), n)[:, 0] + theWeights[1]*kronPower(np.asarray(theKet2).reshape(-1, 1), n)[:, 0]
    return v/np.linalg.norm(v)


def purifyState ( rho ):
    """
    Ket :math:`(\\sqrt\\rho\\otimes I)|\\Phi\\rangle` on system :math:`\\otimes` reference.
    """
    rho = hermitize(asMatrix(rho))
    vals, vecs = np.linalg.eigh(rho)
    root = (vecs*np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    d = rho.shape[0]
    return (np.kron(root, np.eye(d)) @ np.eye(d).reshape(-1)).astype(np.complex128)
