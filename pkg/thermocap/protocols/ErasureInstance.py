import warnings
import numpy as np

from ..Errors import PreconditionError
from ..numerics import tolerances
from ..numerics.HermitianOperator import hermitize
from ..numerics.linearAlgebra import commutatorNorm, maxEigenvalue, minEigenvalue, partialTrace
from ..numerics.distances import checkState
from ..thermo.GammaSpec import GammaSpec


# Largest number of thermal ancillas simulated by a protocol
maxAncillas = 8


def integerAncillas ( m ):
    """
    The integer :math:`e^m`.

    Raises
    ------
    ValueError
        If :math:`e^m` is not an integer to ``1e-9``.
    """
    r = np.exp(m)
    rounded = int(np.round(r))
    if rounded < 1 or abs(r - rounded) > 1e-9*max(1.0, r):
        raise ValueError("e^m = {} is not an integer; choose m as the logarithm of an ancilla count.".format(r))
    return rounded


def erasureDimension ( r, dimS, dimM ):
    """
    Dimension of :math:`S\\otimes M\\otimes A^{r}\\otimes J` with a register
    :math:`J` of dimension :math:`2r`.
    """
    return dimS*dimM*dimS**r*2*r


def cappedLnRank ( m, dimS=None, dimM=None ):
    """
    :math:`\\ln r` for the simulated ancilla count
    :math:`r = \\min(\\lfloor e^m\\rfloor, 8)`, lowered further until the
    erasure unitary fits the size guard when the dimensions are given.
    Warns whenever a cap applies.

    Returns
    -------
    float
        The simulated ln-rank (0 when :math:`e^m < 1`).
    """
    if not np.isfinite(m) or m <= 0.0:
        return 0.0
    r = int(np.floor(np.exp(m) + 1e-9))
    if r > maxAncillas:
        warnings.warn("Ancilla count {} capped at {} thermal copies for the simulation.".format(r, maxAncillas))
        r = maxAncillas
    if dimS is not None and dimM is not None:
        fitted = r
        while fitted > 1 and erasureDimension(fitted, dimS, dimM) > tolerances.maxDimension:
            fitted -= 1
        if fitted < r:
            warnings.warn("Ancilla count {} lowered to {} so that the erasure unitary fits in dimension {}.".format(r, fitted, tolerances.maxDimension))
        r = fitted
    return float(np.log(max(r, 1)))


class ErasureInstance:
    """
    Input of a universal conditional erasure run.

    A test :math:`P_{SM}` separates each admissible state :math:`\\rho_{SM}`
    from :math:`\\gamma_S\\otimes\\rho_M`; the measured constants are
    :math:`\\kappa = \\max_\\rho(1-\\mathrm{tr}[P\\rho])` and
    :math:`\\kappa' = e^m\\max_\\rho\\mathrm{tr}[P(\\gamma_S\\otimes\\rho_M)]`.

    Attributes
    ----------
    states : list of numpy.ndarray
        Admissible states on :math:`S\\otimes M`.
    dimS, dimM : int
    hamS, hamM : numpy.ndarray
        Hamiltonians (zero when not supplied).
    beta : float
    gammaS : numpy.ndarray
        Thermal state of :math:`S`.
    test : numpy.ndarray
        :math:`P_{SM}`.
    m : float
    ancillas : int
        :math:`e^m`.
    kappa, kappaPrime : float
    """

    def __init__ ( self, theStates, dimS, dimM, theTest, m, hamS=None, hamM=None, beta=1.0 ):
        assert(len(theStates) > 0), 'At least one admissible state is required'
        self.dimS = int(dimS)
        self.dimM = int(dimM)
        D = self.dimS*self.dimM
        self.states = [checkState(rho, "admissible state") for rho in theStates]
        assert(all(rho.shape == (D, D) for rho in self.states)), 'States must act on S times M'
        self.hamS = np.zeros((self.dimS, self.dimS)) if hamS is None else hermitize(hamS)
        self.hamM = np.zeros((self.dimM, self.dimM)) if hamM is None else hermitize(hamM)
        self.beta = float(beta)
        self.gammaS = hermitize(GammaSpec.fromHamiltonian(self.hamS, self.beta).gibbs())

        P = hermitize(theTest)
        assert(P.shape == (D, D)), 'Test must act on S times M'
        if minEigenvalue(P) < -tolerances.operatorTol or maxEigenvalue(P) > 1.0 + tolerances.operatorTol:
            raise ValueError("Test operator must satisfy 0 <= P <= I.")
        if commutatorNorm(P, self.hamiltonian()) > tolerances.operatorTol*max(1.0, np.max(np.abs(self.hamiltonian()))):
            raise PreconditionError("Test operator does not commute with H_S + H_M.")
        self.test = P
        self.m = float(m)
        self.ancillas = integerAncillas(m)
        self.kappa = max(self.missedWeight(rho) for rho in self.states)
        self.kappaPrime = max(self.ancillas*self.falseWeight(rho) for rho in self.states)

    def hamiltonian ( self ):
        return np.kron(self.hamS, np.eye(self.dimM)) + np.kron(np.eye(self.dimS), self.hamM)

    def memoryState ( self, rho ):
        return partialTrace(rho, [self.dimS, self.dimM], [1])

    def missedWeight ( self, rho ):
        """
        :math:`1-\\mathrm{tr}[P\\rho]`.
        """
        return max(0.0, 1.0 - float(np.real(np.trace(self.test @ rho))))

    def falseWeight ( self, rho ):
        """
        :math:`\\mathrm{tr}[P(\\gamma_S\\otimes\\rho_M)]`.
        """
        return float(np.real(np.trace(self.test @ np.kron(self.gammaS, self.memoryState(rho)))))

    @property
    def bound ( self ):
        """
        Erasure error :math:`2\\kappa + 4\\kappa'`.
        """
        return 2.0*self.kappa + 4.0*self.kappaPrime

    def mixture ( self, theWeights ):
        """
        Convex combination of the admissible states.
        """
        w = np.asarray(theWeights, dtype=np.float64)
        assert(len(w) == len(self.states) and np.all(w >= 0.0)), 'Weights must be non-negative, one per state'
        return sum(p*rho for p, rho in zip(w/np.sum(w), self.states))
