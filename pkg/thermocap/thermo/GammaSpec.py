import numpy as np

from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize, matrixFunction, logSupport
from ..numerics.linearAlgebra import kronPower, operatorNorm, isPsd


class GammaSpec:
    """
    Positive operator :math:`\\Gamma` associated with a system, with an
    optional thermodynamic provenance :math:`\\Gamma = e^{-\\beta H}`.

    Abstract :math:`\\Gamma` operators (no Hamiltonian) are accepted
    everywhere; conversion of work to units of :math:`kT` is then
    unavailable.

    Attributes
    ----------
    gamma : numpy.ndarray
        The operator :math:`\\Gamma \\succeq 0`.
    hamiltonian : numpy.ndarray or None
    beta : float or None
    dim : int
    """

    def __init__ ( self, theGamma, theHamiltonian=None, theBeta=None ):
        """
        Parameters
        ----------
        theGamma : array_like
            Positive semi-definite operator.
        theHamiltonian : array_like or None
            Hamiltonian :math:`H` when :math:`\\Gamma = e^{-\\beta H}`.
        theBeta : float or None
            Inverse temperature, required together with ``theHamiltonian``.

        Raises
        ------
        ValueError
            If :math:`\\Gamma` is not positive semi-definite or the
            provenance does not reproduce it to ``1e-10``.
        """
        gamma = hermitize(asMatrix(theGamma))
        if not isPsd(gamma, tolerances.subnormalTol):
            raise ValueError("Gamma operator must be positive semi-definite.")
        assert((theHamiltonian is None) == (theBeta is None)), 'Hamiltonian and beta must be given together'

        self.gamma = gamma
        self.dim = gamma.shape[0]
        self.hamiltonian = None
        self.beta = None
        if theHamiltonian is not None:
            H = hermitize(asMatrix(theHamiltonian))
            beta = float(theBeta)
            if beta < 0:
                raise ValueError("Inverse temperature must be non-negative, got {}.".format(beta))
            expected = matrixFunction(H, lambda x: np.exp(-beta*x))
            if operatorNorm(expected - gamma) > 1e-10*max(1.0, operatorNorm(gamma)):
                raise ValueError("Gamma operator does not match exp(-beta H).")
            self.hamiltonian = H
            self.beta = beta

    @classmethod
    def fromHamiltonian ( cls, H, beta ):
        """
        :math:`\\Gamma = e^{-\\beta H}`.
        """
        H = hermitize(asMatrix(H))
        return cls(matrixFunction(H, lambda x: np.exp(-float(beta)*x)), H, beta)

    @classmethod
    def trivial ( cls, d ):
        """
        :math:`\\Gamma = I` (trivial Hamiltonian).
        """
        return cls(np.eye(d))

    @property
    def hasProvenance ( self ):
        return self.hamiltonian is not None

    def partitionFunction ( self ):
        """
        :math:`Z = \\mathrm{tr}\\,\\Gamma`.
        """
        return float(np.real(np.trace(self.gamma)))

    def logGamma ( self ):
        """
        :math:`\\ln\\Gamma` on its support.
        """
        return logSupport(self.gamma)

    def gibbs ( self ):
        return gibbs(self)

    def tensor ( self, other ):
        """
        :math:`\\Gamma\\otimes\\Gamma'`, keeping the provenance when both
        factors share the same :math:`\\beta`.
        """
        gamma = np.kron(self.gamma, other.gamma)
        if self.hasProvenance and other.hasProvenance and abs(self.beta - other.beta) <= 1e-15:
            H = np.kron(self.hamiltonian, np.eye(other.dim)) + np.kron(np.eye(self.dim), other.hamiltonian)
            return GammaSpec(gamma, H, self.beta)
        return GammaSpec(gamma)

    def power ( self, n ):
        """
        :math:`\\Gamma^{\\otimes n}` (without provenance).
        """
        return GammaSpec(kronPower(self.gamma, n))

    def toDict ( self ):
        if self.hasProvenance:
            return {"beta": self.beta, "hamiltonian": operatorToDict(self.hamiltonian)}
        return {"gamma": operatorToDict(self.gamma)}


def gibbs ( theGamma ):
    """
    Normalized Gibbs state :math:`\\Gamma/\\mathrm{tr}\\,\\Gamma`.

    Parameters
    ----------
    theGamma : :class:`.GammaSpec` or array_like

    Raises
    ------
    ValueError
        If :math:`\\mathrm{tr}\\,\\Gamma = 0`.
    """
    gamma = theGamma.gamma if isinstance(theGamma, GammaSpec) else hermitize(asMatrix(theGamma))
    Z = float(np.real(np.trace(gamma)))
    if Z <= 0:
        raise ValueError("Gamma operator has zero trace; the Gibbs state is undefined.")
    return gamma/Z


def operatorToDict ( A ):
    """
    Serialize a Hermitian operator as ``{"diag": [...]}`` when diagonal and
    ``{"matrix": [[[re, im], ...], ...]}`` otherwise.
    """
    A = asMatrix(A)
    if np.allclose(A, np.diag(np.diag(A))) and np.allclose(np.imag(np.diag(A)), 0.0):
        return {"diag": [float(np.real(x)) for x in np.diag(A)]}
    return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in A]}


def operatorFromDict ( theDict ):
    """
    Parse ``{"diag": [...]}`` or ``{"matrix": [[...]]}``; matrix entries may
    be real numbers or ``[re, im]`` pairs.

    Raises
    ------
    ValueError
        On a malformed document.
    """
    if not isinstance(theDict, dict):
        raise ValueError("Hamiltonian document must be an object with 'diag' or 'matrix'.")
    try:
        if "diag" in theDict:
            return np.diag([float(x) for x in theDict["diag"]]).astype(np.complex128)
        if "matrix" in theDict:
            rows = []
            for row in theDict["matrix"]:
                rows.append([complex(float(z[0]), float(z[1])) if isinstance(z, (list, tuple)) else complex(float(z)) for z in row])
            return hermitize(np.array(rows, dtype=np.complex128))
    except (TypeError, ValueError, IndexError) as err:
        raise ValueError("Malformed operator document: {}.".format(err))
    raise ValueError("Operator document needs a 'diag' or 'matrix' entry.")


def gammaMatrix ( theGamma, theDim=None ):
    """
    Dense :math:`\\Gamma` from a :class:`.GammaSpec`, an array or ``None``
    (the identity of dimension ``theDim``).
    """
    if theGamma is None:
        assert(theDim is not None), 'A dimension is needed for the default Gamma'
        return np.eye(theDim, dtype=np.complex128)
    if isinstance(theGamma, GammaSpec):
        return theGamma.gamma
    return hermitize(asMatrix(theGamma))
