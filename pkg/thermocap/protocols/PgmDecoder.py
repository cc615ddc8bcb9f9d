import numpy as np

from ..numerics.HermitianOperator import hermitize, invSqrtSupport, supportProjector
from ..numerics.linearAlgebra import minEigenvalue, operatorNorm


class PgmDecoder:
    """
    Pretty good measurement built from a list of positive operators.

    Attributes
    ----------
    elements : list of numpy.ndarray
        The input operators :math:`\\Lambda^j`.
    effects : list of numpy.ndarray
        :math:`\\Omega^j = \\Lambda^{-1/2}\\Lambda^j\\Lambda^{-1/2}` with
        :math:`\\Lambda = \\sum_j\\Lambda^j` inverted on its support.
    remainder : numpy.ndarray
        :math:`\\Omega^\\perp = I - \\sum_j\\Omega^j`, the projector onto the
        kernel of :math:`\\Lambda`.
    """

    def __init__ ( self, theElements ):
        assert(len(theElements) > 0), 'A measurement needs at least one element'
        self.elements = [hermitize(L) for L in theElements]
        for L in self.elements:
            if minEigenvalue(L) < -1e-9:
                raise ValueError("Measurement elements must be positive semi-definite.")
        total = hermitize(sum(self.elements))
        S = invSqrtSupport(total)
        self.effects = [hermitize(S @ L @ S) for L in self.elements]
        self.remainder = hermitize(np.eye(total.shape[0]) - supportProjector(total))

    def __len__ ( self ):
        return len(self.effects)

    def completenessResidual ( self ):
        """
        :math:`\\|\\sum_j\\Omega^j + \\Omega^\\perp - I\\|_\\infty`.
        """
        total = sum(self.effects) + self.remainder
        return operatorNorm(total - np.eye(total.shape[0]))

    def hayashiNagaokaResidual ( self, j ):
        """
        Smallest eigenvalue of
        :math:`2(I-\\Lambda^j) + 4\\sum_{k\\neq j}\\Lambda^k - (I-\\Omega^j)`.

        Non-negative whenever every :math:`\\Lambda^k\\preceq I`.
        """
        d = self.effects[j].shape[0]
        others = sum((L for k, L in enumerate(self.elements) if k != j), np.zeros((d, d), dtype=np.complex128))
        bound = 2.0*(np.eye(d) - self.elements[j]) + 4.0*others
        return minEigenvalue(hermitize(bound - (np.eye(d) - self.effects[j])))

    def successProbability ( self, j, rho ):
        return float(np.real(np.trace(self.effects[j] @ rho)))


def prettyGoodMeasurement ( theElements ):
    return PgmDecoder(theElements)
