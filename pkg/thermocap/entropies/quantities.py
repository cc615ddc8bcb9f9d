import warnings
import numpy as np

from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize, logSupport, supportProjector
from ..numerics.linearAlgebra import partialTrace


class EntropyResult ( float ):
    """
    Entropy value in nats.

    A ``float`` subclass, so results combine with ordinary arithmetic,
    carrying a flag that records whether a support violation or rank
    deficiency was handled while computing it.

    Attributes
    ----------
    supportWarning : bool
        ``True`` when the value is the :math:`+\\infty` sentinel or a
        rank-deficient input was restricted to its support.
    """

    def __new__ ( cls, theValue, supportWarning=False ):
        obj = float.__new__(cls, theValue)
        obj.supportWarning = bool(supportWarning)
        return obj

    @property
    def value ( self ):
        return float(self)

    @property
    def isInfinite ( self ):
        return bool(np.isinf(float(self)))


def _spectrumEntropy ( vals ):
    vals = np.clip(np.real(vals), 0.0, None)
    vals = vals[vals > tolerances.rankThreshold*max(1.0, np.max(vals) if len(vals) else 1.0)]
    return float(-np.sum(vals*np.log(vals)))


def vonNeumann ( rho ):
    """
    :math:`H(\\rho) = -\\mathrm{tr}[\\rho\\ln\\rho]` in nats.
    """
    rho = hermitize(asMatrix(rho))
    return EntropyResult(_spectrumEntropy(np.linalg.eigvalsh(rho)))


def conditionalEntropy ( rhoAB, dims ):
    """
    :math:`H(A|B) = H(AB) - H(B)`.

    Parameters
    ----------
    rhoAB : array_like
        Bipartite state.
    dims : tuple of int
        ``(dA, dB)``.
    """
    rhoAB = asMatrix(rhoAB)
    dA, dB = dims
    if dA*dB != rhoAB.shape[0]:
        raise ValueError("Dimensions {} do not match a state of size {}.".format(dims, rhoAB.shape[0]))
    rhoB = partialTrace(rhoAB, [dA, dB], [1])
    return EntropyResult(vonNeumann(rhoAB) - vonNeumann(rhoB))


def supportViolation ( rho, tau ):
    """
    Weight of ``rho`` outside the support of ``tau``.
    """
    rho = hermitize(asMatrix(rho))
    outside = np.eye(rho.shape[0]) - supportProjector(tau)
    return float(np.real(np.trace(outside @ rho @ outside)))


def relativeEntropy ( rho, gamma ):
    """
    Quantum relative entropy :math:`D(\\rho\\|\\Gamma) = \\mathrm{tr}[\\rho(\\ln\\rho - \\ln\\Gamma)]`.

    ``gamma`` may be any positive semi-definite operator, not necessarily
    normalized.

    Returns
    -------
    :class:`.EntropyResult`
        :math:`+\\infty` with ``supportWarning`` set when the support of
        :math:`\\rho` is not contained in that of :math:`\\Gamma`.
    """
    rho = hermitize(asMatrix(rho))
    gamma = hermitize(asMatrix(gamma))
    if supportViolation(rho, gamma) > tolerances.subnormalTol:
        warnings.warn("Support of the state is not contained in the support of the reference operator; returning +inf.")
        return EntropyResult(np.inf, supportWarning=True)
    value = -_spectrumEntropy(np.linalg.eigvalsh(rho)) - float(np.real(np.trace(rho @ logSupport(gamma))))
    return EntropyResult(value)


def measuredRelative ( rho, tau ):
    """
    :math:`D_M(\\rho\\|\\tau) = -\\mathrm{tr}(\\rho\\ln\\tau)`, so that
    :math:`D(\\rho\\|\\tau) = D_M(\\rho\\|\\tau) - H(\\rho)`.
    """
    rho = hermitize(asMatrix(rho))
    if supportViolation(rho, tau) > tolerances.subnormalTol:
        warnings.warn("Support of the state is not contained in the support of tau; returning +inf.")
        return EntropyResult(np.inf, supportWarning=True)
    return EntropyResult(-float(np.real(np.trace(rho @ logSupport(tau)))))
