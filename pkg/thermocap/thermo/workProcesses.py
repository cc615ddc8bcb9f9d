import warnings
import numpy as np
from scipy.special import logsumexp

from .GammaSpec import gammaMatrix
from ..channels.QuantumChannel import QuantumChannel
from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize, invSqrtSupport, supportProjector
from ..numerics.linearAlgebra import maxEigenvalue, operatorNorm


def effectiveWorkProcess ( thePhi, dimSystemIn, theBatteryIn, theBatteryOut ):
    """
    Effective work process of a battery-assisted map,
    :math:`\\mathcal{T}(\\cdot) = \\mathrm{tr}_W[P'_W\\,\\Phi(\\cdot\\otimes\\tau_W)]`.

    Parameters
    ----------
    thePhi : :class:`.QuantumChannel`
        Map on :math:`X\\otimes W \\to X'\\otimes W`, battery last.
    dimSystemIn : int
        Dimension of :math:`X`.
    theBatteryIn, theBatteryOut : :class:`.BatteryState`
        :math:`\\tau_W` and the state whose support projector :math:`P'_W`
        is kept on the output.

    Returns
    -------
    :class:`.QuantumChannel`
        Completely positive, trace non-increasing map on the system.
    """
    dW = theBatteryIn.dim
    if theBatteryOut.dim != dW:
        raise ValueError("Input and output batteries must share one register.")
    if thePhi.dimIn != dimSystemIn*dW or thePhi.dimOut % dW != 0:
        raise ValueError("Map dimensions ({}, {}) do not match system dimension {} with a battery of dimension {}.".format(thePhi.dimIn, thePhi.dimOut, dimSystemIn, dW))
    dimSystemOut = thePhi.dimOut//dW

    inBasis = theBatteryIn.supportBasis()
    outBasis = theBatteryOut.supportBasis()
    kraus = []
    for K in thePhi.kraus:
        t = K.reshape(dimSystemOut, dW, dimSystemIn, dW)
        for b in range(inBasis.shape[1]):
            for c in range(outBasis.shape[1]):
                op = np.einsum('w,xwyv,v->xy', outBasis[:, c].conj(), t, inBasis[:, b])/np.sqrt(theBatteryIn.rank)
                if np.linalg.norm(op) > 1e-14:
                    kraus.append(op)
    if not kraus:
        kraus.append(np.zeros((dimSystemOut, dimSystemIn), dtype=np.complex128))
    return QuantumChannel(kraus, tpClass='TNI')


def gibbsSubPreservationMargin ( T, gammaIn, gammaOut ):
    """
    Least :math:`w` with :math:`\\mathcal{T}(\\Gamma_{in})\\preceq e^w\\Gamma_{out}`,
    :math:`w^* = \\ln\\|\\Gamma_{out}^{-1/2}\\mathcal{T}(\\Gamma_{in})\\Gamma_{out}^{-1/2}\\|_\\infty`.

    Returns
    -------
    float
        The margin; :math:`+\\infty` (with a warning) when the support of
        :math:`\\mathcal{T}(\\Gamma_{in})` is not inside that of
        :math:`\\Gamma_{out}`, :math:`-\\infty` for the zero map.
    """
    gIn = gammaMatrix(gammaIn, T.dimIn)
    gOut = gammaMatrix(gammaOut, T.dimOut)
    image = hermitize(T.apply(gIn))
    outside = np.eye(gOut.shape[0]) - supportProjector(gOut)
    if np.real(np.trace(outside @ image @ outside)) > tolerances.subnormalTol*max(1.0, operatorNorm(image)):
        warnings.warn("Image of Gamma is not supported inside the output Gamma; margin is +inf.")
        return np.inf
    S = invSqrtSupport(gOut)
    top = maxEigenvalue(S @ image @ S)
    if top <= 0.0:
        return -np.inf
    return float(np.log(top))


def isGibbsSubPreserving ( T, gammaIn, gammaOut, tol=tolerances.operatorTol ):
    """
    Eigenvalue check of :math:`\\mathcal{T}(\\Gamma_{in})\\preceq\\Gamma_{out}`.
    """
    gIn = gammaMatrix(gammaIn, T.dimIn)
    gOut = gammaMatrix(gammaOut, T.dimOut)
    diff = hermitize(gOut - T.apply(gIn))
    return bool(np.linalg.eigvalsh(diff)[0] >= -tol*max(1.0, operatorNorm(gOut)))


def _integerRank ( m, theLabel ):
    r = np.exp(m)
    rounded = int(np.round(r))
    if abs(r - rounded) > 1e-9*max(1.0, r) or rounded < 1:
        raise ValueError("The {} ln-rank {} does not correspond to an integer rank (exp gives {}).".format(theLabel, m, r))
    return rounded


def liftToGpm ( T, m, mPrime, dW, gammaIn=None, gammaOut=None ):
    """
    Gibbs-sub-preserving map on system plus battery whose effective work
    process is :math:`\\mathcal{T}`,
    :math:`\\Phi(\\cdot) = \\mathcal{T}(\\mathrm{tr}_W[P^m_W(\\cdot)])\\otimes\\tau^{m'}_W`.

    The work consumed, :math:`w(\\tau^m)-w(\\tau^{m'}) = m'-m`, must cover
    the margin :math:`w^*` of :math:`\\mathcal{T}`.

    Parameters
    ----------
    T : :class:`.QuantumChannel`
        Trace non-increasing map.
    m, mPrime : float
        Natural logarithms of the input and output battery ranks.
    dW : int
        Battery dimension.
    gammaIn, gammaOut : :class:`.GammaSpec` or array_like or None
        Used to check the budget; both default to the identity.

    Returns
    -------
    :class:`.QuantumChannel`
        The map :math:`\\Phi` on :math:`X\\otimes W`.

    Raises
    ------
    ValueError
        If a rank is not an integer, exceeds ``dW``, or if
        :math:`m'-m` is below the margin.
    """
    r = _integerRank(m, "input")
    rPrime = _integerRank(mPrime, "output")
    if r > dW or rPrime > dW:
        raise ValueError("Battery ranks ({}, {}) exceed the battery dimension {}.".format(r, rPrime, dW))
    gIn = gammaMatrix(gammaIn, T.dimIn)
    gOut = gammaMatrix(gammaOut, T.dimOut)
    margin = gibbsSubPreservationMargin(T, gIn, gOut)
    if mPrime - m < margin - 1e-9:
        raise ValueError("Insufficient battery budget: m' - m = {:.6f} is below the Gibbs-sub-preservation margin {:.6f}.".format(mPrime - m, margin))

    kraus = []
    for K in T.kraus:
        for b in range(r):
            for c in range(rPrime):
                op = np.zeros((dW, dW))
                op[c, b] = 1.0
                kraus.append(np.kron(K, op)/np.sqrt(rPrime))
    return QuantumChannel(kraus, tpClass='TNI')


def thermalToPureCost ( H, E, beta ):
    """
    Work needed to bring the thermal state of :math:`H` to a pure
    eigenstate of energy :math:`E`, :math:`\\beta E + \\ln\\mathrm{tr}\\,e^{-\\beta H}`.

    Raises
    ------
    ValueError
        If ``E`` is not an eigenvalue of ``H`` (tolerance ``1e-9``).
    """
    vals = np.linalg.eigvalsh(hermitize(asMatrix(H)))
    if np.min(np.abs(vals - E)) > 1e-9*max(1.0, abs(E)):
        raise ValueError("Energy {} is not an eigenvalue of the Hamiltonian {}.".format(E, vals))
    return float(beta*E + logsumexp(-beta*vals))


def thermalOperationCheck ( theUnitary, theHamiltonian, theGibbs, tol=tolerances.operatorTol ):
    """
    Audit of a thermal operation given by a global unitary.

    Returns
    -------
    dict
        ``commutator`` (norm of :math:`[U, H_{tot}]`), ``gibbsResidual``
        (norm of :math:`U\\gamma U^\\dagger - \\gamma`) and ``pass``.
    """
    U = np.asarray(theUnitary)
    H = hermitize(asMatrix(theHamiltonian))
    gamma = hermitize(asMatrix(theGibbs))
    commutator = operatorNorm(U @ H - H @ U)
    residual = operatorNorm(U @ gamma @ U.conj().T - gamma)
    return {"commutator": commutator,
            "gibbsResidual": residual,
            "pass": bool(commutator <= tol*max(1.0, operatorNorm(H)) and residual <= tol)}

