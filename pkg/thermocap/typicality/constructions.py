import numpy as np

from .Certificate import Certificate
from .SmoothingOperator import universalSmoothingOperator
from .projectors import hoeffdingRate, relativeTypicalProjector, relativeTypicalWeight, typicalProjector
from ..Errors import SizeGuardError
from ..channels.QuantumChannel import QuantumChannel
from ..channels.StinespringDilation import stinespring
from ..channels.diamond import diamondDistance
from ..entropies.quantities import relativeEntropy
from ..numerics.HermitianOperator import asMatrix, hermitize, matrixFunction, sqrtPsd
from ..numerics.distances import purifiedDistance
from ..numerics.linearAlgebra import checkDimension, kronPower, maxEigenvalue
from ..numerics.randomInstances import defaultRng
from ..schurweyl.estimation import deFinettiState, postSelectionCheck
from ..thermo.GammaSpec import gammaMatrix
from ..thermo.workProcesses import gibbsSubPreservationMargin


# Largest number of copies for the universal construction
maxConstructionCopies = 5
# Largest environment times output dimension per copy
maxJointLeg = 4


def _dualUnitNorm ( T ):
    return maxEigenvalue(sum(K.conj().T @ K for K in T.kraus))


def _krausFromOperator ( W, dimEnv, dimOut, dimIn, n ):
    t = np.asarray(W).reshape([dimEnv, dimOut]*n + [dimIn**n])
    order = [2*k for k in range(n)] + [2*k + 1 for k in range(n)] + [2*n]
    t = t.transpose(order).reshape(dimEnv**n, dimOut**n, dimIn**n)
    kraus = [t[e] for e in range(dimEnv**n) if np.linalg.norm(t[e]) > 1e-14]
    if not kraus:
        kraus = [np.zeros((dimOut**n, dimIn**n), dtype=np.complex128)]
    return kraus


def construction2Map ( E, gammaIn=None, gammaOut=None, n=1, delta=0.1, theCapacity=None, theSeed=0 ):
    """
    Universal n-copy implementation of a channel at work rate close to its
    thermodynamic capacity.

    With :math:`V_{X\\to EX'}` a Stinespring dilation of :math:`\\mathcal{E}`,
    :math:`\\Gamma_{EX'} = V\\Gamma_XV^\\dagger` and :math:`x = -T(\\mathcal{E})`,
    the map is
    :math:`\\mathcal{T}(\\cdot) = \\mathrm{tr}_{E^n}[MV^{\\otimes n}(\\cdot)V^{\\dagger\\otimes n}M^\\dagger]`
    for the smoothing operator :math:`M = M^{x,\\delta}_{E^nX'^n}`.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
        Trace-preserving channel.
    gammaIn, gammaOut : :class:`.GammaSpec` or array_like or None
    n : int
    delta : float
    theCapacity : float or None
        :math:`T(\\mathcal{E})` when already known; computed otherwise.
    theSeed : int or numpy.random.Generator
        Randomness of the de Finetti check.

    Returns
    -------
    T : :class:`.QuantumChannel`
        Trace non-increasing map :math:`X^n\\to X'^n`.
    certificates : list of :class:`.Certificate`
        ``'i'`` (trace non-increasing); ``'iii'`` (Gibbs domination
        :math:`w^*\\leq n(T+4\\delta)+\\ln\\bar c(n)` with :math:`\\bar c(n)`
        the block-overlap bound of :meth:`.SmoothingOperator.sizeConstantBound`;
        the measured ``c_n``, its per-copy ``log_c_rate`` and the measured
        ``rate`` are reported); ``'ii'`` (closeness to
        :math:`\\mathcal{E}^{\\otimes n}`): for ``n <= 2`` the diamond
        distance against the pure-output bound
        :math:`\\frac12\\sqrt{(1+q)^2-4o^2}` with
        :math:`q=\\lambda_{max}(W^\\dagger W)` and
        :math:`o=\\lambda_{min}(\\mathrm{Re}\\,V^{\\dagger\\otimes n}W)`,
        otherwise the purified distance of the outputs on the de Finetti
        purification against :math:`\\sqrt{1-o_\\zeta^2}`, with the
        post-selection ``diamondBound`` reported.  The de Finetti purified
        distance is reported as ``proxy`` for every ``n``.

    Raises
    ------
    SizeGuardError
        If ``n > 5`` or the dilation has environment times output
        dimension above 4.
    ValueError
        If the capacity is infinite.
    """
    from ..capacity.mirrorAscent import thermodynamicCapacity

    if n > maxConstructionCopies:
        raise SizeGuardError("Construction limited to n <= {}, got n={}.".format(maxConstructionCopies, n))
    dilation = stinespring(E)
    dEnv, dOut, dIn = dilation.dimEnv, dilation.dimOut, dilation.dimIn
    if dEnv*dOut > maxJointLeg:
        raise SizeGuardError("Dilation output of dimension {} exceeds {} per copy.".format(dEnv*dOut, maxJointLeg))

    gIn = gammaMatrix(gammaIn, dIn)
    gOut = gammaMatrix(gammaOut, dOut)
    capacity = theCapacity
    if capacity is None:
        capacity = thermodynamicCapacity(E, gIn, gOut).value
    if not np.isfinite(capacity):
        raise ValueError("The thermodynamic capacity is infinite; no Gibbs-dominated implementation exists.")
    x = -float(capacity)

    # Environment first so that A = E and B = X'
    V = dilation.isometry.reshape(dOut, dEnv, dIn).transpose(1, 0, 2).reshape(dEnv*dOut, dIn)
    gammaEX = hermitize(V @ gIn @ V.conj().T)
    smoother = universalSmoothingOperator(gammaEX, gOut, x, delta, n, dEnv, dOut)

    Vn = kronPower(V, n)
    W = smoother.operator @ Vn
    T = QuantumChannel(_krausFromOperator(W, dEnv, dOut, dIn, n), tpClass='TNI')

    certificates = [Certificate(n, delta, x, 'i', 1.0, _dualUnitNorm(T))]

    c = smoother.sizeConstant()
    cBound = smoother.sizeConstantBound()
    bound = n*(capacity + 4.0*delta) + (np.log(cBound) if cBound > 0.0 else -np.inf)
    margin = gibbsSubPreservationMargin(T, kronPower(gIn, n), kronPower(gOut, n))
    logRate = np.log(c)/n if c > 0.0 else -np.inf
    certificates.append(Certificate(n, delta, x, 'iii', bound, margin, theTol=1e-7,
                                    theExtra={"c_n": c, "c_n_bound": cBound, "log_c_rate": logRate, "rate": margin/n}))

    _, ket = deFinettiState(n, dIn)
    Psi = ket.reshape(dIn**n, dIn**n)
    target = E.power(n) if n > 1 else E
    proxy = purifiedDistance(_outputOnPurification(T.kraus, Psi), _outputOnPurification(target.kraus, Psi))
    if n <= 2:
        distance = diamondDistance(T, target)
        normMax = maxEigenvalue(W.conj().T @ W)
        overlapMin = float(np.linalg.eigvalsh(hermitize(Vn.conj().T @ W))[0])
        # Trace distance of the unnormalized pure outputs W|psi> and V|psi>, worst case over inputs
        gentle = 0.5*np.sqrt(max(0.0, (1.0 + normMax)**2 - 4.0*max(0.0, overlapMin)**2))
        certificates.append(Certificate(n, delta, x, 'ii', gentle, distance, theTol=1e-6,
                                        theExtra={"method": "diamond", "normMax": normMax, "overlapMin": overlapMin, "proxy": proxy}))
    else:
        check = postSelectionCheck(W, V, n, defaultRng(theSeed))
        certificates.append(Certificate(n, delta, x, 'ii', check["distanceBound"], proxy, theTol=1e-6,
                                        theExtra={"method": "de_finetti", "kappa": check["kappa"], "diamondBound": check["diamondBound"], "proxy": proxy}))
    return T, certificates


def _outputOnPurification ( theKraus, Psi ):
    vectors = [(K @ Psi).reshape(-1) for K in theKraus]
    return hermitize(sum(np.outer(v, v.conj()) for v in vectors))


def _purifiedChoiOutput ( J, sqrtSigmaT, dimOut ):
    N = np.kron(np.eye(dimOut), sqrtSigmaT)
    return hermitize(N @ J @ N)


def aepProtocolMap ( E, sigma, gammaIn=None, gammaOut=None, n=1, delta=0.2 ):
    """
    Typical-projector implementation of :math:`\\mathcal{E}^{\\otimes n}` on
    the purified input :math:`\\sigma^{\\otimes n}`,
    :math:`\\mathcal{T}(\\cdot) = SQ\\,\\mathcal{E}^{\\otimes n}(RP(\\cdot)PR)\\,QS`
    with :math:`P = \\Pi_{\\sigma|\\Gamma_{in}}`, :math:`R = \\Pi_\\sigma`,
    :math:`Q = \\Pi_{\\mathcal{E}(\\sigma)}` and
    :math:`S = \\Pi_{\\mathcal{E}(\\sigma)|\\Gamma_{out}^{-1}}`.

    Returns
    -------
    T : :class:`.QuantumChannel`
    certificates : list of :class:`.Certificate`
        ``'i'`` (trace non-increasing); ``'gamma'`` with
        :math:`w^*\\leq -n[D(\\sigma\\|\\Gamma_{in})-D(\\mathcal{E}(\\sigma)\\|\\Gamma_{out})-4\\delta]`;
        ``'closeness'`` with the purified distance between
        :math:`\\mathcal{T}\\otimes\\mathrm{id}(\\sigma_{XR}^{\\otimes n})` and
        :math:`\\mathcal{E}\\otimes\\mathrm{id}(\\sigma_{XR}^{\\otimes n})`
        measured against :math:`4e^{-n\\eta'}`, where ``etaPrime`` comes from
        the typical weights :math:`w_X=\\mathrm{tr}[X\\tau^{\\otimes n}]` of
        the four projectors through
        :math:`4e^{-n\\eta'}=\\sqrt{1-(1-\\sum_X\\sqrt{1-w_X})_+^2}`; the
        Hoeffding rate ``eta`` and its bound
        :math:`(8\\sqrt2)^{1/2}e^{-n\\eta/4}` are reported alongside.

    Raises
    ------
    SizeGuardError
        If the n-copy Choi matrix exceeds the size guard.
    """
    sigma = hermitize(asMatrix(sigma))
    dIn, dOut = E.dimIn, E.dimOut
    checkDimension((dIn*dOut)**n, "n-copy Choi matrix")
    gIn = gammaMatrix(gammaIn, dIn)
    gOut = gammaMatrix(gammaOut, dOut)
    rho = hermitize(E.apply(sigma))
    gOutInverse = matrixFunction(gOut, lambda v: 1.0/v, supportOnly=True)

    P = relativeTypicalProjector(sigma, gIn, n, delta)
    R = typicalProjector(sigma, n, delta)
    Q = typicalProjector(rho, n, delta)
    S = relativeTypicalProjector(rho, gOutInverse, n, delta)

    En = E.power(n) if n > 1 else E
    T = QuantumChannel([S @ Q @ K @ R @ P for K in En.kraus], tpClass='TNI')

    limit = float(relativeEntropy(sigma, gIn) - relativeEntropy(rho, gOut))
    certificates = [Certificate(n, delta, None, 'i', 1.0, _dualUnitNorm(T))]
    margin = gibbsSubPreservationMargin(T, kronPower(gIn, n), kronPower(gOut, n))
    certificates.append(Certificate(n, delta, None, 'gamma', -n*(limit - 4.0*delta), margin, theExtra={"limit": limit}))

    sqrtSigmaT = sqrtPsd(kronPower(sigma, n)).T
    actual = _purifiedChoiOutput(T.choi, sqrtSigmaT, dOut**n)
    ideal = _purifiedChoiOutput(En.choi, sqrtSigmaT, dOut**n)
    distance = purifiedDistance(actual, ideal)
    weights = [relativeTypicalWeight(sigma, gIn, n, delta), relativeTypicalWeight(sigma, sigma, n, delta),
               relativeTypicalWeight(rho, rho, n, delta), relativeTypicalWeight(rho, gOutInverse, n, delta)]
    # Telescoping S Q V R P = V - (1-S)QVRP - (1-Q)VRP - V(1-R)P - V(1-P) bounds the overlap
    deficit = float(sum(np.sqrt(max(0.0, 1.0 - w)) for w in weights))
    overlap = max(0.0, 1.0 - deficit)
    bound = float(np.sqrt(max(0.0, 1.0 - overlap**2)))
    etaPrime = -np.log(bound/4.0)/n if bound > 0.0 else np.inf
    eta = min(hoeffdingRate(sigma, delta), hoeffdingRate(gIn, delta), hoeffdingRate(rho, delta), hoeffdingRate(gOutInverse, delta))
    hoeffdingBound = float(np.sqrt(8.0*np.sqrt(2.0))*np.exp(-n*eta/4.0))
    certificates.append(Certificate(n, delta, None, 'closeness', 4.0*np.exp(-n*etaPrime), distance, theTol=1e-6,
                                    theExtra={"eta": eta, "etaPrime": etaPrime, "weightDeficit": deficit, "hoeffdingBound": hoeffdingBound}))
    return T, certificates
