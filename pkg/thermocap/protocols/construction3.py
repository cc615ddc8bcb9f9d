import warnings
import numpy as np

from .ErasureInstance import ErasureInstance, cappedLnRank, erasureDimension, integerAncillas
from .ProtocolReport import ProtocolReport
from .conditionalErasure import conditionalErasureThermalOp, conditionalErasureUnitary
from ..Errors import PreconditionError
from ..channels.CovariantDilation import covariantStinespring
from ..channels.QuantumChannel import QuantumChannel
from ..channels.diamond import diamondDistance
from ..entropies.quantities import conditionalEntropy
from ..numerics import tolerances
from ..numerics.HermitianOperator import hermitize
from ..numerics.distances import purifiedDistance
from ..numerics.linearAlgebra import checkDimension, embedOperator, kronPower, permuteSystems
from ..numerics.randomInstances import defaultRng, randomState
from ..schurweyl.estimation import deFinettiState, postSelectionFactor
from ..thermo.GammaSpec import GammaSpec
from ..thermo.WorkLedger import WorkLedger
from ..typicality.SmoothingOperator import universalSmoothingOperator
from ..typicality.projectors import conditionalSizeConstant, hoeffdingRate, universalConditionalTypicalProjector


def _blockedOrder ( n ):
    return [2*k for k in range(n)] + [2*k + 1 for k in range(n)]


def blockedOperator ( theOperator, dA, dB, n ):
    """
    Operator on :math:`A_1B_1\\cdots A_nB_n` rewritten on :math:`A^n\\otimes B^n`.
    """
    return permuteSystems(theOperator, [dA, dB]*n, _blockedOrder(n))


def blockedPower ( rhoAB, dA, dB, n ):
    """
    :math:`\\rho_{AB}^{\\otimes n}` on :math:`A^n\\otimes B^n`.
    """
    return blockedOperator(kronPower(rhoAB, n), dA, dB, n) if n > 1 else hermitize(rhoAB)


def _blockedIsometry ( V, dA, dB, n ):
    """
    :math:`V^{\\otimes n}` for :math:`V: X\\to A\\otimes B`, outputs ordered
    :math:`A^n\\otimes B^n`.
    """
    dIn = V.shape[1]
    t = kronPower(V, n).reshape([dA, dB]*n + [dIn**n])
    return t.transpose(_blockedOrder(n) + [2*n]).reshape((dA*dB)**n, dIn**n)


def _localSum ( h, n ):
    d = h.shape[0]
    if n == 1:
        return hermitize(h)
    return hermitize(sum(embedOperator(h, k, [d]*n) for k in range(n)))


def _channelOnInputs ( theKraus, Vn, dEn, dXn ):
    """
    Kraus operators of :math:`\\mathrm{tr}_{E^n}[\\mathcal{T}(V^n(\\cdot)V^{n\\dagger})]`.
    """
    kraus = []
    for K in theKraus:
        t = (K @ Vn).reshape(dEn, dXn, dXn)
        kraus.extend(t[e] for e in range(dEn) if np.linalg.norm(t[e]) > 1e-14)
    return kraus or [np.zeros((dXn, dXn), dtype=np.complex128)]


def _closeness ( T, E, n, dX ):
    """
    Diamond distance for ``n <= 2``, otherwise the purified distance on
    the de Finetti purification with its post-selection diamond bound.
    """
    if n <= 2:
        target = E.power(n) if n > 1 else E
        distance = diamondDistance(T, target)
        return {"method": "diamond", "distance": distance, "diamondBound": distance}
    _, ket = deFinettiState(n, dX)
    joint = np.outer(ket, ket.conj())
    dims = [dX**n, dX**n]
    actual = hermitize(T.apply(joint, 0, dims))
    ideal = hermitize(E.power(n).apply(joint, 0, dims))
    distance = purifiedDistance(actual, ideal)
    return {"method": "de_finetti", "distance": distance, "diamondBound": postSelectionFactor(n, dX)*distance}


def construction3Assembly ( E, hamX, beta, n, delta, theSeed=0, theSamples=3, theCapacity=None ):
    """
    Universal n-copy thermal-operation implementation of a time-covariant
    channel through conditional erasure.

    The steps are: bring the environments :math:`E^n` in thermal, reset
    them to :math:`|0\\rangle^{\\otimes n}` at cost :math:`n\\ln Z_E`, apply
    the energy-conserving dilation :math:`V^{\\otimes n}`, erase
    :math:`E^n` conditioned on :math:`X^n` with the test
    :math:`P^{x,\\delta}` (the smoothing operator for
    :math:`\\Gamma_E\\otimes\\Gamma_X` against :math:`\\Gamma_X`, with
    :math:`x=-T(\\mathcal{E})`), and discard :math:`E^n`.  The erasure
    extracts :math:`m` with
    :math:`e^m = \\lfloor\\exp\\{n(x-\\beta F_E-4\\delta-\\eta)\\}\\rfloor`.
    When :math:`e^m\\leq1` the erasure is replaced by thermalizing
    :math:`E^n`, which is exact and free.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
        Time-covariant channel on :math:`X`.
    hamX : array_like
    beta : float
    n : int
    delta : float
    theSeed : int or numpy.random.Generator
        Randomness of the sampled inputs :math:`\\sigma`.
    theSamples : int
        Number of sampled inputs defining the admissible states
        :math:`(V\\sigma V^\\dagger)^{\\otimes n}`.
    theCapacity : float or None
        :math:`T(\\mathcal{E})` when already known.

    Returns
    -------
    T : :class:`.QuantumChannel`
        Effective process on :math:`X^n` (trace non-increasing).
    ledger : :class:`.WorkLedger`
    report : :class:`.ProtocolReport`
        ``extra`` holds the capacity, ``x``, ``betaFreeEnergyEnv``,
        ``freeEnergyCheck`` (:math:`x\\geq\\beta F_E`), the surrogate
        ``eta``, ``mIdeal`` and ``mSimulated``, the per-copy
        decomposition ``resetPerCopy``, ``extractedPerCopy`` and
        ``idealRate``, the ``closeness`` report and the measured
        ``kappa`` and ``kappaPrime``.

    Raises
    ------
    NotCovariantError
        If the channel is not time covariant.
    SizeGuardError
        If :math:`(d_Ed_X)^n` exceeds the size guard.
    """
    from ..capacity.mirrorAscent import thermodynamicCapacity

    hamX = hermitize(hamX)
    dilation = covariantStinespring(E, hamX)
    dX, dE = dilation.dimSystem, dilation.dimEnv
    checkDimension((dE*dX)**n, "n-copy dilation output")
    rng = defaultRng(theSeed)

    gammaX = GammaSpec.fromHamiltonian(hamX, beta)
    gammaE = GammaSpec.fromHamiltonian(dilation.hamEnv, beta)
    capacity = theCapacity
    if capacity is None:
        capacity = thermodynamicCapacity(E, gammaX.gamma, gammaX.gamma).value
    x = -float(capacity)
    lnZE = float(np.log(gammaE.partitionFunction()))
    betaFreeEnergyEnv = -lnZE
    freeEnergyCheck = bool(x >= betaFreeEnergyEnv - 1e-9)
    if not freeEnergyCheck:
        warnings.warn("x = {:.6f} lies below beta F_E = {:.6f}.".format(x, betaFreeEnergyEnv))

    # environment first, X second
    Ve = dilation.isometry().reshape(dX, dE, dX).transpose(1, 0, 2).reshape(dE*dX, dX)
    gammaEX = np.kron(gammaE.gamma, gammaX.gamma)
    eta = min(hoeffdingRate(gammaEX, delta), hoeffdingRate(gammaX.gamma, delta))
    exponent = n*(x - betaFreeEnergyEnv - 4.0*delta - (eta if np.isfinite(eta) else 0.0))
    mIdeal = float(np.log(np.floor(np.exp(exponent) + 1e-9))) if exponent >= 0.0 else 0.0
    mSimulated = cappedLnRank(mIdeal, dE**n, dX**n)

    ledger = WorkLedger()
    ledger.recordCost("bring-thermal-environment", 0.0)
    ledger.recordCost("reset-environment", n*lnZE)
    ledger.recordCost("covariant-unitary", 0.0)

    Vn = _blockedIsometry(Ve, dE, dX, n)
    dEn, dXn = dE**n, dX**n
    extra = {"capacity": float(capacity),
             "x": x,
             "betaFreeEnergyEnv": betaFreeEnergyEnv,
             "freeEnergyCheck": freeEnergyCheck,
             "eta": eta,
             "etaSurrogate": True,
             "mIdeal": mIdeal,
             "mSimulated": mSimulated,
             "resetPerCopy": lnZE,
             "extractedPerCopy": mSimulated/n,
             "idealRate": lnZE - mIdeal/n}

    if mSimulated <= 0.0:
        ledger.recordCost("thermalize-environment", 0.0)
        En = E.power(n) if n > 1 else E
        T = QuantumChannel(list(En.kraus), tpClass='TNI')
        fidelity, bound = 1.0, 1.0
        extra.update({"kappa": 0.0, "kappaPrime": 0.0, "erasure": "thermalize"})
    else:
        smoother = universalSmoothingOperator(gammaEX, gammaX.gamma, x, delta, n, dE, dX)
        P = hermitize(blockedOperator(smoother.operator, dE, dX, n))
        sigmas = [randomState(dX, rng) for _ in range(theSamples)]
        states = [hermitize(Vn @ kronPower(s, n) @ Vn.conj().T) if n > 1 else hermitize(Ve @ s @ Ve.conj().T) for s in sigmas]
        inst = ErasureInstance(states, dEn, dXn, P, mSimulated, _localSum(dilation.hamEnv, n), _localSum(hamX, n), beta)
        bound = 1.0 - inst.bound
        extra.update({"kappa": inst.kappa, "kappaPrime": inst.kappaPrime, "flavor": smoother.flavor})
        if erasureDimension(inst.ancillas, dEn, dXn) <= tolerances.maxDimension:
            _, Terase, result, erasureLedger = conditionalErasureThermalOp(inst)
            ledger.extend(erasureLedger, "erasure:")
            fidelity = min(result["fidelity"])
            extra.update({"erasure": "thermal_operation", "gibbs": result["gibbs"]["pass"]})
            T = QuantumChannel(_channelOnInputs(Terase.kraus, Vn, dEn, dXn), tpClass='TNI')
        else:
            _, overlaps = conditionalErasureUnitary(inst, 'never')
            ledger.recordCost("erasure:conditional-erasure", -mSimulated)
            fidelity = overlaps["worstOverlap"]
            extra.update({"erasure": "decoding_overlaps"})
            T = None
    ledger.recordCost("discard-environment", 0.0)

    if T is not None:
        extra["closeness"] = _closeness(T, E, n, dX)
    extra["rateGap"] = ledger.total/n - float(capacity)
    params = {"beta": beta, "n": n, "delta": delta, "dimX": dX, "dimEnv": dE}
    report = ProtocolReport("construction3", params, fidelity, bound, ledger, theCopies=n, theProcess=T, theExtra=extra)
    return T, ledger, report


def _lowEntropyStates ( s, dimS, dimM, rng, theCount, maxAttempts=2000 ):
    found = []
    attempts = 0
    while len(found) < theCount and attempts < maxAttempts:
        attempts += 1
        rho = randomState(dimS*dimM, rng, int(rng.integers(1, dimS*dimM + 1)))
        if float(conditionalEntropy(rho, [dimS, dimM])) <= s:
            found.append(rho)
    if len(found) < theCount:
        warnings.warn("Only {} states with H(S|M) <= {:.4f} found in {} attempts.".format(len(found), s, maxAttempts))
    return found


def ncopyErasureTrivialH ( s, delta, n, m, theStates=None, dimS=2, dimM=2, theSeed=0, theSamples=3 ):
    """
    Universal conditional erasure of :math:`S^n` with memory :math:`M^n`
    for all i.i.d. states with :math:`H(S|M)\\leq s`, trivial Hamiltonians.

    The test is the universal conditional typical projector
    :math:`P^{s,\\delta}`, for which
    :math:`\\kappa'\\leq e^m\\,c(n)\\,e^{-n(\\ln d_S-s-2\\delta)}`, so that
    :math:`m\\leq n(\\ln d_S-s-3\\delta)` leaves :math:`\\kappa'` decaying
    as :math:`c(n)e^{-n\\delta}`.

    Parameters
    ----------
    s : float
        Conditional entropy threshold, below :math:`\\ln d_S`.
    delta : float
    n : int
    m : float
        Extracted work; :math:`e^m` must be an integer.
    theStates : list of array_like or None
        States :math:`\\rho_{SM}`; sampled with :math:`H(S|M)\\leq s` when
        ``None``.
    dimS, dimM : int
    theSeed : int or numpy.random.Generator
    theSamples : int

    Returns
    -------
    :class:`.ProtocolReport`
        ``fidelity`` is the worst erasure fidelity (or decoding overlap
        when the unitary exceeds the size guard) and ``bound``
        :math:`1-(2\\kappa+4\\kappa')`; ``extra`` holds ``mMax``,
        ``kappaPrimeBound`` and the size constant ``c_n``.

    Raises
    ------
    PreconditionError
        If :math:`s\\geq\\ln d_S` or :math:`m > n(\\ln d_S-s-3\\delta)`.
    """
    if s >= np.log(dimS) - 1e-12:
        raise PreconditionError("Threshold s = {:.6f} must lie below ln d_S = {:.6f}; no work can be extracted.".format(s, np.log(dimS)))
    mMax = n*(np.log(dimS) - s - 3.0*delta)
    if m > mMax + 1e-12:
        raise PreconditionError("m = {:.6f} exceeds n(ln d_S - s - 3 delta) = {:.6f}.".format(m, mMax))
    r = integerAncillas(m)

    rng = defaultRng(theSeed)
    states = theStates if theStates is not None else _lowEntropyStates(s, dimS, dimM, rng, theSamples)
    assert(len(states) > 0), 'No admissible states to erase'
    Pint = universalConditionalTypicalProjector(s, delta, n, dimS, dimM)
    P = hermitize(blockedOperator(Pint, dimS, dimM, n))
    statesN = [blockedPower(rho, dimS, dimM, n) for rho in states]
    inst = ErasureInstance(statesN, dimS**n, dimM**n, P, m)

    c = conditionalSizeConstant(Pint, s, delta, n, dimS, dimM)
    extra = {"mMax": mMax,
             "ancillas": r,
             "kappa": inst.kappa,
             "kappaPrime": inst.kappaPrime,
             "c_n": c,
             "kappaPrimeBound": r*c*np.exp(-n*(np.log(dimS) - s - 2.0*delta))}
    if erasureDimension(r, dimS**n, dimM**n) <= tolerances.maxDimension:
        _, _, result, ledger = conditionalErasureThermalOp(inst)
        fidelity = min(result["fidelity"])
        extra.update({"erasure": "thermal_operation", "gibbs": result["gibbs"]["pass"]})
    else:
        _, overlaps = conditionalErasureUnitary(inst, 'never')
        ledger = WorkLedger()
        ledger.recordCost("conditional-erasure", -m)
        fidelity = overlaps["worstOverlap"]
        extra.update({"erasure": "decoding_overlaps"})
    params = {"s": s, "delta": delta, "n": n, "m": m, "dimS": dimS, "dimM": dimM}
    return ProtocolReport("ncopy-erasure", params, fidelity, 1.0 - inst.bound, ledger, theCopies=n, theExtra=extra)
