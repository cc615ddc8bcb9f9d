import numpy as np

from .PgmDecoder import PgmDecoder
from .dilations import completeToUnitary
from ..channels.QuantumChannel import QuantumChannel
from ..numerics import tolerances
from ..numerics.HermitianOperator import eigHermitian, hermitize
from ..numerics.distances import fidelity
from ..numerics.linearAlgebra import checkDimension, embedOperator, kronPower, partialTrace, permuteSystems
from ..thermo.BatteryState import BatteryState
from ..thermo.GammaSpec import GammaSpec
from ..thermo.WorkLedger import WorkLedger
from ..thermo.workProcesses import effectiveWorkProcess, thermalOperationCheck
from ..typicality.SmoothingOperator import purifyState


def _arrange ( theOperator, theOrder, dims ):
    """
    Operator given on the factors ``theOrder`` (a permutation of all
    factors) rewritten in the natural factor order.
    """
    perm = [list(theOrder).index(i) for i in range(len(dims))]
    return permuteSystems(theOperator, [dims[k] for k in theOrder], perm)


def _placeOperator ( theOperator, thePositions, dims ):
    order = list(thePositions) + [k for k in range(len(dims)) if k not in thePositions]
    rest = int(np.prod([dims[k] for k in order[len(thePositions):]]))
    return _arrange(np.kron(theOperator, np.eye(rest)), order, dims)


def _swapOperator ( a, b, dims ):
    perm = list(range(len(dims)))
    perm[a], perm[b] = perm[b], perm[a]
    D = int(np.prod(dims))
    idx = np.arange(D).reshape(dims).transpose(perm).reshape(-1)
    return np.eye(D)[idx]


def shiftOperator ( x, r ):
    """
    :math:`\\mathrm{SHIFT}(x) = \\sum_k|k+x\\rangle\\langle k|` modulo ``r``.
    """
    return np.roll(np.eye(r), x, axis=0)


class _Layout:
    """
    Factor bookkeeping for :math:`S\\otimes M\\otimes A_1\\cdots A_r\\otimes J`,
    with :math:`J` a rank-``r`` register followed by a flag qubit.
    """

    def __init__ ( self, inst ):
        self.r = inst.ancillas
        self.dS = inst.dimS
        self.dM = inst.dimM
        self.dimsSMA = [self.dS, self.dM] + [self.dS]*self.r
        self.dimsMA = [self.dM] + [self.dS]*self.r
        self.dA = self.dS**self.r
        self.dSMA = self.dS*self.dM*self.dA
        self.dJ = 2*self.r
        self.total = self.dSMA*self.dJ

    def batteryIn ( self ):
        P = np.zeros((self.dJ, self.dJ))
        for j in range(self.r):
            P[2*j, 2*j] = 1.0
        return BatteryState(self.dJ, self.r, P)

    def batteryOut ( self ):
        return BatteryState(self.dJ, 1)


def _decoder ( inst, layout ):
    elements = [_placeOperator(inst.test, [1 + j, 0], layout.dimsMA) for j in range(layout.r)]
    return PgmDecoder(elements)


def _ancillaState ( inst, layout ):
    return kronPower(inst.gammaS, layout.r) if layout.r > 1 else inst.gammaS


def _decodedStateMA ( rho, j, inst, layout ):
    """
    :math:`\\hat\\tau^j_{MA}`: the state of :math:`S` moved to :math:`A_j`,
    thermal states on the other ancillas.
    """
    factors = rho if layout.r == 1 else np.kron(rho, kronPower(inst.gammaS, layout.r - 1))
    order = [1 + j, 0] + [1 + k for k in range(layout.r) if k != j]
    return _arrange(factors, order, layout.dimsMA)


def _testStates ( inst ):
    states = list(inst.states)
    if len(states) > 1:
        states.append(inst.mixture(np.ones(len(states))))
    return states


def decodingOverlaps ( inst, theDecoder=None ):
    """
    :math:`\\langle\\hat\\tau^j|\\Omega^j|\\hat\\tau^j\\rangle` for every
    admissible state (and their uniform mixture) and every :math:`j`.

    Returns
    -------
    numpy.ndarray
        Shape ``(states, e^m)``.
    """
    layout = _Layout(inst)
    checkDimension(layout.dM*layout.dA, "decoder on M times the ancillas")
    decoder = _decoder(inst, layout) if theDecoder is None else theDecoder
    return np.array([[decoder.successProbability(j, _decodedStateMA(rho, j, inst, layout)) for j in range(layout.r)]
                     for rho in _testStates(inst)])


def _contractionOperator ( inst, layout, decoder ):
    """
    :math:`W' = W^{(2)}W^{(1)}` on :math:`SMAJ_r` (without the flag qubit).
    """
    r = layout.r
    W1 = 0
    W2 = 0
    for j in range(r):
        proj = np.zeros((r, r))
        proj[j, j] = 1.0
        W1 = W1 + np.kron(_swapOperator(0, 2 + j, layout.dimsSMA), proj)
        W2 = W2 + np.kron(decoder.effects[j], shiftOperator(-j, r))
    return np.kron(np.eye(layout.dS), W2) @ W1


def _hamiltonianSMA ( inst, layout ):
    H = np.kron(inst.hamiltonian(), np.eye(layout.dA))
    for j in range(layout.r):
        H = H + embedOperator(inst.hamS, 2 + j, layout.dimsSMA)
    return hermitize(H)


def conditionalErasureUnitary ( inst, theBuild='auto' ):
    """
    Position-based-decoding unitary for universal conditional erasure.

    :math:`W^{(1)} = \\sum_j\\mathbb{F}_{SA_j}\\otimes|j\\rangle\\langle j|_J`
    swaps :math:`S` into the ancilla selected by :math:`J`,
    :math:`W^{(2)} = \\sum_j\\Omega^j_{MA}\\otimes\\mathrm{SHIFT}(-j)` decodes
    :math:`j` with the pretty good measurement built from
    :math:`\\Lambda^j = P_{MA_j}\\otimes I`, and the contraction
    :math:`W^{(2)}W^{(1)}` is completed to an energy-preserving unitary with a
    flag qubit appended to :math:`J`.  Factors are ordered
    :math:`S, M, A_1, \\ldots, A_{e^m}, J`, with :math:`J` holding the index
    followed by the flag.

    Parameters
    ----------
    inst : :class:`.ErasureInstance`
    theBuild : str
        ``'auto'`` builds the full unitary when its dimension is at most
        4096, ``'always'`` requires it, ``'never'`` only evaluates the
        decoding overlaps.

    Returns
    -------
    W : numpy.ndarray or None
    report : dict
        ``overlaps`` (worst over :math:`j` per tested state),
        ``worstOverlap``, ``bound`` :math:`1-(2\\kappa+4\\kappa')`,
        ``kappa``, ``kappaPrime``, ``hayashiNagaoka`` (least eigenvalue
        slack), ``pass``; with the unitary also ``directOverlap`` (the
        same overlaps read off the unitary), ``energyResidual``,
        ``unitarity`` and ``blockResidual``.

    Raises
    ------
    SizeGuardError
        If the decoder, or with ``theBuild='always'`` the unitary, exceeds
        the size guard.
    """
    assert(theBuild in ('auto', 'always', 'never')), 'Build must be auto, always or never'
    layout = _Layout(inst)
    decoder = _decoder(inst, layout)
    overlaps = decodingOverlaps(inst, decoder)
    worst = float(np.min(overlaps))
    report = {"overlaps": [float(v) for v in np.min(overlaps, axis=1)],
              "worstOverlap": worst,
              "bound": 1.0 - inst.bound,
              "kappa": inst.kappa,
              "kappaPrime": inst.kappaPrime,
              "ancillas": layout.r,
              "hayashiNagaoka": min(decoder.hayashiNagaokaResidual(j) for j in range(layout.r)),
              "pass": bool(worst >= 1.0 - inst.bound - 1e-9)}

    build = theBuild == 'always' or (theBuild == 'auto' and layout.total <= tolerances.maxDimension)
    if not build:
        return None, report
    checkDimension(layout.total, "conditional erasure unitary")

    Wprime = _contractionOperator(inst, layout, decoder)
    H = np.kron(_hamiltonianSMA(inst, layout), np.eye(layout.r))
    W, completion = completeToUnitary(Wprime, 'energy_preserving', H)
    report["energyResidual"] = completion["energyResidual"]
    report["unitarity"] = completion["unitarity"]
    report["blockResidual"] = completion["blockResidual"]

    # <tau^j, 0_J| W |rho, gamma, j> = tr[F_j <0|W|j> (rho x gamma^r)]
    t = W.reshape(layout.dSMA, layout.dJ, layout.dSMA, layout.dJ)
    direct = []
    for rho in _testStates(inst):
        joint = np.kron(rho, _ancillaState(inst, layout))
        values = [np.real(np.trace(_swapOperator(0, 2 + j, layout.dimsSMA) @ t[:, 0, :, 2*j] @ joint)) for j in range(layout.r)]
        direct.append(float(min(values)))
    report["directOverlap"] = direct
    return W, report


def _thermalMap ( W, inst, layout ):
    """
    :math:`\\mathcal{R}(\\cdot) = \\mathrm{tr}_A[W((\\cdot)\\otimes\\gamma_A)W^\\dagger]`
    on :math:`S\\otimes M\\otimes J`.
    """
    dSM = layout.dS*layout.dM
    gVals, gVecs = eigHermitian(_ancillaState(inst, layout))
    t = W.reshape(dSM, layout.dA, layout.dJ, dSM, layout.dA, layout.dJ)
    t = np.einsum('xaiybj,bc->xaiycj', t, gVecs)
    kraus = []
    for b in range(layout.dA):
        if gVals[b] <= 0.0:
            continue
        for a in range(layout.dA):
            K = np.sqrt(gVals[b])*t[:, a, :, :, b, :].reshape(dSM*layout.dJ, dSM*layout.dJ)
            if np.linalg.norm(K) > 1e-14:
                kraus.append(K)
    return QuantumChannel(kraus)


def conditionalErasureThermalOp ( inst ):
    """
    Thermal operation for universal conditional erasure with :math:`J` as
    an information battery.

    The effective work process with respect to :math:`(\\tau^m_J, |0\\rangle_J)`
    resets :math:`S` to :math:`\\gamma_S` while keeping the correlations of
    :math:`M` with any purifying reference, extracting :math:`m` pure nats.

    Returns
    -------
    R : :class:`.QuantumChannel`
        The map on :math:`S\\otimes M\\otimes J`.
    T : :class:`.QuantumChannel`
        The effective work process on :math:`S\\otimes M`.
    report : dict
        Per tested state the ``fidelity``
        :math:`F(\\mathcal{T}(\\rho_{SMR}), \\gamma_S\\otimes\\rho_{MR})` and
        the ``uhlmann`` lower bound :math:`e^{-m}\\sum_j` overlap; the
        ``bound`` :math:`1-(2\\kappa+4\\kappa')`, the ``gibbs`` audit of
        the unitary and ``pass``.
    ledger : :class:`.WorkLedger`
        One entry extracting :math:`m`.

    Raises
    ------
    SizeGuardError
        If the unitary exceeds the size guard.
    """
    W, report = conditionalErasureUnitary(inst, 'always')
    layout = _Layout(inst)
    R = _thermalMap(W, inst, layout)
    batteryIn = layout.batteryIn()
    batteryOut = layout.batteryOut()
    dSM = layout.dS*layout.dM
    T = effectiveWorkProcess(R, dSM, batteryIn, batteryOut)

    fidelities = []
    for rho in _testStates(inst):
        psi = purifyState(rho)
        joint = np.outer(psi, psi.conj())
        out = hermitize(T.apply(joint, 0, [dSM, dSM]))
        target = np.kron(inst.gammaS, partialTrace(joint, [layout.dS, layout.dM, dSM], [1, 2]))
        fidelities.append(fidelity(out, target))

    hTotal = np.kron(_hamiltonianSMA(inst, layout), np.eye(layout.dJ))
    gamma = GammaSpec.fromHamiltonian(hTotal, inst.beta).gibbs()
    audit = thermalOperationCheck(W, hTotal, gamma)

    ledger = WorkLedger()
    ledger.record("conditional-erasure", batteryIn, batteryOut)

    bound = 1.0 - inst.bound
    result = {"fidelity": fidelities,
              "uhlmann": [float(np.mean(row)) for row in decodingOverlaps(inst)],
              "bound": bound,
              "kappa": inst.kappa,
              "kappaPrime": inst.kappaPrime,
              "gibbs": audit,
              "energyResidual": report["energyResidual"],
              "work_nats": ledger.total,
              "pass": bool(min(fidelities) >= bound - 1e-9 and audit["pass"])}
    return R, T, result, ledger
