import numpy as np

from .ErasureInstance import ErasureInstance, cappedLnRank
from .ProtocolReport import ProtocolReport
from .conditionalErasure import conditionalErasureThermalOp
from ..Errors import PreconditionError
from ..channels.CovariantDilation import covariantStinespring
from ..entropies.HypothesisTest import hypothesisTesting
from ..numerics import tolerances
from ..numerics.HermitianOperator import eigHermitian, hermitize
from ..numerics.distances import checkState, fidelity
from ..numerics.linearAlgebra import commutatorNorm, energyClusters, operatorNorm, partialTrace, permuteSystems
from ..thermo.GammaSpec import GammaSpec
from ..thermo.WorkLedger import WorkLedger
from ..thermo.workProcesses import thermalToPureCost
from ..typicality.SmoothingOperator import purifyState


def dephaseInEnergy ( A, H ):
    """
    :math:`\\sum_E\\Pi_EA\\Pi_E` over the eigenspaces of ``H``.
    """
    vals, vecs = eigHermitian(H)
    out = np.zeros_like(np.asarray(A, dtype=np.complex128))
    for _, idx in energyClusters(vals):
        Q = vecs[:, idx]
        proj = Q @ Q.conj().T
        out += proj @ A @ proj
    return hermitize(out)


def _checkCommutes ( rho, H, theLabel ):
    if commutatorNorm(rho, H) > tolerances.operatorTol*max(1.0, operatorNorm(H)):
        raise PreconditionError("The {} does not commute with the Hamiltonian.".format(theLabel))


def singleShotErasure ( rhoSM, dimS, dimM, hamS=None, hamM=None, beta=1.0, epsilon=0.1 ):
    """
    Single-shot conditional erasure of :math:`S` with quantum memory
    :math:`M`.

    The test is the optimal one for
    :math:`D_h^{1-\\epsilon}(\\rho_{SM}\\|\\gamma_S\\otimes\\rho_M)`, dephased
    in the energy blocks of :math:`H_S+H_M`, and
    :math:`m = \\ln\\lfloor\\epsilon\\,e^{D_h^{1-\\epsilon}}\\rfloor`.  The
    effective process reaches fidelity :math:`1-6\\epsilon` with
    :math:`\\gamma_S\\otimes\\rho_{MR}` for work
    :math:`-m \\leq -D_h^{1-\\epsilon} + \\ln(2/\\epsilon)`.

    Parameters
    ----------
    rhoSM : array_like
        State on :math:`S\\otimes M` commuting with :math:`H_S+H_M`.
    dimS, dimM : int
    hamS, hamM : array_like or None
        Hamiltonians; ``None`` is the zero Hamiltonian.
    beta : float
    epsilon : float

    Returns
    -------
    report : :class:`.ProtocolReport`
        ``extra`` holds ``dh``, ``mIdeal``, ``mSimulated``, ``workIdeal``
        and ``workBound``.
    work : float
        Work consumed in the simulated run (negative: extracted).

    Raises
    ------
    PreconditionError
        If the state does not commute with the Hamiltonian or
        :math:`D_h^{1-\\epsilon} < \\ln(2/\\epsilon)`.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("Epsilon must lie in (0, 1), got {}.".format(epsilon))
    rho = checkState(rhoSM)
    hamS = np.zeros((dimS, dimS)) if hamS is None else hermitize(hamS)
    hamM = np.zeros((dimM, dimM)) if hamM is None else hermitize(hamM)
    H = np.kron(hamS, np.eye(dimM)) + np.kron(np.eye(dimS), hamM)
    _checkCommutes(rho, H, "state of system and memory")

    gammaS = GammaSpec.fromHamiltonian(hamS, beta).gibbs()
    rhoM = partialTrace(rho, [dimS, dimM], [1])
    test = hypothesisTesting(rho, np.kron(gammaS, rhoM), 1.0 - epsilon)
    dh = test.dh
    if not dh >= np.log(2.0/epsilon) - 1e-12:
        raise PreconditionError("D_h^(1-eps) = {:.6f} is below ln(2/eps) = {:.6f}; the erasure protocol does not apply.".format(dh, np.log(2.0/epsilon)))

    P = dephaseInEnergy(test.test, H)
    mIdeal = float(np.log(np.floor(epsilon*np.exp(dh) + 1e-9))) if np.isfinite(dh) else np.inf
    mSimulated = cappedLnRank(mIdeal, dimS, dimM)
    inst = ErasureInstance([rho], dimS, dimM, P, mSimulated, hamS, hamM, beta)
    _, T, result, ledger = conditionalErasureThermalOp(inst)

    workBound = -dh + np.log(2.0/epsilon)
    params = {"beta": beta, "epsilon": epsilon, "dimS": dimS, "dimM": dimM}
    extra = {"dh": dh,
             "mIdeal": mIdeal,
             "mSimulated": mSimulated,
             "workIdeal": -mIdeal,
             "workBound": workBound,
             "kappa": inst.kappa,
             "kappaPrime": inst.kappaPrime,
             "gibbs": result["gibbs"]["pass"],
             "pass": bool(-mIdeal <= workBound + 1e-9 and result["gibbs"]["pass"])}
    report = ProtocolReport("singleshot-erasure", params, min(result["fidelity"]), 1.0 - 6.0*epsilon, ledger, theProcess=T, theExtra=extra)
    return report, ledger.total


def singleShotCovariantProcess ( E, hamX, beta, sigma, epsilon ):
    """
    Single-shot thermal-operation implementation of a time-covariant
    channel on a fixed input.

    Steps: bring in a thermal environment, reset it to its zero-energy
    level at cost :math:`\\ln\\mathrm{tr}\\,e^{-\\beta H_E}`, apply the
    energy-conserving dilation, erase the environment with the output as
    memory (:func:`singleShotErasure`) and discard it.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
    hamX : array_like
    beta : float
    sigma : array_like
        Input state commuting with :math:`H_X`.
    epsilon : float

    Returns
    -------
    report : :class:`.ProtocolReport`
        ``fidelity`` is :math:`F(\\mathcal{T}(\\sigma_{XR}), \\mathcal{E}(\\sigma_{XR}))`;
        ``extra`` carries the per-step costs, ``lnZE`` and ``lnZX``, the
        ideal work and ``workBound``
        :math:`-D_h^{1-\\epsilon}(\\rho_{EX}\\|\\gamma_E\\otimes\\rho_X)+\\ln Z_E+\\ln(2/\\epsilon)`.
    ledger : :class:`.WorkLedger`

    Raises
    ------
    NotCovariantError
        If the channel is not time covariant.
    PreconditionError
        If :math:`[\\sigma, H_X]\\neq0` or the erasure precondition fails.
    """
    hamX = hermitize(hamX)
    sigma = checkState(sigma, "input state")
    _checkCommutes(sigma, hamX, "input state")
    dilation = covariantStinespring(E, hamX)
    dX, dE = dilation.dimSystem, dilation.dimEnv
    hamE = dilation.hamEnv

    ledger = WorkLedger()
    ledger.recordCost("bring-thermal-environment", 0.0)
    lnZE = thermalToPureCost(hamE, 0.0, beta)
    ledger.recordCost("reset-environment", lnZE)
    ledger.recordCost("covariant-unitary", 0.0)

    psi = purifyState(sigma)
    joint = np.outer(psi, psi.conj())
    # X E R after the dilation
    U = np.kron(dilation.unitary, np.eye(dX))
    inXER = permuteSystems(np.kron(joint, dilation.envZeroState()), [dX, dX, dE], [0, 2, 1])
    rhoXER = hermitize(U @ inXER @ U.conj().T)
    rhoEXR = permuteSystems(rhoXER, [dX, dE, dX], [1, 0, 2])
    ideal = hermitize(E.apply(joint, 0, [dX, dX]))

    lnZX = float(np.log(GammaSpec.fromHamiltonian(hamX, beta).partitionFunction()))
    extra = {"lnZE": lnZE, "lnZX": lnZX, "dimEnv": dE}
    params = {"beta": beta, "epsilon": epsilon, "dimX": dX}
    if dE == 1:
        out = partialTrace(rhoEXR, [dE, dX, dX], [1, 2])
        extra.update({"workIdeal": lnZE, "workBound": lnZE, "pass": True})
        report = ProtocolReport("singleshot-covariant", params, fidelity(out, ideal), 1.0 - 6.0*epsilon, ledger, theExtra=extra)
        return report, ledger

    rhoEX = partialTrace(rhoEXR, [dE, dX, dX], [0, 1])
    erasure, _ = singleShotErasure(rhoEX, dE, dX, hamE, hamX, beta, epsilon)
    ledger.extend(erasure.ledger, "erasure:")
    ledger.recordCost("discard-environment", 0.0)

    out = erasure.process.apply(rhoEXR, 0, [dE*dX, dX])
    out = hermitize(partialTrace(out, [dE, dX, dX], [1, 2]))
    workIdeal = lnZE + erasure.extra["workIdeal"]
    workBound = -erasure.extra["dh"] + lnZE + np.log(2.0/epsilon)
    extra.update({"dh": erasure.extra["dh"],
                  "workIdeal": workIdeal,
                  "workBound": workBound,
                  "erasureFidelity": erasure.fidelity,
                  "pass": bool(workIdeal <= workBound + 1e-9 and erasure.extra["pass"])})
    report = ProtocolReport("singleshot-covariant", params, fidelity(out, ideal), 1.0 - 6.0*epsilon, ledger, theProcess=None, theExtra=extra)
    return report, ledger
