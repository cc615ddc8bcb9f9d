import numpy as np

from ..numerics.HermitianOperator import hermitize, sqrtPsd
from ..numerics.distances import purifiedDistance
from ..numerics.linearAlgebra import maxEigenvalue, minEigenvalue
from ..numerics.randomInstances import defaultRng, ginibre, randomPsd, randomState, randomUnitary


def pinchingResidual ( theOperators, T ):
    """
    Smallest eigenvalue of
    :math:`M\\sum_i E^iTE^{i\\dagger} - (\\sum_i E^i)T(\\sum_j E^j)^\\dagger`,
    non-negative whenever :math:`T\\succeq0`.
    """
    ops = [np.asarray(E) for E in theOperators]
    total = sum(ops)
    pinched = sum(E @ T @ E.conj().T for E in ops)
    return minEigenvalue(hermitize(len(ops)*pinched - total @ T @ total.conj().T))


def gentleMeasurement ( rho, Q ):
    """
    Disturbance of a state by a likely measurement outcome.

    Returns
    -------
    distance : float
        :math:`P(\\rho, Q^{1/2}\\rho Q^{1/2})`.
    bound : float
        :math:`\\sqrt{2\\delta}` with :math:`\\delta = 1 - \\mathrm{tr}[Q\\rho]`.
    """
    rho = hermitize(rho)
    root = sqrtPsd(Q)
    delta = max(0.0, 1.0 - float(np.real(np.trace(Q @ rho))))
    return purifiedDistance(rho, hermitize(root @ rho @ root)), float(np.sqrt(2.0*delta))


def povmControlledUnitary ( theEffects, theUnitaries ):
    """
    :math:`W_{XY} = \\sum_j Q^j_X\\otimes U^j_Y`.

    Raises
    ------
    ValueError
        If the effects do not satisfy :math:`\\sum_j Q^j\\preceq I`.
    """
    if len(theEffects) != len(theUnitaries):
        raise ValueError("Need one unitary per effect, got {} effects and {} unitaries.".format(len(theEffects), len(theUnitaries)))
    if maxEigenvalue(sum(theEffects)) > 1.0 + 1e-9:
        raise ValueError("Effects sum to an operator above the identity.")
    return sum(np.kron(Q, U) for Q, U in zip(theEffects, theUnitaries))


def _subPovm ( d, k, rng ):
    effects = [randomPsd(d, rng) for _ in range(k)]
    total = maxEigenvalue(sum(effects))
    scale = rng.uniform(0.5, 1.0)/total
    return [scale*Q for Q in effects]


def utilityLemmaChecks ( theSamples=100, theSeed=0, tol=1e-9 ):
    """
    Randomized verification of the pinching inequality, the gentle
    measurement bound and the contraction property of POVM-controlled
    unitaries.

    Parameters
    ----------
    theSamples : int
        Instances per check.
    theSeed : int
    tol : float

    Returns
    -------
    dict
        For each of ``pinching``, ``gentle`` and ``controlled``: the worst
        slack over the samples (non-negative when the inequality holds) and
        a ``pass`` flag.
    """
    rng = defaultRng(theSeed)
    worstPinch = np.inf
    worstGentle = np.inf
    worstControlled = np.inf
    for _ in range(theSamples):
        d = int(rng.integers(2, 5))
        M = int(rng.integers(1, 4))
        ops = [ginibre(d, d, rng) for _ in range(M)]
        T = randomPsd(d, rng)
        worstPinch = min(worstPinch, pinchingResidual(ops, T)/max(1.0, maxEigenvalue(T)))

        rho = randomState(d, rng)
        Q = _subPovm(d, 1, rng)[0]
        distance, bound = gentleMeasurement(rho, Q)
        worstGentle = min(worstGentle, bound - distance)

        effects = _subPovm(d, M, rng)
        unitaries = [randomUnitary(2, rng) for _ in range(M)]
        W = povmControlledUnitary(effects, unitaries)
        worstControlled = min(worstControlled, 1.0 - maxEigenvalue(W.conj().T @ W))

    return {"pinching": {"slack": worstPinch, "pass": bool(worstPinch >= -tol)},
            "gentle": {"slack": worstGentle, "pass": bool(worstGentle >= -tol)},
            "controlled": {"slack": worstControlled, "pass": bool(worstControlled >= -tol)},
            "samples": theSamples}
