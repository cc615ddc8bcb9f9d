import warnings
import numpy as np

from ..entropies.quantities import measuredRelative, supportViolation
from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize
from ..numerics.linearAlgebra import checkDimension, kronPower, maxEigenvalue, partialTrace
from ..schurweyl.SchurBlock import schurProjector
from ..schurweyl.YoungDiagram import youngDiagrams
from ..schurweyl.estimation import interleavedEmbedding


def _productLabels ( tau, n ):
    vals, vecs = np.linalg.eigh(hermitize(asMatrix(tau)))
    support = vals > tolerances.rankThreshold*max(1.0, np.max(np.abs(vals)))
    h = np.full(len(vals), np.inf)
    h[support] = -np.log(vals[support])
    total = np.zeros(1)
    for _ in range(n):
        total = np.add.outer(total, h).reshape(-1)
    return total/n, vecs


def relativeTypicalProjector ( rho, tau, n, delta ):
    """
    Relative typical projector :math:`\\Pi^{n,\\delta}_{\\rho|\\tau}`.

    Projects onto the product eigenvectors of :math:`\\tau^{\\otimes n}`
    whose eigenvalue lies in
    :math:`[e^{-n(D_M+\\delta)}, e^{-n(D_M-\\delta)}]` with
    :math:`D_M = -\\mathrm{tr}(\\rho\\ln\\tau)`.  It commutes with
    :math:`\\tau^{\\otimes n}` by construction.  ``tau = rho`` gives the
    weakly typical projector of ``rho``.

    Returns
    -------
    numpy.ndarray
        The projector; the zero operator (with a warning) when the support
        of ``rho`` is not inside that of ``tau``.
    """
    rho = hermitize(asMatrix(rho))
    d = rho.shape[0]
    checkDimension(d**n, "relative typical projector")
    if supportViolation(rho, tau) > tolerances.subnormalTol:
        warnings.warn("Support of the state is not contained in the support of tau; the relative typical projector is zero.")
        return np.zeros((d**n, d**n), dtype=np.complex128)
    labels, vecs = _productLabels(tau, n)
    mask = np.abs(labels - float(measuredRelative(rho, tau))) <= delta
    B = kronPower(vecs, n)[:, mask]
    return B @ B.conj().T


def typicalProjector ( rho, n, delta ):
    return relativeTypicalProjector(rho, rho, n, delta)


def relativeTypicalWeight ( rho, tau, n, delta ):
    """
    :math:`\\mathrm{tr}[\\Pi^{n,\\delta}_{\\rho|\\tau}\\rho^{\\otimes n}]`
    from the populations of ``rho`` in the eigenbasis of ``tau``.
    """
    rho = hermitize(asMatrix(rho))
    if supportViolation(rho, tau) > tolerances.subnormalTol:
        return 0.0
    labels, vecs = _productLabels(tau, n)
    populations = np.clip(np.real(np.diag(vecs.conj().T @ rho @ vecs)), 0.0, None)
    probs = np.ones(1)
    for _ in range(n):
        probs = np.multiply.outer(probs, populations).reshape(-1)
    mask = np.abs(labels - float(measuredRelative(rho, tau))) <= delta
    return float(np.sum(probs[mask]))


def hoeffdingRate ( tau, delta ):
    """
    Decay rate :math:`\\eta = 2\\delta^2/r^2` of the Hoeffding bound on the
    atypical weight, :math:`r` the spread of :math:`-\\ln\\tau` on its
    support (:math:`r\\leq 2\\|\\ln\\tau\\|_\\infty`).
    """
    vals = np.linalg.eigvalsh(hermitize(asMatrix(tau)))
    vals = vals[vals > tolerances.rankThreshold*max(1.0, np.max(np.abs(vals)))]
    spread = float(np.max(-np.log(vals)) - np.min(-np.log(vals)))
    if spread == 0.0:
        return np.inf
    return 2.0*delta**2/spread**2


def universalConditionalTypicalProjector ( s, delta, n, dA, dB ):
    """
    Universal conditional typical projector
    :math:`P^{s,\\delta} = \\sum_{\\bar H(\\lambda)-\\bar H(\\lambda')\\leq s+2\\delta}(I_{A^n}\\otimes\\Pi^{\\lambda'}_{B^n})\\Pi^\\lambda_{A^nB^n}`
    on the interleaved ordering :math:`A_1B_1\\cdots A_nB_n`.

    The terms are commuting, mutually orthogonal projectors.  An empty sum
    gives the zero operator with a warning.
    """
    D = (dA*dB)**n
    checkDimension(D, "universal conditional typical projector")
    P = np.zeros((D, D))
    empty = True
    blocksB = [schurProjector(mu) for mu in youngDiagrams(n, dB)]
    embedded = [interleavedEmbedding(block.projector, n, dA, dB) for block in blocksB]
    for lam in youngDiagrams(n, dA*dB):
        blockAB = schurProjector(lam)
        for blockB, PB in zip(blocksB, embedded):
            if blockAB.entropy - blockB.entropy <= s + 2.0*delta:
                P += PB @ blockAB.projector
                empty = False
    if empty or np.max(np.abs(P)) == 0.0:
        warnings.warn("No Schur-Weyl block pair satisfies the conditional entropy threshold; the projector is zero.")
    return hermitize(P)


def conditionalSizeConstant ( P, s, delta, n, dA, dB ):
    """
    Measured :math:`c(n)` in :math:`\\mathrm{tr}_{A^n}P\\preceq c(n)e^{n(s+2\\delta)}I_{B^n}`.
    """
    reduced = partialTrace(P, [dA, dB]*n, [2*k + 1 for k in range(n)])
    return float(maxEigenvalue(reduced)*np.exp(-n*(s + 2.0*delta)))


def conditionalSizeRate ( P, dA, dB, n ):
    """
    :math:`\\frac1n\\ln\\|\\mathrm{tr}_{A^n}P\\|_\\infty`, the conditional
    size per copy certified by a projector on :math:`(AB)^{\\otimes n}`.
    """
    reduced = partialTrace(P, [dA, dB]*n, [2*k + 1 for k in range(n)])
    top = maxEigenvalue(reduced)
    if top <= 0.0:
        return -np.inf
    return float(np.log(top)/n)
