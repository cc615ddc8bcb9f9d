import functools
import warnings
import numpy as np
import cvxpy as cp

from .CapacityResult import CohRelResult
from ..Errors import SizeGuardError, SolverError
from ..channels.QuantumChannel import applyChoi
from ..channels.channelLibrary import erasureToPlus
from ..channels.diamond import addDiamondConstraint, diamondNormOfChoi
from ..entropies.HypothesisTest import hypothesisTesting
from ..entropies.quantities import relativeEntropy
from ..numerics import tolerances
from ..numerics.HermitianOperator import eigHermitian, hermitize, positivePart, sqrtPsd, supportThreshold
from ..numerics.SdpProblem import SdpProblem, solveSdp
from ..numerics.distances import checkState, fidelity
from ..numerics.linearAlgebra import kronPower, maxEigenvalue, minEigenvalue, operatorNorm, partialTrace
from ..thermo.GammaSpec import GammaSpec, gammaMatrix
from ..thermo.workProcesses import gibbsSubPreservationMargin


# Largest local dimension accepted by the coherent relative entropy SDP
maxLegDimension = 8

# Largest Choi dimension accepted by the universal work cost SDP
maxChoiDimension = 64


def _purifiedOutput ( J, sqrtSigmaT, dimIn, dimOut ):
    N = np.kron(np.eye(dimOut), sqrtSigmaT)
    return N @ J @ N


def _whiteningFrame ( gOut ):
    """
    Columns ``W`` with :math:`W^\\dagger\\Gamma_{out}W = I` on the support of
    :math:`\\Gamma_{out}`, and the projector onto its kernel.
    """
    vals, vecs = eigHermitian(gOut)
    keep = vals > supportThreshold(vals)
    kernel = vecs[:, ~keep]
    return vecs[:, keep]/np.sqrt(vals[keep]), kernel @ kernel.conj().T


def _gammaMargin ( J, gIn, W, K, dimIn, dimOut ):
    """
    Least :math:`\\alpha` with :math:`\\mathcal{T}(\\Gamma_{in})\\preceq\\alpha\\Gamma_{out}`
    on the support of :math:`\\Gamma_{out}`, and the relative weight of
    :math:`\\mathcal{T}(\\Gamma_{in})` on its kernel.
    """
    image = hermitize(applyChoi(J, gIn, dimIn, dimOut))
    leak = np.real(np.trace(K @ image))/max(1.0, np.real(np.trace(image)))
    return maxEigenvalue(W.conj().T @ image @ W), max(0.0, float(leak))


def _addGammaDomination ( theProblem, J, gIn, gOut, theReference, dimIn, dimOut ):
    """
    Add :math:`\\mathcal{T}(\\Gamma_{in})\\preceq\\alpha\\Gamma_{out}` in the
    whitened frame of :math:`\\Gamma_{out}`, with the multiplier divided by
    the margin of the reference map ``theReference`` (a Choi matrix).

    Returns
    -------
    alpha : cvxpy.Variable
        Scaled multiplier; the reference map sits at ``alpha = 1``.
    scale : float
        Factor turning ``alpha`` back into the physical multiplier.
    frame : tuple
        ``(W, K)`` from :func:`_whiteningFrame`.
    """
    W, K = _whiteningFrame(gOut)
    scale, _ = _gammaMargin(theReference, gIn, W, K, dimIn, dimOut)
    if not scale > 0.0:
        scale = 1.0
    M = np.kron(np.eye(dimOut), sqrtPsd(gIn).T)
    image = cp.partial_trace(M @ J @ M, [dimOut, dimIn], 1)
    alpha = theProblem.addBlock("alpha", 1, 'scalar')
    r = W.shape[1]
    theProblem.addPsdConstraint(alpha*np.eye(r) - (W.conj().T @ image @ W)/scale, r, "gamma")
    if np.any(K):
        theProblem.addConstraint(cp.real(cp.trace(K @ image)) == 0, "kernel")
    return alpha, scale, (W, K)


def _trimToTni ( Jraw, dimIn, dimOut ):
    """
    Positive part of a solver Choi matrix scaled back into the trace
    non-increasing set.

    Returns
    -------
    tuple
        ``(J, cp residual, tni residual)`` measured on the raw matrix.
    """
    cpResidual = max(0.0, -minEigenvalue(Jraw))
    J = positivePart(Jraw)
    top = maxEigenvalue(partialTrace(J, [dimOut, dimIn], [1]))
    if top > 1.0:
        J = J/top
    return J, cpResidual, max(0.0, top - 1.0)


def _requireResiduals ( theResiduals, theSolution, theContext ):
    worst = max(theResiduals, key=theResiduals.get)
    if theResiduals[worst] > tolerances.residualTol:
        raise SolverError("{} returned a map violating its '{}' constraint by {:.3e} (solver {}).".format(theContext, worst, theResiduals[worst], theSolution.solver), theSolution)


def coherentRelativeEntropy ( E, sigma, gammaIn=None, gammaOut=None, epsilon=0.0, theSolver=None ):
    """
    Coherent relative entropy of a process on a fixed input.

    Minimizes :math:`\\alpha` over trace non-increasing completely positive
    maps :math:`\\mathcal{T}` with :math:`\\mathcal{T}(\\Gamma_{in})\\preceq\\alpha\\Gamma_{out}`
    and :math:`P(\\mathcal{T}(\\sigma_{XR}),\\mathcal{E}(\\sigma_{XR}))\\leq\\epsilon`,
    where :math:`|\\sigma\\rangle_{XR} = \\sigma_X^{1/2}|\\Phi\\rangle`.  The
    returned value is :math:`-\\ln\\alpha`; the work cost of implementing
    :math:`\\mathcal{E}` on :math:`\\sigma` is its negative.

    The distance constraint enters as the fidelity block
    :math:`F\\geq\\sqrt{1-\\epsilon^2}`; for :math:`\\epsilon=0` it is the
    equality of the two output states.  The domination constraint is
    posed in the whitened frame of :math:`\\Gamma_{out}` and normalized by
    the margin of :math:`\\mathcal{E}` itself, which keeps the program well
    scaled when :math:`\\Gamma` spans many orders of magnitude.

    The solver map is cut back to its positive part and into the trace
    non-increasing set, :math:`\\alpha` is recomputed from it with dense
    linear algebra, and a fidelity shortfall is closed by mixing in
    :math:`\\mathcal{E}`.  The residuals are measured before that mixing.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
    sigma : array_like
        Normalized input state :math:`\\sigma_X`.
    gammaIn, gammaOut : :class:`.GammaSpec` or array_like or None
    epsilon : float
        Purified-distance tolerance in :math:`[0, 1)`.
    theSolver : str or None

    Returns
    -------
    :class:`.CohRelResult`

    Raises
    ------
    SizeGuardError
        If a leg dimension exceeds ``maxLegDimension``.
    SolverError
        If the SDP does not reach an accurate optimum, or if a residual of
        the returned map exceeds ``tolerances.residualTol``.
    """
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("The tolerance epsilon={} must lie in [0, 1).".format(epsilon))
    dimIn, dimOut = E.dimIn, E.dimOut
    if max(dimIn, dimOut) > maxLegDimension:
        raise SizeGuardError("Coherent relative entropy SDP accepts local dimensions up to {}, got ({}, {}).".format(maxLegDimension, dimIn, dimOut))
    sigma = checkState(sigma, "input state")
    if abs(np.real(np.trace(sigma)) - 1.0) > tolerances.subnormalTol:
        raise ValueError("The input state must be normalized, its trace is {:.12f}.".format(np.real(np.trace(sigma))))
    gIn = gammaMatrix(gammaIn, dimIn)
    gOut = gammaMatrix(gammaOut, dimOut)

    D = dimIn*dimOut
    sqrtSigmaT = sqrtPsd(sigma).T
    N = np.kron(np.eye(dimOut), sqrtSigmaT)
    target = hermitize(_purifiedOutput(E.choi, sqrtSigmaT, dimIn, dimOut))
    bound = np.sqrt(1.0 - epsilon**2)

    problem = SdpProblem("coherent-relative-entropy")
    J = problem.addBlock("J", D, 'psd')
    problem.addPsdConstraint(np.eye(dimIn) - cp.partial_trace(J, [dimOut, dimIn], 0), dimIn, "tni")
    alpha, scale, (W, K) = _addGammaDomination(problem, J, gIn, gOut, E.choi, dimIn, dimOut)
    if epsilon == 0.0:
        problem.addConstraint(N @ J @ N == target, "output")
    else:
        problem.addFidelityLowerBound(N @ J @ N, target, D, bound)
    problem.minimize(alpha)
    solution = solveSdp(problem, theSolver=theSolver).requireOptimal("Coherent relative entropy SDP")

    Jopt, cpResidual, tniResidual = _trimToTni(hermitize(solution.primal["J"]), dimIn, dimOut)
    alphaValue, leak = _gammaMargin(Jopt, gIn, W, K, dimIn, dimOut)
    output = hermitize(_purifiedOutput(Jopt, sqrtSigmaT, dimIn, dimOut))
    fid = fidelity(output/max(1.0, np.real(np.trace(output))), target)
    if epsilon == 0.0:
        distanceResidual = operatorNorm(output - target)
    else:
        distanceResidual = max(0.0, bound - fid)
    residuals = {"cp": cpResidual,
                 "tni": tniResidual,
                 "gamma": max(0.0, alphaValue/scale - float(np.real(solution.primal["alpha"]))) + leak,
                 "distance": distanceResidual}
    _requireResiduals(residuals, solution, "Coherent relative entropy SDP")

    if epsilon > 0.0 and fid < bound:
        t = (bound - fid)/(1.0 - fid)
        Jopt = (1.0 - t)*Jopt + t*E.choi
        alphaValue, _ = _gammaMargin(Jopt, gIn, W, K, dimIn, dimOut)
        fid = fidelity(hermitize(_purifiedOutput(Jopt, sqrtSigmaT, dimIn, dimOut)), target)
    if alphaValue <= 0.0:
        return CohRelResult(np.inf, alphaValue, Jopt, epsilon, fid, residuals)
    return CohRelResult(-np.log(alphaValue), alphaValue, Jopt, epsilon, fid, residuals)


def universalWorkCost ( E, gammaIn=None, gammaOut=None, epsilon=0.0, theCopies=1, theSolver=None ):
    """
    One-shot universal work cost
    :math:`\\min w` subject to :math:`\\mathcal{T}(\\Gamma_{in})\\preceq e^w\\Gamma_{out}`
    and :math:`\\frac12\\|\\mathcal{T}-\\mathcal{E}\\|_\\diamond\\leq\\epsilon`
    over trace non-increasing maps, solved as a single SDP on the Choi
    matrix of :math:`\\mathcal{T}`.

    The returned map is checked the same way as in
    :func:`coherentRelativeEntropy`; its diamond distance to
    :math:`\\mathcal{E}` is recomputed with :func:`.diamondNormOfChoi`.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
    gammaIn, gammaOut : :class:`.GammaSpec` or array_like or None
        Single-copy operators.
    epsilon : float
    theCopies : int
        Number of copies ``n``; the program is solved for
        :math:`\\mathcal{E}^{\\otimes n}` with tensor-power :math:`\\Gamma`.

    Returns
    -------
    float
        ``w`` for all ``n`` copies (divide by ``n`` for the rate).
        :math:`\\epsilon\\geq 1` makes the zero map admissible and returns
        :math:`-\\infty` with a warning; :math:`\\epsilon=0` returns the
        Gibbs-sub-preservation margin of the process itself.

    Raises
    ------
    SolverError
        If the SDP does not reach an accurate optimum, or if the returned
        map violates a constraint by more than ``tolerances.residualTol``.
    """
    if epsilon < 0.0:
        raise ValueError("The tolerance epsilon={} must be non-negative.".format(epsilon))
    if epsilon >= 1.0:
        warnings.warn("Diamond tolerance {} admits the zero map; the work cost is -inf.".format(epsilon))
        return -np.inf
    C = E if theCopies == 1 else E.power(theCopies)
    gIn = kronPower(gammaMatrix(gammaIn, E.dimIn), theCopies)
    gOut = kronPower(gammaMatrix(gammaOut, E.dimOut), theCopies)
    if epsilon == 0.0:
        return gibbsSubPreservationMargin(C, gIn, gOut)

    dimIn, dimOut = C.dimIn, C.dimOut
    D = dimIn*dimOut
    if D > maxChoiDimension:
        raise SizeGuardError("Universal work cost SDP accepts Choi dimension up to {}, got {}.".format(maxChoiDimension, D))

    problem = SdpProblem("universal-work-cost")
    J = problem.addBlock("J", D, 'psd')
    problem.addPsdConstraint(np.eye(dimIn) - cp.partial_trace(J, [dimOut, dimIn], 0), dimIn, "tni")
    alpha, scale, (W, K) = _addGammaDomination(problem, J, gIn, gOut, C.choi, dimIn, dimOut)
    addDiamondConstraint(problem, J - C.choi, dimIn, dimOut, epsilon)
    problem.minimize(alpha)
    solution = solveSdp(problem, theSolver=theSolver).requireOptimal("Universal work cost SDP")

    Jopt, cpResidual, tniResidual = _trimToTni(hermitize(solution.primal["J"]), dimIn, dimOut)
    alphaValue, leak = _gammaMargin(Jopt, gIn, W, K, dimIn, dimOut)
    distance = 0.5*diamondNormOfChoi(Jopt - C.choi, dimIn, dimOut, theSolver)
    residuals = {"cp": cpResidual,
                 "tni": tniResidual,
                 "gamma": max(0.0, alphaValue/scale - float(np.real(solution.primal["alpha"]))) + leak,
                 "diamond": max(0.0, distance - epsilon)}
    _requireResiduals(residuals, solution, "Universal work cost SDP")

    if distance > epsilon:
        # The diamond distance is homogeneous along the segment towards E
        Jopt = (epsilon/distance)*Jopt + (1.0 - epsilon/distance)*C.choi
        alphaValue, _ = _gammaMargin(Jopt, gIn, W, K, dimIn, dimOut)
    if alphaValue <= 0.0:
        return -np.inf
    return float(np.log(alphaValue))


def aepLimit ( E, sigma, gammaIn=None, gammaOut=None ):
    """
    Asymptotic rate :math:`D(\\sigma\\|\\Gamma_{in}) - D(\\mathcal{E}(\\sigma)\\|\\Gamma_{out})`.
    """
    gIn = gammaMatrix(gammaIn, E.dimIn)
    gOut = gammaMatrix(gammaOut, E.dimOut)
    return float(relativeEntropy(sigma, gIn) - relativeEntropy(E.apply(sigma), gOut))


def _scanPoint ( E, sigma, gIn, gOut, epsilon, theRoute, delta, theSolver, n ):
    from ..typicality.constructions import aepProtocolMap

    if theRoute == 'sdp':
        result = coherentRelativeEntropy(E.power(n) if n > 1 else E, kronPower(sigma, n), kronPower(gIn, n), kronPower(gOut, n), epsilon, theSolver)
        return {"n": n, "value": result.value/n, "distance": float(np.sqrt(max(0.0, 1.0 - result.fidelityAchieved**2)))}
    T, certificates = aepProtocolMap(E, sigma, gIn, gOut, n, delta)
    margin = gibbsSubPreservationMargin(T, kronPower(gIn, n), kronPower(gOut, n))
    closeness = [c for c in certificates if c.property == 'closeness'][0]
    return {"n": n, "value": -margin/n, "distance": closeness.measured}


def aepScan ( E, sigma, gammaIn=None, gammaOut=None, epsilon=0.05, nMax=2, theRoute='sdp', delta=0.2, theSolver=None, theMap=map ):
    """
    Per-copy coherent relative entropy for ``n = 1..nMax`` copies next to
    its asymptotic limit.

    Parameters
    ----------
    theRoute : str
        ``'sdp'`` solves :func:`coherentRelativeEntropy` on
        :math:`\\mathcal{E}^{\\otimes n}` (``nMax <= 2`` for qubits);
        ``'constructive'`` evaluates the typical-projector map of
        :func:`.aepProtocolMap` (``nMax <= 4``) and reports the lower bound
        it certifies.
    delta : float
        Typicality width for the constructive route.
    theMap : callable
        ``map``-like function evaluating the scan points, e.g. the ``map``
        of a ``concurrent.futures`` executor.

    Returns
    -------
    dict
        ``{"limit": float, "rows": [{"n", "value", "distance"}, ...]}``
        with ``value`` the per-copy quantity and ``distance`` the purified
        distance reached.
    """
    if theRoute not in ('sdp', 'constructive'):
        raise ValueError("Unknown AEP route '{}'; use 'sdp' or 'constructive'.".format(theRoute))
    maxCopies = 2 if theRoute == 'sdp' else 4
    if nMax > maxCopies:
        raise SizeGuardError("The {} route supports at most {} copies, got {}.".format(theRoute, maxCopies, nMax))

    gIn = gammaMatrix(gammaIn, E.dimIn)
    gOut = gammaMatrix(gammaOut, E.dimOut)
    point = functools.partial(_scanPoint, E, sigma, gIn, gOut, epsilon, theRoute, delta, theSolver)
    rows = list(theMap(point, range(1, nMax + 1)))
    return {"limit": aepLimit(E, sigma, gIn, gOut), "rows": rows}


def counterexampleInstance ( beta, energy ):
    """
    Erasure of a qubit to :math:`|+\\rangle` with
    :math:`H = \\mathrm{diag}(0, E_1)` on input and output, together with the
    maximally mixed input.

    Returns
    -------
    tuple
        ``(channel, gamma, sigma)``.
    """
    gamma = GammaSpec.fromHamiltonian(np.diag([0.0, energy]), beta)
    return erasureToPlus(), gamma, np.eye(2, dtype=np.complex128)/2.0


def counterexampleClosedForm ( beta, energy ):
    """
    Exact coherent relative entropy of :func:`counterexampleInstance` at
    :math:`\\epsilon=0`, :math:`-\\ln[\\mathrm{tr}\\Gamma\\,(1+e^{\\beta E_1})/2]`.
    """
    Z = 1.0 + np.exp(-beta*energy)
    return float(-np.log(Z*(1.0 + np.exp(beta*energy))/2.0))


def counterexampleBound ( beta, energy, epsilon ):
    """
    Certified lower bound on the work :math:`\\ln\\alpha` needed by any
    :math:`\\epsilon`-approximation of the counterexample process.

    Uses :math:`\\ln\\alpha\\geq D_H^{\\eta}(|+\\rangle\\langle+|\\,\\|\\,\\Gamma)+\\ln(1-4\\epsilon/\\eta)`
    at :math:`\\eta=8\\epsilon`, where the test :math:`Q=2\\eta|1\\rangle\\langle 1|`
    gives :math:`D_H^\\eta\\geq\\beta E_1-\\ln 2`.

    Returns
    -------
    tuple of float
        ``(lower bound on ln alpha, D_H^{8 epsilon})``.
    """
    eta = 8.0*epsilon
    if not 0.0 < eta <= 1.0:
        raise ValueError("The counterexample bound needs 0 < epsilon <= 1/8, got {}.".format(epsilon))
    _, gamma, _ = counterexampleInstance(beta, energy)
    plus = np.full((2, 2), 0.5, dtype=np.complex128)
    dH = hypothesisTesting(plus, gamma.gamma, eta).dH
    return float(dH + np.log(1.0 - 4.0*epsilon/eta)), float(dH)
