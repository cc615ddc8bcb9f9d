import warnings
import numpy as np
from scipy.linalg import expm, orth

from .CapacityResult import CapacityResult
from ..numerics import tolerances
from ..numerics.HermitianOperator import hermitize, logSupport, matrixFunction
from ..numerics.randomInstances import defaultRng, randomState
from ..entropies.quantities import supportViolation, vonNeumann
from ..thermo.GammaSpec import gammaMatrix


# Armijo sufficient-increase constant and step bounds
armijoConstant = 1e-4
minStep = 1e-14
maxStep = 1e6


class _CapacityObjective:
    """
    :math:`f(\\sigma) = D(\\mathcal{E}(\\sigma)\\|\\Gamma_{out}) - D(\\sigma\\|\\Gamma_{in})`
    restricted to states on the support of :math:`\\Gamma_{in}`.

    States are handled in reduced coordinates :math:`s` with
    :math:`\\sigma = V s V^\\dagger`, ``V`` an orthonormal basis of the
    support.
    """

    def __init__ ( self, theChannel, gammaIn, gammaOut ):
        self.channel = theChannel
        gIn = gammaMatrix(gammaIn, theChannel.dimIn)
        gOut = gammaMatrix(gammaOut, theChannel.dimOut)
        self.basis = orth(gIn, rcond=tolerances.rankThreshold)
        self.rank = self.basis.shape[1]
        self.logGammaIn = self.basis.conj().T @ logSupport(gIn) @ self.basis
        self.logGammaOut = logSupport(gOut)
        self.gammaOut = gOut

    def lift ( self, s ):
        return self.basis @ s @ self.basis.conj().T

    def reduce ( self, sigma ):
        s = hermitize(self.basis.conj().T @ sigma @ self.basis)
        return s/np.real(np.trace(s))

    def outputLeaks ( self ):
        image = self.channel.apply(self.lift(np.eye(self.rank)/self.rank))
        return supportViolation(image, self.gammaOut) > tolerances.subnormalTol

    def value ( self, s ):
        out = hermitize(self.channel.apply(self.lift(s)))
        relOut = -vonNeumann(out) - np.real(np.trace(out @ self.logGammaOut))
        relIn = -vonNeumann(s) - np.real(np.trace(s @ self.logGammaIn))
        return float(relOut - relIn)

    def gradient ( self, s ):
        out = hermitize(self.channel.apply(self.lift(s)))
        back = self.channel.applyAdjoint(logSupport(out) - self.logGammaOut)
        return hermitize(self.basis.conj().T @ back @ self.basis - matrixFunction(s, np.log) + self.logGammaIn)


def _residual ( s, g ):
    mean = np.real(np.trace(s @ g))
    second = np.real(np.trace(s @ g @ g))
    return float(np.sqrt(max(0.0, second - mean**2)))


def _mirrorStep ( s, g, t, tau ):
    logS = matrixFunction(s, np.log)
    step = hermitize(logS + t*g)
    step = step - np.max(np.linalg.eigvalsh(step))*np.eye(len(s))
    new = hermitize(expm(step))
    new = new/np.real(np.trace(new))
    return (1.0 - tau)*new + tau*np.eye(len(s))/len(s)


def _ascend ( objective, s, theMethod, tol, maxIterations, tau ):
    fs = objective.value(s)
    t = 1.0
    for iteration in range(1, maxIterations + 1):
        g = objective.gradient(s)
        residual = _residual(s, g)
        if residual <= tol:
            return s, fs, residual, iteration, True

        accepted = False
        if theMethod == 'fixed_point':
            # Unit step is the Blahut-Arimoto update
            candidate = _mirrorStep(s, g, 1.0, tau)
            fc = objective.value(candidate)
            if fc >= fs:
                accepted = True

        if not accepted:
            while t >= minStep:
                candidate = _mirrorStep(s, g, t, tau)
                fc = objective.value(candidate)
                if fc >= fs + armijoConstant*np.real(np.trace(g @ (candidate - s))):
                    accepted = True
                    break
                t *= 0.5
        if not accepted:
            return s, fs, residual, iteration, False
        s, fs = candidate, fc
        t = min(2.0*t, maxStep)

    g = objective.gradient(s)
    residual = _residual(s, g)
    return s, fs, residual, maxIterations, residual <= tol


def capacityObjective ( E, sigma, gammaIn=None, gammaOut=None ):
    """
    :math:`f(\\sigma) = D(\\mathcal{E}(\\sigma)\\|\\Gamma_{out}) - D(\\sigma\\|\\Gamma_{in})`
    for a state supported on the support of :math:`\\Gamma_{in}`.
    """
    objective = _CapacityObjective(E, gammaIn, gammaOut)
    return objective.value(objective.reduce(hermitize(sigma)))


def capacityGradient ( E, sigma, gammaIn=None, gammaOut=None ):
    """
    Gradient :math:`\\mathcal{E}^\\dagger(\\ln\\mathcal{E}(\\sigma) - \\ln\\Gamma_{out}) - (\\ln\\sigma - \\ln\\Gamma_{in})`
    for a full-rank ``sigma`` and full-rank :math:`\\Gamma_{in}`.
    """
    objective = _CapacityObjective(E, gammaIn, gammaOut)
    assert(objective.rank == E.dimIn), 'The gradient is only defined for a full-rank Gamma'
    return objective.gradient(hermitize(sigma))


def thermodynamicCapacity ( E, gammaIn=None, gammaOut=None, theMethod='mirror', theRestarts=5, theSeed=0,
                            tol=tolerances.gradientTol, maxIterations=3000, theInitial=None, tau=tolerances.regularization ):
    """
    Thermodynamic capacity
    :math:`T(\\mathcal{E}) = \\max_\\sigma\\,[D(\\mathcal{E}(\\sigma)\\|\\Gamma_{out}) - D(\\sigma\\|\\Gamma_{in})]`.

    The concave objective is maximized by entropic mirror ascent,
    :math:`\\sigma \\leftarrow \\mathcal{N}[\\exp(\\ln\\sigma + t\\nabla f)]`,
    with Armijo backtracking on ``t`` and the mixing
    :math:`\\sigma\\leftarrow(1-\\tau)\\sigma+\\tau I/d` after every step.
    The search starts from the maximally mixed state, ``theInitial`` when
    given, and ``theRestarts`` random states; the best end point wins.

    Parameters
    ----------
    E : :class:`.QuantumChannel`
    gammaIn, gammaOut : :class:`.GammaSpec` or array_like or None
        :math:`\\Gamma` operators; ``None`` is the identity.
    theMethod : str
        ``'mirror'`` or ``'fixed_point'``.  The fixed-point variant first
        tries the unit step :math:`\\sigma\\propto\\exp(\\ln\\Gamma_{in}+\\mathcal{E}^\\dagger(\\ln\\mathcal{E}(\\sigma)-\\ln\\Gamma_{out}))`
        and falls back to a backtracked step when it does not increase the
        objective.
    theRestarts : int
    theSeed : int or numpy.random.Generator
    tol : float
        Stationarity tolerance.
    maxIterations : int
    theInitial : array_like or None
        Warm start.
    tau : float
        Regularization weight :math:`\\tau_r`.

    Returns
    -------
    :class:`.CapacityResult`
        ``value`` is the objective at the best iterate less the
        regularization bias :math:`\\tau_r(1+|\\ln\\tau_r|)\\,r`, with ``r`` the
        rank of :math:`\\Gamma_{in}`.  It is :math:`+\\infty` (with a
        warning) when the channel maps the support of :math:`\\Gamma_{in}`
        outside that of :math:`\\Gamma_{out}`.
    """
    if theMethod not in ('mirror', 'fixed_point'):
        raise ValueError("Unknown capacity method '{}'; use 'mirror' or 'fixed_point'.".format(theMethod))
    objective = _CapacityObjective(E, gammaIn, gammaOut)
    r = objective.rank
    biasBound = tau*(1.0 + abs(np.log(tau)))*r

    if objective.outputLeaks():
        warnings.warn("The channel maps the support of the input Gamma outside the output Gamma; the capacity is +inf.")
        return CapacityResult(np.inf, objective.lift(np.eye(r)/r), 0.0, 0, True, 0.0, theMethod)

    rng = defaultRng(theSeed)
    starts = [np.eye(r, dtype=np.complex128)/r]
    if theInitial is not None:
        s0 = objective.reduce(hermitize(theInitial))
        starts.insert(0, (1.0 - 1e-6)*s0 + 1e-6*np.eye(r)/r)
    starts += [randomState(r, rng) for _ in range(theRestarts)]

    best = None
    for s in starts:
        s = (1.0 - tau)*s + tau*np.eye(r)/r
        outcome = _ascend(objective, s, theMethod, tol, maxIterations, tau)
        if best is None or outcome[1] > best[1]:
            best = outcome

    s, rawValue, residual, iterations, converged = best
    if not converged:
        warnings.warn("Capacity ascent stopped with stationarity residual {:.3e} above {:.1e}; returning the best iterate.".format(residual, tol))
    return CapacityResult(rawValue, objective.lift(s), residual, iterations, converged, biasBound, theMethod)


def additivityCheck ( E, F, gammasE=(None, None), gammasF=(None, None), **kwargs ):
    """
    Compare :math:`T(\\mathcal{E}\\otimes\\mathcal{F})` with
    :math:`T(\\mathcal{E}) + T(\\mathcal{F})`.

    The joint solve is warm-started from :math:`\\sigma^*_E\\otimes\\sigma^*_F`.

    Parameters
    ----------
    E, F : :class:`.QuantumChannel`
    gammasE, gammasF : tuple
        ``(gammaIn, gammaOut)`` pairs; ``None`` entries are identities.
    kwargs
        Passed to :func:`thermodynamicCapacity`.

    Returns
    -------
    tuple of float
        ``(joint, sum, gap)``.
    """
    if E.dimIn*F.dimIn > 16 or E.dimOut*F.dimOut > 16:
        raise ValueError("Joint dimension {}x{} exceeds the additivity check limit of 16.".format(E.dimIn*F.dimIn, E.dimOut*F.dimOut))
    gE = [gammaMatrix(gammasE[0], E.dimIn), gammaMatrix(gammasE[1], E.dimOut)]
    gF = [gammaMatrix(gammasF[0], F.dimIn), gammaMatrix(gammasF[1], F.dimOut)]
    resultE = thermodynamicCapacity(E, gE[0], gE[1], **kwargs)
    resultF = thermodynamicCapacity(F, gF[0], gF[1], **kwargs)
    kwargs.pop('theInitial', None)
    joint = thermodynamicCapacity(E.tensor(F), np.kron(gE[0], gF[0]), np.kron(gE[1], gF[1]),
                                  theInitial=np.kron(resultE.maximizer, resultF.maximizer), **kwargs)
    total = resultE.value + resultF.value
    return joint.value, total, abs(joint.value - total)


def entropyGain ( E, **kwargs ):
    """
    Entropy gain :math:`\\min_\\sigma[H(\\mathcal{E}(\\sigma)) - H(\\sigma)]`,
    the negative capacity with trivial :math:`\\Gamma` operators.
    """
    return -thermodynamicCapacity(E, None, None, **kwargs).value
