import numpy as np


class CapacityResult:
    """
    Outcome of :func:`thermodynamicCapacity`.

    Attributes
    ----------
    value : float
        :math:`T(\\mathcal{E})` in nats, the objective at the maximizer less
        ``biasBound``.
    rawValue : float
        Objective at the maximizer before the bias is removed.
    maximizer : numpy.ndarray
        The state :math:`\\sigma^*` attaining ``rawValue``.
    residual : float
        Stationarity residual at :math:`\\sigma^*`, the standard deviation
        of the gradient under :math:`\\sigma^*`; zero exactly when the
        gradient is constant on the support of :math:`\\sigma^*`.
    iterations : int
        Iterations used by the best start.
    converged : bool
    biasBound : float
        Bound on the shift of ``value`` caused by the regularization
        :math:`\\tau_r`.
    method : str
        ``'mirror'`` or ``'fixed_point'``.
    """

    def __init__ ( self, theRawValue, theMaximizer, theResidual, theIterations, isConverged, theBiasBound, theMethod ):
        self.rawValue = float(theRawValue)
        self.value = self.rawValue - float(theBiasBound)
        self.maximizer = theMaximizer
        self.residual = float(theResidual)
        self.iterations = int(theIterations)
        self.converged = bool(isConverged)
        self.biasBound = float(theBiasBound)
        self.method = theMethod

    def toDict ( self ):
        return {"capacity_nats": self.value,
                "raw_capacity_nats": self.rawValue,
                "bias_bound_nats": self.biasBound,
                "residual": self.residual,
                "iterations": self.iterations,
                "converged": self.converged,
                "method": self.method,
                "maximizer_diag": [float(x) for x in np.real(np.diag(self.maximizer))]}


class CohRelResult:
    """
    Outcome of :func:`coherentRelativeEntropy`.

    Attributes
    ----------
    value : float
        :math:`-\\ln\\alpha`; the work cost of the process on the given input
        is ``-value``.
    alpha : float
    choi : numpy.ndarray
        Choi matrix of the optimal trace non-increasing map.
    epsilon : float
    fidelityAchieved : float
        Fidelity between :math:`\\mathcal{T}(\\sigma_{XR})` and
        :math:`\\mathcal{E}(\\sigma_{XR})` recomputed outside the solver.
    residuals : dict
        Constraint violations of the returned map recomputed with dense
        linear algebra: ``cp``, ``tni``, ``gamma`` and ``distance``.
    """

    def __init__ ( self, theValue, theAlpha, theChoi, theEpsilon, theFidelity, theResiduals ):
        self.value = float(theValue)
        self.alpha = float(theAlpha)
        self.choi = theChoi
        self.epsilon = float(theEpsilon)
        self.fidelityAchieved = float(theFidelity)
        self.residuals = dict(theResiduals)

    @property
    def workCost ( self ):
        return -self.value

    def maxResidual ( self ):
        return max(self.residuals.values()) if self.residuals else 0.0

    def toDict ( self ):
        return {"value_nats": self.value,
                "work_nats": self.workCost,
                "epsilon": self.epsilon,
                "fidelity": self.fidelityAchieved,
                "residuals": {k: float(v) for k, v in self.residuals.items()}}
