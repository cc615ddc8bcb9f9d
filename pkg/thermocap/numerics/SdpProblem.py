import warnings
import numpy as np
import cvxpy as cp

from . import tolerances
from ..Errors import SolverError


# Solvers tried in order when none is requested explicitly
preferredSolvers = ('CLARABEL', 'SCS')


class SdpProblem:
    """
    A semidefinite program assembled block by block.

    Each block is a ``cvxpy`` variable registered under a name; constraints
    may carry a label so that their dual variables can be read back from
    the :class:`.SdpSolution`.

    Attributes
    ----------
    name : str
        Label used in diagnostics.
    blocks : dict
        Map from block name to ``cvxpy.Variable``.
    blockDims : dict
        Map from block name to the block dimension.
    constraints : list
        The ``cvxpy`` constraints in insertion order.
    labels : dict
        Map from constraint label to constraint.
    objective : cvxpy.Minimize or cvxpy.Maximize or None
        The objective, set through :meth:`minimize` or :meth:`maximize`.

    Example
    -------
    >>> p = SdpProblem("lp")
    >>> x = p.addBlock("x", 1, theKind='real')
    >>> p.addConstraint(x >= 2)
    >>> p.minimize(cp.sum(x))
    >>> solveSdp(p).primalValue
    2.0
    """

    def __init__ ( self, theName="sdp" ):
        self.name = theName
        self.blocks = {}
        self.blockDims = {}
        self.constraints = []
        self.labels = {}
        self.objective = None
        self.__dualObjective = None

    def addBlock ( self, theName, theDim, theKind='hermitian' ):
        """
        Register a new block variable.

        Parameters
        ----------
        theName : str
            Unique block name.
        theDim : int
            Block dimension.
        theKind : str
            ``'hermitian'`` (complex Hermitian matrix), ``'psd'`` (Hermitian
            with a positivity constraint), ``'real'`` (real vector of length
            ``theDim``) or ``'scalar'``.

        Returns
        -------
        cvxpy.Variable
        """
        assert(theName not in self.blocks), 'Block names must be unique'
        assert(theDim >= 1), 'Block dimension must be positive'
        if theKind in ('hermitian', 'psd'):
            var = cp.Variable((theDim, theDim), hermitian=True, name=theName)
            if theKind == 'psd':
                self.addConstraint(var >> 0, theName + ':psd')
        elif theKind == 'real':
            var = cp.Variable(theDim, name=theName)
        elif theKind == 'scalar':
            var = cp.Variable(name=theName)
        else:
            raise ValueError("Unknown block kind '{}'.".format(theKind))
        self.blocks[theName] = var
        self.blockDims[theName] = theDim
        return var

    def addConstraint ( self, theConstraint, theLabel=None ):
        """
        Append a constraint, optionally labelled for dual retrieval.
        """
        self.constraints.append(theConstraint)
        if theLabel is not None:
            assert(theLabel not in self.labels), 'Constraint labels must be unique'
            self.labels[theLabel] = theConstraint
        return theConstraint

    def addPsdConstraint ( self, theExpr, theDim, theLabel ):
        """
        Constrain an affine matrix expression to be positive semi-definite
        through a Hermitian slack block, ``slack == theExpr``, ``slack >> 0``.

        The expression need not be recognized as Hermitian by ``cvxpy``.
        """
        slack = self.addBlock(theLabel + ":slack", theDim, 'psd')
        self.addConstraint(slack == theExpr, theLabel)
        return slack

    def addFidelityLowerBound ( self, rhoExpr, sigmaExpr, theDim, theBound, theLabel="fidelity" ):
        """
        Constrain :math:`F(\\rho,\\sigma) \\geq` ``theBound`` through the
        standard block :math:`\\begin{pmatrix}\\rho & X\\\\ X^\\dagger & \\sigma\\end{pmatrix} \\succeq 0`,
        :math:`\\mathrm{Re}\\,\\mathrm{tr} X \\geq` ``theBound``.

        Returns
        -------
        cvxpy.Variable
            The ``2d x 2d`` Hermitian block.
        """
        Z = self.addBlock(theLabel + ":block", 2*theDim, 'psd')
        self.addConstraint(Z[:theDim, :theDim] == rhoExpr)
        self.addConstraint(Z[theDim:, theDim:] == sigmaExpr)
        self.addConstraint(cp.real(cp.trace(Z[:theDim, theDim:])) >= theBound, theLabel)
        return Z

    def minimize ( self, theExpr ):
        self.objective = cp.Minimize(theExpr)

    def maximize ( self, theExpr ):
        self.objective = cp.Maximize(theExpr)

    def setDualObjective ( self, theFunction ):
        """
        Register a callable computing the dual objective from the solved
        problem; it receives this :class:`.SdpProblem`.
        """
        self.__dualObjective = theFunction

    def dualObjective ( self ):
        return self.__dualObjective


class SdpSolution:
    """
    Outcome of :func:`solveSdp`.

    Attributes
    ----------
    status : str
        ``'optimal'``, ``'inaccurate'``, ``'infeasible'``, ``'unbounded'``,
        ``'max-iterations'`` or ``'error'``.
    primalValue : float
        Objective value (``nan`` unless optimal).
    dualValue : float
        Dual objective when the problem registered one, otherwise the
        Lagrangian at the returned primal-dual pair (see
        :func:`complementarity`).
    gap : float
        ``|primalValue - dualValue|``.
    primal : dict
        Block name to numpy array.
    dual : dict
        Constraint label to dual value.
    solver : str
        The solver that produced the result.
    """

    def __init__ ( self, theStatus, thePrimalValue, theDualValue, thePrimal, theDual, theSolver ):
        self.status = theStatus
        self.primalValue = thePrimalValue
        self.dualValue = theDualValue
        self.gap = abs(thePrimalValue - theDualValue) if np.isfinite(thePrimalValue) and np.isfinite(theDualValue) else np.inf
        self.primal = thePrimal
        self.dual = theDual
        self.solver = theSolver

    @property
    def isOptimal ( self ):
        return self.status == 'optimal'

    def requireOptimal ( self, theContext="SDP" ):
        """
        Raise :class:`.SolverError` unless the status is optimal.
        """
        if not self.isOptimal:
            raise SolverError("{} ended with status '{}' (solver {}).".format(theContext, self.status, self.solver), self)
        return self


def _statusOf ( theStatus ):
    if theStatus == cp.OPTIMAL:
        return 'optimal'
    if theStatus == cp.OPTIMAL_INACCURATE:
        return 'inaccurate'
    if theStatus in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return 'infeasible'
    if theStatus in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
        return 'unbounded'
    if theStatus == cp.USER_LIMIT:
        return 'max-iterations'
    return 'error'


def complementarity ( theProblem ):
    """
    Sum of :math:`|\\langle Y_i, S_i\\rangle|` over the inequality and
    semidefinite constraints, with :math:`S_i` the slack of constraint
    ``i`` at the primal point and :math:`Y_i` its dual.

    For a linear objective this is the difference between the primal value
    and the Lagrangian at the returned primal-dual pair, so the dual value
    is ``primal - complementarity`` for a minimization and
    ``primal + complementarity`` for a maximization.  Equality constraints
    contribute their residual only and are skipped.

    Returns
    -------
    float
        ``nan`` when a dual value is missing.
    """
    total = 0.0
    for con in theProblem.constraints:
        if isinstance(con, cp.constraints.PSD):
            slack = con.args[0].value
        elif isinstance(con, cp.constraints.Inequality):
            slack = np.asarray(con.args[1].value) - np.asarray(con.args[0].value)
        else:
            continue
        if con.dual_value is None or slack is None:
            return np.nan
        slack = np.broadcast_to(np.asarray(slack), np.shape(con.dual_value))
        total += abs(float(np.real(np.vdot(np.ravel(con.dual_value), np.ravel(slack)))))
    return total


def _solverOptions ( theSolver, tol, maxIterations ):
    if theSolver == 'CLARABEL':
        return {'tol_gap_abs': tol, 'tol_gap_rel': tol, 'tol_feas': tol, 'max_iter': maxIterations}
    if theSolver == 'SCS':
        return {'eps_abs': tol, 'eps_rel': tol, 'max_iters': 100*maxIterations}
    return {}


def solveSdp ( theProblem, tol=tolerances.sdpGapTol, theSolver=None, maxIterations=200 ):
    """
    Solve an :class:`.SdpProblem` with ``cvxpy``.

    The solvers in :data:`preferredSolvers` are tried in order (only the
    installed ones); a solver failure or an inaccurate optimum moves on to
    the next solver with a warning.  When no solver reaches an accurate
    optimum the status is reported as is, ``'inaccurate'`` included, and
    :meth:`SdpSolution.requireOptimal` refuses it.

    Parameters
    ----------
    theProblem : :class:`.SdpProblem`
    tol : float
        Requested gap and feasibility tolerance.
    theSolver : str or None
        Force a specific ``cvxpy`` solver.
    maxIterations : int
        Iteration cap handed to the interior-point solver.

    Returns
    -------
    :class:`.SdpSolution`
        The solution; callers use :meth:`SdpSolution.requireOptimal` to turn
        a non-optimal status into a :class:`.SolverError`.
    """
    assert(theProblem.objective is not None), 'The SDP has no objective'
    prob = cp.Problem(theProblem.objective, theProblem.constraints)

    installed = set(cp.installed_solvers())
    candidates = [theSolver] if theSolver is not None else [s for s in preferredSolvers if s in installed]
    if not candidates:
        candidates = [None]

    status = 'error'
    usedSolver = None
    for solver in candidates:
        try:
            if solver is None:
                prob.solve()
            else:
                prob.solve(solver=solver, **_solverOptions(solver, tol, maxIterations))
        except cp.error.SolverError as err:
            warnings.warn("Solver {} failed on problem '{}' ({}).  Trying the next solver.".format(solver, theProblem.name, err))
            continue
        status = _statusOf(prob.status)
        usedSolver = solver
        if status in ('optimal', 'infeasible', 'unbounded'):
            break
        warnings.warn("Solver {} ended with status '{}' on problem '{}'.".format(solver, prob.status, theProblem.name))

    if status != 'optimal':
        return SdpSolution(status, np.nan, np.nan, {}, {}, usedSolver)

    primalValue = float(prob.value)
    primal = {name: (np.array(var.value) if var.value is not None else None) for name, var in theProblem.blocks.items()}
    dual = {label: con.dual_value for label, con in theProblem.labels.items()}
    dualFunction = theProblem.dualObjective()
    if dualFunction is not None:
        dualValue = float(dualFunction(theProblem))
    elif isinstance(theProblem.objective, cp.Minimize):
        dualValue = primalValue - complementarity(theProblem)
    else:
        dualValue = primalValue + complementarity(theProblem)
    solution = SdpSolution(status, primalValue, dualValue, primal, dual, usedSolver)
    if solution.gap > 1e3*tol*(1.0 + abs(primalValue)):
        warnings.warn("Problem '{}' closed with duality gap {:.3e} (solver {}).".format(theProblem.name, solution.gap, usedSolver))
    return solution
