import numpy as np
import cvxpy as cp

from .QuantumChannel import QuantumChannel
from ..numerics.HermitianOperator import asMatrix, hermitize
from ..numerics.SdpProblem import SdpProblem, solveSdp
from ..numerics.randomInstances import randomPureVector


def _choiOf ( C ):
    if isinstance(C, QuantumChannel):
        return C.choi, C.dimIn, C.dimOut
    raise ValueError("Expected a QuantumChannel, got {}.".format(type(C)))


def addDiamondConstraint ( theProblem, theChoiDifference, dimIn, dimOut, theBound, theLabel="diamond" ):
    """
    Add :math:`\\frac12\\|\\Phi\\|_\\diamond \\leq` ``theBound`` for the
    Hermiticity-preserving map with Choi matrix ``theChoiDifference``
    (output :math:`\\otimes` reference ordering).

    Uses the dual of the Watrous program: there exist :math:`Y_0, Y_1`
    with :math:`\\begin{pmatrix}Y_0 & -J\\\\ -J & Y_1\\end{pmatrix}\\succeq 0`
    and :math:`\\mathrm{tr}_{out}Y_i \\preceq a_i I`, :math:`a_0 + a_1 \\leq 4\\,` ``theBound``.
    """
    D = dimIn*dimOut
    Y = theProblem.addBlock(theLabel + ":Y", 2*D, 'psd')
    a = theProblem.addBlock(theLabel + ":a", 2, 'real')
    theProblem.addConstraint(Y[:D, D:] == -theChoiDifference)
    for i, sl in enumerate((slice(0, D), slice(D, 2*D))):
        reduced = cp.partial_trace(Y[sl, sl], [dimOut, dimIn], 0)
        theProblem.addPsdConstraint(a[i]*np.eye(dimIn) - reduced, dimIn, "{}:reduced{}".format(theLabel, i))
    theProblem.addConstraint(a[0] + a[1] <= 4*theBound, theLabel)
    return Y


def diamondNormOfChoi ( J, dimIn, dimOut, theSolver=None ):
    """
    :math:`\\|\\Phi\\|_\\diamond` of a Hermiticity-preserving map from its
    Choi matrix, through the Watrous program
    :math:`\\max\\,\\mathrm{Re}\\,\\mathrm{tr}[J^\\dagger X]` subject to
    :math:`\\begin{pmatrix}I\\otimes\\rho_0 & X\\\\ X^\\dagger & I\\otimes\\rho_1\\end{pmatrix}\\succeq 0`.
    """
    J = hermitize(asMatrix(J))
    D = dimIn*dimOut
    problem = SdpProblem("diamond-norm")
    Z = problem.addBlock("Z", 2*D, 'psd')
    rho0 = problem.addBlock("rho0", dimIn, 'psd')
    rho1 = problem.addBlock("rho1", dimIn, 'psd')
    problem.addConstraint(cp.real(cp.trace(rho0)) == 1)
    problem.addConstraint(cp.real(cp.trace(rho1)) == 1)
    problem.addConstraint(Z[:D, :D] == cp.kron(np.eye(dimOut), rho0))
    problem.addConstraint(Z[D:, D:] == cp.kron(np.eye(dimOut), rho1))
    problem.maximize(cp.real(cp.trace(J.conj().T @ Z[:D, D:])))
    solution = solveSdp(problem, theSolver=theSolver).requireOptimal("Diamond norm")
    return max(0.0, solution.primalValue)


def diamondDistance ( C1, C2, theSolver=None ):
    """
    Diamond-norm distance :math:`\\frac12\\|\\mathcal{E}_1-\\mathcal{E}_2\\|_\\diamond`.

    Parameters
    ----------
    C1, C2 : :class:`.QuantumChannel`
        Completely positive (trace preserving or trace non-increasing) maps
        with matching dimensions.

    Returns
    -------
    float
        The distance; it lies in :math:`[0,1]` for trace-preserving pairs.

    Raises
    ------
    SolverError
        If the SDP does not reach an optimal status.
    """
    J1, dIn1, dOut1 = _choiOf(C1)
    J2, dIn2, dOut2 = _choiOf(C2)
    if (dIn1, dOut1) != (dIn2, dOut2):
        raise ValueError("Channel dimensions ({}, {}) and ({}, {}) differ.".format(dIn1, dOut1, dIn2, dOut2))
    return 0.5*diamondNormOfChoi(J1 - J2, dIn1, dOut1, theSolver)


def sampledDiamondLowerBound ( C1, C2, rng, theSamples=200 ):
    """
    Lower bound on the diamond distance from random pure inputs on
    system plus a reference copy, together with the maximally entangled
    input.
    """
    d = C1.dimIn
    best = 0.0
    inputs = [np.eye(d).reshape(-1)/np.sqrt(d)]
    inputs += [randomPureVector(d*d, rng) for _ in range(theSamples)]
    for psi in inputs:
        rho = np.outer(psi, psi.conj())
        diff = C1.apply(rho, 0, [d, d]) - C2.apply(rho, 0, [d, d])
        best = max(best, 0.5*np.sum(np.abs(np.linalg.eigvalsh(hermitize(diff)))))
    return float(best)
