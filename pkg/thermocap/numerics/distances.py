import numpy as np

from . import tolerances
from .HermitianOperator import asMatrix, hermitize, sqrtPsd


def checkState ( rho, theLabel="state" ):
    """
    Validate a sub-normalized state and return it as a Hermitian array.

    Raises
    ------
    ValueError
        If ``rho`` has an eigenvalue below ``-1e-10*max(1,||rho||)`` or a
        trace above ``1 + 1e-10``.
    """
    rho = hermitize(asMatrix(rho))
    vals = np.linalg.eigvalsh(rho)
    scale = max(1.0, np.max(np.abs(vals)))
    if vals[0] < -tolerances.subnormalTol*scale:
        raise ValueError("The {} has a negative eigenvalue {:.3e}.".format(theLabel, vals[0]))
    if np.real(np.trace(rho)) > 1.0 + tolerances.subnormalTol:
        raise ValueError("The {} has trace {:.12f} which exceeds 1.".format(theLabel, np.real(np.trace(rho))))
    return rho


def fidelity ( rho, sigma ):
    """
    Root fidelity :math:`F(\\rho,\\sigma) = \\|\\sqrt\\rho\\sqrt\\sigma\\|_1`.
    """
    rho = checkState(rho)
    sigma = checkState(sigma)
    singular = np.linalg.svd(sqrtPsd(rho) @ sqrtPsd(sigma), compute_uv=False)
    return float(np.clip(np.sum(singular), 0.0, 1.0))


def generalizedFidelity ( rho, sigma ):
    """
    Generalized fidelity for sub-normalized states,
    :math:`\\bar F = F + \\sqrt{(1-\\mathrm{tr}\\rho)(1-\\mathrm{tr}\\sigma)}`.
    """
    rho = checkState(rho)
    sigma = checkState(sigma)
    deficit = max(0.0, 1.0 - np.real(np.trace(rho)))*max(0.0, 1.0 - np.real(np.trace(sigma)))
    return float(np.clip(fidelity(rho, sigma) + np.sqrt(deficit), 0.0, 1.0))


def purifiedDistance ( rho, sigma ):
    """
    Purified distance :math:`P = \\sqrt{1 - \\bar F^2}`.
    """
    return float(np.sqrt(max(0.0, 1.0 - generalizedFidelity(rho, sigma)**2)))


def traceDistance ( rho, sigma ):
    """
    Trace distance :math:`\\frac12\\|\\rho - \\sigma\\|_1`.
    """
    rho = checkState(rho)
    sigma = checkState(sigma)
    vals = np.linalg.eigvalsh(rho - sigma)
    return float(np.clip(0.5*np.sum(np.abs(vals)), 0.0, 1.0))


def stateDistance ( kind, rho, sigma ):
    """
    Dispatch to one of the distance measures.

    Parameters
    ----------
    kind : str
        One of ``'fidelity'``, ``'generalized_fidelity'``, ``'purified'`` or
        ``'trace'``.
    rho, sigma : array_like
        Sub-normalized states.

    Returns
    -------
    float
        Value in :math:`[0, 1]`.
    """
    measures = {'fidelity': fidelity,
                'generalized_fidelity': generalizedFidelity,
                'purified': purifiedDistance,
                'trace': traceDistance}
    if kind not in measures:
        raise ValueError("Unknown distance kind '{}'; expected one of {}.".format(kind, sorted(measures)))
    return measures[kind](rho, sigma)
