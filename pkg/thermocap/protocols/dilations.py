import numpy as np

from ..numerics import tolerances
from ..numerics.HermitianOperator import eigHermitian, hermitize, sqrtPsd
from ..numerics.linearAlgebra import commutatorNorm, completeIsometry, energyClusters, energyMatchedUnitary, \
    isUnitary, maxEigenvalue, operatorNorm
from ..numerics.randomInstances import defaultRng, ginibre


modes = ('plain', 'energy_preserving', 'energy_preserving_noflag')


def _flaggedIsometry ( W ):
    """
    :math:`V = W\\otimes|0\\rangle_Q + \\sqrt{I-W^\\dagger W}\\otimes|1\\rangle_Q`,
    flag qubit last.
    """
    d = W.shape[0]
    rest = sqrtPsd(np.eye(d) - W.conj().T @ W)
    return np.stack([W, rest], axis=1).reshape(2*d, d)


def postSelectedBlock ( U ):
    """
    :math:`\\langle0|_QU|0\\rangle_Q` for a unitary on :math:`X\\otimes Q`.
    """
    d = U.shape[0]//2
    return U.reshape(d, 2, d, 2)[:, 0, :, 0]


def noflagBound ( epsilon ):
    """
    :math:`1 - 6\\epsilon^{1/4}`.
    """
    return 1.0 - 6.0*epsilon**0.25


def _noflagUnitary ( W, H, epsilon ):
    nu = 2.0*np.sqrt(epsilon)
    F = hermitize(W.conj().T @ W)
    hVals, hVecs = eigHermitian(H)
    domain = []
    for _, idx in energyClusters(hVals):
        Q = hVecs[:, idx]
        fVals, fVecs = np.linalg.eigh(hermitize(Q.conj().T @ F @ Q))
        for f, v in zip(fVals, fVecs.T):
            if f >= nu:
                domain.append((Q @ v, f))
    if not domain:
        return np.eye(W.shape[0], dtype=np.complex128), nu
    D = np.stack([v for v, _ in domain], axis=1)
    image = np.stack([W @ v/np.sqrt(f) for v, f in domain], axis=1)
    return energyMatchedUnitary(D, image, H), nu


def completeToUnitary ( W, theMode='plain', H=None, epsilon=None ):
    """
    Dilate a contraction to a unitary.

    ``'plain'`` and ``'energy_preserving'`` act on :math:`X\\otimes Q` with a
    flag qubit :math:`Q` (last factor, :math:`H_Q=0`) and recover
    :math:`W = \\langle0|_QU|0\\rangle_Q`.  ``'energy_preserving_noflag'``
    returns a unitary on :math:`X` alone, built from the partial isometry
    :math:`WF^{-1/2}P` with :math:`F=W^\\dagger W` and :math:`P` the
    projector onto :math:`F\\succeq2\\sqrt\\epsilon`; whenever
    :math:`\\mathrm{Re}\\langle\\psi'|W|\\psi\\rangle\\geq1-\\epsilon` it gives
    :math:`\\mathrm{Re}\\langle\\psi'|U|\\psi\\rangle\\geq1-6\\epsilon^{1/4}`.

    Parameters
    ----------
    W : array_like
        Square operator with :math:`W^\\dagger W\\preceq I`.
    theMode : str
        One of ``'plain'``, ``'energy_preserving'``,
        ``'energy_preserving_noflag'``.
    H : array_like or None
        Hamiltonian of :math:`X`; required by the energy modes.
    epsilon : float or None
        Overlap deficit of the noflag mode.

    Returns
    -------
    U : numpy.ndarray
    report : dict
        ``unitarity`` residual, ``blockResidual`` (flagged modes),
        ``energyResidual`` (energy modes) and for the noflag mode the
        eigenvalue threshold ``nu`` and the overlap ``bound``.

    Raises
    ------
    ValueError
        If ``W`` is not a contraction, if an energy mode lacks ``H`` (or the
        noflag mode lacks ``epsilon``), or if :math:`[W, H]\\neq0`.
    """
    if theMode not in modes:
        raise ValueError("Unknown dilation mode '{}'; expected one of {}.".format(theMode, modes))
    W = np.asarray(W, dtype=np.complex128)
    d = W.shape[0]
    assert(W.shape == (d, d)), 'Only square operators can be dilated'
    if maxEigenvalue(W.conj().T @ W) > 1.0 + tolerances.operatorTol:
        raise ValueError("Operator norm {:.6f} exceeds one; no unitary dilation exists.".format(operatorNorm(W)))

    report = {"mode": theMode}
    if theMode == 'plain':
        U = completeIsometry(_flaggedIsometry(W))
        # columns of the completion are indexed by the flag-first basis
        U = U.reshape(2*d, 2, d).transpose(0, 2, 1).reshape(2*d, 2*d)
    else:
        if H is None:
            raise ValueError("Mode '{}' requires the Hamiltonian of the system.".format(theMode))
        H = hermitize(H)
        scale = max(1.0, operatorNorm(H))
        if commutatorNorm(W, H) > tolerances.operatorTol*scale:
            raise ValueError("Operator does not commute with the Hamiltonian ([W, H] norm {:.3e}).".format(commutatorNorm(W, H)))
        if theMode == 'energy_preserving':
            hTotal = np.kron(H, np.eye(2))
            _, hVecs = eigHermitian(H)
            domain = np.kron(hVecs, np.array([[1.0], [0.0]]))
            image = _flaggedIsometry(W) @ hVecs
            U = energyMatchedUnitary(domain, image, hTotal)
            report["energyResidual"] = commutatorNorm(U, hTotal)
        else:
            if epsilon is None or not 0.0 < epsilon < 1.0:
                raise ValueError("The noflag mode needs an overlap deficit 0 < epsilon < 1, got {}.".format(epsilon))
            U, nu = _noflagUnitary(W, H, epsilon)
            report["energyResidual"] = commutatorNorm(U, H)
            report["nu"] = nu
            report["bound"] = noflagBound(epsilon)

    report["unitarity"] = operatorNorm(U.conj().T @ U - np.eye(U.shape[0]))
    if theMode != 'energy_preserving_noflag':
        report["blockResidual"] = operatorNorm(postSelectedBlock(U) - W)
    assert(isUnitary(U)), 'Dilation is not unitary'
    return U, report


def noflagBoundCheck ( W, H, epsilon, rng=None, theSamples=100 ):
    """
    Sample pairs :math:`(\\psi, \\psi')` with
    :math:`\\mathrm{Re}\\langle\\psi'|W|\\psi\\rangle\\geq1-\\epsilon` and
    measure the overlap of the noflag unitary.

    Inputs are drawn from the span of the eigenvectors of
    :math:`W^\\dagger W` with eigenvalue at least :math:`(1-\\epsilon)^2`,
    outputs are :math:`W\\psi` normalized plus a small random tilt; pairs
    that miss the overlap condition are discarded.

    Returns
    -------
    dict
        ``accepted`` sample count, ``worstOverlap`` and ``bound``
        :math:`1-6\\epsilon^{1/4}`, ``pass``.
    """
    rng = defaultRng(rng)
    W = np.asarray(W, dtype=np.complex128)
    U, report = completeToUnitary(W, 'energy_preserving_noflag', H, epsilon)
    fVals, fVecs = np.linalg.eigh(hermitize(W.conj().T @ W))
    good = fVecs[:, fVals >= (1.0 - epsilon)**2]
    worst = np.inf
    accepted = 0
    if good.shape[1] > 0:
        for _ in range(theSamples):
            psi = good @ ginibre(good.shape[1], 1, rng)[:, 0]
            psi /= np.linalg.norm(psi)
            target = W @ psi
            target /= np.linalg.norm(target)
            tilt = ginibre(W.shape[0], 1, rng)[:, 0]
            psiPrime = target + rng.uniform(0.0, np.sqrt(epsilon))*tilt/np.linalg.norm(tilt)
            psiPrime /= np.linalg.norm(psiPrime)
            if np.real(np.vdot(psiPrime, W @ psi)) < 1.0 - epsilon:
                continue
            accepted += 1
            worst = min(worst, float(np.real(np.vdot(psiPrime, U @ psi))))
    return {"accepted": accepted,
            "worstOverlap": worst,
            "bound": report["bound"],
            "pass": bool(accepted == 0 or worst >= report["bound"] - 1e-9)}
