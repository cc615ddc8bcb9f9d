import functools
import numpy as np
import scipy.linalg

from . import tolerances
from .HermitianOperator import asMatrix, hermitize, eigHermitian, positivePart
from ..Errors import SizeGuardError


def checkDimension ( dim, theLabel="operator" ):
    """
    Raise :class:`.SizeGuardError` when ``dim`` exceeds the desk-scale guard.
    """
    if dim > tolerances.maxDimension:
        raise SizeGuardError("The {} would have dimension {} which exceeds the limit of {}.  Reduce n or the local dimensions.".format(theLabel, dim, tolerances.maxDimension))


def kronAll ( theOperators ):
    """
    Kronecker product of a sequence of arrays, left to right.
    """
    return functools.reduce(np.kron, [np.asarray(op) for op in theOperators])


def kronPower ( A, n ):
    """
    n-fold tensor power :math:`A^{\\otimes n}`.
    """
    A = np.asarray(A)
    assert(n >= 1), 'Tensor power requires n >= 1'
    checkDimension(A.shape[0]**n, "tensor power")
    return kronAll([A]*n)


def embedOperator ( A, position, dims ):
    """
    Embed ``A`` acting on factor ``position`` of a product space with local
    dimensions ``dims`` (identity on every other factor).
    """
    A = np.asarray(A)
    factors = [np.eye(d) for d in dims]
    factors[position] = A
    return kronAll(factors)


def partialTrace ( M, dims, keep ):
    """
    Partial trace over every tensor factor not listed in ``keep``.

    Parameters
    ----------
    M : array_like
        Operator on :math:`\\bigotimes_i \\mathbb{C}^{d_i}`.
    dims : list of int
        Local dimensions.
    keep : iterable of int
        Indices of the factors that remain.  The result keeps them in
        increasing order.

    Returns
    -------
    numpy.ndarray
        The reduced operator.
    """
    M = asMatrix(M)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != M.shape[0] or M.shape[0] != M.shape[1]:
        raise ValueError("Partial trace dimensions {} do not match an operator of shape {}.".format(dims, M.shape))
    keep = sorted(set(keep))
    numFactors = len(dims)
    if any(k < 0 or k >= numFactors for k in keep):
        raise ValueError("Kept subsystems {} are out of range for {} factors.".format(keep, numFactors))

    t = M.reshape(dims + dims)
    current = numFactors
    for ax in sorted(set(range(numFactors)) - set(keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + current)
        current -= 1
    keptDim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(keptDim, keptDim)


def permuteSystems ( M, dims, perm ):
    """
    Reorder the tensor factors of an operator.

    Factor ``perm[i]`` of the input becomes factor ``i`` of the output.
    """
    M = np.asarray(M)
    numFactors = len(dims)
    t = M.reshape(list(dims) + list(dims))
    t = t.transpose(list(perm) + [p + numFactors for p in perm])
    newDim = int(np.prod(dims))
    return t.reshape(newDim, newDim)


def permuteVector ( v, dims, perm ):
    """
    Reorder the tensor factors of a ket (see :func:`permuteSystems`).
    """
    v = np.asarray(v)
    return v.reshape(dims).transpose(perm).reshape(-1)


def operatorNorm ( A ):
    """
    Largest singular value.
    """
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def minEigenvalue ( A ):
    """
    Smallest eigenvalue of the Hermitian part of ``A``.
    """
    return float(np.linalg.eigvalsh(hermitize(A))[0])


def maxEigenvalue ( A ):
    """
    Largest eigenvalue of the Hermitian part of ``A``.
    """
    return float(np.linalg.eigvalsh(hermitize(A))[-1])


def isPsd ( A, tol=tolerances.operatorTol ):
    """
    Positive semi-definiteness up to ``tol*max(1,||A||)``.
    """
    A = hermitize(A)
    vals = np.linalg.eigvalsh(A)
    return bool(vals[0] >= -tol*max(1.0, np.max(np.abs(vals))))


def operatorLeq ( A, B, tol=tolerances.operatorTol ):
    """
    Check :math:`A \\preceq B` up to ``tol*max(1,||B-A||)``.
    """
    return isPsd(asMatrix(B) - asMatrix(A), tol)


def commutatorNorm ( A, B ):
    """
    Operator norm of :math:`[A, B]`.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    return operatorNorm(A @ B - B @ A)


def oneNormDualCheck ( A ):
    """
    Trace norm of a Hermitian operator through its three equivalent forms.

    Computes :math:`\\|A\\|_1` from the eigenvalues, the maximizer
    :math:`Z = \\mathrm{sign}(A)` of :math:`\\mathrm{tr}[ZA]` over
    :math:`\\|Z\\|_\\infty \\leq 1`, and the decomposition
    :math:`A = \\Delta_+ - \\Delta_-` into orthogonal positive parts.

    Parameters
    ----------
    A : array_like or :class:`.HermitianOperator`

    Returns
    -------
    norm : float
        The trace norm.
    Z : numpy.ndarray
        The dual maximizer (zero eigenvalues are given sign +1, so that
        ``Z = I`` for positive semi-definite input).
    decomposition : tuple of numpy.ndarray
        ``(deltaPlus, deltaMinus)``.

    Raises
    ------
    AssertionError
        If the three expressions disagree by more than ``1e-9*max(1,norm)``.
    """
    vals, vecs = eigHermitian(A)
    norm = float(np.sum(np.abs(vals)))
    signs = np.where(vals >= 0, 1.0, -1.0)
    Z = (vecs*signs) @ vecs.conj().T
    deltaPlus = (vecs*np.clip(vals, 0.0, None)) @ vecs.conj().T
    deltaMinus = (vecs*np.clip(-vals, 0.0, None)) @ vecs.conj().T

    A = hermitize(A)
    viaZ = float(np.real(np.trace(Z @ A)))
    viaDelta = float(np.real(np.trace(deltaPlus) + np.trace(deltaMinus)))
    scale = max(1.0, norm)
    assert(abs(viaZ - norm) <= 1e-9*scale and abs(viaDelta - norm) <= 1e-9*scale), 'One-norm expressions disagree'
    return norm, Z, (deltaPlus, deltaMinus)


def completeIsometry ( V ):
    """
    Complete the orthonormal columns of ``V`` to a unitary.  The new columns
    span the orthogonal complement and come from ``scipy.linalg.null_space``.
    """
    V = np.asarray(V, dtype=np.complex128)
    if V.shape[1] == 0:
        return np.eye(V.shape[0], dtype=np.complex128)
    complement = scipy.linalg.null_space(V.conj().T)
    return np.concatenate([V, complement], axis=1)


def energyClusters ( energies, tol=tolerances.operatorTol ):
    """
    Group sorted energies into degenerate clusters.

    Returns
    -------
    list of (float, numpy.ndarray)
        ``(representative energy, indices)`` in increasing energy order.
    """
    energies = np.asarray(energies, dtype=np.float64)
    order = np.argsort(energies, kind='stable')
    scale = max(1.0, np.max(np.abs(energies))) if len(energies) else 1.0
    clusters = []
    for idx in order:
        if clusters and abs(energies[idx] - clusters[-1][0]) <= tol*scale:
            clusters[-1][1].append(idx)
        else:
            clusters.append([energies[idx], [idx]])
    return [(e, np.array(ix, dtype=int)) for e, ix in clusters]


def energyMatchedUnitary ( domainVecs, imageVecs, hTotal, tol=tolerances.operatorTol ):
    """
    Unitary that maps each domain vector to the matching image vector and
    commutes with ``hTotal``.

    Every column of ``domainVecs`` and ``imageVecs`` must be an eigenvector
    of ``hTotal`` and corresponding columns must carry the same energy.
    Inside each energy eigenspace the two partial orthonormal sets are
    completed with their orthogonal complements, and the completions are
    paired in the order returned by ``scipy.linalg.null_space``.  Eigenspaces
    are visited in increasing energy and columns in construction order.

    Parameters
    ----------
    domainVecs, imageVecs : numpy.ndarray
        ``N x k`` arrays with orthonormal columns.
    hTotal : array_like
        Hermitian ``N x N`` Hamiltonian.
    tol : float
        Tolerance for degeneracy and for the eigenvector checks.

    Returns
    -------
    numpy.ndarray
        ``N x N`` unitary.

    Raises
    ------
    ValueError
        If a vector is not an energy eigenvector or the energies of a
        domain/image pair differ.
    """
    domainVecs = np.asarray(domainVecs, dtype=np.complex128)
    imageVecs = np.asarray(imageVecs, dtype=np.complex128)
    hTotal = hermitize(hTotal)
    N = hTotal.shape[0]
    vals, vecs = np.linalg.eigh(hTotal)
    scale = max(1.0, np.max(np.abs(vals)))

    def energyOf ( v ):
        e = float(np.real(np.vdot(v, hTotal @ v)))
        if np.linalg.norm(hTotal @ v - e*v) > 1e3*tol*scale:
            raise ValueError("Vector is not an eigenvector of the total Hamiltonian.")
        return e

    domainEnergies = np.array([energyOf(domainVecs[:, j]) for j in range(domainVecs.shape[1])])
    imageEnergies = np.array([energyOf(imageVecs[:, j]) for j in range(imageVecs.shape[1])])
    if np.any(np.abs(domainEnergies - imageEnergies) > 1e3*tol*scale):
        raise ValueError("Domain and image vectors carry different energies.")

    U = np.zeros((N, N), dtype=np.complex128)
    for energy, idx in energyClusters(vals, tol):
        Q = vecs[:, idx]
        sel = np.where(np.abs(domainEnergies - energy) <= 1e3*tol*scale)[0]
        Dc = Q.conj().T @ domainVecs[:, sel]
        Ic = Q.conj().T @ imageVecs[:, sel]
        completedD = completeIsometry(Dc)
        completedI = completeIsometry(Ic)
        U += Q @ completedI @ completedD.conj().T @ Q.conj().T
    return U


def isUnitary ( U, tol=tolerances.reconstructionTol ):
    """
    ``True`` when :math:`U^\\dagger U = I` within ``tol``.
    """
    U = np.asarray(U)
    return operatorNorm(U.conj().T @ U - np.eye(U.shape[1])) <= tol


def contractionCheck ( W, tol=tolerances.operatorTol ):
    """
    ``True`` when :math:`W^\\dagger W \\preceq I` within ``tol``.
    """
    W = np.asarray(W)
    return maxEigenvalue(W.conj().T @ W) <= 1.0 + tol


def positivePartTrace ( A ):
    """
    :math:`\\mathrm{tr}\\{A\\}_+`.
    """
    return float(np.real(np.trace(positivePart(A))))
