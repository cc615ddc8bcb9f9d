import numpy as np

from . import tolerances


class HermitianOperator:
    """
    Dense double-precision complex Hermitian matrix.

    This is the carrier used at the public boundary of the library for
    states, Hamiltonians, :math:`\\Gamma` operators and projectors.  The
    matrix is symmetrized on ingest, :math:`A \\leftarrow (A+A^\\dagger)/2`,
    and is read-only afterwards.

    Attributes
    ----------
    dim : int
        The dimension of the underlying Hilbert space.
    matrix : numpy.ndarray
        Read-only ``dim x dim`` complex array.

    Note
    ----
    Inputs that are grossly non-Hermitian (relative deviation above
    ``theRejectTol``) are rejected instead of being silently symmetrized.

    Example
    -------
    >>> rho = HermitianOperator(np.diag([0.7, 0.3]))
    >>> rho.trace()
    1.0
    """

    def __init__ ( self, theMatrix, theRejectTol=None ):
        """
        Parameters
        ----------
        theMatrix : array_like or :class:`.HermitianOperator`
            Square matrix.
        theRejectTol : float or None
            Relative anti-Hermitian part above which the input is rejected;
            defaults to ``tolerances.hermitianRejectTol``.
        """
        if isinstance(theMatrix, HermitianOperator):
            theMatrix = theMatrix.matrix
        arr = np.array(theMatrix, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        assert(arr.ndim == 2 and arr.shape[0] == arr.shape[1]), 'HermitianOperator requires a square matrix'

        scale = max(1.0, np.max(np.abs(arr)))
        deviation = np.max(np.abs(arr - arr.conj().T))
        rejectTol = tolerances.hermitianRejectTol if theRejectTol is None else theRejectTol
        if deviation > rejectTol*scale:
            raise ValueError("Matrix is not Hermitian (deviation {:.3e}).".format(deviation))

        arr = 0.5*(arr + arr.conj().T)
        arr.setflags(write=False)
        self.__matrix = arr

    @property
    def matrix ( self ):
        return self.__matrix

    @property
    def dim ( self ):
        return self.__matrix.shape[0]

    def __array__ ( self, dtype=None, copy=None ):
        if dtype is None:
            return np.array(self.__matrix)
        return np.array(self.__matrix, dtype=dtype)

    def trace ( self ):
        """
        Real part of the trace.
        """
        return float(np.real(np.trace(self.__matrix)))

    def norm ( self ):
        """
        Operator norm :math:`\\|A\\|_\\infty`.
        """
        return float(np.max(np.abs(np.linalg.eigvalsh(self.__matrix)))) if self.dim > 0 else 0.0

    def eig ( self ):
        """
        Eigendecomposition with eigenvalues in descending order.

        Returns
        -------
        tuple of numpy.ndarray
            ``(eigenvalues, eigenvectors)``; see :func:`eigHermitian`.
        """
        return eigHermitian(self.__matrix)

    def apply ( self, f, supportOnly=False ):
        """
        Apply the scalar function ``f`` in the eigenbasis.

        Returns
        -------
        :class:`.HermitianOperator`
        """
        return HermitianOperator(matrixFunction(self.__matrix, f, supportOnly))

    def isPsd ( self, tol=tolerances.operatorTol ):
        """
        ``True`` when the smallest eigenvalue is above ``-tol*max(1,||A||)``.
        """
        vals = np.linalg.eigvalsh(self.__matrix)
        return bool(vals[0] >= -tol*max(1.0, np.max(np.abs(vals))))


def asMatrix ( A ):
    """
    Return ``A`` as a complex square numpy array, accepting a
    :class:`.HermitianOperator`, a nested list or an array.
    """
    if isinstance(A, HermitianOperator):
        return np.array(A.matrix)
    arr = np.asarray(A, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    return arr


def hermitize ( A ):
    """
    Hermitian part :math:`(A + A^\\dagger)/2` of a square array.
    """
    A = asMatrix(A)
    return 0.5*(A + A.conj().T)


def eigHermitian ( A ):
    """
    Eigendecomposition of a Hermitian operator.

    Parameters
    ----------
    A : array_like or :class:`.HermitianOperator`
        Hermitian matrix.

    Returns
    -------
    eigenvalues : numpy.ndarray
        Real eigenvalues in descending order.
    eigenvectors : numpy.ndarray
        Unitary matrix whose columns are the matching eigenvectors, such that
        ``A = U diag(eigenvalues) U^dagger``.
    """
    vals, vecs = np.linalg.eigh(hermitize(A))
    return vals[::-1], vecs[:, ::-1]


def supportThreshold ( vals ):
    """
    Absolute threshold below which eigenvalues are treated as zero.
    """
    if len(vals) == 0:
        return 0.0
    return tolerances.rankThreshold*np.max(np.abs(vals))


def matrixFunction ( A, f, supportOnly=False ):
    """
    Apply a scalar function to a Hermitian operator in its eigenbasis.

    Parameters
    ----------
    A : array_like or :class:`.HermitianOperator`
        Hermitian matrix.
    f : callable
        Vectorized scalar function (e.g. ``numpy.log``).
    supportOnly : bool
        If ``True``, ``f`` is only evaluated on eigenvalues above
        ``1e-12*||A||``; the remaining eigenvalues are mapped to 0.

    Returns
    -------
    numpy.ndarray
        The matrix :math:`f(A)`.

    Raises
    ------
    ValueError
        If ``f`` produces a non-finite value on the evaluated spectrum,
        e.g. the logarithm of a negative eigenvalue.
    """
    vals, vecs = np.linalg.eigh(hermitize(A))
    fvals = np.zeros(len(vals))
    if supportOnly:
        mask = vals > supportThreshold(vals)
    else:
        mask = np.ones(len(vals), dtype=bool)

    with np.errstate(all='ignore'):
        computed = np.asarray(f(vals[mask]), dtype=np.float64)
    if not np.all(np.isfinite(computed)):
        raise ValueError("Function evaluated outside of its domain on the spectrum {}.".format(vals[mask]))
    fvals[mask] = computed

    return (vecs*fvals) @ vecs.conj().T


def logSupport ( A ):
    """
    Natural logarithm restricted to the support of ``A`` (zero elsewhere).
    """
    return matrixFunction(A, np.log, supportOnly=True)


def sqrtPsd ( A ):
    """
    Square root of a positive semi-definite matrix; tiny negative
    eigenvalues from round-off are clipped to zero.
    """
    return matrixFunction(A, lambda x: np.sqrt(np.clip(x, 0.0, None)))


def invSqrtSupport ( A ):
    """
    Inverse square root on the support of ``A`` (zero elsewhere).
    """
    return matrixFunction(A, lambda x: 1.0/np.sqrt(x), supportOnly=True)


def supportProjector ( A ):
    """
    Orthogonal projector onto the support of ``A``.
    """
    return matrixFunction(A, lambda x: np.ones_like(x), supportOnly=True)


def positivePart ( A ):
    """
    Positive part :math:`\\{A\\}_+` of a Hermitian matrix.
    """
    return matrixFunction(A, lambda x: np.clip(x, 0.0, None))
