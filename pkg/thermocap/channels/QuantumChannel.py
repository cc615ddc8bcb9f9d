import json
import numpy as np

from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix, hermitize
from ..numerics.linearAlgebra import maxEigenvalue, operatorNorm


class QuantumChannel:
    """
    Completely positive map given by its Kraus operators.

    The Choi matrix is built with the non-normalized maximally entangled
    ket :math:`|\\Phi\\rangle = \\sum_k |k\\rangle|k\\rangle` and ordered
    output :math:`\\otimes` reference,
    :math:`J = \\sum_a \\mathrm{vec}(K_a)\\mathrm{vec}(K_a)^\\dagger` with
    ``vec`` the row-major flattening.

    Attributes
    ----------
    kraus : tuple of numpy.ndarray
        Kraus operators of shape ``(dimOut, dimIn)``.
    dimIn : int
        Input dimension.
    dimOut : int
        Output dimension.
    tpClass : str
        ``'TP'`` (trace preserving) or ``'TNI'`` (trace non-increasing).
    choi : numpy.ndarray
        Cached Choi matrix of size ``dimOut*dimIn``.
    """

    def __init__ ( self, theKraus, tpClass=None, theTol=tolerances.operatorTol ):
        """
        Parameters
        ----------
        theKraus : list of array_like
            Kraus operators.  All must have the same shape.
        tpClass : str or None
            Required trace-preservation class.  If ``None`` it is inferred.
        theTol : float
            Tolerance on :math:`\\sum_a K_a^\\dagger K_a`.

        Raises
        ------
        ValueError
            If the map is trace increasing, or if ``tpClass='TP'`` is
            requested for a map that is not trace preserving.
        """
        kraus = [np.array(K, dtype=np.complex128) for K in theKraus]
        assert(len(kraus) > 0), 'A channel needs at least one Kraus operator'
        shape = kraus[0].shape
        assert(all(K.shape == shape for K in kraus) and len(shape) == 2), 'All Kraus operators must share one matrix shape'

        self.dimOut, self.dimIn = shape
        gram = sum(K.conj().T @ K for K in kraus)
        deviation = operatorNorm(gram - np.eye(self.dimIn))
        if deviation <= theTol:
            inferred = 'TP'
        elif maxEigenvalue(gram) <= 1.0 + theTol:
            inferred = 'TNI'
        else:
            raise ValueError("Kraus operators are trace increasing (largest eigenvalue of sum K^dag K is {:.6f}).".format(maxEigenvalue(gram)))

        if tpClass is None:
            tpClass = inferred
        elif tpClass == 'TP' and inferred != 'TP':
            raise ValueError("Channel declared trace preserving but sum K^dag K deviates from I by {:.3e}.".format(deviation))
        elif tpClass not in ('TP', 'TNI'):
            raise ValueError("Unknown trace-preservation class '{}'.".format(tpClass))

        for K in kraus:
            K.setflags(write=False)
        self.kraus = tuple(kraus)
        self.tpClass = tpClass
        self.__choi = None

    @property
    def isTracePreserving ( self ):
        return self.tpClass == 'TP'

    @property
    def krausRank ( self ):
        """
        Number of stored Kraus operators (not necessarily minimal).
        """
        return len(self.kraus)

    @property
    def choi ( self ):
        if self.__choi is None:
            self.__choi = choiFromKraus(self)
            self.__choi.setflags(write=False)
        return self.__choi

    def apply ( self, rho, actingOn=None, dims=None ):
        """
        Apply the map to an operator.

        Parameters
        ----------
        rho : array_like
            Input operator.
        actingOn : int or None
            Factor index on which the map acts when ``rho`` lives on a
            product space with local dimensions ``dims``.
        dims : list of int or None
            Local dimensions of the product space.

        Returns
        -------
        numpy.ndarray
            The output operator; on a product space the acted-on factor is
            replaced by the output system.
        """
        rho = asMatrix(rho)
        if actingOn is None:
            if rho.shape != (self.dimIn, self.dimIn):
                raise ValueError("Input of shape {} does not match channel input dimension {}.".format(rho.shape, self.dimIn))
            return sum(K @ rho @ K.conj().T for K in self.kraus)

        dims = list(dims)
        if int(np.prod(dims)) != rho.shape[0] or dims[actingOn] != self.dimIn:
            raise ValueError("Subsystem dimensions {} do not match the channel acting on factor {}.".format(dims, actingOn))
        out = 0
        for K in self.kraus:
            full = _embedRectangular(K, actingOn, dims)
            out = out + full @ rho @ full.conj().T
        return out

    def applyAdjoint ( self, Z ):
        """
        Adjoint map :math:`\\mathcal{E}^\\dagger(Z) = \\sum_a K_a^\\dagger Z K_a`.
        """
        Z = asMatrix(Z)
        if Z.shape != (self.dimOut, self.dimOut):
            raise ValueError("Operator of shape {} does not match channel output dimension {}.".format(Z.shape, self.dimOut))
        return sum(K.conj().T @ Z @ K for K in self.kraus)

    def tensor ( self, other ):
        """
        Tensor product channel :math:`\\mathcal{E}\\otimes\\mathcal{F}`.
        """
        return QuantumChannel([np.kron(A, B) for A in self.kraus for B in other.kraus])

    def power ( self, n ):
        """
        n-fold tensor power built from the minimal Kraus representation.
        """
        base = QuantumChannel.fromChoi(self.choi, self.dimIn, self.dimOut)
        result = base
        for _ in range(n - 1):
            result = result.tensor(base)
        return result

    def compose ( self, other ):
        """
        Composition :math:`\\mathcal{E}\\circ\\mathcal{F}` where ``other``
        acts first.
        """
        if other.dimOut != self.dimIn:
            raise ValueError("Cannot compose a map with output dimension {} into input dimension {}.".format(other.dimOut, self.dimIn))
        return QuantumChannel([A @ B for A in self.kraus for B in other.kraus])

    def scaled ( self, c ):
        """
        The map :math:`c\\,\\mathcal{E}` for ``0 <= c``.
        """
        assert(c >= 0), 'Scaling factor must be non-negative'
        return QuantumChannel([np.sqrt(c)*K for K in self.kraus])

    @classmethod
    def fromChoi ( cls, J, dimIn, dimOut, tpClass=None ):
        """
        Build a channel from its Choi matrix (see :func:`krausFromChoi`).
        """
        return cls(krausFromChoi(J, dimIn, dimOut), tpClass)

    def toDict ( self ):
        """
        JSON-compatible dictionary ``{"dim_in", "dim_out", "kraus"}`` where
        every entry is an ``[re, im]`` pair.
        """
        return {"dim_in": self.dimIn,
                "dim_out": self.dimOut,
                "kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in K] for K in self.kraus]}

    @classmethod
    def fromDict ( cls, theDict ):
        """
        Parse the channel JSON schema.

        Raises
        ------
        ValueError
            On a malformed document.
        """
        try:
            dimIn = int(theDict["dim_in"])
            dimOut = int(theDict["dim_out"])
            kraus = []
            for K in theDict["kraus"]:
                arr = np.array([[_parseComplex(z) for z in row] for row in K], dtype=np.complex128)
                kraus.append(arr)
        except (KeyError, TypeError, IndexError) as err:
            raise ValueError("Malformed channel document: {}.  Expected {{\"dim_in\":int, \"dim_out\":int, \"kraus\":[[[re,im],...],...]}}.".format(err))
        if any(K.shape != (dimOut, dimIn) for K in kraus):
            raise ValueError("Kraus operators must have shape ({}, {}) as declared by dim_out and dim_in.".format(dimOut, dimIn))
        return cls(kraus)

    @classmethod
    def fromJsonFile ( cls, thePath ):
        with open(thePath, 'r') as f:
            try:
                doc = json.load(f)
            except json.JSONDecodeError as err:
                raise ValueError("Channel file {} is not valid JSON: {}".format(thePath, err))
        return cls.fromDict(doc)


def _parseComplex ( z ):
    if isinstance(z, (list, tuple)):
        if len(z) != 2:
            raise ValueError("Complex entries must be [re, im] pairs, got {}.".format(z))
        return complex(float(z[0]), float(z[1]))
    return complex(float(z))


def _embedRectangular ( K, position, dims ):
    factors = [np.eye(d) for d in dims]
    factors[position] = K
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def choiFromKraus ( C ):
    """
    Choi matrix :math:`J = (\\mathcal{E}\\otimes\\mathrm{id})(|\\Phi\\rangle\\langle\\Phi|)`
    with ordering output :math:`\\otimes` reference.

    Parameters
    ----------
    C : :class:`.QuantumChannel` or list of numpy.ndarray
        Channel or Kraus list.

    Returns
    -------
    numpy.ndarray
    """
    kraus = C.kraus if isinstance(C, QuantumChannel) else [np.asarray(K) for K in C]
    dimOut, dimIn = kraus[0].shape
    J = np.zeros((dimOut*dimIn, dimOut*dimIn), dtype=np.complex128)
    for K in kraus:
        v = K.reshape(-1)
        J += np.outer(v, v.conj())
    return J


def krausFromChoi ( J, dimIn, dimOut, theTol=tolerances.operatorTol ):
    """
    Minimal Kraus decomposition of a Choi matrix.

    Parameters
    ----------
    J : array_like
        Choi matrix ordered output :math:`\\otimes` reference.
    dimIn, dimOut : int
        Input and output dimensions.
    theTol : float
        Relative threshold below which eigenvalues are dropped.

    Returns
    -------
    list of numpy.ndarray

    Raises
    ------
    ValueError
        If ``J`` has an eigenvalue below ``-1e-10*max(1,||J||)`` (the map is
        not completely positive) or has the wrong size.
    """
    J = hermitize(asMatrix(J))
    if J.shape != (dimIn*dimOut, dimIn*dimOut):
        raise ValueError("Choi matrix of shape {} does not match dimensions ({}, {}).".format(J.shape, dimIn, dimOut))
    vals, vecs = np.linalg.eigh(J)
    scale = max(1.0, np.max(np.abs(vals)))
    if vals[0] < -1e-10*scale:
        raise ValueError("Choi matrix is not positive semi-definite (eigenvalue {:.3e}); the map is not completely positive.".format(vals[0]))

    kraus = []
    for lam, v in zip(vals[::-1], vecs[:, ::-1].T):
        if lam > theTol*scale:
            kraus.append(np.sqrt(lam)*v.reshape(dimOut, dimIn))
    if not kraus:
        kraus.append(np.zeros((dimOut, dimIn), dtype=np.complex128))
    return kraus


def applyChoi ( J, rho, dimIn, dimOut ):
    """
    Apply a map given by its Choi matrix,
    :math:`\\mathcal{E}(\\rho) = \\mathrm{tr}_R[J(I\\otimes\\rho^T)]`.
    """
    rho = asMatrix(rho)
    t = np.asarray(J).reshape(dimOut, dimIn, dimOut, dimIn)
    return np.einsum('aibj,ij->ab', t, rho)
