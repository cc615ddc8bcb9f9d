import numpy as np

from .QuantumChannel import QuantumChannel, krausFromChoi
from ..numerics import tolerances
from ..numerics.HermitianOperator import asMatrix
from ..numerics.linearAlgebra import partialTrace, operatorNorm


class StinespringDilation:
    """
    Isometry :math:`V_{X\\to X'E}` with output ordered :math:`X'\\otimes E`.

    Attributes
    ----------
    isometry : numpy.ndarray
        Matrix of shape ``(dimOut*dimEnv, dimIn)``.
    dimIn : int
    dimOut : int
    dimEnv : int
        Environment dimension (the Kraus rank when built by
        :func:`stinespring`).
    """

    def __init__ ( self, theIsometry, dimOut, dimEnv ):
        V = np.array(theIsometry, dtype=np.complex128)
        assert(V.shape[0] == dimOut*dimEnv), 'Isometry rows must equal dimOut*dimEnv'
        residual = operatorNorm(V.conj().T @ V - np.eye(V.shape[1]))
        if residual > tolerances.reconstructionTol:
            raise ValueError("Matrix is not an isometry (residual {:.3e}).".format(residual))
        V.setflags(write=False)
        self.isometry = V
        self.dimIn = V.shape[1]
        self.dimOut = dimOut
        self.dimEnv = dimEnv

    def applyJoint ( self, rho ):
        """
        :math:`V\\rho V^\\dagger` on :math:`X'\\otimes E`.
        """
        rho = asMatrix(rho)
        return self.isometry @ rho @ self.isometry.conj().T

    def apply ( self, rho ):
        """
        :math:`\\mathrm{tr}_E[V\\rho V^\\dagger]`.
        """
        return partialTrace(self.applyJoint(rho), [self.dimOut, self.dimEnv], [0])

    def complementary ( self, rho ):
        """
        :math:`\\mathrm{tr}_{X'}[V\\rho V^\\dagger]`.
        """
        return partialTrace(self.applyJoint(rho), [self.dimOut, self.dimEnv], [1])

    def kraus ( self ):
        t = self.isometry.reshape(self.dimOut, self.dimEnv, self.dimIn)
        return [t[:, a, :] for a in range(self.dimEnv)]

    def toChannel ( self ):
        return QuantumChannel(self.kraus())


def isometryFromKraus ( theKraus ):
    """
    :math:`V = \\sum_a K_a\\otimes|a\\rangle` with output ordered
    :math:`X'\\otimes E`.
    """
    t = np.stack([np.asarray(K) for K in theKraus], axis=1)
    dimOut, dimEnv, dimIn = t.shape
    return t.reshape(dimOut*dimEnv, dimIn)


def stinespring ( C ):
    """
    Minimal Stinespring dilation of a trace-preserving channel.

    Parameters
    ----------
    C : :class:`.QuantumChannel`

    Returns
    -------
    :class:`.StinespringDilation`
        ``dimEnv`` equals the Kraus rank of ``C``.

    Raises
    ------
    ValueError
        If ``C`` is only trace non-increasing; dilate its trace-preserving
        completion instead.
    """
    if not C.isTracePreserving:
        raise ValueError("Stinespring dilation requires a trace-preserving channel; dilate the trace-preserving completion of this map instead.")
    kraus = krausFromChoi(C.choi, C.dimIn, C.dimOut)
    return StinespringDilation(isometryFromKraus(kraus), C.dimOut, len(kraus))
