import numpy as np


class BatteryState:
    """
    Information-battery state: a uniform mixture over a subspace of rank
    :math:`r` in a :math:`d`-dimensional register with trivial Hamiltonian.

    The state is :math:`\\tau^m = P/r` with :math:`m = \\ln r` and charge
    :math:`w(\\tau) = \\ln d - m` (pure nats).

    Attributes
    ----------
    dim : int
    rank : int
    projector : numpy.ndarray
        Support projector (first ``rank`` basis vectors unless supplied).
    deficit : float
        Amount by which a requested ln-rank was floored to an integer rank
        (see :meth:`fromLnRank`); zero otherwise.
    """

    def __init__ ( self, theDim, theRank, theProjector=None ):
        assert(int(theDim) == theDim and int(theRank) == theRank), 'Battery dimension and rank must be integers'
        theDim = int(theDim)
        theRank = int(theRank)
        if not 1 <= theRank <= theDim:
            raise ValueError("Battery rank {} must lie between 1 and the dimension {}.".format(theRank, theDim))
        self.dim = theDim
        self.rank = theRank
        if theProjector is None:
            P = np.zeros((theDim, theDim), dtype=np.complex128)
            P[:theRank, :theRank] = np.eye(theRank)
        else:
            P = np.array(theProjector, dtype=np.complex128)
            assert(P.shape == (theDim, theDim)), 'Projector has the wrong shape'
            if abs(np.real(np.trace(P)) - theRank) > 1e-9 or np.linalg.norm(P @ P - P) > 1e-9:
                raise ValueError("Battery support must be a projector of rank {}.".format(theRank))
        self.projector = P
        self.deficit = 0.0

    @classmethod
    def fromLnRank ( cls, theDim, m ):
        """
        Battery state with rank :math:`\\lfloor e^m\\rfloor`; the rounding
        deficit :math:`m - \\ln\\lfloor e^m\\rfloor` is stored in
        :attr:`deficit`.
        """
        r = int(np.floor(np.exp(m) + 1e-9))
        if r < 1:
            raise ValueError("Requested ln-rank {} gives a rank below 1.".format(m))
        battery = cls(theDim, r)
        battery.deficit = float(m - np.log(r))
        return battery

    @property
    def lnRank ( self ):
        """
        :math:`m = \\ln r`.
        """
        return float(np.log(self.rank))

    @property
    def charge ( self ):
        """
        :math:`w(\\tau) = \\ln d - \\ln r`.
        """
        return float(np.log(self.dim) - np.log(self.rank))

    def state ( self ):
        return self.projector/self.rank

    def supportBasis ( self ):
        """
        Orthonormal basis of the support (columns).
        """
        vals, vecs = np.linalg.eigh(self.projector)
        return vecs[:, vals > 0.5]
