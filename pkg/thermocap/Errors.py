class SizeGuardError ( ValueError ):
    """
    Raised when a requested construction exceeds the desk-scale memory guard
    (for example a tensor power whose dimension is above 4096).
    """
    pass


class PreconditionError ( ValueError ):
    """
    Raised when the hypothesis of a protocol construction does not hold
    for the supplied instance.
    """
    pass


class NotCovariantError ( PreconditionError ):
    """
    Raised when a channel is not time-covariant with respect to the
    supplied Hamiltonian.
    """
    pass


class SolverError ( RuntimeError ):
    """
    Raised when a semidefinite program does not reach an optimal status.

    Attributes
    ----------
    solution : :class:`.SdpSolution` or None
        The solution object returned by the solver, when one is available.
    """

    def __init__ ( self, theMessage, theSolution=None ):
        super().__init__(theMessage)
        self.solution = theSolution
