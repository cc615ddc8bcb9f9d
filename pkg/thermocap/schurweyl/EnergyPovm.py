import numpy as np

from ..numerics.HermitianOperator import asMatrix, hermitize
from ..numerics.linearAlgebra import checkDimension, kronPower


class EnergyPovm:
    """
    Projective measurement of the energy per copy of
    :math:`H^{\\otimes n}`-sums, i.e. onto the eigenspaces of
    :math:`\\Gamma^{\\otimes n}` with :math:`\\Gamma=e^{-\\beta H}`.

    Outcome labels are :math:`k = \\beta\\sum_i E_{j_i}/n`, so that
    :math:`R^k\\Gamma^{\\otimes n} = e^{-nk}R^k`.

    Attributes
    ----------
    n : int
    beta : float
    hamiltonian : numpy.ndarray
    labels : numpy.ndarray
        Distinct labels in increasing order.
    multiplicities : numpy.ndarray
        Rank of each :math:`R^k`.
    labelOfIndex : numpy.ndarray
        Label index of every product eigenvector.

    Note
    ----
    Projectors are assembled on demand from the product eigenbasis, which
    is kept once for all labels.
    """

    def __init__ ( self, theHamiltonian, theBeta, n, theTol=1e-9 ):
        H = hermitize(asMatrix(theHamiltonian))
        d = H.shape[0]
        checkDimension(d**n, "energy measurement")
        self.n = n
        self.beta = float(theBeta)
        self.hamiltonian = H
        self.dim = d**n

        vals, vecs = np.linalg.eigh(H)
        total = np.zeros(1)
        for _ in range(n):
            total = np.add.outer(total, vals).reshape(-1)
        scaled = self.beta*total/n

        order = np.argsort(scaled)
        labels = []
        labelOfIndex = np.empty(len(scaled), dtype=int)
        for idx in order:
            if not labels or scaled[idx] - labels[-1] > theTol*max(1.0, abs(labels[-1])):
                labels.append(scaled[idx])
            labelOfIndex[idx] = len(labels) - 1
        self.labels = np.array(labels)
        self.labelOfIndex = labelOfIndex
        self.multiplicities = np.bincount(labelOfIndex, minlength=len(labels))
        self.__singleBasis = vecs
        self.__basis = None

    @property
    def basis ( self ):
        if self.__basis is None:
            self.__basis = kronPower(self.__singleBasis, self.n)
        return self.__basis

    def __projectorFromMask ( self, mask ):
        B = self.basis[:, mask]
        return B @ B.conj().T

    def projector ( self, theLabelIndex ):
        """
        :math:`R^k` for the label ``self.labels[theLabelIndex]``.
        """
        return self.__projectorFromMask(self.labelOfIndex == theLabelIndex)

    def projectors ( self ):
        return [self.projector(i) for i in range(len(self.labels))]

    def windowIndices ( self, theCenter, delta ):
        return [i for i, k in enumerate(self.labels) if abs(k - theCenter) <= delta]

    def window ( self, theCenter, delta ):
        """
        :math:`R^{\\approx_\\delta h} = \\sum_{|k-h|\\leq\\delta}R^k`.
        """
        mask = np.isin(self.labelOfIndex, self.windowIndices(theCenter, delta))
        return self.__projectorFromMask(mask)

    def atLeast ( self, theThreshold ):
        """
        :math:`\\sum_{k\\geq t}R^k`.
        """
        return self.__projectorFromMask(self.labels[self.labelOfIndex] >= theThreshold - 1e-12)

    def gammaPower ( self ):
        """
        :math:`\\Gamma^{\\otimes n}` in the computational basis.
        """
        weights = np.exp(-self.n*self.labels[self.labelOfIndex])
        B = self.basis
        return (B*weights) @ B.conj().T

    def iidSuccess ( self, rho, delta ):
        """
        :math:`\\mathrm{tr}[R^{\\approx_\\delta h}\\rho^{\\otimes n}]` with
        :math:`h = \\beta\\,\\mathrm{tr}(H\\rho)`, computed from the
        distribution of the energy outcomes in the eigenbasis of ``H``.
        """
        rho = hermitize(asMatrix(rho))
        populations = np.real(np.diag(self.__singleBasis.conj().T @ rho @ self.__singleBasis))
        probs = np.ones(1)
        for _ in range(self.n):
            probs = np.multiply.outer(probs, populations).reshape(-1)
        center = self.beta*float(np.real(np.trace(self.hamiltonian @ rho)))
        inside = np.isin(self.labelOfIndex, self.windowIndices(center, delta))
        return float(np.sum(probs[inside]))

    def hoeffdingBound ( self, delta ):
        """
        :math:`1 - 2e^{-n\\delta^2/(2\\|\\beta H\\|_\\infty^2)}`.
        """
        norm = self.beta*np.max(np.abs(np.linalg.eigvalsh(self.hamiltonian)))
        if norm == 0.0:
            return 1.0
        return float(1.0 - 2.0*np.exp(-self.n*delta**2/(2.0*norm**2)))


def energyPovm ( H, beta, n ):
    return EnergyPovm(H, beta, n)
