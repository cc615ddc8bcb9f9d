import numpy as np

from .QuantumChannel import QuantumChannel, krausFromChoi
from ..numerics.HermitianOperator import asMatrix, eigHermitian
from ..numerics.randomInstances import randomIsometry


def identityChannel ( d ):
    return QuantumChannel([np.eye(d)])


def unitaryChannel ( U ):
    U = asMatrix(U)
    return QuantumChannel([U], tpClass='TP')


def hamiltonianEvolution ( H, t ):
    """
    Unitary channel :math:`e^{-iHt}(\\cdot)e^{iHt}`.
    """
    vals, vecs = eigHermitian(H)
    U = (vecs*np.exp(-1j*vals*t)) @ vecs.conj().T
    return unitaryChannel(U)


def hadamardChannel ( ):
    return unitaryChannel(np.array([[1, 1], [1, -1]])/np.sqrt(2.0))


def depolarizing ( d, p ):
    """
    :math:`\\rho \\mapsto (1-p)\\rho + p\\,\\mathrm{tr}(\\rho)\\,I/d`.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("Depolarizing parameter {} out of range.".format(p))
    phi = np.eye(d).reshape(-1)
    J = (1.0 - p)*np.outer(phi, phi) + p*np.eye(d*d)/d
    return QuantumChannel(krausFromChoi(J, d, d), tpClass='TP')


def dephasing ( d, p=1.0 ):
    """
    Dephasing in the computational basis,
    :math:`\\rho \\mapsto (1-p)\\rho + p\\sum_k |k\\rangle\\langle k|\\rho|k\\rangle\\langle k|`.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("Dephasing parameter {} out of range.".format(p))
    J = np.zeros((d*d, d*d), dtype=np.complex128)
    phi = np.eye(d).reshape(-1)
    J += (1.0 - p)*np.outer(phi, phi)
    for k in range(d):
        e = np.zeros(d*d)
        e[k*d + k] = 1.0
        J += p*np.outer(e, e)
    return QuantumChannel(krausFromChoi(J, d, d), tpClass='TP')


def amplitudeDamping ( gamma ):
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("Damping parameter {} out of range.".format(gamma))
    K0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]])
    K1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return QuantumChannel([K0, K1], tpClass='TP')


def replacement ( theState, dimIn=None ):
    """
    Replacement channel :math:`\\rho\\mapsto\\mathrm{tr}(\\rho)\\,\\omega`.
    """
    omega = asMatrix(theState)
    dOut = omega.shape[0]
    dIn = dOut if dimIn is None else dimIn
    vals, vecs = eigHermitian(omega)
    kraus = []
    for lam, v in zip(vals, vecs.T):
        if lam > 1e-14:
            for k in range(dIn):
                e = np.zeros(dIn)
                e[k] = 1.0
                kraus.append(np.sqrt(lam)*np.outer(v, e))
    return QuantumChannel(kraus, tpClass='TP')


def erasureToPlus ( ):
    """
    Qubit channel that erases its input and prepares :math:`|+\\rangle`.
    """
    plus = np.array([1.0, 1.0])/np.sqrt(2.0)
    return replacement(np.outer(plus, plus))


def randomChannel ( dimIn, dimOut, rank, rng ):
    """
    Random channel from a Haar isometry into output plus environment.
    """
    V = randomIsometry(dimOut*rank, dimIn, rng)
    t = V.reshape(dimOut, rank, dimIn)
    return QuantumChannel([t[:, a, :] for a in range(rank)], tpClass='TP')
