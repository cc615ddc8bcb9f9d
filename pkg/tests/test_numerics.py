from thermocap.numerics.HermitianOperator import HermitianOperator, eigHermitian, logSupport, matrixFunction, sqrtPsd, supportProjector
from thermocap.numerics.linearAlgebra import checkDimension, completeIsometry, energyClusters, energyMatchedUnitary, isUnitary, kronPower, oneNormDualCheck, partialTrace, permuteSystems
from thermocap.numerics.distances import fidelity, generalizedFidelity, purifiedDistance, stateDistance, traceDistance
from thermocap.numerics.randomInstances import randomState, randomUnitary
from thermocap.numerics.SdpProblem import SdpProblem, SdpSolution, _statusOf, complementarity, solveSdp
from thermocap.numerics import tolerances
from thermocap.Errors import SizeGuardError, SolverError
from unittest import mock
import cvxpy as cp
import numpy as np
import unittest
import warnings

class TestHermitianOperator ( unittest.TestCase ):

    def test_symmetrizedOnIngest ( self ):
        """
        Test that a slightly non-Hermitian input is symmetrized and read-only
        """
        A = np.array([[1.0, 0.5 + 1e-12], [0.5, 2.0]])
        op = HermitianOperator(A)
        self.assertTrue(np.allclose(op.matrix, op.matrix.conj().T))
        self.assertEqual(op.dim, 2)
        self.assertAlmostEqual(op.trace(), 3.0)
        with self.assertRaises(ValueError):
            op.matrix[0, 0] = 5.0


    def test_rejectsNonHermitian ( self ):
        """
        Test that a grossly non-Hermitian matrix is rejected
        """
        self.assertRaises(ValueError, HermitianOperator, np.array([[0.0, 1.0], [0.0, 0.0]]))


    def test_rejectToleranceFromSettings ( self ):
        """
        Test that the default rejection threshold is read from the shared tolerances
        """
        A = np.array([[1.0, 0.5 + 1e-12], [0.5, 2.0]])
        with mock.patch.object(tolerances, "hermitianRejectTol", 1e-14):
            self.assertRaises(ValueError, HermitianOperator, A)
        self.assertEqual(HermitianOperator(A, 1e-11).dim, 2)
        self.assertRaises(ValueError, HermitianOperator, A, 1e-14)


    def test_eigenvaluesDescending ( self ):
        """
        Test that eigenvalues come in descending order and reconstruct A
        """
        rng = np.random.default_rng(3)
        rho = randomState(4, rng)
        vals, vecs = eigHermitian(rho)
        self.assertTrue(np.all(np.diff(vals) <= 1e-15))
        self.assertTrue(np.allclose((vecs*vals) @ vecs.conj().T, rho, atol=1e-10))


    def test_logOnSupport ( self ):
        """
        Test that the support logarithm ignores the kernel
        """
        rho = np.diag([0.5, 0.5, 0.0])
        L = logSupport(rho)
        self.assertTrue(np.allclose(np.diag(L), [np.log(0.5), np.log(0.5), 0.0]))
        self.assertTrue(np.allclose(supportProjector(rho), np.diag([1.0, 1.0, 0.0])))


    def test_functionOutsideDomain ( self ):
        """
        Test that a logarithm of a negative eigenvalue raises
        """
        self.assertRaises(ValueError, matrixFunction, np.diag([1.0, -1.0]), np.log)


    def test_sqrtSquares ( self ):
        """
        Test that the PSD square root squares back to the input
        """
        rng = np.random.default_rng(5)
        rho = randomState(3, rng)
        root = sqrtPsd(rho)
        self.assertTrue(np.allclose(root @ root, rho, atol=1e-10))


class TestLinearAlgebra ( unittest.TestCase ):

    def test_partialTraceOfProduct ( self ):
        """
        Test that tracing out one factor of a product returns the other
        """
        rng = np.random.default_rng(0)
        rhoA = randomState(2, rng)
        rhoB = randomState(3, rng)
        joint = np.kron(rhoA, rhoB)
        self.assertTrue(np.allclose(partialTrace(joint, [2, 3], [0]), rhoA))
        self.assertTrue(np.allclose(partialTrace(joint, [2, 3], [1]), rhoB))
        self.assertAlmostEqual(np.real(partialTrace(joint, [2, 3], [])[0, 0]), 1.0)


    def test_partialTraceBadDims ( self ):
        """
        Test that mismatched dimensions raise
        """
        self.assertRaises(ValueError, partialTrace, np.eye(4), [2, 3], [0])


    def test_permuteSystemsSwap ( self ):
        """
        Test that permuting factors swaps a product operator
        """
        A = np.diag([1.0, 2.0])
        B = np.diag([3.0, 4.0, 5.0])
        swapped = permuteSystems(np.kron(A, B), [2, 3], [1, 0])
        self.assertTrue(np.allclose(swapped, np.kron(B, A)))


    def test_sizeGuard ( self ):
        """
        Test that oversize tensor powers raise SizeGuardError
        """
        self.assertRaises(SizeGuardError, checkDimension, 5000)
        self.assertRaises(SizeGuardError, kronPower, np.eye(2), 13)
        self.assertEqual(kronPower(np.eye(2), 3).shape, (8, 8))


    def test_oneNormForms ( self ):
        """
        Test that the three trace norm expressions agree
        """
        A = np.diag([0.7, -0.2, 0.0])
        norm, Z, (plus, minus) = oneNormDualCheck(A)
        self.assertAlmostEqual(norm, 0.9)
        self.assertTrue(np.allclose(Z, np.diag([1.0, -1.0, 1.0])))
        self.assertTrue(np.allclose(plus - minus, A))


    def test_oneNormPsdDual ( self ):
        """
        Test that the dual maximizer of a PSD operator is the identity
        """
        rng = np.random.default_rng(1)
        rho = randomState(3, rng)
        norm, Z, _ = oneNormDualCheck(rho)
        self.assertAlmostEqual(norm, 1.0)
        self.assertTrue(np.allclose(Z, np.eye(3), atol=1e-9))


    def test_completeIsometry ( self ):
        """
        Test that completion of orthonormal columns is unitary
        """
        V = np.array([[1.0], [1.0], [0.0]])/np.sqrt(2.0)
        U = completeIsometry(V)
        self.assertTrue(isUnitary(U))
        self.assertTrue(np.allclose(U[:, 0], V[:, 0]))


    def test_energyClusters ( self ):
        """
        Test that degenerate energies share a cluster
        """
        clusters = energyClusters([1.0, 0.0, 1.0 + 1e-12, 2.0])
        self.assertEqual(len(clusters), 3)
        self.assertEqual(sorted(clusters[1][1].tolist()), [0, 2])


    def test_energyMatchedUnitary ( self ):
        """
        Test that the matched unitary maps domain to image and conserves energy
        """
        H = np.diag([0.0, 1.0, 1.0, 2.0])
        dom = np.zeros((4, 1), dtype=complex)
        dom[1, 0] = 1.0
        img = np.zeros((4, 1), dtype=complex)
        img[1, 0] = 1.0/np.sqrt(2.0)
        img[2, 0] = 1.0/np.sqrt(2.0)
        U = energyMatchedUnitary(dom, img, H)
        self.assertTrue(isUnitary(U))
        self.assertTrue(np.allclose(U @ dom, img))
        self.assertTrue(np.allclose(U @ H, H @ U))


    def test_energyMismatchRaises ( self ):
        """
        Test that pairing vectors of different energies raises
        """
        H = np.diag([0.0, 1.0])
        self.assertRaises(ValueError, energyMatchedUnitary, np.eye(2)[:, :1], np.eye(2)[:, 1:], H)


class TestDistances ( unittest.TestCase ):

    def test_fidelityOfEqualStates ( self ):
        """
        Test that a state has unit fidelity with itself and zero distances
        """
        rng = np.random.default_rng(7)
        rho = randomState(3, rng)
        self.assertAlmostEqual(fidelity(rho, rho), 1.0, places=7)
        self.assertAlmostEqual(traceDistance(rho, rho), 0.0, places=9)
        self.assertLess(purifiedDistance(rho, rho), 1e-3)


    def test_orthogonalStates ( self ):
        """
        Test that orthogonal pure states have zero fidelity
        """
        rho = np.diag([1.0, 0.0])
        sigma = np.diag([0.0, 1.0])
        self.assertAlmostEqual(fidelity(rho, sigma), 0.0)
        self.assertAlmostEqual(traceDistance(rho, sigma), 1.0)
        self.assertAlmostEqual(purifiedDistance(rho, sigma), 1.0)


    def test_generalizedFidelitySubnormalized ( self ):
        """
        Test the generalized fidelity deficit term on sub-normalized states
        """
        rho = np.diag([0.5, 0.0])
        sigma = np.diag([0.0, 0.5])
        self.assertAlmostEqual(generalizedFidelity(rho, sigma), 0.5)


    def test_unitaryInvariance ( self ):
        """
        Test that distances are unitarily invariant
        """
        rng = np.random.default_rng(11)
        rho = randomState(3, rng)
        sigma = randomState(3, rng)
        U = randomUnitary(3, rng)
        for kind in ('fidelity', 'trace', 'purified'):
            self.assertAlmostEqual(stateDistance(kind, rho, sigma), stateDistance(kind, U @ rho @ U.conj().T, U @ sigma @ U.conj().T), places=7)


    def test_invalidStates ( self ):
        """
        Test that negative or super-normalized inputs are rejected
        """
        self.assertRaises(ValueError, fidelity, np.diag([1.5, -0.5]), np.diag([1.0, 0.0]))
        self.assertRaises(ValueError, traceDistance, np.diag([0.8, 0.8]), np.diag([1.0, 0.0]))
        self.assertRaises(ValueError, stateDistance, 'bures', np.eye(2)/2, np.eye(2)/2)


class TestSdpProblem ( unittest.TestCase ):

    def test_linearProgram ( self ):
        """
        Test that a tiny LP solves to its optimum
        """
        p = SdpProblem("lp")
        x = p.addBlock("x", 1, theKind='real')
        p.addConstraint(x >= 2, "lower")
        p.minimize(cp.sum(x))
        sol = solveSdp(p)
        self.assertTrue(sol.isOptimal)
        self.assertAlmostEqual(sol.primalValue, 2.0, places=5)
        self.assertIn("lower", sol.dual)
        self.assertLessEqual(sol.dualValue, sol.primalValue)
        self.assertLess(sol.gap, 1e-6)


    def test_maxEigenvalueSdp ( self ):
        """
        Test that max tr[A rho] over states equals the top eigenvalue
        """
        A = np.diag([0.3, 1.2, -0.4])
        p = SdpProblem("maxeig")
        rho = p.addBlock("rho", 3, 'psd')
        p.addConstraint(cp.real(cp.trace(rho)) == 1)
        p.maximize(cp.real(cp.trace(A @ rho)))
        sol = solveSdp(p).requireOptimal()
        self.assertAlmostEqual(sol.primalValue, 1.2, places=5)
        self.assertGreaterEqual(sol.dualValue, sol.primalValue)
        self.assertAlmostEqual(sol.dualValue, 1.2, places=5)
        self.assertLess(sol.gap, 1e-6)


    def test_complementarityOffOptimum ( self ):
        """
        Test that a feasible point away from the optimum leaves a positive gap
        """
        A = np.diag([0.3, 1.2, -0.4])
        p = SdpProblem("maxeig")
        rho = p.addBlock("rho", 3, 'psd')
        p.addConstraint(cp.real(cp.trace(rho)) == 1)
        p.maximize(cp.real(cp.trace(A @ rho)))
        solveSdp(p).requireOptimal()
        # Keep the optimal dual, move the primal point to the maximally mixed state
        rho.value = np.eye(3)/3
        gap = complementarity(p)
        self.assertAlmostEqual(gap, np.trace(1.2*np.eye(3) - A)/3, places=4)


    def test_inaccurateStatusRefused ( self ):
        """
        Test that an inaccurate optimum is reported as such and refused
        """
        self.assertEqual(_statusOf(cp.OPTIMAL_INACCURATE), 'inaccurate')
        self.assertEqual(_statusOf(cp.OPTIMAL), 'optimal')
        p = SdpProblem("lp")
        x = p.addBlock("x", 1, theKind='real')
        p.addConstraint(x >= 2)
        p.minimize(cp.sum(x))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with mock.patch("thermocap.numerics.SdpProblem._statusOf", return_value='inaccurate'):
                sol = solveSdp(p)
        self.assertEqual(sol.status, 'inaccurate')
        self.assertTrue(np.isnan(sol.primalValue))
        with self.assertRaises(SolverError) as ctx:
            sol.requireOptimal("LP")
        self.assertIs(ctx.exception.solution, sol)
        self.assertRaises(SolverError, SdpSolution('inaccurate', 1.0, 1.0, {}, {}, "SCS").requireOptimal)


    def test_duplicateBlock ( self ):
        """
        Test that block names must be unique
        """
        p = SdpProblem()
        p.addBlock("x", 2)
        self.assertRaises(AssertionError, p.addBlock, "x", 2)


#if __name__ == '__main__':
#    unittest.main()
