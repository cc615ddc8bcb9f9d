from thermocap.typicality.projectors import conditionalSizeConstant, conditionalSizeRate, hoeffdingRate, relativeTypicalProjector, relativeTypicalWeight, typicalProjector, universalConditionalTypicalProjector
from thermocap.typicality.SmoothingOperator import SmoothingOperator, purifyState, superposedIidKet, universalSmoothingOperator
from thermocap.typicality.Certificate import Certificate
from thermocap.typicality.constructions import aepProtocolMap, construction2Map
from thermocap.capacity.coherentRelativeEntropy import aepLimit, counterexampleInstance
from thermocap.channels.channelLibrary import dephasing, erasureToPlus
from thermocap.numerics.linearAlgebra import kronPower, partialTrace
from thermocap.numerics.randomInstances import randomState
from thermocap.Errors import SizeGuardError
import numpy as np
import unittest
import warnings
import os
from unittest import mock

class TestTypicalProjectors ( unittest.TestCase ):

    def test_weightMatchesProjector ( self ):
        """
        Test the population formula for the relative typical weight
        """
        rng = np.random.default_rng(1)
        rho = randomState(2, rng)
        tau = np.diag([0.7, 0.3])
        P = relativeTypicalProjector(rho, tau, 3, 0.3)
        explicit = np.real(np.trace(P @ kronPower(rho, 3)))
        self.assertAlmostEqual(relativeTypicalWeight(rho, tau, 3, 0.3), explicit, places=10)
        self.assertTrue(np.allclose(P @ P, P))
        tauN = kronPower(tau, 3)
        self.assertTrue(np.allclose(P @ tauN, tauN @ P))


    def test_typicalProjectorOfMixedState ( self ):
        """
        Test that the maximally mixed state is typical everywhere
        """
        P = typicalProjector(np.eye(2)/2, 3, 0.01)
        self.assertTrue(np.allclose(P, np.eye(8)))


    def test_supportViolationIsZero ( self ):
        """
        Test that a state outside the support of tau gets the zero projector
        """
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            P = relativeTypicalProjector(np.eye(2)/2, np.diag([1.0, 0.0]), 2, 0.1)
        self.assertEqual(np.max(np.abs(P)), 0.0)
        self.assertEqual(relativeTypicalWeight(np.eye(2)/2, np.diag([1.0, 0.0]), 2, 0.1), 0.0)


    def test_hoeffdingRate ( self ):
        """
        Test the Hoeffding rate from the spread of -ln tau
        """
        self.assertEqual(hoeffdingRate(np.eye(2), 0.1), np.inf)
        self.assertAlmostEqual(hoeffdingRate(np.diag([1.0, np.exp(-2.0)]), 0.5), 0.125)


class TestConditionalTypicality ( unittest.TestCase ):

    def test_largeThresholdIsIdentity ( self ):
        """
        Test that a loose threshold keeps every block pair
        """
        n, dA, dB = 2, 2, 2
        P = universalConditionalTypicalProjector(10.0, 0.0, n, dA, dB)
        self.assertTrue(np.allclose(P, np.eye(16)))
        self.assertAlmostEqual(conditionalSizeRate(P, dA, dB, n), np.log(2))
        self.assertAlmostEqual(conditionalSizeConstant(P, 10.0, 0.0, n, dA, dB), 4.0*np.exp(-20.0))


    def test_projectorProperties ( self ):
        """
        Test that the conditional typical projector is an orthogonal projector
        """
        P = universalConditionalTypicalProjector(0.1, 0.05, 2, 2, 2)
        self.assertTrue(np.allclose(P @ P, P, atol=1e-10))
        self.assertTrue(np.allclose(P, P.conj().T))


    def test_emptyThreshold ( self ):
        """
        Test that an unreachable threshold gives zero with a warning
        """
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            P = universalConditionalTypicalProjector(-10.0, 0.0, 2, 2, 2)
        self.assertEqual(np.max(np.abs(P)), 0.0)
        self.assertTrue(len(caught) > 0)
        self.assertEqual(conditionalSizeRate(P, 2, 2, 2), -np.inf)


class TestSmoothingOperator ( unittest.TestCase ):

    def test_looseThresholdIsIdentity ( self ):
        """
        Test that trivial Gamma operators and a low threshold give the identity
        """
        M = universalSmoothingOperator(np.eye(4), np.eye(2), -5.0, 0.1, 2, 2, 2)
        self.assertEqual(M.flavor, 'projector')
        self.assertTrue(np.allclose(M.operator, np.eye(16)))
        rng = np.random.default_rng(2)
        self.assertAlmostEqual(M.iidOverlap(randomState(4, rng)), 1.0)


    def test_smoothingProperties ( self ):
        """
        Test contraction, permutation invariance and Gamma commutation
        """
        rng = np.random.default_rng(3)
        gammaAB = np.diag([1.0, 0.5, 0.5, 0.25])
        gammaB = np.diag([1.0, 0.5])
        M = universalSmoothingOperator(gammaAB, gammaB, -0.3, 0.05, 2, 2, 2)
        self.assertLess(M.normResidual(), 1e-9)
        self.assertLess(M.permutationResidual(rng), 1e-9)
        residualAB, residualB = M.commutationResiduals()
        self.assertLess(residualAB, 1e-9)
        self.assertLess(residualB, 1e-9)
        self.assertTrue(np.isfinite(M.sizeConstant()))
        self.assertLessEqual(M.sizeConstant(), M.sizeConstantBound()*(1.0 + 1e-9))


    def test_overlapMatchesIid ( self ):
        """
        Test that the purified overlap equals the i.i.d. trace overlap
        """
        rng = np.random.default_rng(4)
        M = universalSmoothingOperator(np.eye(4), np.eye(2), -0.2, 0.05, 2, 2, 2)
        rho = randomState(4, rng)
        ket = kronPower(purifyState(rho).reshape(-1, 1), 2)[:, 0]
        self.assertAlmostEqual(M.overlap(ket, 4), M.iidOverlap(rho), places=10)


    def test_admissibility ( self ):
        """
        Test the admissibility threshold with trivial Gamma operators
        """
        M = universalSmoothingOperator(np.eye(4), np.eye(2), 0.0, 0.05, 1, 2, 2)
        psi = np.array([1.0, 0.0, 0.0, 1.0])/np.sqrt(2.0)
        # -H(A|B) = ln 2 for a Bell state
        self.assertTrue(M.isAdmissible(np.outer(psi, psi)))
        self.assertFalse(M.isAdmissible(np.eye(4)/4))
        rng = np.random.default_rng(5)
        states = M.sampleAdmissibleStates(rng, 3)
        self.assertTrue(all(M.isAdmissible(rho) for rho in states))
        self.assertEqual(M.worstIidDeficit([]), 0.0)


    def test_helpers ( self ):
        """
        Test the purification and superposition helpers
        """
        rng = np.random.default_rng(6)
        rho = randomState(3, rng)
        psi = purifyState(rho)
        self.assertTrue(np.allclose(partialTrace(np.outer(psi, psi.conj()), [3, 3], [0]), rho))
        ket = superposedIidKet(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 3)
        self.assertAlmostEqual(np.linalg.norm(ket), 1.0)


class TestConstructions ( unittest.TestCase ):

    def test_certificate ( self ):
        """
        Test certificate senses and their JSON documents
        """
        cert = Certificate(2, 0.1, None, 'i', 1.0, 0.5)
        self.assertTrue(cert.passed)
        self.assertFalse(Certificate(2, 0.1, None, 'ii', 1.0, 0.5, theSense='ge').passed)
        doc = Certificate(1, 0.1, 0.0, 'iii', np.inf, 2.0).toDict()
        self.assertEqual(doc["bound"], "inf")
        self.assertEqual(doc["property"], 'iii')


    def test_construction2 ( self ):
        """
        Test the universal single-copy implementation of dephasing
        """
        T, certificates = construction2Map(dephasing(2), None, None, 1, 0.1, theCapacity=0.0)
        self.assertEqual(T.dimIn, 2)
        self.assertEqual([c.property for c in certificates], ['i', 'iii', 'ii'])
        for cert in certificates:
            self.assertTrue(cert.passed, cert)
        domination, closeness = certificates[1], certificates[2]
        self.assertLessEqual(domination.extra["c_n"], domination.extra["c_n_bound"]*(1.0 + 1e-9))
        self.assertAlmostEqual(domination.bound, 0.4 + np.log(domination.extra["c_n_bound"]))
        self.assertEqual(closeness.extra["method"], "diamond")
        q, o = closeness.extra["normMax"], closeness.extra["overlapMin"]
        self.assertAlmostEqual(closeness.bound, 0.5*np.sqrt((1.0 + q)**2 - 4.0*max(0.0, o)**2))


    def test_constructionCertificatesCanFail ( self ):
        """
        Test that the domination certificate fails against a bound below the measured size constant
        """
        def tooSmall ( smoother ):
            return 1e-3*smoother.sizeConstant()

        with mock.patch.object(SmoothingOperator, "sizeConstantBound", tooSmall):
            _, certificates = construction2Map(dephasing(2), None, None, 1, 0.1, theCapacity=0.0)
        self.assertGreater(certificates[1].extra["c_n"], 0.0)
        self.assertFalse(certificates[1].passed)


    def test_constructionDeFinettiRoute ( self ):
        """
        Test the three-copy closeness check on the de Finetti purification
        """
        T, certificates = construction2Map(dephasing(2), None, None, 3, 0.1, theCapacity=0.0)
        closeness = certificates[2]
        self.assertEqual(closeness.extra["method"], "de_finetti")
        self.assertTrue(closeness.passed, closeness)
        self.assertLessEqual(closeness.bound, 1.0)
        self.assertGreaterEqual(closeness.extra["diamondBound"], closeness.bound)


    @unittest.skipUnless(os.environ.get("THERMOCAP_LONG_TESTS"), "set THERMOCAP_LONG_TESTS to run the construction up to four copies")
    def test_constructionErasureToPure ( self ):
        """
        Test the universal construction of qubit erasure to |+> for one to four copies
        """
        E = erasureToPlus()
        capacity, delta = np.log(2), 0.05
        proxies = []
        for n in range(1, 5):
            T, certificates = construction2Map(E, None, None, n, delta, theCapacity=capacity)
            for cert in certificates:
                self.assertTrue(cert.passed, cert)
            domination = certificates[1]
            self.assertTrue(np.isfinite(domination.extra["c_n"]))
            self.assertGreater(domination.extra["c_n"], 0.0)
            self.assertLessEqual(domination.extra["rate"], capacity + 4.0*delta + domination.extra["log_c_rate"] + 1e-7)
            proxies.append(certificates[2].extra["proxy"])
        for before, after in zip(proxies, proxies[1:]):
            self.assertLessEqual(after, before + 1e-6)


    def test_constructionLimits ( self ):
        """
        Test the copy limit and the infinite capacity refusal
        """
        self.assertRaises(SizeGuardError, construction2Map, dephasing(2), None, None, 6)
        self.assertRaises(ValueError, construction2Map, dephasing(2), None, None, 1, 0.1, np.inf)


    def test_aepProtocolMap ( self ):
        """
        Test the typical-projector implementation on the erasure instance
        """
        E, gamma, sigma = counterexampleInstance(1.0, 1.0)
        T, certificates = aepProtocolMap(E, sigma, gamma, gamma, 2, 0.2)
        self.assertEqual([c.property for c in certificates], ['i', 'gamma', 'closeness'])
        self.assertTrue(certificates[0].passed)
        self.assertAlmostEqual(certificates[1].extra["limit"], aepLimit(E, sigma, gamma, gamma))
        self.assertEqual(T.dimIn, 4)


    def test_aepClosenessFromWeights ( self ):
        """
        Test that the closeness bound follows the typical weights of the four projectors
        """
        E, gamma, sigma = counterexampleInstance(1.0, 1.0)
        n, delta = 2, 0.2
        T, certificates = aepProtocolMap(E, sigma, gamma, gamma, n, delta)
        closeness = certificates[2]
        rho = E.apply(sigma)
        gInverse = np.linalg.inv(gamma.gamma)
        weights = [relativeTypicalWeight(sigma, gamma.gamma, n, delta), relativeTypicalWeight(sigma, sigma, n, delta),
                   relativeTypicalWeight(rho, rho, n, delta), relativeTypicalWeight(rho, gInverse, n, delta)]
        overlap = max(0.0, 1.0 - sum(np.sqrt(1.0 - w) for w in weights))
        expected = np.sqrt(1.0 - overlap**2)
        self.assertAlmostEqual(closeness.bound, expected, places=10)
        self.assertAlmostEqual(4.0*np.exp(-n*closeness.extra["etaPrime"]), expected, places=10)
        self.assertTrue(closeness.passed, closeness)


    def test_aepClosenessWideWindow ( self ):
        """
        Test that a window covering every label gives an exact implementation and a zero bound
        """
        E, gamma, sigma = counterexampleInstance(1.0, 1.0)
        T, certificates = aepProtocolMap(E, sigma, gamma, gamma, 2, 5.0)
        closeness = certificates[2]
        self.assertAlmostEqual(closeness.bound, 0.0, places=10)
        self.assertEqual(closeness.extra["etaPrime"], np.inf)
        self.assertLess(closeness.measured, 1e-6)
        self.assertTrue(closeness.passed)


#if __name__ == '__main__':
#    unittest.main()
