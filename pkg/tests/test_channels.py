from thermocap.channels.QuantumChannel import QuantumChannel, applyChoi, choiFromKraus, krausFromChoi
from thermocap.channels.channelLibrary import amplitudeDamping, dephasing, depolarizing, erasureToPlus, hadamardChannel, identityChannel, randomChannel, unitaryChannel
from thermocap.channels.StinespringDilation import stinespring
from thermocap.channels.CovariantDilation import covariantStinespring, dilationReproduces, isTimeCovariant, sampledCovarianceCheck
from thermocap.channels.diamond import diamondDistance, sampledDiamondLowerBound
from thermocap.numerics.randomInstances import randomState
from thermocap.Errors import NotCovariantError
import numpy as np
import unittest

class TestQuantumChannel ( unittest.TestCase ):

    def test_traceClasses ( self ):
        """
        Test that trace preservation is inferred and trace increase rejected
        """
        self.assertTrue(identityChannel(2).isTracePreserving)
        tni = QuantumChannel([np.diag([1.0, 0.5])])
        self.assertEqual(tni.tpClass, 'TNI')
        self.assertRaises(ValueError, QuantumChannel, [np.diag([1.0, 1.5])])
        self.assertRaises(ValueError, QuantumChannel, [np.diag([1.0, 0.5])], 'TP')


    def test_choiRoundTrip ( self ):
        """
        Test that Kraus operators rebuilt from the Choi matrix give the same map
        """
        rng = np.random.default_rng(2)
        C = randomChannel(2, 3, 2, rng)
        rebuilt = QuantumChannel(krausFromChoi(choiFromKraus(C), 2, 3))
        rho = randomState(2, rng)
        self.assertTrue(np.allclose(C.apply(rho), rebuilt.apply(rho), atol=1e-10))
        self.assertTrue(np.allclose(applyChoi(C.choi, rho, 2, 3), C.apply(rho), atol=1e-10))


    def test_nonCompletelyPositiveChoi ( self ):
        """
        Test that a Choi matrix with a negative eigenvalue is rejected
        """
        self.assertRaises(ValueError, krausFromChoi, -np.eye(4), 2, 2)


    def test_applyOnFactor ( self ):
        """
        Test that acting on one factor of a product leaves the other untouched
        """
        rng = np.random.default_rng(4)
        C = amplitudeDamping(0.3)
        rhoA = randomState(2, rng)
        rhoB = randomState(3, rng)
        out = C.apply(np.kron(rhoB, rhoA), 1, [3, 2])
        self.assertTrue(np.allclose(out, np.kron(rhoB, C.apply(rhoA)), atol=1e-12))
        self.assertRaises(ValueError, C.apply, np.eye(3))


    def test_powerAndCompose ( self ):
        """
        Test tensor powers and composition on product inputs
        """
        rng = np.random.default_rng(6)
        C = depolarizing(2, 0.2)
        rho = randomState(2, rng)
        C2 = C.power(2)
        self.assertEqual(C2.dimIn, 4)
        self.assertTrue(np.allclose(C2.apply(np.kron(rho, rho)), np.kron(C.apply(rho), C.apply(rho)), atol=1e-10))
        twice = C.compose(C)
        self.assertTrue(np.allclose(twice.apply(rho), C.apply(C.apply(rho)), atol=1e-10))
        self.assertRaises(ValueError, C.compose, randomChannel(2, 3, 1, rng))


    def test_dictRoundTrip ( self ):
        """
        Test that the JSON document reproduces the channel
        """
        C = amplitudeDamping(0.25)
        again = QuantumChannel.fromDict(C.toDict())
        self.assertTrue(np.allclose(again.choi, C.choi))
        self.assertRaises(ValueError, QuantumChannel.fromDict, {"dim_in": 2})
        self.assertRaises(ValueError, QuantumChannel.fromDict, {"dim_in": 3, "dim_out": 2, "kraus": [[[1, 0], [0, 1]]]})


    def test_adjointDuality ( self ):
        """
        Test tr[Z E(rho)] = tr[E^dag(Z) rho]
        """
        rng = np.random.default_rng(8)
        C = randomChannel(3, 2, 2, rng)
        rho = randomState(3, rng)
        Z = randomState(2, rng)
        self.assertAlmostEqual(np.trace(Z @ C.apply(rho)).real, np.trace(C.applyAdjoint(Z) @ rho).real)


    def test_replacementOutput ( self ):
        """
        Test that the erasure channel always prepares |+>
        """
        C = erasureToPlus()
        plus = np.full((2, 2), 0.5)
        self.assertTrue(np.allclose(C.apply(np.diag([1.0, 0.0])), plus))
        self.assertTrue(np.allclose(C.apply(np.diag([0.0, 1.0])), plus))


class TestDilations ( unittest.TestCase ):

    def test_stinespringReproduces ( self ):
        """
        Test that the minimal Stinespring isometry reproduces the channel
        """
        rng = np.random.default_rng(10)
        C = randomChannel(2, 2, 3, rng)
        V = stinespring(C)
        self.assertEqual(V.dimEnv, 3)
        rho = randomState(2, rng)
        self.assertTrue(np.allclose(V.apply(rho), C.apply(rho), atol=1e-10))
        self.assertAlmostEqual(np.trace(V.complementary(rho)).real, 1.0)


    def test_stinespringNeedsTracePreserving ( self ):
        """
        Test that trace non-increasing maps cannot be dilated directly
        """
        self.assertRaises(ValueError, stinespring, QuantumChannel([np.diag([1.0, 0.5])]))


    def test_covariance ( self ):
        """
        Test covariance of damping and dephasing but not the Hadamard gate
        """
        H = np.diag([0.0, 1.0])
        self.assertTrue(isTimeCovariant(amplitudeDamping(0.4), H))
        self.assertTrue(isTimeCovariant(dephasing(2), H))
        self.assertFalse(isTimeCovariant(hadamardChannel(), H))
        self.assertLess(sampledCovarianceCheck(amplitudeDamping(0.4), H), 1e-9)
        self.assertGreater(sampledCovarianceCheck(hadamardChannel(), H), 1e-3)


    def test_covariantDilation ( self ):
        """
        Test that the covariant dilation conserves energy and reproduces the channel
        """
        rng = np.random.default_rng(12)
        H = np.diag([0.0, 1.0])
        C = amplitudeDamping(0.4)
        dilation = covariantStinespring(C, H)
        self.assertLess(dilation.energyResidual(), 1e-8)
        self.assertLess(dilationReproduces(dilation, C, rng), 1e-9)
        self.assertAlmostEqual(dilation.hamEnv[dilation.zeroIndex, dilation.zeroIndex].real, 0.0)
        W = dilation.isometry()
        self.assertTrue(np.allclose(W.conj().T @ W, np.eye(2), atol=1e-10))


    def test_notCovariantRaises ( self ):
        """
        Test that dilating a non-covariant channel raises NotCovariantError
        """
        self.assertRaises(NotCovariantError, covariantStinespring, hadamardChannel(), np.diag([0.0, 1.0]))


class TestDiamond ( unittest.TestCase ):

    def test_identityDistanceZero ( self ):
        """
        Test that a channel has zero diamond distance to itself
        """
        C = amplitudeDamping(0.3)
        self.assertLess(diamondDistance(C, C), 1e-5)


    def test_orthogonalUnitaries ( self ):
        """
        Test that the identity and a Pauli Z are perfectly distinguishable
        """
        Z = unitaryChannel(np.diag([1.0, -1.0]))
        self.assertAlmostEqual(diamondDistance(identityChannel(2), Z), 1.0, places=4)


    def test_partialDephasing ( self ):
        """
        Test that partial dephasing with strength p sits at distance p/2
        """
        p = 0.6
        self.assertAlmostEqual(diamondDistance(identityChannel(2), dephasing(2, p)), p/2, places=4)


    def test_sampledLowerBound ( self ):
        """
        Test that the sampled lower bound does not exceed the SDP value
        """
        rng = np.random.default_rng(14)
        A = depolarizing(2, 0.5)
        B = amplitudeDamping(0.5)
        exact = diamondDistance(A, B)
        self.assertLessEqual(sampledDiamondLowerBound(A, B, rng, 50), exact + 1e-5)


#if __name__ == '__main__':
#    unittest.main()
