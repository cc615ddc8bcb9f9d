from thermocap.protocols.lemmas import gentleMeasurement, pinchingResidual, povmControlledUnitary, utilityLemmaChecks
from thermocap.protocols.dilations import completeToUnitary, noflagBound, noflagBoundCheck, postSelectedBlock
from thermocap.protocols.PgmDecoder import prettyGoodMeasurement
from thermocap.protocols.ErasureInstance import ErasureInstance, cappedLnRank, erasureDimension, integerAncillas
from thermocap.protocols.conditionalErasure import conditionalErasureThermalOp, conditionalErasureUnitary, shiftOperator
from thermocap.protocols.singleShot import dephaseInEnergy, singleShotCovariantProcess, singleShotErasure
from thermocap.protocols.construction3 import blockedPower, construction3Assembly, ncopyErasureTrivialH
from thermocap.protocols.coherence import CoherenceLadder, flattenHamiltonian, flatteningCheck, iidFixedInputImplementation
from thermocap.channels.channelLibrary import dephasing, hadamardChannel, identityChannel
from thermocap.numerics.linearAlgebra import kronPower
from thermocap.numerics.randomInstances import randomPsd
from thermocap.Errors import NotCovariantError, PreconditionError, SizeGuardError
import numpy as np
import unittest
import warnings
import json
import os

def _correlatedQutrits ( ):
    rho = np.zeros((9, 9))
    for k in range(3):
        rho[4*k, 4*k] = 1.0/3.0
    return rho


class TestUtilityLemmas ( unittest.TestCase ):

    def test_randomizedChecks ( self ):
        """
        Test that pinching, gentle measurement and controlled unitaries hold on samples
        """
        report = utilityLemmaChecks(theSamples=20, theSeed=1)
        self.assertTrue(report["pinching"]["pass"])
        self.assertTrue(report["gentle"]["pass"])
        self.assertTrue(report["controlled"]["pass"])
        self.assertEqual(report["samples"], 20)


    def test_gentleMeasurementOfCertainOutcome ( self ):
        """
        Test that an outcome of probability one leaves the state alone
        """
        rho = np.diag([0.6, 0.4])
        distance, bound = gentleMeasurement(rho, np.eye(2))
        self.assertLess(distance, 1e-5)
        self.assertAlmostEqual(bound, 0.0)


    def test_pinching ( self ):
        """
        Test the pinching inequality for two diagonal projectors
        """
        rng = np.random.default_rng(2)
        T = randomPsd(2, rng)
        self.assertGreaterEqual(pinchingResidual([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], T), -1e-10)


    def test_controlledUnitaryRejectsOverfullEffects ( self ):
        """
        Test that effects summing above the identity are refused
        """
        self.assertRaises(ValueError, povmControlledUnitary, [np.eye(2), np.eye(2)], [np.eye(2), np.eye(2)])
        self.assertRaises(ValueError, povmControlledUnitary, [np.eye(2)], [])
        W = povmControlledUnitary([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])], [np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]])])
        self.assertTrue(np.allclose(W.conj().T @ W, np.eye(4)))


class TestDilations ( unittest.TestCase ):

    def test_plainDilation ( self ):
        """
        Test that the flagged dilation is unitary and post-selects to W
        """
        W = np.array([[0.5, 0.2], [0.0, 0.3]])
        U, report = completeToUnitary(W)
        self.assertLess(report["unitarity"], 1e-9)
        self.assertLess(report["blockResidual"], 1e-9)
        self.assertTrue(np.allclose(postSelectedBlock(U), W))


    def test_energyPreservingDilation ( self ):
        """
        Test that an energy-diagonal contraction dilates to an energy-preserving unitary
        """
        H = np.diag([0.0, 1.0])
        U, report = completeToUnitary(np.diag([0.5, 0.8]), 'energy_preserving', H)
        self.assertLess(report["energyResidual"], 1e-9)
        self.assertLess(report["blockResidual"], 1e-9)
        self.assertEqual(U.shape, (4, 4))


    def test_invalidDilations ( self ):
        """
        Test that non-contractions, missing Hamiltonians and energy changes are rejected
        """
        H = np.diag([0.0, 1.0])
        self.assertRaises(ValueError, completeToUnitary, 2.0*np.eye(2))
        self.assertRaises(ValueError, completeToUnitary, np.eye(2), 'energy_preserving')
        self.assertRaises(ValueError, completeToUnitary, np.array([[0.0, 0.5], [0.0, 0.0]]), 'energy_preserving', H)
        self.assertRaises(ValueError, completeToUnitary, np.eye(2), 'unitary')
        self.assertRaises(ValueError, completeToUnitary, 0.5*np.eye(2), 'energy_preserving_noflag', H, 1.5)


    def test_noflagDilation ( self ):
        """
        Test the flag-free dilation bound on a near-unitary contraction
        """
        H = np.diag([0.0, 1.0])
        W = 0.95*np.eye(2)
        U, report = completeToUnitary(W, 'energy_preserving_noflag', H, 0.1)
        self.assertTrue(np.allclose(U, np.eye(2)))
        self.assertAlmostEqual(report["bound"], noflagBound(0.1))
        check = noflagBoundCheck(W, H, 0.1, np.random.default_rng(3), 20)
        self.assertTrue(check["pass"])


class TestPgmDecoder ( unittest.TestCase ):

    def test_orthogonalElements ( self ):
        """
        Test that orthogonal projectors are decoded perfectly
        """
        decoder = prettyGoodMeasurement([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        self.assertEqual(len(decoder), 2)
        self.assertLess(decoder.completenessResidual(), 1e-12)
        self.assertAlmostEqual(decoder.successProbability(0, np.diag([1.0, 0.0])), 1.0)
        self.assertGreaterEqual(decoder.hayashiNagaokaResidual(0), -1e-9)


    def test_remainderOnKernel ( self ):
        """
        Test that the remainder is the projector onto the kernel
        """
        decoder = prettyGoodMeasurement([np.diag([0.5, 0.0])])
        self.assertTrue(np.allclose(decoder.effects[0], np.diag([1.0, 0.0])))
        self.assertTrue(np.allclose(decoder.remainder, np.diag([0.0, 1.0])))
        self.assertLess(decoder.completenessResidual(), 1e-12)
        self.assertRaises(ValueError, prettyGoodMeasurement, [np.diag([1.0, -0.5])])


    def test_hayashiNagaokaRandomInstances ( self ):
        """
        Test the operator inequality on one hundred random families of effects below the identity
        """
        rng = np.random.default_rng(21)
        for k in range(100):
            d = 2 + k % 3
            count = 1 + k % 4
            elements = []
            for _ in range(count):
                L = randomPsd(d, rng, int(rng.integers(1, d + 1)))
                elements.append(rng.uniform(0.1, 1.0)*L/np.max(np.linalg.eigvalsh(L)))
            decoder = prettyGoodMeasurement(elements)
            self.assertLess(decoder.completenessResidual(), 1e-9)
            for j in range(count):
                self.assertGreaterEqual(decoder.hayashiNagaokaResidual(j), -1e-9)


class TestConditionalErasure ( unittest.TestCase ):

    def test_ancillaHelpers ( self ):
        """
        Test ancilla counts, caps and register dimensions
        """
        self.assertEqual(integerAncillas(np.log(3.0)), 3)
        self.assertRaises(ValueError, integerAncillas, 0.5)
        self.assertEqual(erasureDimension(2, 2, 2), 64)
        self.assertEqual(cappedLnRank(0.0), 0.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            self.assertAlmostEqual(cappedLnRank(np.log(20.0)), np.log(8.0))
            self.assertAlmostEqual(cappedLnRank(np.log(8.0), 2, 2), np.log(6.0))


    def test_instanceConstants ( self ):
        """
        Test the measured constants of a perfectly correlated qubit pair
        """
        rho = np.diag([0.5, 0.0, 0.0, 0.5])
        P = np.diag([1.0, 0.0, 0.0, 1.0])
        inst = ErasureInstance([rho], 2, 2, P, 0.0)
        self.assertEqual(inst.ancillas, 1)
        self.assertAlmostEqual(inst.kappa, 0.0)
        self.assertAlmostEqual(inst.kappaPrime, 0.5)
        self.assertAlmostEqual(inst.bound, 2.0)


    def test_invalidInstances ( self ):
        """
        Test that bad tests and energy-changing tests are rejected
        """
        rho = np.diag([0.5, 0.0, 0.0, 0.5])
        self.assertRaises(ValueError, ErasureInstance, [rho], 2, 2, 2.0*np.eye(4), 0.0)
        plus = np.full((2, 2), 0.5)
        self.assertRaises(PreconditionError, ErasureInstance, [rho], 2, 2, np.kron(plus, np.eye(2)), 0.0, np.diag([0.0, 1.0]))


    def test_shiftOperator ( self ):
        """
        Test that SHIFT(x) adds x modulo r
        """
        S = shiftOperator(1, 3)
        self.assertTrue(np.allclose(S @ np.array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0]))
        self.assertTrue(np.allclose(S @ np.array([0.0, 0.0, 1.0]), [1.0, 0.0, 0.0]))


    def test_unitaryAndThermalOperation ( self ):
        """
        Test that a single ancilla swaps the system out exactly
        """
        rho = np.diag([0.5, 0.0, 0.0, 0.5])
        inst = ErasureInstance([rho], 2, 2, np.diag([1.0, 0.0, 0.0, 1.0]), 0.0)
        W, report = conditionalErasureUnitary(inst, 'never')
        self.assertIsNone(W)
        self.assertAlmostEqual(report["worstOverlap"], 1.0, places=8)
        self.assertTrue(report["pass"])
        W, report = conditionalErasureUnitary(inst)
        self.assertEqual(W.shape, (16, 16))
        self.assertLess(report["blockResidual"], 1e-9)
        self.assertAlmostEqual(report["directOverlap"][0], 1.0, places=6)
        _, T, result, ledger = conditionalErasureThermalOp(inst)
        self.assertGreater(min(result["fidelity"]), 1.0 - 1e-6)
        self.assertTrue(result["gibbs"]["pass"])
        self.assertAlmostEqual(ledger.total, 0.0)


class TestSingleShot ( unittest.TestCase ):

    def test_dephaseInEnergy ( self ):
        """
        Test that coherences between energy levels are removed
        """
        A = np.full((2, 2), 0.5)
        self.assertTrue(np.allclose(dephaseInEnergy(A, np.diag([0.0, 1.0])), np.diag([0.5, 0.5])))
        self.assertTrue(np.allclose(dephaseInEnergy(A, np.zeros((2, 2))), A))


    def test_correlatedQutritErasure ( self ):
        """
        Test work extraction from a perfectly correlated qutrit pair
        """
        report, work = singleShotErasure(_correlatedQutrits(), 3, 3, epsilon=0.45)
        # D_h = ln(9/1.65) and floor(0.45 e^D_h) = 2
        self.assertAlmostEqual(report.extra["dh"], np.log(9.0/1.65), places=5)
        self.assertAlmostEqual(report.extra["mIdeal"], np.log(2.0))
        self.assertAlmostEqual(report.extra["workIdeal"], -np.log(2.0))
        self.assertAlmostEqual(work, -np.log(2.0))
        self.assertTrue(report.extra["pass"])
        self.assertEqual(report.protocol, "singleshot-erasure")


    def test_erasurePreconditions ( self ):
        """
        Test coherent states, uncorrelated states and bad tolerances
        """
        plus = np.full((2, 2), 0.5)
        coherent = np.kron(plus, np.diag([1.0, 0.0]))
        self.assertRaises(PreconditionError, singleShotErasure, coherent, 2, 2, np.diag([0.0, 1.0]), None, 1.0, 0.45)
        self.assertRaises(PreconditionError, singleShotErasure, np.eye(4)/4, 2, 2, None, None, 1.0, 0.45)
        self.assertRaises(ValueError, singleShotErasure, np.eye(4)/4, 2, 2, None, None, 1.0, 1.5)


    def test_covariantDephasing ( self ):
        """
        Test the single-shot implementation of full qutrit dephasing
        """
        report, ledger = singleShotCovariantProcess(dephasing(3), np.zeros((3, 3)), 1.0, np.eye(3)/3, 0.45)
        self.assertAlmostEqual(report.extra["lnZE"], np.log(3.0))
        self.assertAlmostEqual(report.extra["dh"], np.log(9.0/1.65), places=5)
        self.assertAlmostEqual(report.extra["workIdeal"], np.log(1.5))
        self.assertAlmostEqual(ledger.total, np.log(1.5))
        self.assertTrue(report.extra["pass"])


    def test_covariantIdentity ( self ):
        """
        Test that the identity needs no environment and no erasure
        """
        H = np.diag([0.0, 1.0])
        report, ledger = singleShotCovariantProcess(identityChannel(2), H, 1.0, np.diag([0.7, 0.3]), 0.1)
        self.assertAlmostEqual(report.fidelity, 1.0, places=7)
        self.assertAlmostEqual(ledger.total, 0.0)
        self.assertAlmostEqual(report.extra["lnZX"], np.log(1.0 + np.exp(-1.0)))
        self.assertRaises(NotCovariantError, singleShotCovariantProcess, hadamardChannel(), H, 1.0, np.diag([0.7, 0.3]), 0.1)


class TestConstruction3 ( unittest.TestCase ):

    def test_blockedPower ( self ):
        """
        Test that blocking a product of product states gives the grouped product
        """
        a, b = np.diag([0.9, 0.1]), np.diag([0.6, 0.4])
        blocked = blockedPower(np.kron(a, b), 2, 2, 2)
        self.assertTrue(np.allclose(blocked, np.kron(kronPower(a, 2), kronPower(b, 2))))


    def test_thermalizingBranch ( self ):
        """
        Test that a small ancilla budget falls back to thermalizing the environment
        """
        E = dephasing(2)
        T, ledger, report = construction3Assembly(E, np.diag([0.0, 1.0]), 1.0, 1, 0.1, theCapacity=0.0)
        self.assertEqual(report.extra["erasure"], "thermalize")
        self.assertAlmostEqual(report.fidelity, 1.0)
        self.assertLess(report.extra["closeness"]["distance"], 1e-4)
        self.assertAlmostEqual(ledger.total, np.log(2.0))
        self.assertAlmostEqual(report.extra["rateGap"], np.log(2.0))
        self.assertEqual(T.dimIn, 2)


    def test_assemblyRefusals ( self ):
        """
        Test the covariance requirement and the copy limit
        """
        H = np.diag([0.0, 1.0])
        self.assertRaises(NotCovariantError, construction3Assembly, hadamardChannel(), H, 1.0, 1, 0.1, 0, 3, 0.0)
        self.assertRaises(SizeGuardError, construction3Assembly, dephasing(2), H, 1.0, 7, 0.1, 0, 3, 0.0)


    def test_ncopyErasure ( self ):
        """
        Test erasure of half a Bell pair with a single ancilla
        """
        psi = np.array([1.0, 0.0, 0.0, 1.0])/np.sqrt(2.0)
        report = ncopyErasureTrivialH(0.0, 0.1, 1, 0.0, theStates=[np.outer(psi, psi)])
        self.assertEqual(report.extra["ancillas"], 1)
        self.assertEqual(report.extra["erasure"], "thermal_operation")
        self.assertAlmostEqual(report.fidelity, 1.0, places=6)
        self.assertAlmostEqual(report.workNats, 0.0)


    @unittest.skipUnless(os.environ.get("THERMOCAP_LONG_TESTS"), "set THERMOCAP_LONG_TESTS to run the four-copy erasure")
    def test_ncopyErasureFourCopies ( self ):
        """
        Test four-copy erasure of Bell, classically correlated and mixed pairs against 1-(2 kappa + 4 kappa')
        """
        bell = np.full((4, 4), 0.0)
        bell[np.ix_([0, 3], [0, 3])] = 0.5
        classical = np.diag([0.5, 0.0, 0.0, 0.5])
        mixture = 0.5*bell + 0.5*classical
        report = ncopyErasureTrivialH(0.0, 0.1, 4, np.log(2.0), theStates=[bell, classical, mixture])
        self.assertEqual(report.extra["ancillas"], 2)
        self.assertGreaterEqual(report.fidelity, report.bound - 1e-9)


    def test_ncopyPreconditions ( self ):
        """
        Test that thresholds at ln d_S and oversized m are refused
        """
        self.assertRaises(PreconditionError, ncopyErasureTrivialH, np.log(2.0), 0.1, 1, 0.0)
        self.assertRaises(PreconditionError, ncopyErasureTrivialH, 0.0, 0.1, 1, np.log(2.0))


class TestCoherence ( unittest.TestCase ):

    def test_ladderOverlaps ( self ):
        """
        Test the shift overlaps of a flat ladder state
        """
        ladder = CoherenceLadder(1.0, 4, 2, 8)
        self.assertAlmostEqual(ladder.shiftOverlap(0), 1.0)
        self.assertAlmostEqual(ladder.shiftOverlap(1), 0.75)
        self.assertAlmostEqual(ladder.shiftOverlap(-2), 0.5)
        self.assertAlmostEqual(ladder.shiftOverlap(5), 0.0)
        self.assertEqual(ladder.toDict()["dim"], 8)


    def test_flatteningErrors ( self ):
        """
        Test that bad accuracies, windows and energies are rejected
        """
        H = np.diag([0.0, 1.0, 2.0])
        self.assertRaises(ValueError, flattenHamiltonian, H, (0.0, 2.0), 0.0, 1.0)
        self.assertRaises(ValueError, flattenHamiltonian, H, (2.0, 0.0), 0.5, 1.0)
        self.assertRaises(ValueError, flattenHamiltonian, np.diag([0.0, 3.0]), (0.0, 2.0), 0.5, 1.0)
        self.assertRaises(ValueError, flattenHamiltonian, np.diag([0.0, 0.5]), (0.0, 2.0), 0.5, 1.0)


    def test_flatteningBound ( self ):
        """
        Test exact energy conservation and the flattening distance bound
        """
        H = np.diag([0.0, 1.0, 2.0])
        U, ladder = flattenHamiltonian(H, (0.0, 2.0), 0.5, 1.0)
        self.assertLess(ladder.commutationResidual, 1e-12)
        self.assertLessEqual(ladder.bound, 0.5 + 1e-12)
        check = flatteningCheck(H, (0.0, 2.0), 0.5, 1.0, np.random.default_rng(4), 10)
        self.assertTrue(check["pass"])
        self.assertEqual(check["dimC"], ladder.dim)


    def test_fixedInputIdentity ( self ):
        """
        Test the fixed-input pipeline on the identity with full energy windows
        """
        H = np.diag([0.0, 1.0])
        report, ledger = iidFixedInputImplementation(identityChannel(2), np.diag([0.7, 0.3]), H, H, 1.0, 1, 1.0, 0.5)
        self.assertLess(report.extra["windowIn"]["distance"], 1e-5)
        self.assertAlmostEqual(report.extra["target"], 0.0, places=9)
        self.assertAlmostEqual(ledger.total, np.log(2.0))
        self.assertAlmostEqual(report.extra["gap"], np.log(2.0))
        self.assertTrue(report.extra["pass"])
        self.assertEqual(len(report.extra["ladders"]), 2)
        doc = json.loads(report.toJson())
        self.assertEqual(doc["protocol"], "iid-fixed-input")
        self.assertAlmostEqual(doc["work_nats"], np.log(2.0))


#if __name__ == '__main__':
#    unittest.main()
