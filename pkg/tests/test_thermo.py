from thermocap.thermo.GammaSpec import GammaSpec, gammaMatrix, gibbs, operatorFromDict, operatorToDict
from thermocap.thermo.BatteryState import BatteryState
from thermocap.thermo.WorkLedger import WorkLedger
from thermocap.thermo.workProcesses import effectiveWorkProcess, gibbsSubPreservationMargin, isGibbsSubPreserving, liftToGpm, thermalOperationCheck, thermalToPureCost
from thermocap.channels.channelLibrary import amplitudeDamping, erasureToPlus, identityChannel
from thermocap.numerics.randomInstances import randomState
import numpy as np
import unittest

class TestGammaSpec ( unittest.TestCase ):

    def test_fromHamiltonian ( self ):
        """
        Test Gamma, the partition function and the Gibbs state of a qubit
        """
        gammaSpec = GammaSpec.fromHamiltonian(np.diag([0.0, 1.0]), 2.0)
        Z = 1.0 + np.exp(-2.0)
        self.assertAlmostEqual(gammaSpec.partitionFunction(), Z)
        self.assertTrue(np.allclose(gammaSpec.gibbs(), np.diag([1.0, np.exp(-2.0)])/Z))
        self.assertTrue(gammaSpec.hasProvenance)
        self.assertTrue(np.allclose(gammaSpec.logGamma(), np.diag([0.0, -2.0])))


    def test_provenanceMismatch ( self ):
        """
        Test that a Gamma inconsistent with exp(-beta H) is rejected
        """
        self.assertRaises(ValueError, GammaSpec, np.eye(2), np.diag([0.0, 1.0]), 1.0)
        self.assertRaises(ValueError, GammaSpec, np.diag([1.0, -1.0]))
        self.assertRaises(ValueError, GammaSpec.fromHamiltonian, np.eye(2), -1.0)


    def test_tensorKeepsProvenance ( self ):
        """
        Test that tensor products at one temperature keep the Hamiltonian
        """
        a = GammaSpec.fromHamiltonian(np.diag([0.0, 1.0]), 1.0)
        b = GammaSpec.fromHamiltonian(np.diag([0.0, 0.5, 2.0]), 1.0)
        ab = a.tensor(b)
        self.assertTrue(ab.hasProvenance)
        self.assertAlmostEqual(ab.partitionFunction(), a.partitionFunction()*b.partitionFunction())
        self.assertFalse(a.tensor(GammaSpec.trivial(2)).hasProvenance)
        self.assertEqual(a.power(3).dim, 8)


    def test_zeroTraceGibbs ( self ):
        """
        Test that a zero Gamma has no Gibbs state
        """
        self.assertRaises(ValueError, gibbs, np.zeros((2, 2)))


    def test_operatorDocuments ( self ):
        """
        Test the diagonal and full-matrix operator documents
        """
        self.assertEqual(operatorToDict(np.diag([0.0, 1.5])), {"diag": [0.0, 1.5]})
        A = np.array([[1.0, 0.5j], [-0.5j, 0.0]])
        self.assertTrue(np.allclose(operatorFromDict(operatorToDict(A)), A))
        self.assertTrue(np.allclose(operatorFromDict({"matrix": [[1, 0], [0, 2]]}), np.diag([1.0, 2.0])))
        self.assertRaises(ValueError, operatorFromDict, {"eigs": [1]})
        self.assertRaises(ValueError, operatorFromDict, [1, 2])
        self.assertTrue(np.allclose(gammaMatrix(None, 3), np.eye(3)))


class TestBatteryAndLedger ( unittest.TestCase ):

    def test_batteryCharge ( self ):
        """
        Test rank, ln-rank and charge of a battery state
        """
        battery = BatteryState(8, 2)
        self.assertAlmostEqual(battery.lnRank, np.log(2))
        self.assertAlmostEqual(battery.charge, np.log(4))
        self.assertAlmostEqual(np.trace(battery.state()).real, 1.0)
        self.assertEqual(battery.supportBasis().shape, (8, 2))
        self.assertRaises(ValueError, BatteryState, 2, 3)


    def test_fromLnRankDeficit ( self ):
        """
        Test that a non-integer rank is floored and the deficit stored
        """
        battery = BatteryState.fromLnRank(8, np.log(3.5))
        self.assertEqual(battery.rank, 3)
        self.assertAlmostEqual(battery.deficit, np.log(3.5/3.0))
        self.assertRaises(ValueError, BatteryState.fromLnRank, 8, -1.0)


    def test_ledgerTotals ( self ):
        """
        Test that the ledger sums battery transitions and records deficits
        """
        ledger = WorkLedger()
        ledger.recordCost("reset", 0.7)
        ledger.record("extract", BatteryState(4, 4), BatteryState(4, 1))
        self.assertAlmostEqual(ledger.total, 0.7 - np.log(4))
        self.assertAlmostEqual(ledger.work("reset"), 0.7)
        ledger.record("floored", BatteryState.fromLnRank(4, np.log(2.5)), BatteryState(4, 2))
        labels = [entry["label"] for entry in ledger.toList()]
        self.assertIn("rounding-deficit:floored", labels)


    def test_ledgerJsonLines ( self ):
        """
        Test the JSON-lines ledger document
        """
        ledger = WorkLedger()
        ledger.recordCost("a", 1.0)
        ledger.recordCost("b", -0.25)
        other = WorkLedger()
        other.extend(ledger, "sub:")
        again = WorkLedger.fromJsonLines(other.toJsonLines())
        self.assertEqual(again.entries, other.entries)
        self.assertAlmostEqual(again.total, 0.75)
        self.assertEqual(again.entries[0][0], "sub:a")


class TestWorkProcesses ( unittest.TestCase ):

    def test_marginOfChannels ( self ):
        """
        Test Gibbs sub-preservation margins of unital and erasing channels
        """
        self.assertAlmostEqual(gibbsSubPreservationMargin(identityChannel(2), None, None), 0.0, places=9)
        # Erasure to |+> maps I to 2|+><+|, so the margin is ln 2 against I
        self.assertAlmostEqual(gibbsSubPreservationMargin(erasureToPlus(), None, None), np.log(2), places=9)
        self.assertTrue(isGibbsSubPreserving(identityChannel(2), None, None))
        self.assertFalse(isGibbsSubPreserving(erasureToPlus(), None, None))


    def test_dampingPreservesGibbs ( self ):
        """
        Test that zero-temperature damping sub-preserves any diagonal Gamma
        with a lower ground weight
        """
        gamma = GammaSpec.fromHamiltonian(np.diag([0.0, 1.0]), 1.0)
        C = amplitudeDamping(0.3)
        margin = gibbsSubPreservationMargin(C, gamma, gamma)
        self.assertGreater(margin, 0.0)
        self.assertAlmostEqual(margin, np.log(1.0 + 0.3*np.exp(-1.0)), places=9)


    def test_liftRecoversProcess ( self ):
        """
        Test that the effective process of a lifted map is the original map
        """
        rng = np.random.default_rng(7)
        T = erasureToPlus()
        Phi = liftToGpm(T, 0.0, np.log(2), 2)
        effective = effectiveWorkProcess(Phi, 2, BatteryState(2, 1), BatteryState(2, 2))
        rho = randomState(2, rng)
        self.assertTrue(np.allclose(effective.apply(rho), T.apply(rho), atol=1e-10))
        self.assertTrue(isGibbsSubPreserving(Phi, None, None))


    def test_liftBudget ( self ):
        """
        Test that the lift refuses budgets below the margin and fractional ranks
        """
        self.assertRaises(ValueError, liftToGpm, erasureToPlus(), 0.0, 0.0, 2)
        self.assertRaises(ValueError, liftToGpm, identityChannel(2), 0.0, 0.5, 2)
        self.assertRaises(ValueError, liftToGpm, identityChannel(2), 0.0, np.log(3), 2)


    def test_thermalToPureCost ( self ):
        """
        Test the cost of purifying a thermal qubit into its ground state
        """
        H = np.diag([0.0, 1.0])
        self.assertAlmostEqual(thermalToPureCost(H, 0.0, 1.0), np.log(1.0 + np.exp(-1.0)))
        self.assertAlmostEqual(thermalToPureCost(H, 1.0, 1.0), 1.0 + np.log(1.0 + np.exp(-1.0)))
        self.assertRaises(ValueError, thermalToPureCost, H, 0.5, 1.0)


    def test_thermalOperationCheck ( self ):
        """
        Test the audit of an energy-conserving swap
        """
        H = np.diag([0.0, 1.0, 1.0, 2.0])
        swap = np.eye(4)[[0, 2, 1, 3]]
        gamma = np.diag(np.exp(-np.diag(H)))/np.sum(np.exp(-np.diag(H)))
        self.assertTrue(thermalOperationCheck(swap, H, gamma)["pass"])
        flip = np.eye(4)[[1, 0, 2, 3]]
        self.assertFalse(thermalOperationCheck(flip, H, gamma)["pass"])


#if __name__ == '__main__':
#    unittest.main()
