from thermocap.cli.RunConfig import RunConfig
from thermocap.cli import commands
from thermocap.channels.channelLibrary import erasureToPlus
from thermocap.Errors import SolverError
from thermocap.numerics.SdpProblem import SdpSolution
from unittest import mock
import numpy as np
import unittest
import contextlib
import tempfile
import json
import io
import os

def _writeJson ( theDir, theName, theDoc ):
    path = os.path.join(theDir, theName)
    with open(path, 'w') as f:
        json.dump(theDoc, f)
    return path


def _runQuiet ( argv ):
    with contextlib.redirect_stderr(io.StringIO()), contextlib.redirect_stdout(io.StringIO()):
        return commands.run(argv)


class TestRunConfig ( unittest.TestCase ):

    def test_jsonRoundTrip ( self ):
        """
        Test that a configuration echoes back unchanged
        """
        config = RunConfig('cohrel', energy=1.0, epsilon=0.05, scan=True, n=2, dims=[2, 3])
        again = RunConfig.fromJson(config.toJson())
        self.assertEqual(again.toDict(), config.toDict())
        self.assertEqual(again.subcommand, 'cohrel')
        self.assertEqual(again.beta, 1.0)


    def test_invalidFields ( self ):
        """
        Test that unknown names and bad choices are rejected
        """
        self.assertRaises(ValueError, RunConfig, 'entropy')
        self.assertRaises(ValueError, RunConfig, 'capacity', temperature=1.0)
        self.assertRaises(ValueError, RunConfig, 'capacity', units='joules')
        self.assertRaises(ValueError, RunConfig, 'cohrel', format='xml')
        self.assertRaises(ValueError, RunConfig, 'cohrel', route='lp')
        self.assertRaises(ValueError, RunConfig, 'cohrel', n=0)
        self.assertRaises(AssertionError, RunConfig, 'typicality', dims=[2, 2, 2])


    def test_invalidDocuments ( self ):
        """
        Test that malformed configuration documents are rejected
        """
        self.assertRaises(ValueError, RunConfig.fromJson, "{not json")
        self.assertRaises(ValueError, RunConfig.fromJson, "[1, 2]")
        self.assertRaises(ValueError, RunConfig.fromDict, {"beta": 1.0})


class TestCommands ( unittest.TestCase ):

    def test_cohrelCounterexample ( self ):
        """
        Test the built-in counterexample through the command line
        """
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "result.json")
            self.assertEqual(_runQuiet(['cohrel', '--E1', '1', '--eps', '0', '--output', out]), 0)
            with open(out, 'r') as f:
                doc = json.load(f)
        self.assertAlmostEqual(doc["value"], -0.9334, places=3)
        self.assertAlmostEqual(doc["closed_form"], doc["value"], places=4)
        self.assertEqual(doc["units"], 'nats')
        self.assertEqual(doc["config"]["subcommand"], 'cohrel')


    def test_capacityInKt ( self ):
        """
        Test the capacity of a channel file and the kT rescaling
        """
        with tempfile.TemporaryDirectory() as tmp:
            channel = _writeJson(tmp, "channel.json", erasureToPlus().toDict())
            nats = os.path.join(tmp, "nats.json")
            kT = os.path.join(tmp, "kT.json")
            self.assertEqual(_runQuiet(['capacity', '--channel', channel, '--output', nats]), 0)
            self.assertEqual(_runQuiet(['capacity', '--channel', channel, '--beta', '2', '--units', 'kT', '--output', kT]), 0)
            with open(nats, 'r') as f:
                docNats = json.load(f)
            with open(kT, 'r') as f:
                docKt = json.load(f)
        self.assertAlmostEqual(docNats["T"], np.log(2), places=5)
        # Trivial Hamiltonians make the capacity independent of beta
        self.assertAlmostEqual(docKt["T"], np.log(2)/2.0, places=5)
        self.assertEqual(docKt["units"], 'kT')


    def test_hyptestAndConfigFile ( self ):
        """
        Test hypothesis testing driven by a configuration file
        """
        with tempfile.TemporaryDirectory() as tmp:
            state = _writeJson(tmp, "state.json", {"diag": [1.0, 0.0]})
            reference = _writeJson(tmp, "reference.json", {"diag": [0.5, 0.5]})
            out = os.path.join(tmp, "out.json")
            config = RunConfig('hyptest', state=state, reference=reference, eta=0.5, output=out)
            path = os.path.join(tmp, "config.json")
            with open(path, 'w') as f:
                f.write(config.toJson())
            self.assertEqual(_runQuiet(['hyptest', '--config', path]), 0)
            with open(out, 'r') as f:
                doc = json.load(f)
        self.assertAlmostEqual(doc["dH"], np.log(2), places=6)
        self.assertAlmostEqual(doc["dh"], np.log(4), places=6)


    def test_scanAsCsv ( self ):
        """
        Test that a scan table renders as CSV with one row per copy count
        """
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "scan.csv")
            self.assertEqual(_runQuiet(['cohrel', '--E1', '1', '--eps', '0.05', '--scan', '--n', '1', '--format', 'csv', '--output', out]), 0)
            with open(out, 'r') as f:
                lines = f.read().splitlines()
        self.assertEqual(lines[0], "distance,n,value")
        self.assertEqual(len(lines), 2)


    def test_schurAndLemmas ( self ):
        """
        Test the table subcommands on standard output
        """
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            self.assertEqual(commands.run(['schur', '--n', '3', '--dims', '2', '2']), 0)
        doc = json.loads(buffer.getvalue())
        self.assertEqual([row["rows"] for row in doc["diagrams"]], [[3], [2, 1]])
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            self.assertEqual(commands.run(['lemmas', '--samples', '5']), 0)
        self.assertTrue(json.loads(buffer.getvalue())["pinching"]["pass"])


    def test_exitCodes ( self ):
        """
        Test the exit codes for usage errors, invalid input and solver failures
        """
        self.assertEqual(_runQuiet(['bogus']), 2)
        self.assertEqual(_runQuiet(['capacity']), 2)
        self.assertEqual(_runQuiet(['capacity', '--channel', '/nonexistent/channel.json']), 2)
        self.assertEqual(_runQuiet(['schur', '--n', '2', '--format', 'csv']), 2)

        def failing ( config ):
            raise SolverError("status infeasible")
        with mock.patch.dict(commands.handlers, {"lemmas": failing}):
            self.assertEqual(_runQuiet(['lemmas']), 3)


    def test_inaccurateSolveExitCode ( self ):
        """
        Test that an inaccurate coherent relative entropy solve ends with exit code 3
        """
        inaccurate = SdpSolution('inaccurate', np.nan, np.nan, {}, {}, 'SCS')
        with mock.patch("thermocap.capacity.coherentRelativeEntropy.solveSdp", return_value=inaccurate):
            self.assertEqual(_runQuiet(['cohrel', '--E1', '10', '--eps', '0.01']), 3)


#if __name__ == '__main__':
#    unittest.main()
