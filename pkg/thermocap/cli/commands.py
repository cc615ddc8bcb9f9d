import argparse
import concurrent.futures
import csv
import io
import json
import sys
import numpy as np

from .RunConfig import RunConfig, subcommands
from ..Errors import SolverError
from ..capacity.coherentRelativeEntropy import (aepScan, coherentRelativeEntropy, counterexampleBound,
                                                counterexampleClosedForm, counterexampleInstance, universalWorkCost)
from ..capacity.mirrorAscent import thermodynamicCapacity
from ..channels.QuantumChannel import QuantumChannel
from ..entropies.HypothesisTest import hypothesisTesting
from ..numerics.linearAlgebra import kronPower
from ..protocols.coherence import iidFixedInputImplementation
from ..protocols.construction3 import construction3Assembly, ncopyErasureTrivialH
from ..protocols.lemmas import utilityLemmaChecks
from ..protocols.singleShot import singleShotCovariantProcess, singleShotErasure
from ..schurweyl.SchurBlock import blockWeight
from ..schurweyl.YoungDiagram import youngDiagrams
from ..thermo.GammaSpec import GammaSpec, operatorFromDict
from ..typicality.Certificate import _jsonFloat
from ..typicality.constructions import construction2Map
from ..typicality.projectors import conditionalSizeConstant, conditionalSizeRate, universalConditionalTypicalProjector


# Result keys holding work in nats, rescaled by 1/beta with --units kT
workKeys = ('T', 'capacity_nats', 'raw_capacity_nats', 'bias_bound_nats', 'value', 'value_nats', 'work_nats', 'per_copy', 'rate', 'limit',
            'w_before', 'w_after', 'workIdeal', 'workBound', 'target', 'gap')


def _loadJson ( thePath, theLabel ):
    try:
        with open(thePath, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as err:
        raise ValueError("{} file {} is not valid JSON: {}".format(theLabel, thePath, err))
    except OSError as err:
        raise ValueError("Cannot read {} file {}: {}".format(theLabel, thePath, err))


def _require ( config, theField, theFlag ):
    value = getattr(config, theField)
    if value is None:
        raise ValueError("Subcommand '{}' needs {}.".format(config.subcommand, theFlag))
    return value


def _channel ( config ):
    return QuantumChannel.fromDict(_loadJson(_require(config, "channel", "--channel"), "Channel"))


def _operator ( thePath, theLabel ):
    return operatorFromDict(_loadJson(thePath, theLabel))


def _hamiltonians ( config, dimIn, dimOut ):
    hIn = _operator(config.hamiltonian, "Hamiltonian") if config.hamiltonian else np.zeros((dimIn, dimIn))
    if config.hamiltonianOut:
        hOut = _operator(config.hamiltonianOut, "Hamiltonian")
    else:
        hOut = hIn if dimIn == dimOut else np.zeros((dimOut, dimOut))
    if hIn.shape != (dimIn, dimIn) or hOut.shape != (dimOut, dimOut):
        raise ValueError("Hamiltonian dimensions {} and {} do not match the channel ({} -> {}).".format(hIn.shape, hOut.shape, dimIn, dimOut))
    return hIn, hOut


def _gammas ( config, E ):
    hIn, hOut = _hamiltonians(config, E.dimIn, E.dimOut)
    return GammaSpec.fromHamiltonian(hIn, config.beta), GammaSpec.fromHamiltonian(hOut, config.beta)


def _dims ( config ):
    return config.dims if config.dims is not None else [2, 2]


def runCapacity ( config ):
    E = _channel(config)
    gIn, gOut = _gammas(config, E)
    result = thermodynamicCapacity(E, gIn, gOut, theSeed=config.seed)
    doc = {"T": result.value}
    doc.update(result.toDict())
    return doc


def runCohrel ( config ):
    if config.energy is not None:
        E, gamma, sigma = counterexampleInstance(config.beta, config.energy)
        gIn = gOut = gamma
    else:
        E = _channel(config)
        gIn, gOut = _gammas(config, E)
        sigma = _operator(_require(config, "state", "--state"), "State")
    if config.scan:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.jobs) as pool:
            return aepScan(E, sigma, gIn, gOut, config.epsilon, config.n, config.route, config.delta, theMap=pool.map)
    result = coherentRelativeEntropy(E, sigma, gIn, gOut, config.epsilon)
    doc = {"value": result.value}
    doc.update(result.toDict())
    if config.energy is not None:
        doc["closed_form"] = counterexampleClosedForm(config.beta, config.energy)
        if 0.0 < config.epsilon <= 0.125:
            doc["work_lower_bound"], doc["dH_8eps"] = counterexampleBound(config.beta, config.energy, config.epsilon)
    return doc


def runWuniv ( config ):
    E = _channel(config)
    gIn, gOut = _gammas(config, E)
    w = universalWorkCost(E, gIn, gOut, config.epsilon, theCopies=config.n)
    return {"work_nats": w, "rate": w/config.n, "n": config.n, "epsilon": config.epsilon}


def runHyptest ( config ):
    rho = _operator(_require(config, "state", "--state"), "State")
    sigma = _operator(_require(config, "reference", "--reference"), "Reference")
    result = hypothesisTesting(rho, sigma, config.eta)
    return {"dH": result.dH,
            "dh": result.dh,
            "eta": config.eta,
            "min_value": result.minValue,
            "dual_value": result.dualValue,
            "mu": result.mu,
            "method": result.method}


def runSchur ( config ):
    rho = _operator(config.state, "State") if config.state else None
    d = rho.shape[0] if rho is not None else _dims(config)[0]
    rows = []
    for lam in youngDiagrams(config.n, d):
        entry = {"rows": list(lam.rows),
                 "dim_symmetric": lam.hookLengthDimension(),
                 "dim_unitary": lam.weylDimension(d),
                 "entropy": lam.normalizedEntropy()}
        if rho is not None:
            entry["weight"] = blockWeight(lam, rho)
        rows.append(entry)
    return {"n": config.n, "d": d, "diagrams": rows}


def runTypicality ( config ):
    dA, dB = _dims(config)
    P = universalConditionalTypicalProjector(config.s, config.delta, config.n, dA, dB)
    doc = {"rank": float(np.real(np.trace(P))),
           "c_n": conditionalSizeConstant(P, config.s, config.delta, config.n, dA, dB),
           "size_rate": conditionalSizeRate(P, dA, dB, config.n),
           "threshold": config.s + 2.0*config.delta}
    if config.state:
        rho = _operator(config.state, "State")
        doc["iid_weight"] = float(np.real(np.trace(P @ kronPower(rho, config.n))))
    return doc


def runErasure ( config ):
    dA, dB = _dims(config)
    states = [_operator(config.state, "State")] if config.state else None
    report = ncopyErasureTrivialH(config.s, config.delta, config.n, config.m, states, dA, dB, config.seed)
    return report.toDict()


def runConstruct2 ( config ):
    E = _channel(config)
    gIn, gOut = _gammas(config, E)
    _, certificates = construction2Map(E, gIn, gOut, config.n, config.delta, theSeed=config.seed)
    return {"n": config.n, "delta": config.delta, "certificates": [c.toDict() for c in certificates]}


def runConstruct3 ( config ):
    E = _channel(config)
    hIn, _ = _hamiltonians(config, E.dimIn, E.dimOut)
    _, _, report = construction3Assembly(E, hIn, config.beta, config.n, config.delta, theSeed=config.seed)
    return report.toDict()


def runSingleshot ( config ):
    state = _operator(_require(config, "state", "--state"), "State")
    if config.channel:
        E = _channel(config)
        hIn, _ = _hamiltonians(config, E.dimIn, E.dimOut)
        report, _ = singleShotCovariantProcess(E, hIn, config.beta, state, config.epsilon)
        return report.toDict()
    dS, dM = _dims(config)
    hS = _operator(config.hamiltonian, "Hamiltonian") if config.hamiltonian else None
    hM = _operator(config.hamiltonianOut, "Hamiltonian") if config.hamiltonianOut else None
    report, _ = singleShotErasure(state, dS, dM, hS, hM, config.beta, config.epsilon)
    return report.toDict()


def runIidfixed ( config ):
    E = _channel(config)
    hIn, hOut = _hamiltonians(config, E.dimIn, E.dimOut)
    sigma = _operator(_require(config, "state", "--state"), "State")
    report, _ = iidFixedInputImplementation(E, sigma, hIn, hOut, config.beta, config.n, config.delta, config.theta, config.xUnit)
    return report.toDict()


def runLemmas ( config ):
    return utilityLemmaChecks(config.samples, config.seed, config.tol)


handlers = {"capacity": runCapacity,
            "cohrel": runCohrel,
            "wuniv": runWuniv,
            "hyptest": runHyptest,
            "schur": runSchur,
            "typicality": runTypicality,
            "erasure": runErasure,
            "construct2": runConstruct2,
            "construct3": runConstruct3,
            "singleshot": runSingleshot,
            "iidfixed": runIidfixed,
            "lemmas": runLemmas}


def _plain ( value ):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return _jsonFloat(value)


def _inUnits ( value, theScale ):
    if isinstance(value, dict):
        return {k: (v*theScale if k in workKeys and isinstance(v, float) else _inUnits(v, theScale)) for k, v in value.items()}
    if isinstance(value, list):
        return [_inUnits(v, theScale) for v in value]
    return value


def presentResult ( theResult, config ):
    """
    Result document with units applied and the run configuration attached.
    """
    doc = _plain(theResult)
    if config.units == 'kT':
        if config.beta <= 0.0:
            raise ValueError("Units of kT need a positive beta.")
        doc = _inUnits(doc, 1.0/config.beta)
    doc["units"] = config.units
    doc["config"] = config.toDict()
    return doc


def render ( theDocument, config ):
    if config.format == 'json':
        return json.dumps(theDocument, sort_keys=True) + "\n"
    rows = theDocument.get("rows")
    if not rows:
        raise ValueError("CSV output is only available for scan tables (use --scan).")
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=sorted(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return out.getvalue()


def buildParser ( ):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Run configuration JSON; replaces all other flags')
    common.add_argument('--channel', help='Channel JSON {"dim_in", "dim_out", "kraus"}')
    common.add_argument('--hamiltonian', help='Input (or system) Hamiltonian JSON {"diag"} or {"matrix"}')
    common.add_argument('--hamiltonian-out', dest='hamiltonianOut', help='Output (or memory) Hamiltonian JSON')
    common.add_argument('--state', help='State JSON')
    common.add_argument('--reference', help='Alternative hypothesis state JSON for hyptest')
    common.add_argument('--dims', type=int, nargs=2, help='Bipartition dA dB')
    common.add_argument('--beta', type=float)
    common.add_argument('--eps', '--epsilon', dest='epsilon', type=float)
    common.add_argument('--eta', type=float)
    common.add_argument('--delta', type=float)
    common.add_argument('--theta', type=float)
    common.add_argument('--n', type=int)
    common.add_argument('--s', type=float)
    common.add_argument('--m', type=float)
    common.add_argument('--E1', dest='energy', type=float, help='Excited energy of the built-in counterexample')
    common.add_argument('--x-unit', dest='xUnit', type=float)
    common.add_argument('--scan', action='store_true', default=None)
    common.add_argument('--route', choices=('sdp', 'constructive'))
    common.add_argument('--samples', type=int)
    common.add_argument('--seed', type=int)
    common.add_argument('--tol', type=float)
    common.add_argument('--units', choices=('nats', 'kT'))
    common.add_argument('--output')
    common.add_argument('--format', choices=('json', 'csv'))
    common.add_argument('--jobs', type=int)

    parser = argparse.ArgumentParser(prog='thermocap', description='Thermodynamic cost measures of quantum channels.')
    sub = parser.add_subparsers(dest='subcommand', required=True)
    for name in subcommands:
        sub.add_parser(name, parents=[common])
    return parser


def run ( argv=None ):
    """
    Execute one command line.

    Returns
    -------
    int
        0 on success, 2 on invalid input, 3 when a solver fails.
    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 0 if err.code in (0, None) else 2

    try:
        if args.config:
            with open(args.config, 'r') as f:
                config = RunConfig.fromJson(f.read())
        else:
            config = RunConfig.fromNamespace(args)
        text = render(presentResult(handlers[config.subcommand](config), config), config)
        if config.output:
            with open(config.output, 'w') as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    except SolverError as err:
        sys.stderr.write("error: {}\n".format(err))
        return 3
    except (ValueError, AssertionError, OSError) as err:
        sys.stderr.write("error: {}\n".format(err))
        return 2
    return 0
