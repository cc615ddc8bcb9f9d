import json

from ..typicality.Certificate import _jsonFloat


class ProtocolReport:
    """
    Outcome of a thermodynamic protocol run.

    Attributes
    ----------
    protocol : str
    params : dict
    fidelity : float
        Worst achieved fidelity over the tested inputs.
    bound : float
        Fidelity guaranteed for the run.
    ledger : :class:`.WorkLedger`
    copies : int
        Number of copies the ledger refers to.
    process : :class:`.QuantumChannel` or None
        Effective work process, when one was built.
    extra : dict
        Measured constants and per-step checks.
    """

    def __init__ ( self, theProtocol, theParams, theFidelity, theBound, theLedger, theCopies=1, theProcess=None, theExtra=None ):
        self.protocol = theProtocol
        self.params = dict(theParams)
        self.fidelity = float(theFidelity)
        self.bound = float(theBound)
        self.ledger = theLedger
        self.copies = int(theCopies)
        self.process = theProcess
        self.extra = dict(theExtra or {})

    @property
    def workNats ( self ):
        return self.ledger.total

    @property
    def perCopy ( self ):
        return self.ledger.total/self.copies

    @property
    def passed ( self ):
        return bool(self.fidelity >= self.bound - 1e-9 and self.extra.get("pass", True))

    def toDict ( self ):
        return {"protocol": self.protocol,
                "params": {k: _jsonValue(v) for k, v in self.params.items()},
                "fidelity": _jsonFloat(self.fidelity),
                "bound": _jsonFloat(self.bound),
                "work_nats": _jsonFloat(self.workNats),
                "per_copy": _jsonFloat(self.perCopy),
                "ledger": self.ledger.toList(),
                "extra": {k: _jsonValue(v) for k, v in self.extra.items()}}

    def toJson ( self ):
        return json.dumps(self.toDict(), sort_keys=True)


def _jsonValue ( value ):
    if isinstance(value, dict):
        return {k: _jsonValue(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonValue(v) for v in value]
    return _jsonFloat(value)
