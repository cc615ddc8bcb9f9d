import json

from .BatteryState import BatteryState


class WorkLedger:
    """
    Ordered record of battery charges across a protocol run.

    Each entry ``(label, w_before, w_after)`` consumes
    ``w_before - w_after`` pure nats of work; negative values are work
    extracted.

    Attributes
    ----------
    entries : list of tuple
    """

    def __init__ ( self ):
        self.entries = []

    def record ( self, theLabel, before, after ):
        """
        Record a battery transition.

        Parameters
        ----------
        theLabel : str
        before, after : float or :class:`.BatteryState`
            Charges (or battery states, whose charge is used).
        """
        wBefore = before.charge if isinstance(before, BatteryState) else float(before)
        wAfter = after.charge if isinstance(after, BatteryState) else float(after)
        self.entries.append((str(theLabel), wBefore, wAfter))
        for battery in (before, after):
            if isinstance(battery, BatteryState) and battery.deficit > 0.0:
                self.recordDeficit(theLabel, battery.deficit)

    def recordCost ( self, theLabel, theCost ):
        """
        Record a step that consumes ``theCost`` nats (an idealized battery
        discharge from ``theCost`` to zero).
        """
        self.entries.append((str(theLabel), float(theCost), 0.0))

    def recordDeficit ( self, theLabel, theDeficit ):
        """
        Record an integer-rank rounding deficit as a zero-work entry.
        """
        self.entries.append(("rounding-deficit:" + str(theLabel), float(theDeficit), float(theDeficit)))

    def extend ( self, other, thePrefix="" ):
        for label, wBefore, wAfter in other.entries:
            self.entries.append((thePrefix + label, wBefore, wAfter))

    @property
    def total ( self ):
        """
        Net work consumed, :math:`\\sum (w_{before} - w_{after})`.
        """
        return float(sum(wBefore - wAfter for _, wBefore, wAfter in self.entries))

    def work ( self, theLabel ):
        """
        Work consumed by all entries with the given label.
        """
        return float(sum(wBefore - wAfter for label, wBefore, wAfter in self.entries if label == theLabel))

    def toList ( self ):
        return [{"label": label, "w_before": wBefore, "w_after": wAfter} for label, wBefore, wAfter in self.entries]

    def toJsonLines ( self ):
        return "".join(json.dumps(entry, sort_keys=True) + "\n" for entry in self.toList())

    @classmethod
    def fromJsonLines ( cls, theText ):
        ledger = cls()
        for line in theText.splitlines():
            if line.strip():
                entry = json.loads(line)
                ledger.entries.append((entry["label"], float(entry["w_before"]), float(entry["w_after"])))
        return ledger
