import numpy as np


class Certificate:
    """
    Numerical check of one property of a typicality construction.

    Attributes
    ----------
    n : int
    delta : float
    x : float or None
        Entropy threshold of a smoothing operator, if any.
    property : str
        Name of the checked property, e.g. ``'i'``, ``'ii'``, ``'iii'``,
        ``'gamma'`` or ``'closeness'``.
    bound : float
    measured : float
    sense : str
        ``'le'`` when the property reads ``measured <= bound`` and ``'ge'``
        for ``measured >= bound``.
    passed : bool
    extra : dict
        Measured constants reported alongside (e.g. ``c_n``).
    """

    def __init__ ( self, n, delta, x, theProperty, theBound, theMeasured, theSense='le', theTol=1e-9, theExtra=None ):
        assert(theSense in ('le', 'ge')), 'Certificate sense must be le or ge'
        self.n = n
        self.delta = float(delta)
        self.x = None if x is None else float(x)
        self.property = theProperty
        self.bound = float(theBound)
        self.measured = float(theMeasured)
        self.sense = theSense
        self.extra = dict(theExtra or {})
        if theSense == 'le':
            self.passed = bool(self.measured <= self.bound + theTol)
        else:
            self.passed = bool(self.measured >= self.bound - theTol)

    def __repr__ ( self ):
        return "Certificate(property={}, n={}, measured={:.6g}, bound={:.6g}, pass={})".format(self.property, self.n, self.measured, self.bound, self.passed)

    def toDict ( self ):
        doc = {"n": self.n,
               "delta": self.delta,
               "x": self.x,
               "property": self.property,
               "bound": _jsonFloat(self.bound),
               "measured": _jsonFloat(self.measured),
               "pass": self.passed}
        doc.update({k: _jsonFloat(v) for k, v in self.extra.items()})
        return doc


def _jsonFloat ( value ):
    if isinstance(value, (float, np.floating)) and not np.isfinite(value):
        return "inf" if value > 0 else "-inf"
    return float(value) if isinstance(value, (float, np.floating, int, np.integer)) and not isinstance(value, bool) else value
