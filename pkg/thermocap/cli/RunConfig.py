import json


subcommands = ('capacity', 'cohrel', 'wuniv', 'hyptest', 'schur', 'typicality', 'erasure',
               'construct2', 'construct3', 'singleshot', 'iidfixed', 'lemmas')


class RunConfig:
    """
    Reproducible description of one command-line run.

    Every field has a default so that a configuration echoes back
    unchanged through :meth:`toJson` and :meth:`fromJson`.

    Attributes
    ----------
    subcommand : str
        One of :data:`subcommands`.
    channel : str or None
        Path of a channel JSON document.
    hamiltonian, hamiltonianOut : str or None
        Paths of input and output Hamiltonian JSON documents; the output
        Hamiltonian defaults to the input one.
    state, reference : str or None
        Paths of operator JSON documents (the input state, and the
        alternative hypothesis for ``hyptest``).
    dims : list of int or None
        Bipartition :math:`(d_A, d_B)` of ``state`` when one is needed.
    beta, epsilon, eta, delta, theta : float
    n : int
    s, m : float
        Conditional-entropy threshold and extracted work of ``erasure``.
    energy : float or None
        :math:`E_1` of the built-in counterexample for ``cohrel``.
    xUnit : float
        Energy unit of the coherence ladders.
    scan : bool
        Emit the per-copy table for ``cohrel`` instead of a single value.
    route : str
        ``'sdp'`` or ``'constructive'`` scan route.
    samples : int
    seed : int
    tol : float
    units : str
        ``'nats'`` or ``'kT'``.
    output : str or None
        Output path; standard output when ``None``.
    format : str
        ``'json'`` or ``'csv'`` (tables only).
    jobs : int
        Worker threads for independent scan points.
    """

    defaults = {"channel": None,
                "hamiltonian": None,
                "hamiltonianOut": None,
                "state": None,
                "reference": None,
                "dims": None,
                "beta": 1.0,
                "epsilon": 0.1,
                "eta": 0.9,
                "delta": 0.1,
                "theta": 0.2,
                "n": 1,
                "s": 0.0,
                "m": 0.0,
                "energy": None,
                "xUnit": 1.0,
                "scan": False,
                "route": 'sdp',
                "samples": 100,
                "seed": 0,
                "tol": 1e-9,
                "units": 'nats',
                "output": None,
                "format": 'json',
                "jobs": 1}

    def __init__ ( self, theSubcommand, **kwargs ):
        if theSubcommand not in subcommands:
            raise ValueError("Unknown subcommand '{}'; choose one of {}.".format(theSubcommand, ", ".join(subcommands)))
        unknown = set(kwargs) - set(self.defaults)
        if unknown:
            raise ValueError("Unknown configuration fields: {}.".format(", ".join(sorted(unknown))))
        self.subcommand = theSubcommand
        for key, value in self.defaults.items():
            setattr(self, key, kwargs.get(key, value))
        self.beta = float(self.beta)
        self.epsilon = float(self.epsilon)
        self.eta = float(self.eta)
        self.delta = float(self.delta)
        self.theta = float(self.theta)
        self.n = int(self.n)
        self.s = float(self.s)
        self.m = float(self.m)
        self.xUnit = float(self.xUnit)
        self.scan = bool(self.scan)
        self.samples = int(self.samples)
        self.seed = int(self.seed)
        self.tol = float(self.tol)
        self.jobs = int(self.jobs)
        if self.energy is not None:
            self.energy = float(self.energy)
        if self.dims is not None:
            self.dims = [int(d) for d in self.dims]
            assert(len(self.dims) == 2), 'dims must give the two factors of a bipartition'
        if self.units not in ('nats', 'kT'):
            raise ValueError("Units must be 'nats' or 'kT', got '{}'.".format(self.units))
        if self.format not in ('json', 'csv'):
            raise ValueError("Format must be 'json' or 'csv', got '{}'.".format(self.format))
        if self.route not in ('sdp', 'constructive'):
            raise ValueError("Route must be 'sdp' or 'constructive', got '{}'.".format(self.route))
        if self.n < 1 or self.jobs < 1:
            raise ValueError("n and jobs must be positive integers.")

    def toDict ( self ):
        doc = {key: getattr(self, key) for key in self.defaults}
        doc["subcommand"] = self.subcommand
        return doc

    def toJson ( self ):
        return json.dumps(self.toDict(), sort_keys=True)

    @classmethod
    def fromDict ( cls, theDict ):
        doc = dict(theDict)
        if "subcommand" not in doc:
            raise ValueError("Configuration needs a 'subcommand' entry.")
        return cls(doc.pop("subcommand"), **doc)

    @classmethod
    def fromJson ( cls, theText ):
        try:
            doc = json.loads(theText)
        except json.JSONDecodeError as err:
            raise ValueError("Configuration is not valid JSON: {}".format(err))
        if not isinstance(doc, dict):
            raise ValueError("Configuration must be a JSON object.")
        return cls.fromDict(doc)

    @classmethod
    def fromNamespace ( cls, theArgs ):
        """
        Configuration from parsed command-line arguments; attributes that
        are not configuration fields are ignored.
        """
        values = {key: getattr(theArgs, key) for key in cls.defaults if getattr(theArgs, key, None) is not None}
        return cls(theArgs.subcommand, **values)
