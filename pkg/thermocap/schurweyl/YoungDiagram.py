import functools
import math
import numpy as np


class YoungDiagram:
    """
    Young diagram with ``n`` boxes in at most ``d`` rows.

    Attributes
    ----------
    parts : tuple of int
        Row lengths :math:`\\lambda_1\\geq\\dots\\geq\\lambda_d\\geq 0`,
        padded with zeros to ``d`` entries.
    n : int
        Number of boxes.
    d : int
        Number of rows available (the local dimension).

    Example
    -------
    >>> lam = YoungDiagram((2, 1), 2)
    >>> lam.weylDimension(), lam.hookLengthDimension()
    (2, 2)
    """

    def __init__ ( self, theParts, d=None ):
        parts = [int(p) for p in theParts]
        if d is None:
            d = len(parts)
        assert(all(p >= 0 for p in parts)), 'Young diagram rows must be non-negative'
        assert(all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))), 'Young diagram rows must be non-increasing'
        nonzero = [p for p in parts if p > 0]
        if len(nonzero) > d:
            raise ValueError("Diagram {} has more than {} rows.".format(tuple(parts), d))
        self.parts = tuple(nonzero + [0]*(d - len(nonzero)))
        self.n = sum(nonzero)
        self.d = d

    def __eq__ ( self, other ):
        return isinstance(other, YoungDiagram) and self.parts == other.parts

    def __hash__ ( self ):
        return hash(self.parts)

    def __repr__ ( self ):
        return "YoungDiagram{}".format(self.parts)

    @property
    def rows ( self ):
        return tuple(p for p in self.parts if p > 0)

    def normalizedEntropy ( self ):
        """
        :math:`\\bar H(\\lambda) = H(\\lambda/n)` in nats.
        """
        if self.n == 0:
            return 0.0
        p = np.array(self.rows, dtype=float)/self.n
        return float(-np.sum(p*np.log(p)))

    def hookLengthDimension ( self ):
        """
        Dimension of the symmetric-group irrep :math:`P_\\lambda`,
        :math:`n!/\\prod h(i,j)`.
        """
        rows = self.rows
        columns = [sum(1 for r in rows if r > j) for j in range(rows[0])] if rows else []
        hooks = 1
        for i, r in enumerate(rows):
            for j in range(r):
                hooks *= (r - j - 1) + (columns[j] - i - 1) + 1
        return math.factorial(self.n)//hooks

    def weylDimension ( self, d=None ):
        """
        Dimension of the unitary-group irrep :math:`Q_\\lambda` of
        :math:`U(d)`, :math:`\\prod_{i<j}(\\lambda_i-\\lambda_j+j-i)/(j-i)`.
        """
        d = self.d if d is None else d
        if len(self.rows) > d:
            return 0
        parts = list(self.rows) + [0]*(d - len(self.rows))
        num = 1
        den = 1
        for i in range(d):
            for j in range(i + 1, d):
                num *= parts[i] - parts[j] + j - i
                den *= j - i
        return num//den

    def character ( self, theCycleType ):
        """
        Irreducible character :math:`\\chi^\\lambda` on the class with the
        given cycle type, by the Murnaghan-Nakayama rule.
        """
        cycles = tuple(sorted((int(c) for c in theCycleType), reverse=True))
        assert(sum(cycles) == self.n), 'Cycle type must partition n'
        return _character(_betaSet(self.rows), cycles)


def _betaSet ( theRows ):
    length = len(theRows)
    return tuple(sorted(r + length - 1 - i for i, r in enumerate(theRows)))


@functools.lru_cache(maxsize=None)
def _character ( theBeta, theCycles ):
    if not theCycles:
        return 1
    r = theCycles[0]
    rest = theCycles[1:]
    beta = set(theBeta)
    total = 0
    for b in theBeta:
        target = b - r
        if target < 0 or target in beta:
            continue
        # Border strip of length r; sign from the beads it jumps over
        height = sum(1 for x in theBeta if target < x < b)
        moved = tuple(sorted((beta - {b}) | {target}))
        total += (-1)**height*_character(moved, rest)
    return total


def youngDiagrams ( n, d ):
    """
    All Young diagrams with ``n`` boxes and at most ``d`` rows, in
    descending lexicographic order.
    """
    assert(n >= 1 and d >= 1), 'Need n >= 1 and d >= 1'
    result = []

    def extend ( prefix, remaining, bound ):
        if remaining == 0:
            result.append(YoungDiagram(prefix, d))
            return
        if len(prefix) == d:
            return
        for part in range(min(remaining, bound), 0, -1):
            extend(prefix + [part], remaining - part, part)

    extend([], n, n)
    return result


def cycleType ( thePermutation ):
    """
    Cycle lengths of a permutation given as a sequence of images.
    """
    perm = list(thePermutation)
    seen = [False]*len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        cycles.append(length)
    return tuple(sorted(cycles, reverse=True))
