"""Exception hierarchy shared by every module of the package."""


class LocaleLabError(Exception):
    """Base class for all errors raised by locale_lab."""


class NotAPartialOrder(LocaleLabError):
    pass


class NotALattice(LocaleLabError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotDistributive(LocaleLabError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotATopology(LocaleLabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(LocaleLabError):
    """A size cap guarding an exponential computation was exceeded."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class NotPrime(LocaleLabError):
    pass


class NotPrimes(LocaleLabError):
    pass


class NotMeetOfPrimes(LocaleLabError):
    pass


class NotSpatial(LocaleLabError):
    pass


class NotACoframe(LocaleLabError):
    pass


class MixedSources(LocaleLabError):
    """Sublocales of different lattices were combined."""


class InconsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree.

    Always an implementation bug: raised where a value is computed along
    two routes and the routes must agree.
    """


class InputError(LocaleLabError):
    pass


class ParseError(InputError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class IoError(InputError):
    pass
