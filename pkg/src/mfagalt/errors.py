"""Exception hierarchy.

Every error carries a ``category`` used by the command line front-end to
pick the exit status: ``config``, ``io``, ``degenerate-data`` or
``numerical``.
"""


class GaltError(Exception):
    category = "numerical"


class ConfigError(GaltError):
    category = "config"


class InputError(GaltError):
    category = "io"


class DegenerateDataError(GaltError):
    category = "degenerate-data"


class NumericalError(GaltError):
    category = "numerical"


# corpus
class AllRowsEmpty(DegenerateDataError):
    pass


# context
class UnknownCategory(InputError):
    pass


class AllMissingColumn(DegenerateDataError):
    pass


class ZeroVariance(DegenerateDataError):
    pass


class Misalignment(InputError):
    pass


# numcore
class NotPSD(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class ZeroEigenvalue(NumericalError):
    pass


# mfa_galt
class DegenerateSample(DegenerateDataError):
    pass


class UnknownSample(GaltError):
    category = "config"


class EmptyCategory(DegenerateDataError):
    pass


# association
class DegenerateGroups(DegenerateDataError):
    pass


class DegenerateMargin(DegenerateDataError):
    pass
