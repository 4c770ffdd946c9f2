"""
Error hierarchy shared by the library modules and the command line
"""

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_PRECISION = 3


class FundclassError(Exception):
    """Base class; `exit_code` is what the CLI returns when this escapes"""

    exit_code = EXIT_VERIFICATION


class InputError(FundclassError, ValueError):
    exit_code = EXIT_INPUT


class ResourceError(FundclassError):
    exit_code = EXIT_INPUT


class PrecisionError(FundclassError):
    exit_code = EXIT_PRECISION


class ValuationUndeterminedError(PrecisionError):
    pass


class NoConvergenceError(PrecisionError):
    pass


class ContractViolationError(FundclassError):
    exit_code = EXIT_VERIFICATION


class VerificationError(FundclassError):
    exit_code = EXIT_VERIFICATION


class PipelineError(VerificationError):
    pass


class ConventionError(VerificationError):
    pass


class PropositionViolationError(VerificationError):
    pass


class LemmaViolationError(VerificationError):
    pass


class ObstructionError(FundclassError):
    exit_code = EXIT_VERIFICATION


class H1NonzeroError(InputError):
    """H^1(H, A) does not vanish"""


class RestrictionNontrivialError(InputError):
    """The restriction of the class to H is not a coboundary"""


class InternalError(FundclassError):
    exit_code = EXIT_VERIFICATION
