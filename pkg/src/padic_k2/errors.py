"""Exception hierarchy shared by every module."""


class ArtifactError(Exception):
    pass


class NotPrime(ArtifactError, ValueError):
    pass


class NotCoprime(ArtifactError, ValueError):
    pass


class ZeroValuation(ArtifactError, ValueError):
    pass


class NotSquarefree(ArtifactError, ValueError):
    pass


class NotPrimitive(ArtifactError, ValueError):
    pass


class BadCongruence(ArtifactError, ValueError):
    pass


class SieveExhausted(ArtifactError):
    pass


class NoValidTwist(ArtifactError):
    pass


class OutOfScope(ArtifactError, ValueError):
    pass


class NotDengLi(ArtifactError, ValueError):
    pass


# precision family: the CLI maps all of these to exit code 2
class PrecisionError(ArtifactError):
    pass


class BelowPrecision(PrecisionError):
    pass


class Unstable(PrecisionError):
    def __init__(self, n_max, detail=""):
        self.n_max = n_max
        msg = f"valuation not stable up to n_max={n_max}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class PrecisionOverflow(PrecisionError):
    pass


class PrecisionTooLow(PrecisionError):
    pass


class SearchExhausted(ArtifactError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"no witness with y <= {bound}")


# theorem-violation family: exit code 3
class ContradictionDetected(ArtifactError):
    pass


class LemmaViolated(ContradictionDetected):
    pass
