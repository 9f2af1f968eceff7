"""Exception hierarchy shared by every module."""


class EcgwError(Exception):
    """Base class for all library errors."""


class NotComposable(EcgwError):
    pass


class NotCoproductInclusion(EcgwError):
    pass


class NotMorphism(EcgwError, ValueError):
    """Assignment is not total, leaves the codomain, or breaks equivariance."""


class MalformedSquare(EcgwError):
    pass


class SquareNotGood(EcgwError):
    pass


class StarPushoutMissing(EcgwError):
    pass


class IndexOutOfWindow(EcgwError):
    pass


class MalformedComplex(EcgwError, ValueError):
    pass


class _Indexed(EcgwError):
    def __init__(self, index, message=""):
        self.index = index
        super().__init__(f"{type(self).__name__}({index})" + (f": {message}" if message else ""))


class ChainConditionViolated(_Indexed, MalformedComplex):
    pass


class NotPullback(_Indexed, NotMorphism):
    pass


class SquareNotCommuting(_Indexed, NotMorphism):
    pass


class NotExact(_Indexed):
    pass


class NotKernelCokernelPair(EcgwError):
    pass


class ParseError(EcgwError):
    pass


class ValidationError(EcgwError):
    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location}: {message}")
