"""Exception hierarchy shared by every layer of the engine."""


class IdiomError(Exception):
    pass


class DivergenceError(IdiomError):
    """Raised when term reduction exceeds its step budget."""


class ArityCapExceeded(IdiomError):
    pass


class InvalidPosition(IdiomError):
    pass


class StuckError(IdiomError):
    """Evaluation reached a state with no applicable rule (ill-typed input)."""


class UnboundEffectVar(IdiomError):
    pass
