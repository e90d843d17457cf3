"""Exception hierarchy shared by every module.

`TheoremViolation` is kept apart from `InvalidInput` so that a harness can
treat it as falsifying evidence rather than as a usage mistake.
"""


class PlabicDimerError(Exception):
    pass


class InvalidInput(PlabicDimerError, ValueError):
    pass


class TheoremViolation(PlabicDimerError):
    pass


class ResourceGuard(PlabicDimerError):
    pass


class DegenerateEmbedding(InvalidInput):
    pass


class StructureMismatch(PlabicDimerError):
    pass
