"""Exception types shared across the package."""


class SkeletaError(Exception):
    pass


class InputError(SkeletaError, ValueError):
    """Malformed complex file, weight string or other user input."""


class NotAFace(SkeletaError, KeyError):
    pass


class NotAComplex(SkeletaError):
    """A sequence of maps whose consecutive composites are not zero."""


class NotClosed(SkeletaError):
    """A twisted-complex morphism with nonzero differential."""


class GenerationFailure(SkeletaError):
    def __init__(self, witness, message=""):
        self.witness = witness
        super().__init__(message or f"generation failed at {witness}")


class OnSingularLocus(SkeletaError):
    pass


class SingularCrossing(SkeletaError):
    def __init__(self, time, message=""):
        self.time = time
        super().__init__(message or f"orbit reached the singular locus at t={time:.6g}")
