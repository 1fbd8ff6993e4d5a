class KernelError(Exception):
    """Base class for errors raised by the relational kernel."""


class DuplicateAtom(KernelError):
    def __init__(self, atom):
        super().__init__(f"duplicate atom {atom!r}")
        self.atom = atom


class EmptyUniverse(KernelError):
    def __init__(self):
        super().__init__("a universe needs at least one atom")


class UnknownAtom(KernelError):
    def __init__(self, atom):
        super().__init__(f"unknown atom {atom!r}")
        self.atom = atom


class ArityMismatch(KernelError):
    pass


class BoundViolation(KernelError):
    def __init__(self, relation, tuples):
        shown = ", ".join("(" + ", ".join(t) + ")" for t in sorted(tuples))
        super().__init__(f"lower bound of {relation} is not contained in its upper bound: {shown}")
        self.relation = relation
        self.tuples = tuples


class UnboundVariable(KernelError):
    def __init__(self, name):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class DivisionByZero(KernelError):
    pass


class IntOutOfRange(KernelError):
    pass
