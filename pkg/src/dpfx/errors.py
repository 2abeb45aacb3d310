"""Exception hierarchy shared by every dpfx module."""


class DpfxError(Exception):
    pass


class SchemeTooShort(DpfxError):
    """The blocking scheme cannot address a tree of the required height."""


class InvalidShape(DpfxError):
    pass


class Infeasible(DpfxError):
    """No prefix tree satisfies the permitted code length."""


class NoValidTree(Infeasible):
    pass


class WorkLimitExceeded(DpfxError):
    pass


class TooLarge(DpfxError):
    pass


class UnknownSymbol(DpfxError):
    pass


class CorruptContainer(DpfxError):
    pass


class TableMismatch(DpfxError):
    pass


class EmptyInput(DpfxError):
    pass


class MalformedTable(DpfxError):
    pass


class ParseError(DpfxError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
