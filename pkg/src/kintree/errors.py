"""Exception taxonomy shared by all kintree modules."""


class InputError(ValueError):
    """Malformed external input (files, vertex ranges, colorings)."""


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


class CapacityError(RuntimeError):
    """An instance exceeds a size guard (oracle width, ground-set width)."""
