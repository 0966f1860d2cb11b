"""
Exception hierarchy for the hecke toolkit
"""
from typing import Any, Optional


class HeckeError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigError(HeckeError):
    """Invalid job configuration or config file"""


class InvalidCartanTypeError(HeckeError, ValueError):
    """Unparsable Cartan type string or rank outside the family's range"""


class PreconditionError(HeckeError, ValueError):
    """An operation was called outside its domain"""


class GuardrailError(PreconditionError):
    """A requested object exceeds the configured size caps"""


class IndexOutsideModuleError(HeckeError, KeyError):
    """A module vector refers to an index that is not an enumerated twisted involution"""

    def __str__(self):
        return str(self.args[0]) if self.args else 'index outside module'


class InvariantViolation(HeckeError, AssertionError):
    """A mathematical invariant checked at runtime failed"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class TriangularityError(InvariantViolation):
    """The bar matrix of a block is not unitriangular in the chosen order"""


class SignParityError(InvariantViolation):
    """(-1)^|u| computed in W disagrees with (-1)^|u|_lambda"""
