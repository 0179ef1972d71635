"""Decorators to handle argument validation and exit codes magically"""

__author__ = 'pydinc developers'

import logging
from functools import wraps

from dinc.errors import InclusionError
from dinc.utils import as_vector

logger = logging.getLogger(__name__)


def vector_argument(f):
    """Convert the vector argument following *owner* into a float array whose
    length matches ``owner.order``

    :param f: Function taking ``(owner, u, ...)`` where owner is a matrix or a
        problem
    :return: The wrapped function, raising
        :class:`~dinc.errors.DimensionMismatch` for vectors of the wrong length
    """

    @wraps(f)
    def inner(owner, u, *args, **kwargs):
        return f(owner, as_vector(u, owner.order), *args, **kwargs)

    return inner


def exit_code(f):
    """Run a command line handler and translate any
    :class:`~dinc.errors.InclusionError` into its exit code

    :param f: Handler returning an integer exit code
    :return: The exit code of the handler, or of the error it raised
    """

    @wraps(f)
    def inner(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except InclusionError as e:
            logger.error('%s (exit %d)', e, e.exit_code)
            return e.exit_code

    return inner
