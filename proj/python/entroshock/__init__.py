"""Binned Shannon entropy and standard deviation of returns around an event date."""

from ._entroshock import *  # noqa: F401,F403
from ._entroshock import __doc__, EntroshockError  # noqa: F401
