"""Evolving random graph process: simulator, limiting degree sequences, and
theory-vs-simulation comparison utilities (native core)."""

from degseq._degseq import *  # noqa: F401,F403
from degseq._degseq import __version__  # noqa: F401
