#!/usr/bin/env python3
"""Entry point for the exact kernel.

The implementation lives in :mod:`core`. This module re-exports
:class:`Workbench` and the singleton :data:`workbench` together with the
document helpers, so scripts can write::

    from twistkit_core import workbench, load

"""

from core.document import Document, dump, load, parse, serialize
from core.errors import TwistkitError
from core.report import Report
from core.workbench import Workbench, workbench

__all__ = [
    "Document",
    "Report",
    "TwistkitError",
    "Workbench",
    "dump",
    "load",
    "parse",
    "serialize",
    "workbench",
]
